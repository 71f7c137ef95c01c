#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "greenvol/kernels.hpp"
#include "greenvol/types.hpp"

namespace greenvol {

/// Multi-index (a1, a2) for the monomial x^a1 y^a2.
struct MultiIndex {
  unsigned a1{0};
  unsigned a2{0};

  constexpr unsigned order() const { return a1 + a2; }
  /// Componentwise partial order.
  constexpr bool leq(const MultiIndex& o) const { return a1 <= o.a1 && a2 <= o.a2; }
  friend constexpr bool operator==(const MultiIndex&, const MultiIndex&) = default;
};

/// Graded-lexicographic total order: by |alpha|, then x-degree descending.
struct GradedLexLess {
  constexpr bool operator()(const MultiIndex& a, const MultiIndex& b) const {
    if (a.order() != b.order()) return a.order() < b.order();
    return a.a1 > b.a1;
  }
};

/// Bijection m <-> alpha over {|alpha| <= n} in graded-lex order:
/// (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...
class MonomialBasisOrder {
 public:
  explicit MonomialBasisOrder(unsigned n);

  unsigned order() const { return n_; }
  std::size_t size() const { return indices_.size(); }
  const MultiIndex& at(std::size_t m) const { return indices_.at(m); }
  std::span<const MultiIndex> indices() const { return indices_; }

  static constexpr std::size_t count(unsigned n) { return (n + 1) * (n + 2) / 2; }
  static constexpr std::size_t index_of(const MultiIndex& a) {
    const std::size_t d = a.order();
    return d * (d + 1) / 2 + a.a2;
  }

 private:
  unsigned n_;
  std::vector<MultiIndex> indices_;
};

/// Sparse bivariate polynomial with complex coefficients. Exactly-zero
/// coefficients are never stored.
class Polynomial2 {
 public:
  using Terms = std::map<MultiIndex, cplx, GradedLexLess>;

  Polynomial2() = default;
  static Polynomial2 monomial(MultiIndex a, cplx c = 1.0);
  static Polynomial2 constant(cplx c) { return monomial({0, 0}, c); }

  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  cplx coefficient(MultiIndex a) const;
  unsigned degree() const;
  double max_abs_coefficient() const;

  void add_term(MultiIndex a, cplx c);

  Polynomial2& operator+=(const Polynomial2& o);
  Polynomial2& operator-=(const Polynomial2& o);
  Polynomial2& operator*=(cplx s);
  friend Polynomial2 operator+(Polynomial2 a, const Polynomial2& b) { return a += b; }
  friend Polynomial2 operator-(Polynomial2 a, const Polynomial2& b) { return a -= b; }
  friend Polynomial2 operator*(cplx s, Polynomial2 a) { return a *= s; }

  /// p(y, x).
  Polynomial2 swapped() const;
  Polynomial2 dx() const;
  Polynomial2 dy() const;
  Polynomial2 laplacian() const;

 private:
  Terms terms_;
};

/// True when every coefficient of p is below `tol` in magnitude.
bool is_zero(const Polynomial2& p, double tol);

cplx poly_eval(const Polynomial2& p, const Vec2& r);
std::pair<Polynomial2, Polynomial2> poly_gradient(const Polynomial2& p);

/// Polynomial solution of (Delta + k^2) P = x^a1 y^a2, k > 0 (unique).
const Polynomial2& helmholtz_poly(MultiIndex alpha, double k);
/// Polynomial solution of Delta P = x^a1 y^a2, symmetric under x<->y on the diagonal.
const Polynomial2& laplace_poly(MultiIndex alpha);
/// Dispatches on k: laplace_poly for k = 0, helmholtz_poly otherwise.
const Polynomial2& poly_solution(MultiIndex alpha, Wavenumber k);

/// (Delta + k^2) P - x^a1 y^a2.
Polynomial2 pde_residual(const Polynomial2& p, MultiIndex alpha, double k);

/// Q_alpha(r; r0) = sum_{beta <= alpha} C(alpha,beta) (-r0)^(alpha-beta) P_beta(r).
Polynomial2 translated_poly(MultiIndex alpha, const Vec2& r0, Wavenumber k);

inline constexpr unsigned kMaxOrder = 12;

/// T_beta(r0) for |beta| <= n from derivative values D^alpha f(r0) given in
/// MonomialBasisOrder(n) order.
std::vector<cplx> taylor_coeffs(std::span<const cplx> derivs, const Vec2& r0, unsigned n);

/// f_n = sum_beta T_beta r^beta.
Polynomial2 assemble_interpolant(std::span<const cplx> t, unsigned n);
/// Phi_n = sum_beta T_beta P_beta.
Polynomial2 assemble_regularizer(std::span<const cplx> t, unsigned n, Wavenumber k);

/// The P_beta, |beta| <= n, with their gradients, in basis order.
class SolutionFamily {
 public:
  SolutionFamily(Wavenumber k, unsigned n);

  Wavenumber wavenumber() const { return k_; }
  const MonomialBasisOrder& basis() const { return basis_; }
  std::size_t size() const { return basis_.size(); }
  const Polynomial2& solution(std::size_t m) const { return polys_.at(m); }
  const Polynomial2& grad_x(std::size_t m) const { return grads_.at(m).first; }
  const Polynomial2& grad_y(std::size_t m) const { return grads_.at(m).second; }

 private:
  Wavenumber k_;
  MonomialBasisOrder basis_;
  std::vector<Polynomial2> polys_;
  std::vector<std::pair<Polynomial2, Polynomial2>> grads_;
};

/// Debug dump of the family as JSON: [{alpha: [a1,a2], terms: [[e1,e2,re,im],...]}].
void write_family_json(const SolutionFamily& family, std::ostream& out);

}  // namespace greenvol
