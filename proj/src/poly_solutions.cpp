#include "greenvol/poly_solutions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include "json.hpp"

namespace greenvol {

namespace {

std::uint64_t factorial(unsigned n) {
  std::uint64_t f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

std::uint64_t binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  return factorial(n) / (factorial(k) * factorial(n - k));
}

std::vector<double> powers(double v, unsigned degree) {
  std::vector<double> p(degree + 1, 1.0);
  for (unsigned i = 1; i <= degree; ++i) p[i] = p[i - 1] * v;
  return p;
}

using MemoKey = std::tuple<unsigned, unsigned, std::uint64_t>;

std::recursive_mutex& memo_mutex() {
  static std::recursive_mutex m;
  return m;
}

std::map<MemoKey, Polynomial2>& memo_table() {
  static std::map<MemoKey, Polynomial2> table;
  return table;
}

Polynomial2 build_helmholtz(MultiIndex a, double k) {
  const double k2 = k * k;
  Polynomial2 p = Polynomial2::monomial(a, 1.0 / k2);
  if (a.a1 >= 2) {
    p -= (static_cast<double>(a.a1) * (a.a1 - 1) / k2) * helmholtz_poly({a.a1 - 2, a.a2}, k);
  }
  if (a.a2 >= 2) {
    p -= (static_cast<double>(a.a2) * (a.a2 - 1) / k2) * helmholtz_poly({a.a1, a.a2 - 2}, k);
  }
  return p;
}

Polynomial2 build_laplace(MultiIndex a) {
  if (a.a1 < a.a2) return laplace_poly({a.a2, a.a1}).swapped();
  if (a.a1 > a.a2) {
    const double denom = static_cast<double>(a.a1 + 1) * (a.a1 + 2);
    Polynomial2 p = Polynomial2::monomial({a.a1 + 2, a.a2}, 1.0 / denom);
    if (a.a2 >= 2) {
      p -= (static_cast<double>(a.a2) * (a.a2 - 1) / denom) * laplace_poly({a.a1 + 2, a.a2 - 2});
    }
    return p;
  }
  const unsigned j = a.a1;
  const double denom = 2.0 * (j + 2) * (j + 1);
  Polynomial2 p = Polynomial2::monomial({j + 2, j}, 1.0 / denom);
  p.add_term({j, j + 2}, 1.0 / denom);
  if (j >= 2) {
    const double c = static_cast<double>(j) * (j - 1) / denom;
    p -= c * laplace_poly({j + 2, j - 2});
    p -= c * laplace_poly({j - 2, j + 2});
  }
  return p;
}

template <typename Build>
const Polynomial2& memoized(MultiIndex a, double k, Build&& build) {
  std::lock_guard lock(memo_mutex());
  const MemoKey key{a.a1, a.a2, std::bit_cast<std::uint64_t>(k)};
  auto& table = memo_table();
  if (auto it = table.find(key); it != table.end()) return it->second;
  Polynomial2 p = build();
  return table.emplace(key, std::move(p)).first->second;
}

}  // namespace

MonomialBasisOrder::MonomialBasisOrder(unsigned n) : n_(n) {
  indices_.reserve(count(n));
  for (unsigned d = 0; d <= n; ++d) {
    for (unsigned a2 = 0; a2 <= d; ++a2) indices_.push_back({d - a2, a2});
  }
}

Polynomial2 Polynomial2::monomial(MultiIndex a, cplx c) {
  Polynomial2 p;
  p.add_term(a, c);
  return p;
}

cplx Polynomial2::coefficient(MultiIndex a) const {
  const auto it = terms_.find(a);
  return it == terms_.end() ? cplx{} : it->second;
}

unsigned Polynomial2::degree() const {
  unsigned d = 0;
  for (const auto& [a, c] : terms_) d = std::max(d, a.order());
  return d;
}

double Polynomial2::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& [a, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

void Polynomial2::add_term(MultiIndex a, cplx c) {
  if (c == cplx{}) return;
  auto [it, inserted] = terms_.try_emplace(a, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx{}) terms_.erase(it);
  }
}

Polynomial2& Polynomial2::operator+=(const Polynomial2& o) {
  for (const auto& [a, c] : o.terms_) add_term(a, c);
  return *this;
}

Polynomial2& Polynomial2::operator-=(const Polynomial2& o) {
  for (const auto& [a, c] : o.terms_) add_term(a, -c);
  return *this;
}

Polynomial2& Polynomial2::operator*=(cplx s) {
  if (s == cplx{}) {
    terms_.clear();
    return *this;
  }
  for (auto& [a, c] : terms_) c *= s;
  return *this;
}

Polynomial2 Polynomial2::swapped() const {
  Polynomial2 p;
  for (const auto& [a, c] : terms_) p.add_term({a.a2, a.a1}, c);
  return p;
}

Polynomial2 Polynomial2::dx() const {
  Polynomial2 p;
  for (const auto& [a, c] : terms_) {
    if (a.a1 > 0) p.add_term({a.a1 - 1, a.a2}, c * static_cast<double>(a.a1));
  }
  return p;
}

Polynomial2 Polynomial2::dy() const {
  Polynomial2 p;
  for (const auto& [a, c] : terms_) {
    if (a.a2 > 0) p.add_term({a.a1, a.a2 - 1}, c * static_cast<double>(a.a2));
  }
  return p;
}

Polynomial2 Polynomial2::laplacian() const {
  Polynomial2 p;
  for (const auto& [a, c] : terms_) {
    if (a.a1 > 1) p.add_term({a.a1 - 2, a.a2}, c * static_cast<double>(a.a1 * (a.a1 - 1)));
    if (a.a2 > 1) p.add_term({a.a1, a.a2 - 2}, c * static_cast<double>(a.a2 * (a.a2 - 1)));
  }
  return p;
}

bool is_zero(const Polynomial2& p, double tol) { return p.max_abs_coefficient() < tol; }

cplx poly_eval(const Polynomial2& p, const Vec2& r) {
  if (p.empty()) return {};
  const unsigned d = p.degree();
  const std::vector<double> px = powers(r.x, d);
  const std::vector<double> py = powers(r.y, d);
  cplx sum = 0.0;
  for (const auto& [a, c] : p.terms()) sum += c * (px[a.a1] * py[a.a2]);
  return sum;
}

std::pair<Polynomial2, Polynomial2> poly_gradient(const Polynomial2& p) { return {p.dx(), p.dy()}; }

const Polynomial2& helmholtz_poly(MultiIndex alpha, double k) {
  if (!(k > 0.0)) throw std::invalid_argument("helmholtz_poly: k must be positive");
  return memoized(alpha, k, [&] { return build_helmholtz(alpha, k); });
}

const Polynomial2& laplace_poly(MultiIndex alpha) {
  return memoized(alpha, 0.0, [&] { return build_laplace(alpha); });
}

const Polynomial2& poly_solution(MultiIndex alpha, Wavenumber k) {
  return k.is_laplace() ? laplace_poly(alpha) : helmholtz_poly(alpha, k.value());
}

Polynomial2 pde_residual(const Polynomial2& p, MultiIndex alpha, double k) {
  Polynomial2 r = p.laplacian();
  if (k != 0.0) r += (k * k) * p;
  r.add_term(alpha, -1.0);
  return r;
}

Polynomial2 translated_poly(MultiIndex alpha, const Vec2& r0, Wavenumber k) {
  Polynomial2 q;
  for (unsigned b1 = 0; b1 <= alpha.a1; ++b1) {
    for (unsigned b2 = 0; b2 <= alpha.a2; ++b2) {
      const double c = static_cast<double>(binomial(alpha.a1, b1) * binomial(alpha.a2, b2)) *
                       std::pow(-r0.x, alpha.a1 - b1) * std::pow(-r0.y, alpha.a2 - b2);
      q += c * poly_solution({b1, b2}, k);
    }
  }
  return q;
}

std::vector<cplx> taylor_coeffs(std::span<const cplx> derivs, const Vec2& r0, unsigned n) {
  if (n > kMaxOrder) throw std::invalid_argument("taylor_coeffs: order exceeds 12");
  const std::size_t count = MonomialBasisOrder::count(n);
  if (derivs.size() < count) throw std::invalid_argument("taylor_coeffs: missing derivatives");
  const std::vector<double> mx = powers(-r0.x, n);
  const std::vector<double> my = powers(-r0.y, n);
  const MonomialBasisOrder basis(n);
  std::vector<cplx> t(count);
  for (std::size_t mb = 0; mb < count; ++mb) {
    const MultiIndex b = basis.at(mb);
    cplx sum = 0.0;
    for (std::size_t ma = mb; ma < count; ++ma) {
      const MultiIndex a = basis.at(ma);
      if (!b.leq(a)) continue;
      const double c = static_cast<double>(binomial(a.a1, b.a1) * binomial(a.a2, b.a2)) /
                       static_cast<double>(factorial(a.a1) * factorial(a.a2));
      sum += c * derivs[ma] * (mx[a.a1 - b.a1] * my[a.a2 - b.a2]);
    }
    t[mb] = sum;
  }
  return t;
}

Polynomial2 assemble_interpolant(std::span<const cplx> t, unsigned n) {
  if (t.size() != MonomialBasisOrder::count(n)) {
    throw std::invalid_argument("assemble_interpolant: coefficient count mismatch");
  }
  const MonomialBasisOrder basis(n);
  Polynomial2 p;
  for (std::size_t m = 0; m < t.size(); ++m) p.add_term(basis.at(m), t[m]);
  return p;
}

Polynomial2 assemble_regularizer(std::span<const cplx> t, unsigned n, Wavenumber k) {
  if (t.size() != MonomialBasisOrder::count(n)) {
    throw std::invalid_argument("assemble_regularizer: coefficient count mismatch");
  }
  const MonomialBasisOrder basis(n);
  Polynomial2 p;
  for (std::size_t m = 0; m < t.size(); ++m) p += t[m] * poly_solution(basis.at(m), k);
  return p;
}

SolutionFamily::SolutionFamily(Wavenumber k, unsigned n) : k_(k), basis_(n) {
  if (n > kMaxOrder) throw std::invalid_argument("SolutionFamily: order exceeds 12");
  polys_.reserve(basis_.size());
  grads_.reserve(basis_.size());
  for (const MultiIndex& a : basis_.indices()) {
    polys_.push_back(poly_solution(a, k));
    grads_.push_back(poly_gradient(polys_.back()));
  }
}

void write_family_json(const SolutionFamily& family, std::ostream& out) {
  nlohmann::json j;
  j["k"] = family.wavenumber().value();
  j["n"] = family.basis().order();
  nlohmann::json polys = nlohmann::json::array();
  for (std::size_t m = 0; m < family.size(); ++m) {
    const MultiIndex a = family.basis().at(m);
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [e, c] : family.solution(m).terms()) {
      terms.push_back({e.a1, e.a2, c.real(), c.imag()});
    }
    polys.push_back({{"alpha", {a.a1, a.a2}}, {"terms", terms}});
  }
  j["polynomials"] = std::move(polys);
  out << j.dump(2) << '\n';
}

}  // namespace greenvol
