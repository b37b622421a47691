#pragma once

#include <map>
#include <string>
#include <vector>

#include "arcdef/power_series.hpp"

namespace arcdef {

namespace detail {
inline bool coeff_is_zero(const Rational& c) { return c == 0; }
inline bool coeff_is_zero(const RingElement& c) { return c.is_zero(); }
}  // namespace detail

// Sparse multivariate polynomial over an ordered variable list; coefficients
// are Rational or RingElement. No zero coefficients are stored.
template <class C>
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<std::string> variables)
      : vars_(std::move(variables)) {}

  const std::vector<std::string>& variables() const { return vars_; }
  const std::map<Monomial, C>& terms() const { return terms_; }
  std::size_t nvars() const { return vars_.size(); }

  bool is_zero() const { return terms_.empty(); }

  std::optional<std::size_t> var_index(const std::string& name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == name) return i;
    return std::nullopt;
  }

  uint32_t total_degree() const {
    uint32_t d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
  }

  uint32_t degree_in(std::size_t var) const {
    uint32_t d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.exp(var));
    return d;
  }

  void add_term(const Monomial& m, const C& c) {
    if (detail::coeff_is_zero(c)) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_.emplace(m, c);
    } else {
      it->second = it->second + c;
      if (detail::coeff_is_zero(it->second)) terms_.erase(it);
    }
  }

  Poly operator+(const Poly& o) const {
    require_same_vars(o);
    Poly r(*this);
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
  }
  Poly operator-(const Poly& o) const {
    require_same_vars(o);
    Poly r(*this);
    for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
    return r;
  }
  Poly operator-() const {
    Poly r(vars_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
  }
  Poly operator*(const Poly& o) const {
    require_same_vars(o);
    Poly r(vars_);
    for (const auto& [ma, ca] : terms_)
      for (const auto& [mb, cb] : o.terms_) r.add_term(ma * mb, ca * cb);
    return r;
  }
  Poly operator*(const C& s) const {
    Poly r(vars_);
    if (detail::coeff_is_zero(s)) return r;
    for (const auto& [m, c] : terms_) r.add_term(m, c * s);
    return r;
  }

  bool operator==(const Poly& o) const {
    return vars_ == o.vars_ && terms_ == o.terms_;
  }

  Poly derivative(std::size_t var) const {
    Poly r(vars_);
    for (const auto& [m, c] : terms_) {
      uint32_t e = m.exp(var);
      if (e == 0) continue;
      auto exps = m.exps();
      exps[var] -= 1;
      r.add_term(Monomial(exps), c * Rational(e));
    }
    return r;
  }

  Poly pow(uint32_t e) const {
    Poly acc(vars_);
    acc.add_term(Monomial(vars_.size()), one_coeff());
    Poly base = *this;
    while (e) {
      if (e & 1) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    return acc;
  }

  // Replace one variable by a polynomial over the same variable list.
  Poly subst_var(std::size_t var, const Poly& replacement) const {
    require_same_vars(replacement);
    std::vector<Poly> rep_pows{Poly(vars_)};
    rep_pows[0].add_term(Monomial(vars_.size()), one_coeff());
    Poly result(vars_);
    for (const auto& [m, c] : terms_) {
      uint32_t e = m.exp(var);
      while (rep_pows.size() <= e)
        rep_pows.push_back(rep_pows.back() * replacement);
      auto exps = m.exps();
      exps[var] = 0;
      Poly term(vars_);
      term.add_term(Monomial(exps), c);
      result = result + term * rep_pows[e];
    }
    return result;
  }

  // Coefficients of the polynomial viewed in one variable.
  std::vector<Poly> coeffs_in(std::size_t var) const {
    std::vector<Poly> out(degree_in(var) + 1, Poly(vars_));
    for (const auto& [m, c] : terms_) {
      auto exps = m.exps();
      uint32_t e = exps[var];
      exps[var] = 0;
      out[e].add_term(Monomial(exps), c);
    }
    return out;
  }

 private:
  C one_coeff() const;

  void require_same_vars(const Poly& o) const {
    if (vars_ != o.vars_) throw DomainError("polynomial variable list mismatch");
  }

  std::vector<std::string> vars_;
  std::map<Monomial, C> terms_;
};

template <>
inline Rational Poly<Rational>::one_coeff() const {
  return Rational(1);
}
template <>
inline RingElement Poly<RingElement>::one_coeff() const {
  for (const auto& [m, c] : terms_) return c.ring()->one();
  throw DomainError("cannot infer ring of an empty RingElement polynomial");
}

using QPoly = Poly<Rational>;
using APoly = Poly<RingElement>;

// Q[vars] -> A[vars] by pushing coefficients through constants.
inline APoly to_ring_poly(const QPoly& p, const TestRing::Ptr& ring) {
  APoly r(p.variables());
  for (const auto& [m, c] : p.terms()) r.add_term(m, ring->constant(c));
  return r;
}

// [OP] substitute: evaluate p with every variable mapped to a PowerSeries
// over the same ring, truncated at T; exact in every retained coefficient.
template <class C>
PowerSeries substitute(const Poly<C>& p,
                       const std::vector<PowerSeries>& assignment,
                       std::size_t T) {
  if (assignment.size() != p.nvars())
    throw DomainError("substitute: one series per variable required");
  if (assignment.empty())
    throw DomainError("substitute: constant polynomial needs a ring context");
  TestRing::Ptr ring = assignment[0].ring();
  for (const auto& s : assignment) {
    if (s.ring() != ring) throw DomainError("ring mismatch");
    if (s.precision() < T)
      throw PrecisionError("substitute: input series below requested precision");
  }
  // Cache powers of each assigned series.
  std::vector<std::vector<PowerSeries>> pows(p.nvars());
  auto power_of = [&](std::size_t v, uint32_t e) -> const PowerSeries& {
    auto& tab = pows[v];
    if (tab.empty()) {
      PowerSeries one(ring, T);
      one.set_coeff(0, ring->one());
      tab.push_back(std::move(one));
    }
    while (tab.size() <= e) tab.push_back(tab.back() * assignment[v].truncated(T));
    return tab[e];
  };
  PowerSeries acc(ring, T);
  for (const auto& [m, c] : p.terms()) {
    PowerSeries term(ring, T);
    if constexpr (std::is_same_v<C, Rational>)
      term.set_coeff(0, ring->constant(c));
    else {
      if (c.ring() != ring) throw DomainError("ring mismatch");
      term.set_coeff(0, c);
    }
    for (std::size_t v = 0; v < p.nvars(); ++v)
      if (m.exp(v)) term = term * power_of(v, m.exp(v));
    acc = acc + term;
  }
  return acc;
}

// Evaluate p at ring elements (used to specialize model equations).
inline RingElement eval_poly(const QPoly& p,
                             const std::vector<RingElement>& assignment,
                             const TestRing::Ptr& ring) {
  if (assignment.size() != p.nvars())
    throw DomainError("eval_poly: one value per variable required");
  RingElement acc = ring->zero();
  for (const auto& [m, c] : p.terms()) {
    RingElement term = ring->constant(c);
    for (std::size_t v = 0; v < p.nvars(); ++v)
      if (m.exp(v)) term *= assignment[v].pow(m.exp(v));
    acc += term;
  }
  return acc;
}

// Reinterpret an element of Q[g_1..g_k]/I as a polynomial in the generators.
inline QPoly ring_element_to_poly(const RingElement& e) {
  QPoly p(e.ring()->generators());
  for (const auto& [m, c] : e.coords()) p.add_term(m, c);
  return p;
}

}  // namespace arcdef
