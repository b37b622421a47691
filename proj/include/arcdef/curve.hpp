#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "arcdef/weierstrass.hpp"
#include "arcdef/poly.hpp"

namespace arcdef {

// ---------------------------------------------------------------------------
// Plane curve germs (f, h0): f in Q[x,y] with the smooth branch y = h0(x)
// on it. Branches are polynomial, so all validity checks are exact.
// ---------------------------------------------------------------------------

// [OP] branch_multiplicity: x-order of (df/dy)(x, h0(x)).
inline uint32_t branch_multiplicity(const QPoly& f, const QPoly& h0) {
  if (f.nvars() != 2) throw DomainError("plane curve germ needs two variables");
  if (h0.degree_in(1) != 0)
    throw DomainError("branch must be a polynomial in the first variable only");
  QPoly ypoly(f.variables());
  ypoly.add_term(Monomial::unit(2, 1), 1);
  QPoly on_branch = f.subst_var(1, h0);
  if (!on_branch.is_zero())
    throw DomainError("branch does not lie on the curve");
  QPoly fy = f.derivative(1).subst_var(1, h0);
  if (fy.is_zero())
    throw DomainError("df/dy vanishes identically along the branch");
  uint32_t m = UINT32_MAX;
  for (const auto& [mono, c] : fy.terms()) m = std::min(m, mono.exp(0));
  return m;
}

// [OP] normalize_branch: g(x,y) = f(x, y + h0(x)); moves the branch to y = 0.
inline QPoly normalize_branch(const QPoly& f, const QPoly& h0) {
  QPoly ypoly(f.variables());
  ypoly.add_term(Monomial::unit(2, 1), 1);
  return f.subst_var(1, ypoly + h0);
}

class PlaneCurveGerm {
 public:
  PlaneCurveGerm(QPoly f, QPoly h0, std::optional<uint32_t> degree_bound = {})
      : f_(std::move(f)), h0_(std::move(h0)) {
    m_ = branch_multiplicity(f_, h0_);
    M_ = degree_bound.value_or(f_.total_degree());
    if (M_ < f_.total_degree())
      throw DomainError("degree bound below the degree of f");
  }

  const QPoly& f() const { return f_; }
  const QPoly& h0() const { return h0_; }
  uint32_t multiplicity() const { return m_; }
  uint32_t degree_bound() const { return M_; }
  const std::string& xname() const { return f_.variables()[0]; }
  const std::string& yname() const { return f_.variables()[1]; }

 private:
  QPoly f_, h0_;
  uint32_t m_, M_;
};

// A deformation f~ = f + sum c_{i,j} x^i y^j over a test-ring, c_{i,j} in m.
class CurveDeformation {
 public:
  CurveDeformation(const PlaneCurveGerm& germ, TestRing::Ptr ring)
      : germ_(&germ), ring_(std::move(ring)) {}

  const PlaneCurveGerm& germ() const { return *germ_; }
  const TestRing::Ptr& ring() const { return ring_; }

  void set(uint32_t i, uint32_t j, RingElement value) {
    if (i > germ_->degree_bound() || j > germ_->degree_bound())
      throw DomainError("deformation index beyond the degree bound");
    if (!value.in_max_ideal())
      throw DomainError("deformation coefficients must lie in the maximal ideal");
    if (value.is_zero())
      c_.erase({i, j});
    else
      c_[{i, j}] = std::move(value);
  }

  const std::map<std::pair<uint32_t, uint32_t>, RingElement>& coeffs() const {
    return c_;
  }

  APoly deformed_poly() const {
    APoly p = to_ring_poly(germ_->f(), ring_);
    for (const auto& [ij, v] : c_) {
      Monomial mono(std::vector<uint32_t>{ij.first, ij.second});
      p.add_term(mono, v);
    }
    return p;
  }

 private:
  const PlaneCurveGerm* germ_;
  TestRing::Ptr ring_;
  std::map<std::pair<uint32_t, uint32_t>, RingElement> c_;
};

struct LiftResult {
  std::vector<RingElement> obstructions;  // o_0..o_{m-1}
  std::optional<PowerSeries> lift;        // h~ = h0 + delta, iff all o_l = 0
  PowerSeries delta;                      // the canonical partial solve

  bool liftable() const {
    for (const auto& o : obstructions)
      if (!o.is_zero()) return false;
    return true;
  }
};

namespace detail {

// Core triangular solve shared by branch and arc lifting. Input: the
// y-expansion coefficients g_j(x) of the deformed equation around the base
// branch (g_0 must vanish mod m; g_1 must have residue order m). Determines
// delta m-adically via Weierstrass division by g_1; the final remainder R
// carries the obstructions: the equation residual is -R.
struct HenselCore {
  PowerSeries delta;
  std::vector<RingElement> remainder;  // R, length m
};

inline HenselCore hensel_solve(const std::vector<PowerSeries>& ycoeffs,
                               uint32_t m, std::size_t T) {
  if (ycoeffs.size() < 2)
    throw DomainError("lift solver: equation must involve the branch variable");
  const TestRing::Ptr& ring = ycoeffs[0].ring();
  if (!ycoeffs[0].all_coeffs_in_max_ideal())
    throw DomainError("lift solver: base branch does not lie on the base curve");
  auto ro = ycoeffs[1].residue_order();
  if (!ro || *ro != m)
    throw DomainError("lift solver: pivot order disagrees with multiplicity");

  PowerSeries delta(ring, T);
  std::vector<RingElement> R(m, ring->zero());
  uint32_t nu = ring->nilpotency_degree();
  for (uint32_t stage = 0; stage < nu; ++stage) {
    // S = -(g_0 + sum_{j>=2} g_j delta^j)
    PowerSeries S = -ycoeffs[0];
    if (ycoeffs.size() > 2 && delta.order()) {
      PowerSeries dp = delta * delta;
      for (std::size_t j = 2; j < ycoeffs.size(); ++j) {
        S = S - ycoeffs[j] * dp;
        if (j + 1 < ycoeffs.size()) dp = dp * delta;
      }
    }
    WeierstrassResult div = weierstrass_divide(S, ycoeffs[1]);
    bool stable = true;
    for (std::size_t k = 0; k < div.quotient.precision(); ++k)
      if (k >= delta.precision() || !(div.quotient.coeff(k) == delta.coeff(k))) {
        stable = false;
        break;
      }
    R = std::move(div.remainder);
    delta = std::move(div.quotient);
    if (stable) break;
  }
  return {std::move(delta), std::move(R)};
}

}  // namespace detail

// Conservative precision sufficiency rule for the lift solver.
inline std::size_t required_precision(const PlaneCurveGerm& germ,
                                      uint32_t nilpotency_degree) {
  return static_cast<std::size_t>(nilpotency_degree + 1) *
             (germ.multiplicity() + germ.f().total_degree()) +
         8;
}

// [OP] lift_branch: the branch-deformation solver. Obstructions are the residuals of
// the first m coefficient equations after the deterministic m-adic solve.
inline LiftResult lift_branch(const CurveDeformation& def, std::size_t T) {
  const PlaneCurveGerm& germ = def.germ();
  const TestRing::Ptr& ring = def.ring();
  if (T < required_precision(germ, ring->nilpotency_degree()))
    throw PrecisionError("lift_branch: T below the precision sufficiency rule");

  // Expand f~(x, h0 + y) and read off the y-coefficients as exact series.
  APoly ftilde = def.deformed_poly();
  APoly ypoly(ftilde.variables());
  ypoly.add_term(Monomial::unit(2, 1), ring->one());
  APoly g = ftilde.subst_var(1, ypoly + to_ring_poly(germ.h0(), ring));
  std::vector<APoly> by_y = g.coeffs_in(1);
  std::vector<PowerSeries> ycoeffs;
  for (const auto& coeff_poly : by_y) {
    PowerSeries s(ring, T);
    for (const auto& [mono, c] : coeff_poly.terms()) {
      if (mono.exp(0) < T) s.set_coeff(mono.exp(0), s.coeff(mono.exp(0)) + c);
    }
    ycoeffs.push_back(std::move(s));
  }

  detail::HenselCore core =
      detail::hensel_solve(ycoeffs, germ.multiplicity(), T);
  LiftResult out{{}, std::nullopt, core.delta};
  out.obstructions.reserve(core.remainder.size());
  for (const auto& r : core.remainder) out.obstructions.push_back(-r);
  if (out.liftable()) {
    PowerSeries h(ring, core.delta.precision());
    for (const auto& [mono, c] : germ.h0().terms())
      if (mono.exp(0) < h.precision())
        h.set_coeff(mono.exp(0), ring->constant(c));
    out.lift = h + core.delta;
  }
  return out;
}

// [OP] first_order_oracle: closed-form test over Q[eps]/(eps^2) for
// f~ = f + eps*g. Liftable iff ord_x g(x,h0) >= m; then
// delta = -eps * g(x,h0) / (df/dy)(x,h0).
struct FirstOrderResult {
  bool liftable;
  TestRing::Ptr ring;                 // Q[eps]/(eps^2)
  std::optional<PowerSeries> delta;   // present iff liftable
};

inline FirstOrderResult first_order_oracle(const PlaneCurveGerm& germ,
                                           const QPoly& g, std::size_t T) {
  auto ring = TestRing::make({"eps"}, {Monomial(std::vector<uint32_t>{2})});
  QPoly r = g.subst_var(1, germ.h0());
  QPoly w = germ.f().derivative(1).subst_var(1, germ.h0());
  uint32_t m = germ.multiplicity();

  uint32_t ord_r = UINT32_MAX;
  for (const auto& [mono, c] : r.terms()) ord_r = std::min(ord_r, mono.exp(0));
  if (ord_r < m) return {false, ring, std::nullopt};
  if (r.is_zero()) {
    PowerSeries zero(ring, T);
    return {true, ring, zero};
  }

  auto poly_to_series = [&](const QPoly& p, std::size_t prec) {
    PowerSeries s(ring, prec);
    for (const auto& [mono, c] : p.terms())
      if (mono.exp(0) < prec) s.set_coeff(mono.exp(0), ring->constant(c));
    return s;
  };
  // delta = -eps * (r / t^m) * (w / t^m)^{-1}
  PowerSeries rs = poly_to_series(r, T + m).shifted_down(m);
  PowerSeries ws = poly_to_series(w, T + m).shifted_down(m);
  RingElement eps = ring->generator(0);
  PowerSeries delta = -(rs * ws.inverse() * eps);
  return {true, ring, delta};
}

// ---------------------------------------------------------------------------
// [OP] universal_obstructions: the series s_l of the model c_{l,0} = s_l(c),
// computed by running the lift solver over the universal truncated ring
// Q[c_{i,j}]/(deg > K).
// ---------------------------------------------------------------------------

struct UniversalModel {
  std::vector<std::string> variables;  // c_i_j names, all 0 <= i,j <= M
  uint32_t multiplicity;
  uint32_t K;
  TestRing::Ptr ring;                  // the universal truncated ring
  std::vector<QPoly> s;                // s_0..s_{m-1}, over `variables`
  std::vector<RingElement> obstructions;  // o_l = c_{l,0} - s_l, in `ring`

  static std::string var_name(uint32_t i, uint32_t j) {
    return "c_" + std::to_string(i) + "_" + std::to_string(j);
  }

  // Predicted obstruction for a concrete m-valued assignment of the
  // c-variables (one value per stored variable, same order).
  RingElement predict(std::size_t l, const std::vector<RingElement>& values,
                      const TestRing::Ptr& target) const {
    std::size_t li = 0;
    bool found = false;
    for (std::size_t v = 0; v < variables.size(); ++v)
      if (variables[v] == var_name(static_cast<uint32_t>(l), 0)) {
        li = v;
        found = true;
      }
    if (!found) throw DomainError("model is missing a c_{l,0} variable");
    return values[li] - eval_poly(s[l], values, target);
  }
};

inline UniversalModel universal_obstructions(const PlaneCurveGerm& germ,
                                             uint32_t K, std::size_t T) {
  if (K < 2) throw DomainError("universal_obstructions: K must be >= 2");
  uint32_t M = germ.degree_bound();
  std::vector<std::string> names;
  for (uint32_t i = 0; i <= M; ++i)
    for (uint32_t j = 0; j <= M; ++j)
      names.push_back(UniversalModel::var_name(i, j));
  auto U = TestRing::make_truncated(names, K);

  CurveDeformation def(germ, U);
  std::size_t gi = 0;
  for (uint32_t i = 0; i <= M; ++i)
    for (uint32_t j = 0; j <= M; ++j) def.set(i, j, U->generator(gi++));

  LiftResult lr = lift_branch(def, T);
  UniversalModel model;
  model.variables = names;
  model.multiplicity = germ.multiplicity();
  model.K = K;
  model.ring = U;
  model.obstructions = lr.obstructions;
  for (uint32_t l = 0; l < germ.multiplicity(); ++l) {
    RingElement o = lr.obstructions[l];
    RingElement c_l0 = U->generator(static_cast<std::size_t>(l) * (M + 1));
    QPoly s_l = ring_element_to_poly(c_l0 - o);
    // s_l must not involve any of the solved-for variables c_{l',0}.
    for (const auto& [mono, c] : s_l.terms())
      for (uint32_t lp = 0; lp < germ.multiplicity(); ++lp)
        if (mono.exp(static_cast<std::size_t>(lp) * (M + 1)) > 0)
          throw DomainError(
              "universal_obstructions: s_l involves a solved variable");
    model.s.push_back(std::move(s_l));
  }
  return model;
}

}  // namespace arcdef
