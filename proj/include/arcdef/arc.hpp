#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "arcdef/curve.hpp"

namespace arcdef {

// ---------------------------------------------------------------------------
// Hypersurface X = { phi(u_1..u_d, z) = 0 } in V + C, with V = span(u) and z
// the transverse direction. Vector-valued transverse data (worked examples
// with z in C^r) is encoded by widening u instead.
// ---------------------------------------------------------------------------

class Hypersurface {
 public:
  Hypersurface(std::vector<std::string> u_vars, std::string z_var, QPoly phi)
      : u_(std::move(u_vars)), z_(std::move(z_var)), phi_(std::move(phi)) {
    std::vector<std::string> expected = u_;
    expected.push_back(z_);
    if (phi_.variables() != expected)
      throw DomainError("phi must be over the u-variables followed by z");
    Monomial origin(phi_.nvars());
    if (phi_.terms().count(origin))
      throw DomainError("phi must vanish at the origin");
  }

  std::size_t dim() const { return u_.size(); }
  const std::vector<std::string>& u_vars() const { return u_; }
  const std::string& z_var() const { return z_; }
  const QPoly& phi() const { return phi_; }
  std::size_t z_index() const { return u_.size(); }

  QPoly phi_z() const { return phi_.derivative(z_index()); }
  QPoly phi_u(std::size_t i) const { return phi_.derivative(i); }

 private:
  std::vector<std::string> u_;
  std::string z_;
  QPoly phi_;
};

namespace detail {
// Substitute univariate polynomials in t for every variable of p.
inline QPoly compose_poly(const QPoly& p, const std::vector<QPoly>& args) {
  if (args.size() != p.nvars())
    throw DomainError("compose_poly: one argument per variable");
  const std::vector<std::string>& tvars = args.empty()
                                              ? std::vector<std::string>{"t"}
                                              : args[0].variables();
  QPoly acc(tvars);
  for (const auto& [m, c] : p.terms()) {
    QPoly term(tvars);
    term.add_term(Monomial(tvars.size()), c);
    for (std::size_t v = 0; v < p.nvars(); ++v)
      if (m.exp(v)) term = term * args[v].pow(m.exp(v));
    acc = acc + term;
  }
  return acc;
}
}  // namespace detail

// A base arc gamma = (u(t), z(t)) on X with polynomial components.
class BaseArc {
 public:
  BaseArc(const Hypersurface& H, std::vector<QPoly> u_comp, QPoly z_comp,
          uint32_t N)
      : H_(&H), u_(std::move(u_comp)), z_(std::move(z_comp)), N_(N) {
    if (u_.size() != H.dim())
      throw DomainError("arc needs one component per u-variable");
    for (const auto& c : u_)
      if (c.nvars() != 1) throw DomainError("arc components are univariate in t");
    if (z_.nvars() != 1) throw DomainError("arc components are univariate in t");
    std::vector<QPoly> args = u_;
    args.push_back(z_);
    if (!detail::compose_poly(H.phi(), args).is_zero())
      throw DomainError("base arc does not lie on the hypersurface");
    for (const auto& c : u_)
      if (c.total_degree() > N)
        throw DomainError("u-component degree exceeds the truncation degree N");
  }

  const Hypersurface& hypersurface() const { return *H_; }
  const std::vector<QPoly>& u_comp() const { return u_; }
  const QPoly& z_comp() const { return z_; }
  uint32_t N() const { return N_; }

 private:
  const Hypersurface* H_;
  std::vector<QPoly> u_;
  QPoly z_;
  uint32_t N_;
};

// An A-deformation of the projected arc: beta = u(t) + du with du in m[[t]].
class ArcDeformation {
 public:
  ArcDeformation(TestRing::Ptr ring, std::vector<PowerSeries> du)
      : ring_(std::move(ring)), du_(std::move(du)) {
    for (const auto& s : du_) {
      if (s.ring() != ring_) throw DomainError("ring mismatch");
      if (!s.all_coeffs_in_max_ideal())
        throw DomainError("deformation coefficients must lie in the maximal ideal");
    }
  }

  static ArcDeformation zero(const Hypersurface& H, TestRing::Ptr ring,
                             std::size_t T) {
    std::vector<PowerSeries> du(H.dim(), PowerSeries(ring, T));
    return ArcDeformation(std::move(ring), std::move(du));
  }

  const TestRing::Ptr& ring() const { return ring_; }
  const std::vector<PowerSeries>& du() const { return du_; }

  std::size_t precision() const {
    std::size_t p = SIZE_MAX;
    for (const auto& s : du_) p = std::min(p, s.precision());
    return p;
  }

 private:
  TestRing::Ptr ring_;
  std::vector<PowerSeries> du_;
};

// ---------------------------------------------------------------------------
// [OP] eval_map / arc_multiplicity: the plane-curve germ of the lifting
// problem, f(x,y) = phi(u(gamma(x)), y) with branch y = z(gamma(x)).
// ---------------------------------------------------------------------------

inline PlaneCurveGerm eval_map_germ(const BaseArc& arc,
                                    const std::string& xname = "x",
                                    const std::string& yname = "y") {
  const Hypersurface& H = arc.hypersurface();
  std::vector<std::string> xy{xname, yname};
  // Substitute t -> x into the u-components, keep z as the free variable y.
  std::vector<QPoly> args;
  for (const auto& u : arc.u_comp()) {
    QPoly a(xy);
    for (const auto& [m, c] : u.terms())
      a.add_term(Monomial(std::vector<uint32_t>{m.exp(0), 0}), c);
    args.push_back(std::move(a));
  }
  QPoly yv(xy);
  yv.add_term(Monomial::unit(2, 1), 1);
  args.push_back(yv);
  QPoly f = detail::compose_poly(H.phi(), args);
  QPoly h0(xy);
  for (const auto& [m, c] : arc.z_comp().terms())
    h0.add_term(Monomial(std::vector<uint32_t>{m.exp(0), 0}), c);
  return PlaneCurveGerm(std::move(f), std::move(h0));
}

inline uint32_t arc_multiplicity(const BaseArc& arc) {
  return eval_map_germ(arc).multiplicity();
}

namespace detail {
// y-expansion of phi(u(gamma) + du, h0 + y) around the base branch: the
// series g_j(x) feeding the triangular lift solver.
inline std::vector<PowerSeries> arc_ycoeffs(const BaseArc& arc,
                                            const ArcDeformation& def,
                                            std::size_t T) {
  const Hypersurface& H = arc.hypersurface();
  const TestRing::Ptr& ring = def.ring();
  // Deformed u-component series.
  std::vector<PowerSeries> u_series;
  for (std::size_t i = 0; i < H.dim(); ++i) {
    PowerSeries s(ring, T);
    for (const auto& [m, c] : arc.u_comp()[i].terms())
      if (m.exp(0) < T) s.set_coeff(m.exp(0), ring->constant(c));
    u_series.push_back(s + def.du()[i].truncated(std::min(T, def.du()[i].precision())));
  }
  // Base branch series h0 = z(gamma).
  PowerSeries h0(ring, T);
  for (const auto& [m, c] : arc.z_comp().terms())
    if (m.exp(0) < T) h0.set_coeff(m.exp(0), ring->constant(c));

  std::vector<QPoly> phi_by_z = H.phi().coeffs_in(H.z_index());
  std::vector<PowerSeries> A;  // phi_{j'}(u(x) + du(x))
  std::size_t W = T;
  for (const auto& s : u_series) W = std::min(W, s.precision());
  std::vector<PowerSeries> args;
  for (const auto& s : u_series) args.push_back(s.truncated(W));
  args.push_back(PowerSeries(ring, W));  // z slot, exponent is always zero
  for (const auto& p : phi_by_z) A.push_back(substitute(p, args, W));

  // Binomial re-expansion around h0.
  std::vector<PowerSeries> h0_pows{PowerSeries(ring, W)};
  h0_pows[0].set_coeff(0, ring->one());
  std::vector<PowerSeries> out;
  std::size_t J = A.size();
  for (std::size_t j = 0; j < J; ++j) {
    PowerSeries g(ring, W);
    for (std::size_t jp = j; jp < J; ++jp) {
      while (h0_pows.size() <= jp - j)
        h0_pows.push_back(h0_pows.back() * h0.truncated(W));
      // C(jp, j)
      Rational binom = 1;
      for (std::size_t r = 0; r < j; ++r)
        binom = binom * Rational(jp - r) / Rational(r + 1);
      g = g + A[jp] * h0_pows[jp - j] * binom;
    }
    out.push_back(std::move(g));
  }
  return out;
}
}  // namespace detail

// [OP] lift_arc: obstructions to lifting beta = u(gamma) + du back to X.
// Reported in the pole-residue convention: the obstruction vector is the
// Weierstrass remainder of the transverse solve (the Laurent tail of z~).
inline LiftResult lift_arc(const BaseArc& arc, const ArcDeformation& def,
                           std::size_t T) {
  PlaneCurveGerm germ = eval_map_germ(arc);
  const TestRing::Ptr& ring = def.ring();
  if (T < required_precision(germ, ring->nilpotency_degree()))
    throw PrecisionError("lift_arc: T below the precision sufficiency rule");
  std::vector<PowerSeries> ycoeffs = detail::arc_ycoeffs(arc, def, T);
  detail::HenselCore core =
      detail::hensel_solve(ycoeffs, germ.multiplicity(), std::min(T, ycoeffs[0].precision()));
  LiftResult out{core.remainder, std::nullopt, core.delta};
  if (out.liftable()) {
    PowerSeries h(ring, core.delta.precision());
    for (const auto& [m, c] : arc.z_comp().terms())
      if (m.exp(0) < h.precision()) h.set_coeff(m.exp(0), ring->constant(c));
    out.lift = h + core.delta;
  }
  return out;
}

// ---------------------------------------------------------------------------
// [OP] finite_model: obstruction equations over the universal perturbation
// ring on the coefficients c_{i,k} of du_i = sum_k c_{i,k} t^k, k <= N.
// ---------------------------------------------------------------------------

struct FiniteModel {
  std::vector<std::string> variables;  // c_<uvar>_<k>, grouped by component
  uint32_t N, K;
  uint32_t multiplicity;
  TestRing::Ptr ring;
  std::vector<QPoly> equations;  // m equations over `variables`

  static std::string var_name(const std::string& uvar, uint32_t k) {
    return "c_" + uvar + "_" + std::to_string(k);
  }

  std::size_t var_index(const std::string& uvar, uint32_t k) const {
    std::string n = var_name(uvar, k);
    for (std::size_t i = 0; i < variables.size(); ++i)
      if (variables[i] == n) return i;
    throw DomainError("unknown model variable " + n);
  }

  // Evaluate every equation at the coefficients of a concrete deformation
  // (du must be polynomial of degree <= N).
  std::vector<RingElement> evaluate(const ArcDeformation& def) const {
    const TestRing::Ptr& A = def.ring();
    std::vector<RingElement> values;
    for (std::size_t i = 0; i < def.du().size(); ++i)
      for (uint32_t k = 0; k <= N; ++k) values.push_back(def.du()[i].coeff(k));
    for (std::size_t i = 0; i < def.du().size(); ++i)
      for (std::size_t k = N + 1; k < def.du()[i].precision(); ++k)
        if (!def.du()[i].coeff(k).is_zero())
          throw DomainError("finite model evaluation needs du of degree <= N");
    std::vector<RingElement> out;
    for (const auto& eq : equations) out.push_back(eval_poly(eq, values, A));
    return out;
  }
};

inline FiniteModel finite_model(const BaseArc& arc, uint32_t N, uint32_t K,
                                std::size_t T) {
  const Hypersurface& H = arc.hypersurface();
  if (K < 2) throw DomainError("finite_model: K must be >= 2");
  if (N < arc.N()) throw DomainError("finite_model: N below the arc degree");
  std::vector<std::string> names;
  for (const auto& u : H.u_vars())
    for (uint32_t k = 0; k <= N; ++k)
      names.push_back(FiniteModel::var_name(u, k));
  auto U = TestRing::make_truncated(names, K);

  std::vector<PowerSeries> du;
  std::size_t gi = 0;
  for (std::size_t i = 0; i < H.dim(); ++i) {
    PowerSeries s(U, T);
    for (uint32_t k = 0; k <= N; ++k) s.set_coeff(k, U->generator(gi++));
    du.push_back(std::move(s));
  }
  ArcDeformation def(U, std::move(du));
  LiftResult lr = lift_arc(arc, def, T);

  FiniteModel model;
  model.variables = names;
  model.N = N;
  model.K = K;
  model.multiplicity = static_cast<uint32_t>(lr.obstructions.size());
  model.ring = U;
  for (const auto& o : lr.obstructions) {
    QPoly eq = ring_element_to_poly(o);
    if (eq.terms().count(Monomial(names.size())))
      throw DomainError("finite_model: equation has a nonzero constant term");
    model.equations.push_back(std::move(eq));
  }
  return model;
}

// ---------------------------------------------------------------------------
// Vector-field flows. The canonical regular fields are
//   eta_i = phi_z d/du_i - phi_{u_i} d/dz   (so g_i = phi_z for every i),
// tangent to X by construction. A flow datum pairs a component index with a
// coefficient series f(t); convergence needs ord_t f >= 1 or f in m[[t]].
// ---------------------------------------------------------------------------

struct FlowSpec {
  std::size_t i;  // 0-based index into the u-variables
  PowerSeries f;
};

namespace detail {

// Truncated polynomial in the flow-time s with PowerSeries coefficients.
struct SJet {
  std::vector<PowerSeries> c;  // by s-degree; uniform ring/precision

  SJet scaled(const PowerSeries& w) const {
    SJet r;
    for (const auto& x : c) r.c.push_back(x * w);
    return r;
  }
};

inline SJet sjet_add(const SJet& a, const SJet& b) {
  SJet r = a;
  if (b.c.size() > r.c.size()) r.c.resize(b.c.size(), PowerSeries(b.c[0].ring(), b.c[0].precision()));
  for (std::size_t k = 0; k < b.c.size(); ++k) r.c[k] = r.c[k] + b.c[k];
  return r;
}

inline SJet sjet_mul(const SJet& a, const SJet& b, std::size_t smax) {
  SJet r;
  std::size_t n = std::min(a.c.size() + b.c.size() - 1, smax + 1);
  const PowerSeries zero(a.c[0].ring(), a.c[0].precision());
  r.c.assign(n, zero);
  for (std::size_t p = 0; p < a.c.size(); ++p)
    for (std::size_t q = 0; q < b.c.size() && p + q <= smax; ++q) {
      if (p + q >= n) continue;
      r.c[p + q] = r.c[p + q] + a.c[p] * b.c[q];
    }
  return r;
}

inline SJet sjet_eval_poly(const QPoly& p, const std::vector<SJet>& args,
                           std::size_t smax, const TestRing::Ptr& ring,
                           std::size_t T) {
  SJet one{{PowerSeries(ring, T)}};
  one.c[0].set_coeff(0, ring->one());
  std::vector<std::vector<SJet>> pows(args.size());
  SJet acc{{PowerSeries(ring, T)}};
  for (const auto& [m, coeff] : p.terms()) {
    SJet term = one;
    term.c[0] = term.c[0] * coeff;
    for (std::size_t v = 0; v < args.size(); ++v) {
      uint32_t e = m.exp(v);
      if (!e) continue;
      auto& tab = pows[v];
      if (tab.empty()) tab.push_back(args[v]);
      while (tab.size() < e) tab.push_back(sjet_mul(tab.back(), args[v], smax));
      term = sjet_mul(term, tab[e - 1], smax);
    }
    acc = sjet_add(acc, term);
  }
  return acc;
}

inline std::size_t flow_order_bound(const std::vector<FlowSpec>& fields,
                                    const TestRing::Ptr& ring, std::size_t T) {
  std::optional<std::size_t> t_bound, m_bound;
  std::size_t min_ord = SIZE_MAX;
  bool all_nilpotent = true, any_active = false;
  for (const auto& fs : fields) {
    auto ord = fs.f.order();
    if (!ord) continue;
    any_active = true;
    min_ord = std::min(min_ord, *ord);
    if (!fs.f.all_coeffs_in_max_ideal()) all_nilpotent = false;
  }
  if (!any_active) return 0;
  if (min_ord >= 1) t_bound = (T - 1) / min_ord;
  if (all_nilpotent) m_bound = ring->nilpotency_degree() - 1;
  if (!t_bound && !m_bound)
    throw DomainError(
        "flow: coefficient series of t-order 0 with a unit coefficient "
        "(divergent exponential)");
  std::size_t n = SIZE_MAX;
  if (t_bound) n = std::min(n, *t_bound);
  if (m_bound) n = std::min(n, *m_bound);
  return n;
}

// Time-1 flow of sum_i f_i(t) * eta_i applied to an arc (u(t), z(t)) on X,
// computed by Picard iteration on the s-jet of the trajectory.
inline std::vector<PowerSeries> flow_components(
    const Hypersurface& H, const std::vector<PowerSeries>& comps,
    const std::vector<FlowSpec>& fields, std::size_t T) {
  if (comps.size() != H.dim() + 1)
    throw DomainError("flow: arc needs d+1 components");
  const TestRing::Ptr& ring = comps[0].ring();
  for (const auto& fs : fields) {
    if (fs.i >= H.dim()) throw DomainError("flow: component index out of range");
    if (fs.f.ring() != ring) throw DomainError("ring mismatch");
  }
  std::size_t W = T;
  for (const auto& cser : comps) W = std::min(W, cser.precision());
  for (const auto& fs : fields) W = std::min(W, fs.f.precision());

  std::size_t smax = flow_order_bound(fields, ring, W);
  if (smax == 0) {
    std::vector<PowerSeries> out;
    for (const auto& cser : comps) out.push_back(cser.truncated(W));
    return out;
  }

  QPoly gz = H.phi_z();
  std::vector<QPoly> gu;
  for (std::size_t i = 0; i < H.dim(); ++i) gu.push_back(H.phi_u(i));

  std::vector<SJet> state;
  for (const auto& cser : comps) state.push_back(SJet{{cser.truncated(W)}});

  for (std::size_t iter = 0; iter < smax; ++iter) {
    // F(state): velocity of each component.
    std::vector<SJet> vel(comps.size(), SJet{{PowerSeries(ring, W)}});
    for (const auto& fs : fields) {
      SJet pz = sjet_eval_poly(gz, state, smax, ring, W).scaled(fs.f.truncated(W));
      SJet pu = sjet_eval_poly(gu[fs.i], state, smax, ring, W).scaled(fs.f.truncated(W));
      vel[fs.i] = sjet_add(vel[fs.i], pz);
      for (auto& x : pu.c) x = -x;
      vel[H.dim()] = sjet_add(vel[H.dim()], pu);
    }
    // state <- initial + integral_s of velocity
    std::vector<SJet> next;
    for (std::size_t cidx = 0; cidx < comps.size(); ++cidx) {
      SJet integ;
      integ.c.assign(std::min(vel[cidx].c.size() + 1, smax + 1),
                     PowerSeries(ring, W));
      for (std::size_t p = 0; p + 1 < integ.c.size(); ++p)
        integ.c[p + 1] = vel[cidx].c[p] * Rational(1, static_cast<int>(p + 1));
      integ.c[0] = comps[cidx].truncated(W);
      next.push_back(std::move(integ));
    }
    state = std::move(next);
  }

  std::vector<PowerSeries> out;
  for (const auto& jet : state) {
    PowerSeries sum(ring, W);
    for (const auto& x : jet.c) sum = sum + x;
    out.push_back(std::move(sum));
  }
  return out;
}

}  // namespace detail

// [OP] flow_arc: time-1 flow of f(t) * eta_i.
inline std::vector<PowerSeries> flow_arc(const Hypersurface& H,
                                         const std::vector<PowerSeries>& comps,
                                         const FlowSpec& spec, std::size_t T) {
  return detail::flow_components(H, comps, {spec}, T);
}

// ---------------------------------------------------------------------------
// [OP] truncate_arc: replace an arc by one whose u-components are polynomial
// of degree <= N, by inductively solved eta_i-flows; agrees with the input
// mod t^{N+1}.
// ---------------------------------------------------------------------------

struct TruncateResult {
  BaseArc arc;
  std::vector<FlowSpec> flows;  // one converged flow datum per component used
};

inline TruncateResult truncate_arc(const Hypersurface& H,
                                   const std::vector<QPoly>& u_comp,
                                   const QPoly& z_comp, uint32_t N,
                                   std::size_t T) {
  auto ring = TestRing::rationals();
  auto poly_to_series = [&](const QPoly& p) {
    PowerSeries s(ring, T);
    for (const auto& [m, c] : p.terms())
      if (m.exp(0) < T) s.set_coeff(m.exp(0), ring->constant(c));
    return s;
  };
  std::vector<PowerSeries> comps;
  for (const auto& u : u_comp) comps.push_back(poly_to_series(u));
  comps.push_back(poly_to_series(z_comp));

  std::vector<FlowSpec> used;
  for (std::size_t i = 0; i < H.dim(); ++i) {
    // g_i = phi_z along the current arc; its order and leading coefficient
    // drive the inductive solve for the flow coefficients.
    std::vector<PowerSeries> args = comps;
    PowerSeries g = substitute(to_ring_poly(H.phi(), ring).derivative(H.z_index()),
                               args, T);
    auto n_opt = g.order();
    if (!n_opt)
      throw DomainError("truncate_arc: phi_z vanishes along the arc to precision");
    std::size_t n_i = *n_opt;
    if (N < n_i)
      throw DomainError("truncate_arc: N below the vanishing order of g_i");
    RingElement lead_inv = g.coeff(n_i).inverse();

    PowerSeries f(ring, T);
    std::vector<PowerSeries> current = comps;
    bool dirty = true;
    while (dirty) {
      dirty = false;
      for (std::size_t k = N + 1; k < T; ++k) {
        const RingElement& ck = current[i].coeff(k);
        if (ck.is_zero()) continue;
        std::size_t fk = k - n_i;
        f.set_coeff(fk, f.coeff(fk) - ck * lead_inv);
        current = detail::flow_components(H, comps, {FlowSpec{i, f}}, T);
        dirty = true;
      }
    }
    if (f.order()) used.push_back(FlowSpec{i, f});
    comps = std::move(current);
  }

  // Read off the polynomial components.
  std::vector<std::string> tv{"t"};
  std::vector<QPoly> u_out;
  for (std::size_t i = 0; i < H.dim(); ++i) {
    QPoly p(tv);
    for (std::size_t k = 0; k <= N && k < comps[i].precision(); ++k)
      p.add_term(Monomial(std::vector<uint32_t>{static_cast<uint32_t>(k)}),
                 comps[i].coeff(k).residue());
    for (std::size_t k = N + 1; k < comps[i].precision(); ++k)
      if (!comps[i].coeff(k).is_zero())
        throw DomainError("truncate_arc: inductive solve left a high coefficient");
    u_out.push_back(std::move(p));
  }
  QPoly z_out(tv);
  for (std::size_t k = 0; k < comps[H.dim()].precision(); ++k)
    z_out.add_term(Monomial(std::vector<uint32_t>{static_cast<uint32_t>(k)}),
                   comps[H.dim()].coeff(k).residue());
  return TruncateResult{BaseArc(H, std::move(u_out), std::move(z_out), N),
                        std::move(used)};
}

// ---------------------------------------------------------------------------
// [OP] product_chart: the forward map Psi of the product decomposition —
// flow a liftable deformation by sum a(i,k) t^k eta_i and project back to V.
// The output is liftable by construction.
// ---------------------------------------------------------------------------

inline ArcDeformation product_chart(
    const BaseArc& arc, const ArcDeformation& def,
    const std::map<std::pair<std::size_t, uint32_t>, RingElement>& a,
    std::size_t T) {
  const Hypersurface& H = arc.hypersurface();
  const TestRing::Ptr& ring = def.ring();

  // Support check: k > N - n_i with n_i = ord_t(phi_z o gamma), the same for
  // every i under the canonical choice g_i = phi_z.
  PlaneCurveGerm germ = eval_map_germ(arc);
  std::size_t n = germ.multiplicity();
  for (const auto& [ik, v] : a) {
    if (ik.first >= H.dim())
      throw DomainError("product_chart: component index out of range");
    if (ik.second + n <= arc.N())
      throw DomainError("product_chart: flow index outside the index set J");
    if (!v.in_max_ideal())
      throw DomainError("product_chart: flow coefficients must be nilpotent");
  }

  LiftResult lr = lift_arc(arc, def, T);
  if (!lr.liftable())
    throw DomainError("product_chart: input deformation is not liftable");

  std::size_t W = lr.lift->precision();
  std::vector<PowerSeries> comps;
  for (std::size_t i = 0; i < H.dim(); ++i) {
    PowerSeries s(ring, W);
    for (const auto& [m, c] : arc.u_comp()[i].terms())
      if (m.exp(0) < W) s.set_coeff(m.exp(0), ring->constant(c));
    comps.push_back(s + def.du()[i].truncated(std::min(W, def.du()[i].precision())));
  }
  comps.push_back(*lr.lift);

  std::vector<FlowSpec> fields;
  for (std::size_t i = 0; i < H.dim(); ++i) {
    PowerSeries f(ring, W);
    bool any = false;
    for (const auto& [ik, v] : a)
      if (ik.first == i && ik.second < W) {
        f.set_coeff(ik.second, v);
        any = true;
      }
    if (any) fields.push_back(FlowSpec{i, f});
  }
  std::vector<PowerSeries> flowed =
      fields.empty() ? comps : detail::flow_components(H, comps, fields, W);

  std::vector<PowerSeries> du_out;
  for (std::size_t i = 0; i < H.dim(); ++i) {
    PowerSeries base(ring, flowed[i].precision());
    for (const auto& [m, c] : arc.u_comp()[i].terms())
      if (m.exp(0) < base.precision()) base.set_coeff(m.exp(0), ring->constant(c));
    du_out.push_back(flowed[i] - base);
  }
  return ArcDeformation(ring, std::move(du_out));
}

}  // namespace arcdef
