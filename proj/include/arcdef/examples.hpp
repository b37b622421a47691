#pragma once

#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "arcdef/arc.hpp"
#include "arcdef/catalog.hpp"
#include "arcdef/expr.hpp"
#include "arcdef/linalg.hpp"

namespace arcdef {

// ---------------------------------------------------------------------------
// The worked examples: the quadric cone x*y = z.z with the arcs (t,0,0) and
// (t^2,0,0), together with the companion chart data (Y-equations and the
// versal map alpha).
// ---------------------------------------------------------------------------

struct WorkedExample {
  int id = 0;
  uint32_t r = 1;
  // BaseArc keeps a pointer to its hypersurface, so the example owns it
  // behind a stable address.
  std::shared_ptr<Hypersurface> hyper;
  std::shared_ptr<BaseArc> base_arc;
  std::vector<std::string> chart_vars;
  std::vector<QPoly> Y_equations;  // over chart_vars
  std::vector<QPoly> alpha;        // d+1 components over chart_vars + {t}

  const Hypersurface& H() const { return *hyper; }
  const BaseArc& arc() const { return *base_arc; }
};

inline WorkedExample make_example(int id, uint32_t r = 2) {
  if (id < 1 || id > 3) throw DomainError("example id must be 1, 2, or 3");
  if (r < 1 || r > 3) throw DomainError("r must be between 1 and 3");

  auto build = [&](std::vector<std::string> u_vars, uint32_t arc_exp,
                   std::vector<std::string> chart,
                   auto&& yeqs_fn, auto&& alpha_fn) {
    std::vector<std::string> all = u_vars;
    all.push_back("y");
    QPoly phi(all);
    // phi = u_1 * y - sum of squares of the remaining u-variables.
    {
      std::vector<uint32_t> e(all.size(), 0);
      e[0] = 1;
      e[all.size() - 1] = 1;
      phi.add_term(Monomial(e), 1);
      for (std::size_t j = 1; j + 1 < all.size(); ++j) {
        std::vector<uint32_t> e2(all.size(), 0);
        e2[j] = 2;
        phi.add_term(Monomial(e2), -1);
      }
    }
    auto H = std::make_shared<Hypersurface>(u_vars, "y", std::move(phi));
    std::vector<std::string> tv{"t"};
    std::vector<QPoly> u_comp;
    {
      QPoly first(tv);
      first.add_term(Monomial(std::vector<uint32_t>{arc_exp}), 1);
      u_comp.push_back(std::move(first));
      for (std::size_t j = 1; j < u_vars.size(); ++j) u_comp.push_back(QPoly(tv));
    }
    auto arc = std::make_shared<BaseArc>(*H, std::move(u_comp), QPoly(tv), 2);

    WorkedExample ex{id, r, H, arc, chart, {}, {}};
    std::vector<std::string> ct = chart;
    ct.push_back("t");
    yeqs_fn(ex, chart);
    alpha_fn(ex, ct);
    return ex;
  };

  auto sq_sum = [](const std::vector<std::string>& vars,
                   const std::vector<std::size_t>& a,
                   const std::vector<std::size_t>& b) {
    // sum_j vars[a_j] * vars[b_j]
    QPoly p(vars);
    for (std::size_t j = 0; j < a.size(); ++j) {
      std::vector<uint32_t> e(vars.size(), 0);
      e[a[j]] += 1;
      e[b[j]] += 1;
      p.add_term(Monomial(e), 1);
    }
    return p;
  };

  if (id == 1) {
    return build(
        {"x", "z"}, 1, {"a"},
        [&](WorkedExample& ex, const std::vector<std::string>& cv) {
          QPoly a2(cv);
          a2.add_term(Monomial(std::vector<uint32_t>{2}), 1);
          ex.Y_equations = {a2};
        },
        [&](WorkedExample& ex, const std::vector<std::string>& ct) {
          // alpha(a,t) = (x, z, y) = (t, a, 0)
          QPoly xt(ct), za(ct), y0(ct);
          xt.add_term(Monomial::unit(ct.size(), 1), 1);  // t
          za.add_term(Monomial::unit(ct.size(), 0), 1);  // a
          ex.alpha = {xt, za, y0};
        });
  }

  std::vector<std::string> u_vars{"x"};
  for (uint32_t j = 1; j <= r; ++j) u_vars.push_back("z" + std::to_string(j));

  if (id == 2) {
    std::vector<std::string> chart;
    for (uint32_t j = 1; j <= r; ++j) chart.push_back("w" + std::to_string(j));
    return build(
        u_vars, 1, chart,
        [&](WorkedExample& ex, const std::vector<std::string>& cv) {
          std::vector<std::size_t> idx(r);
          for (uint32_t j = 0; j < r; ++j) idx[j] = j;
          ex.Y_equations = {sq_sum(cv, idx, idx)};
        },
        [&](WorkedExample& ex, const std::vector<std::string>& ct) {
          // alpha(w,t) = (x, z, y) = (t, w, 0)
          QPoly xt(ct);
          xt.add_term(Monomial::unit(ct.size(), r), 1);  // t is last
          ex.alpha = {xt};
          for (uint32_t j = 0; j < r; ++j) {
            QPoly zj(ct);
            zj.add_term(Monomial::unit(ct.size(), j), 1);
            ex.alpha.push_back(std::move(zj));
          }
          ex.alpha.push_back(QPoly(ct));  // y = 0
        });
  }

  // Example 3: chart (a, b, v_1..v_r, w_1..w_r), arc (t^2, 0, 0).
  std::vector<std::string> chart{"a", "b"};
  for (uint32_t j = 1; j <= r; ++j) chart.push_back("v" + std::to_string(j));
  for (uint32_t j = 1; j <= r; ++j) chart.push_back("w" + std::to_string(j));
  return build(
      u_vars, 2, chart,
      [&](WorkedExample& ex, const std::vector<std::string>& cv) {
        std::vector<std::size_t> vi(r), wi(r);
        for (uint32_t j = 0; j < r; ++j) {
          vi[j] = 2 + j;
          wi[j] = 2 + r + j;
        }
        QPoly w2 = sq_sum(cv, wi, wi), v2 = sq_sum(cv, vi, vi);
        QPoly vw = sq_sum(cv, vi, wi);
        QPoly av(cv), bv(cv);
        av.add_term(Monomial::unit(cv.size(), 0), 1);
        bv.add_term(Monomial::unit(cv.size(), 1), 1);
        // a w^2 - v^2 and b w^2 - 2 v.w
        ex.Y_equations = {av * w2 - v2, bv * w2 - vw * Rational(2)};
      },
      [&](WorkedExample& ex, const std::vector<std::string>& ct) {
        std::size_t nt = ct.size();
        std::size_t ti = nt - 1;
        auto var = [&](std::size_t i) {
          QPoly p(ct);
          p.add_term(Monomial::unit(nt, i), 1);
          return p;
        };
        // x = a + b t + t^2
        QPoly x = var(0) + var(1) * var(ti) + var(ti) * var(ti);
        ex.alpha = {x};
        for (uint32_t j = 0; j < r; ++j)
          ex.alpha.push_back(var(2 + j) + var(ti) * var(2 + r + j));
        // y = w^2
        QPoly y(ct);
        for (uint32_t j = 0; j < r; ++j) {
          std::vector<uint32_t> e(nt, 0);
          e[2 + r + j] = 2;
          y.add_term(Monomial(e), 1);
        }
        ex.alpha.push_back(std::move(y));
      });
}

// ---------------------------------------------------------------------------
// Check reports
// ---------------------------------------------------------------------------

struct CheckReport {
  std::string name;
  bool pass = true;
  std::vector<std::string> details;
  std::size_t positives = 0;  // Y-points that lifted
  std::size_t negatives = 0;  // violating points that obstructed

  void fail(const std::string& why) {
    pass = false;
    details.push_back(why);
  }
  void note(const std::string& what) { details.push_back(what); }
};

// ---------------------------------------------------------------------------
// [OP] check_alpha_identity: phi o alpha must reduce to 0 modulo the ideal
// of the Y-equations, with degree-bounded cofactors found by exact linear
// algebra.
// ---------------------------------------------------------------------------

// Membership of target in the ideal generated by gens, with cofactor degree
// bounded by deg(target) - deg(gen).
inline bool in_ideal_bounded(const QPoly& target, const std::vector<QPoly>& gens) {
  if (target.is_zero()) return true;
  std::size_t nv = target.nvars();
  uint32_t D = target.total_degree();

  // Enumerate monomials of degree <= bound.
  auto enumerate = [&](uint32_t bound) {
    std::vector<Monomial> out;
    std::vector<uint32_t> e(nv, 0);
    auto rec = [&](auto&& self, std::size_t pos, uint32_t left) -> void {
      if (pos == nv) {
        out.push_back(Monomial(e));
        return;
      }
      for (uint32_t k = 0; k <= left; ++k) {
        e[pos] = k;
        self(self, pos + 1, left - k);
      }
      e[pos] = 0;
    };
    rec(rec, 0, bound);
    return out;
  };

  std::vector<Monomial> rows = enumerate(D);
  std::map<Monomial, std::size_t> row_index;
  for (std::size_t i = 0; i < rows.size(); ++i) row_index[rows[i]] = i;

  // Columns: (gen, cofactor monomial) pairs.
  QMatrix cols;  // transposed layout: each entry is a column
  for (const auto& g : gens) {
    uint32_t dg = g.total_degree();
    if (dg > D) continue;
    for (const auto& cm : enumerate(D - dg)) {
      std::vector<Rational> col(rows.size(), 0);
      for (const auto& [m, c] : g.terms()) {
        auto it = row_index.find(m * cm);
        if (it == row_index.end()) return false;  // cannot happen by degrees
        col[it->second] += c;
      }
      cols.push_back(std::move(col));
    }
  }
  if (cols.empty()) return false;

  // Solve sum_j x_j col_j = target.
  QMatrix M(rows.size(), std::vector<Rational>(cols.size(), 0));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < rows.size(); ++i) M[i][j] = cols[j][i];
  std::vector<Rational> b(rows.size(), 0);
  for (const auto& [m, c] : target.terms()) b[row_index.at(m)] = c;
  return solve_linear(M, b).has_value();
}

inline CheckReport check_alpha_identity(const WorkedExample& ex) {
  CheckReport rep;
  rep.name = "alpha-identity (example " + std::to_string(ex.id) + ")";
  // phi o alpha over chart_vars + {t}.
  QPoly comp = detail::compose_poly(ex.H().phi(), ex.alpha);
  std::vector<std::string> ct = ex.chart_vars;
  ct.push_back("t");
  // Lift Y-equations into the chart+t variable list.
  std::vector<QPoly> gens;
  for (const auto& g : ex.Y_equations) {
    QPoly lifted(ct);
    for (const auto& [m, c] : g.terms()) {
      std::vector<uint32_t> e = m.exps();
      e.push_back(0);
      lifted.add_term(Monomial(e), c);
    }
    gens.push_back(std::move(lifted));
  }
  if (comp.is_zero()) {
    rep.note("phi o alpha = 0 identically");
    return rep;
  }
  if (!in_ideal_bounded(comp, gens))
    rep.fail("phi o alpha = " + print_poly(comp) +
             " does not reduce to 0 modulo the Y-ideal");
  else
    rep.note("phi o alpha = " + print_poly(comp) + " reduces to 0");
  return rep;
}

// ---------------------------------------------------------------------------
// Chart points and the induced arc deformations
// ---------------------------------------------------------------------------

// Partial-evaluate a chart+t polynomial at ring elements, leaving t.
inline PowerSeries eval_chart_poly(const QPoly& p,
                                   const std::vector<RingElement>& chart_values,
                                   const TestRing::Ptr& ring, std::size_t T) {
  std::size_t nc = chart_values.size();
  if (p.nvars() != nc + 1) throw DomainError("chart polynomial arity mismatch");
  PowerSeries s(ring, T);
  for (const auto& [m, c] : p.terms()) {
    std::size_t k = m.exp(nc);  // t-exponent (t is last)
    if (k >= T) continue;
    RingElement val = ring->constant(c);
    for (std::size_t v = 0; v < nc; ++v)
      if (m.exp(v)) val *= chart_values[v].pow(m.exp(v));
    s.set_coeff(k, s.coeff(k) + val);
  }
  return s;
}

// du induced by a chart point through alpha: du_i = alpha_i(point) - u_i(gamma).
inline ArcDeformation deformation_from_chart(const WorkedExample& ex,
                                             const std::vector<RingElement>& point,
                                             const TestRing::Ptr& ring,
                                             std::size_t T) {
  std::vector<PowerSeries> du;
  for (std::size_t i = 0; i < ex.H().dim(); ++i) {
    PowerSeries s = eval_chart_poly(ex.alpha[i], point, ring, T);
    for (const auto& [m, c] : ex.arc().u_comp()[i].terms())
      if (m.exp(0) < T)
        s.set_coeff(m.exp(0), s.coeff(m.exp(0)) - ring->constant(c));
    du.push_back(std::move(s));
  }
  return ArcDeformation(ring, std::move(du));
}

inline std::vector<RingElement> eval_equations(
    const std::vector<QPoly>& eqs, const std::vector<RingElement>& point,
    const TestRing::Ptr& ring) {
  std::vector<RingElement> out;
  for (const auto& eq : eqs) out.push_back(eval_poly(eq, point, ring));
  return out;
}

inline bool all_zero(const std::vector<RingElement>& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

// Sample a point of the maximal ideal; with `deep`, coordinates are drawn
// from m^ceil(nu/2), which satisfies every quadratic-or-higher equation.
inline std::vector<RingElement> sample_chart_point(Rng& rng,
                                                   const TestRing::Ptr& ring,
                                                   std::size_t arity, bool deep) {
  uint32_t nu = ring->nilpotency_degree();
  uint32_t min_deg = deep ? (nu + 1) / 2 : 1;
  std::vector<RingElement> out;
  for (std::size_t i = 0; i < arity; ++i) {
    RingElement e(ring);
    for (const auto& m : ring->basis()) {
      if (m.degree() < min_deg) continue;
      if (rng.int_in(0, 2) == 0) continue;
      e.add_term(m, rng.rational());
    }
    out.push_back(std::move(e));
  }
  return out;
}

// ---------------------------------------------------------------------------
// [OP] check_model_consistency: random A-points of Y_y push through alpha to
// liftable deformations killing every model equation; points violating the
// Y-equations obstruct.
// ---------------------------------------------------------------------------

struct ConsistencyOptions {
  std::size_t positive_points = 20;
  std::size_t negative_points = 20;
  std::size_t chart_flow_points = 3;  // D-direction probes via product_chart
  std::size_t max_attempts = 4000;
};

inline CheckReport check_model_consistency(const WorkedExample& ex,
                                           const TestRing::Ptr& ring,
                                           const std::string& ring_name,
                                           uint32_t N, uint32_t K, std::size_t T,
                                           Rng& rng,
                                           const ConsistencyOptions& opt = {}) {
  CheckReport rep;
  rep.name = "model-consistency (example " + std::to_string(ex.id) + ", A = " +
             ring_name + ")";
  if (ring->nilpotency_degree() > K + 1) {
    rep.fail("catalog violation: m^{K+1} != 0 in " + ring_name);
    return rep;
  }
  FiniteModel model = finite_model(ex.arc(), N, K, T);

  std::size_t found = 0, found_neg = 0, flow_probes = 0;
  for (std::size_t attempt = 0;
       attempt < opt.max_attempts &&
       (found < opt.positive_points || found_neg < opt.negative_points);
       ++attempt) {
    bool deep = attempt % 2 == 1;
    std::vector<RingElement> pt =
        sample_chart_point(rng, ring, ex.chart_vars.size(), deep);
    bool on_Y = all_zero(eval_equations(ex.Y_equations, pt, ring));
    if (on_Y && found < opt.positive_points) {
      ++found;
      ArcDeformation def = deformation_from_chart(ex, pt, ring, T);
      LiftResult lr = lift_arc(ex.arc(), def, T);
      if (!lr.liftable()) {
        rep.fail("Y-point failed to lift (obstruction " +
                 print_ring_element(lr.obstructions[0]) + ")");
        return rep;
      }
      if (!all_zero(model.evaluate(def))) {
        rep.fail("model equations nonzero on a lifted Y-point");
        return rep;
      }
      if (flow_probes < opt.chart_flow_points &&
          ring->dimension() > 1) {
        // Probe the D-factor: flowing by a supported index stays liftable.
        ++flow_probes;
        std::map<std::pair<std::size_t, uint32_t>, RingElement> a;
        uint32_t n = arc_multiplicity(ex.arc());
        uint32_t k = ex.arc().N() + 1 - n + static_cast<uint32_t>(rng.int_in(0, 2));
        a[{static_cast<std::size_t>(rng.int_in(0, ex.H().dim() - 1)), k}] =
            rng.max_ideal_element(ring);
        ArcDeformation pushed = product_chart(ex.arc(), def, a, T);
        LiftResult lr2 = lift_arc(ex.arc(), pushed, pushed.precision());
        if (!lr2.liftable()) {
          rep.fail("product-chart push of a Y-point failed to lift");
          return rep;
        }
      }
    } else if (!on_Y && found_neg < opt.negative_points) {
      ++found_neg;
      ArcDeformation def = deformation_from_chart(ex, pt, ring, T);
      LiftResult lr = lift_arc(ex.arc(), def, T);
      if (lr.liftable()) {
        rep.fail("point violating the Y-equations lifted with no obstruction");
        return rep;
      }
    }
  }
  rep.positives = found;
  rep.negatives = found_neg;
  if (found < opt.positive_points) {
    rep.fail("could not sample enough Y-points (" + std::to_string(found) + ")");
    return rep;
  }
  rep.note(std::to_string(found) + " Y-points lifted, " +
           std::to_string(found_neg) + " violations obstructed");
  if (found_neg == 0 && ring->dimension() > 1)
    rep.note("no violating points exist in this ring (m^2-level equations)");
  return rep;
}

// ---------------------------------------------------------------------------
// [OP] check_leading_forms: degree-2 parts of the model equations against
// the expected quadrics.
// ---------------------------------------------------------------------------

inline QPoly homogeneous_part(const QPoly& p, uint32_t deg) {
  QPoly out(p.variables());
  for (const auto& [m, c] : p.terms())
    if (m.degree() == deg) out.add_term(m, c);
  return out;
}

inline CheckReport check_leading_forms(const WorkedExample& ex, uint32_t N,
                                       uint32_t K, std::size_t T) {
  CheckReport rep;
  rep.name = "leading-forms (example " + std::to_string(ex.id) + ")";
  FiniteModel model = finite_model(ex.arc(), N, K, T);

  auto zeta = [&](uint32_t j, uint32_t k) {
    // index of the perturbation variable of the j-th transverse-block
    // component (z for example 1, z_j for examples 2-3) at t-degree k
    std::string name = ex.id == 1 ? "z" : "z" + std::to_string(j);
    return model.var_index(name, k);
  };

  if (ex.id == 1 || ex.id == 2) {
    if (model.equations.size() != 1) {
      rep.fail("expected one model equation, got " +
               std::to_string(model.equations.size()));
      return rep;
    }
    QPoly quad = homogeneous_part(model.equations[0], 2);
    QPoly expect(model.variables);
    uint32_t rr = ex.id == 1 ? 1 : ex.r;
    for (uint32_t j = 1; j <= rr; ++j) {
      std::vector<uint32_t> e(model.variables.size(), 0);
      e[zeta(j, 0)] = 2;
      expect.add_term(Monomial(e), 1);
    }
    if (!(quad == expect)) {
      rep.fail("leading form " + print_poly(quad) + " != " + print_poly(expect));
      return rep;
    }
    rep.note("leading form = " + print_poly(quad));
    return rep;
  }

  // Example 3: the two degree-2 parts must span the same pencil of quadrics
  // as {v.v, 2 v.w} under zeta_{j,0} <-> v_j, zeta_{j,1} <-> w_j.
  if (model.equations.size() != 2) {
    rep.fail("expected two model equations, got " +
             std::to_string(model.equations.size()));
    return rep;
  }
  // Coefficient vectors over all degree-2 monomials in the model variables.
  std::map<Monomial, std::size_t> cols;
  auto vec_of = [&](const QPoly& q) {
    std::vector<Rational> v;
    for (const auto& [m, c] : q.terms()) {
      if (!cols.count(m)) cols[m] = cols.size();
    }
    return q;
  };
  QPoly q1 = homogeneous_part(model.equations[0], 2);
  QPoly q2 = homogeneous_part(model.equations[1], 2);
  QPoly p1(model.variables), p2(model.variables);  // v.v and 2 v.w
  for (uint32_t j = 1; j <= ex.r; ++j) {
    std::vector<uint32_t> e(model.variables.size(), 0);
    e[zeta(j, 0)] = 2;
    p1.add_term(Monomial(e), 1);
    std::vector<uint32_t> e2(model.variables.size(), 0);
    e2[zeta(j, 0)] += 1;
    e2[zeta(j, 1)] += 1;
    p2.add_term(Monomial(e2), 2);
  }
  for (const QPoly* q : {&q1, &q2, &p1, &p2}) vec_of(*q);
  auto to_vec = [&](const QPoly& q) {
    std::vector<Rational> v(cols.size(), 0);
    for (const auto& [m, c] : q.terms()) v[cols.at(m)] = c;
    return v;
  };
  QMatrix A{to_vec(q1), to_vec(q2)};
  QMatrix B{to_vec(p1), to_vec(p2)};
  QMatrix AB = A;
  AB.push_back(B[0]);
  AB.push_back(B[1]);
  std::size_t ra = matrix_rank(A), rb = matrix_rank(B), rab = matrix_rank(AB);
  if (!(ra == 2 && rb == 2 && rab == 2)) {
    rep.fail("quadric pencils differ (ranks " + std::to_string(ra) + ", " +
             std::to_string(rb) + ", " + std::to_string(rab) + ")");
    return rep;
  }
  rep.note("degree-2 pencil matches {v.v, 2 v.w}");
  return rep;
}

}  // namespace arcdef
