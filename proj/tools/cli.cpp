#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "arcdef/examples.hpp"
#include "arcdef/job.hpp"

using namespace arcdef;

namespace {

struct Report {
  struct Section {
    std::string name;
    std::vector<std::pair<std::string, std::string>> kv;
  };
  std::vector<Section> sections;

  void add(const std::string& sec, const std::string& key,
           const std::string& value) {
    if (sections.empty() || sections.back().name != sec)
      sections.push_back({sec, {}});
    sections.back().kv.emplace_back(key, value);
  }

  std::string text() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < sections.size(); ++i) {
      if (i) os << "\n";
      os << "[" << sections[i].name << "]\n";
      for (const auto& [k, v] : sections[i].kv) os << k << " = " << v << "\n";
    }
    return os.str();
  }

  std::string json() const {
    nlohmann::ordered_json j;
    bool qualify = sections.size() > 1;
    for (std::size_t i = 0; i < sections.size(); ++i) {
      std::string prefix =
          qualify ? sections[i].name + "." + std::to_string(i) + "." : "";
      for (const auto& [k, v] : sections[i].kv) j[prefix + k] = v;
    }
    return j.dump(2) + "\n";
  }
};

struct Options {
  std::string job_file;
  int example = 0;
  uint32_t r = 0;
  int64_t N = -1, K = -1, T = -1;
  std::string out;
  std::string format = "text";
  int64_t seed = -1;
};

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--job", opt.job_file, "job file");
  cmd->add_option("--example", opt.example, "worked example id (1-3)")
      ->check(CLI::Range(1, 3));
  cmd->add_option("--r", opt.r, "transverse dimension for examples 2-3")
      ->check(CLI::Range(1, 3));
  cmd->add_option("--N", opt.N, "truncation degree of arc components");
  cmd->add_option("--K", opt.K, "perturbation-ring degree cap");
  cmd->add_option("--T", opt.T, "working t-precision");
  cmd->add_option("--out", opt.out, "write the report to a file");
  cmd->add_option("--format", opt.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("--seed", opt.seed, "seed for randomized suites");
}

struct Ctx {
  JobSpec job;
  std::optional<WorkedExample> example;

  const Hypersurface& hyper() const {
    if (example) return example->H();
    if (!job.hyper) throw DomainError("no hypersurface configured (need --job or --example)");
    return *job.hyper;
  }
  const BaseArc& arc() const {
    if (example) return example->arc();
    if (!job.arc) throw DomainError("no arc configured (need --job or --example)");
    return *job.arc;
  }
  const TestRing::Ptr& ring() const {
    if (!job.ring) throw DomainError("this command needs a [ring] section");
    return job.ring;
  }
};

Ctx make_context(const Options& opt) {
  Ctx ctx;
  if (!opt.job_file.empty()) {
    std::ifstream in(opt.job_file);
    if (!in) throw DomainError("cannot open job file " + opt.job_file);
    std::stringstream ss;
    ss << in.rdbuf();
    ctx.job = parse_job(ss.str());
  }
  if (opt.example) ctx.job.example = opt.example;
  if (opt.r) ctx.job.r = opt.r;
  if (opt.N >= 0) ctx.job.N = static_cast<uint32_t>(opt.N);
  if (opt.K >= 0) ctx.job.K = static_cast<uint32_t>(opt.K);
  if (opt.T >= 0) ctx.job.T = static_cast<std::size_t>(opt.T);
  if (opt.seed >= 0) ctx.job.seed = static_cast<uint64_t>(opt.seed);
  if (ctx.job.example) ctx.example = make_example(*ctx.job.example, ctx.job.r);
  return ctx;
}

RingElement parse_ring_element(const std::string& text,
                               const TestRing::Ptr& ring) {
  QPoly p = parse_poly(text, ring->generators());
  std::vector<RingElement> gens;
  for (std::size_t i = 0; i < ring->generators().size(); ++i)
    gens.push_back(ring->generator(i));
  return eval_poly(p, gens, ring);
}

int emit(const Report& rep, const Options& opt, int code) {
  std::string body = opt.format == "json" ? rep.json() : rep.text();
  if (opt.out.empty()) {
    std::cout << body;
  } else {
    std::ofstream out(opt.out);
    if (!out) throw DomainError("cannot write " + opt.out);
    out << body;
  }
  return code;
}

// ---------------------------------------------------------------------------

int cmd_mult(const Options& opt) {
  Ctx ctx = make_context(opt);
  Report rep;
  rep.add("result", "m", std::to_string(arc_multiplicity(ctx.arc())));
  return emit(rep, opt, 0);
}

int cmd_lift(const Options& opt) {
  Ctx ctx = make_context(opt);
  PlaneCurveGerm germ = eval_map_germ(ctx.arc());
  CurveDeformation def(germ, ctx.ring());
  for (const auto& [key, expr] : ctx.job.deformation) {
    // keys c_<i>_<j>
    uint32_t i = 0, j = 0;
    if (std::sscanf(key.c_str(), "c_%u_%u", &i, &j) != 2)
      throw DomainError("lift: deformation keys must look like c_<i>_<j>");
    def.set(i, j, parse_ring_element(expr, ctx.ring()));
  }
  LiftResult lr = lift_branch(def, ctx.job.T);
  Report rep;
  rep.add("result", "m", std::to_string(germ.multiplicity()));
  for (std::size_t l = 0; l < lr.obstructions.size(); ++l)
    rep.add("result", "o" + std::to_string(l),
            print_ring_element(lr.obstructions[l]));
  rep.add("result", "liftable", lr.liftable() ? "true" : "false");
  if (lr.lift)
    rep.add("result", "lift", print_series(*lr.lift, germ.xname(), ctx.job.T));
  return emit(rep, opt, 0);
}

int cmd_lift_arc(const Options& opt) {
  Ctx ctx = make_context(opt);
  const Hypersurface& H = ctx.hyper();
  const TestRing::Ptr& A = ctx.ring();
  std::vector<PowerSeries> du(H.dim(), PowerSeries(A, ctx.job.T));
  for (const auto& [key, expr] : ctx.job.deformation) {
    const auto& uv = H.u_vars();
    auto it = std::find(uv.begin(), uv.end(), key);
    if (it == uv.end())
      throw DomainError("lift-arc: deformation key '" + key +
                        "' is not a u-variable");
    du[static_cast<std::size_t>(it - uv.begin())] =
        parse_series(expr, "t", A, ctx.job.T);
  }
  ArcDeformation def(A, std::move(du));
  LiftResult lr = lift_arc(ctx.arc(), def, ctx.job.T);
  Report rep;
  for (std::size_t l = 0; l < lr.obstructions.size(); ++l)
    rep.add("result", "o" + std::to_string(l),
            print_ring_element(lr.obstructions[l]));
  rep.add("result", "liftable", lr.liftable() ? "true" : "false");
  if (lr.lift) rep.add("result", "lift", print_series(*lr.lift, "t", ctx.job.T));
  return emit(rep, opt, 0);
}

int cmd_model(const Options& opt) {
  Ctx ctx = make_context(opt);
  FiniteModel model = finite_model(ctx.arc(), ctx.job.N, ctx.job.K, ctx.job.T);
  Report rep;
  rep.add("result", "m", std::to_string(model.multiplicity));
  rep.add("result", "equations", std::to_string(model.equations.size()));
  for (std::size_t l = 0; l < model.equations.size(); ++l)
    rep.add("result", "eq" + std::to_string(l), print_poly(model.equations[l]));
  return emit(rep, opt, 0);
}

int cmd_flow(const Options& opt) {
  Ctx ctx = make_context(opt);
  const Hypersurface& H = ctx.hyper();
  const BaseArc& arc = ctx.arc();
  const TestRing::Ptr& A = ctx.ring();
  if (!ctx.job.flow) throw DomainError("flow: job needs a [flow] section");
  const auto& uv = H.u_vars();
  auto it = std::find(uv.begin(), uv.end(), ctx.job.flow->first);
  if (it == uv.end())
    throw DomainError("flow: component '" + ctx.job.flow->first +
                      "' is not a u-variable");
  FlowSpec spec{static_cast<std::size_t>(it - uv.begin()),
                parse_series(ctx.job.flow->second, "t", A, ctx.job.T)};

  auto poly_to_series = [&](const QPoly& p) {
    PowerSeries s(A, ctx.job.T);
    for (const auto& [m, c] : p.terms())
      if (m.exp(0) < ctx.job.T) s.set_coeff(m.exp(0), A->constant(c));
    return s;
  };
  std::vector<PowerSeries> comps;
  for (const auto& u : arc.u_comp()) comps.push_back(poly_to_series(u));
  comps.push_back(poly_to_series(arc.z_comp()));
  std::vector<PowerSeries> out = flow_arc(H, comps, spec, ctx.job.T);

  Report rep;
  for (std::size_t i = 0; i < H.dim(); ++i)
    rep.add("result", H.u_vars()[i], print_series(out[i], "t", ctx.job.T));
  rep.add("result", H.z_var(), print_series(out[H.dim()], "t", ctx.job.T));
  return emit(rep, opt, 0);
}

int cmd_truncate(const Options& opt) {
  Ctx ctx = make_context(opt);
  const Hypersurface& H = ctx.hyper();
  const BaseArc& arc = ctx.arc();
  TruncateResult tr =
      truncate_arc(H, arc.u_comp(), arc.z_comp(), ctx.job.N, ctx.job.T);
  Report rep;
  for (std::size_t i = 0; i < H.dim(); ++i)
    rep.add("result", H.u_vars()[i], print_poly(tr.arc.u_comp()[i]));
  rep.add("result", H.z_var(), print_poly(tr.arc.z_comp()));
  rep.add("result", "flows", std::to_string(tr.flows.size()));
  return emit(rep, opt, 0);
}

void report_check(Report& rep, const CheckReport& cr, bool& all_pass) {
  rep.add("check", "name", cr.name);
  rep.add("check", "status", cr.pass ? "pass" : "fail");
  for (std::size_t i = 0; i < cr.details.size(); ++i)
    rep.add("check", "detail" + std::to_string(i), cr.details[i]);
  all_pass = all_pass && cr.pass;
}

int verify_one_example(int id, uint32_t r, uint32_t N, uint32_t K,
                       std::size_t T, uint64_t seed, Report& rep,
                       bool& all_pass) {
  WorkedExample ex = make_example(id, r);
  report_check(rep, check_alpha_identity(ex), all_pass);
  report_check(rep, check_leading_forms(ex, N, K, T), all_pass);
  RingCatalog cat = RingCatalog::standard();
  Rng rng(seed);
  for (const auto& entry : cat.entries) {
    if (entry.ring->nilpotency_degree() > K + 1) continue;
    report_check(
        rep, check_model_consistency(ex, entry.ring, entry.name, N, K, T, rng),
        all_pass);
  }
  return 0;
}

int cmd_verify(const Options& opt) {
  Ctx ctx = make_context(opt);
  if (!ctx.job.example)
    throw DomainError("verify-example needs --example (or example in [run])");
  // The companion chart data lives at N = 2; K = 2 keeps the probe rings to
  // the exactly-truncated ones. Flags still override.
  uint32_t N = opt.N >= 0 ? static_cast<uint32_t>(opt.N) : 2;
  uint32_t K = opt.K >= 0 ? static_cast<uint32_t>(opt.K) : 2;
  Report rep;
  bool all_pass = true;
  verify_one_example(*ctx.job.example, ctx.job.r, N, K, ctx.job.T, ctx.job.seed,
                     rep, all_pass);
  rep.add("result", "status", all_pass ? "pass" : "fail");
  return emit(rep, opt, all_pass ? 0 : 1);
}

int cmd_selftest(const Options& opt) {
  Ctx ctx = make_context(opt);
  Report rep;
  bool all_pass = true;
  uint64_t seed = ctx.job.seed;

  for (auto [id, r] : std::vector<std::pair<int, uint32_t>>{
           {1, 1}, {2, 2}, {3, 1}, {3, 2}})
    verify_one_example(id, r, 2, 2, ctx.job.T, seed, rep, all_pass);

  // Division roundtrip across the catalog.
  {
    CheckReport cr;
    cr.name = "weierstrass-roundtrip";
    RingCatalog cat = RingCatalog::standard();
    Rng rng(seed + 1);
    std::size_t T = 24;
    for (const auto& entry : cat.entries) {
      if (entry.ring->dimension() == 1) continue;
      for (int trial = 0; trial < 10; ++trial) {
        const TestRing::Ptr& A = entry.ring;
        std::size_t n = static_cast<std::size_t>(rng.int_in(0, 3));
        PowerSeries F(A, T), G(A, T);
        for (std::size_t k = 0; k < n; ++k)
          F.set_coeff(k, rng.max_ideal_element(A));
        F.set_coeff(n, A->constant(rng.nonzero_rational()));
        for (std::size_t k = n + 1; k < T; ++k)
          if (rng.int_in(0, 3) == 0) F.set_coeff(k, rng.element(A));
        for (std::size_t k = 0; k < T; ++k)
          if (rng.int_in(0, 2) == 0) G.set_coeff(k, rng.element(A));
        WeierstrassResult d = weierstrass_divide(G, F);
        PowerSeries recomposed = d.quotient * F;
        for (std::size_t k = 0; k < d.remainder.size(); ++k)
          recomposed.set_coeff(k, recomposed.coeff(k) + d.remainder[k]);
        if (!(recomposed == G.truncated(recomposed.precision()))) {
          cr.fail("G != Q*F + R over " + entry.name);
          break;
        }
      }
      if (!cr.pass) break;
    }
    if (cr.pass) cr.note("10 instances per catalog ring");
    report_check(rep, cr, all_pass);
  }

  // Universal-vs-direct specialization for f = x*y.
  {
    CheckReport cr;
    cr.name = "universal-specialization (f = x*y)";
    std::vector<std::string> xy{"x", "y"};
    QPoly f(xy);
    f.add_term(Monomial(std::vector<uint32_t>{1, 1}), 1);
    PlaneCurveGerm germ(f, QPoly(xy));
    std::size_t T = 48;
    UniversalModel um = universal_obstructions(germ, 3, T);
    auto A = RingCatalog::standard().by_name("Q[e]/(e^4)");
    Rng rng(seed + 2);
    for (int trial = 0; trial < 10 && cr.pass; ++trial) {
      CurveDeformation def(germ, A);
      std::vector<RingElement> values;
      uint32_t M = germ.degree_bound();
      for (uint32_t i = 0; i <= M; ++i)
        for (uint32_t j = 0; j <= M; ++j) {
          RingElement v = rng.max_ideal_element(A);
          def.set(i, j, v);
          values.push_back(v);
        }
      LiftResult lr = lift_branch(def, T);
      if (!(lr.obstructions[0] == um.predict(0, values, A)))
        cr.fail("universal prediction disagrees with the direct solve");
    }
    if (cr.pass) cr.note("10 specializations over Q[e]/(e^4)");
    report_check(rep, cr, all_pass);
  }

  rep.add("result", "status", all_pass ? "pass" : "fail");
  return emit(rep, opt, all_pass ? 0 : 1);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite formal models of arc-space singularities on hypersurface germs"};
  app.require_subcommand(1);

  Options opt;
  std::map<std::string, int (*)(const Options&)> handlers{
      {"mult", cmd_mult},         {"lift", cmd_lift},
      {"lift-arc", cmd_lift_arc}, {"model", cmd_model},
      {"flow", cmd_flow},         {"truncate", cmd_truncate},
      {"verify-example", cmd_verify}, {"selftest", cmd_selftest}};
  std::map<std::string, CLI::App*> subs;
  for (auto& [name, fn] : handlers) {
    CLI::App* sub = app.add_subcommand(name);
    add_common(sub, opt);
    subs[name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    for (auto& [name, sub] : subs)
      if (sub->parsed()) return handlers.at(name)(opt);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
