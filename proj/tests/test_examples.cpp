#include <catch2/catch_amalgamated.hpp>

#include "arcdef/examples.hpp"

using namespace arcdef;

TEST_CASE("alpha identity holds for every example") {
  for (auto [id, r] : std::vector<std::pair<int, uint32_t>>{
           {1, 1}, {2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}, {3, 3}}) {
    WorkedExample ex = make_example(id, r);
    CheckReport rep = check_alpha_identity(ex);
    INFO(rep.name);
    CHECK(rep.pass);
  }
}

TEST_CASE("alpha identity is falsifiable") {
  // Breaking a Y-equation must break the reduction.
  WorkedExample ex = make_example(1);
  ex.Y_equations[0] = parse_poly("a^2 - a", ex.chart_vars);  // not the ideal
  // a^2 reduces to a mod (a^2 - a): phi o alpha = -a^2 = -(a^2 - a) - a != 0
  CheckReport rep = check_alpha_identity(ex);
  CHECK_FALSE(rep.pass);
}

TEST_CASE("leading forms match the expected quadrics") {
  for (auto [id, r] : std::vector<std::pair<int, uint32_t>>{
           {1, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}}) {
    WorkedExample ex = make_example(id, r);
    CheckReport rep = check_leading_forms(ex, 2, 2, 64);
    INFO(rep.name);
    CHECK(rep.pass);
  }
}

TEST_CASE("model consistency across the exactly-truncated catalog rings") {
  RingCatalog cat = RingCatalog::standard();
  for (auto [id, r] :
       std::vector<std::pair<int, uint32_t>>{{1, 1}, {2, 2}, {3, 1}, {3, 2}}) {
    WorkedExample ex = make_example(id, r);
    Rng rng(1000 + static_cast<uint64_t>(10 * id + r));
    std::size_t neg_total = 0;
    for (const auto& entry : cat.entries) {
      if (entry.ring->nilpotency_degree() > 3) continue;  // need m^3 = 0
      CheckReport rep =
          check_model_consistency(ex, entry.ring, entry.name, 2, 2, 64, rng);
      INFO(rep.name);
      for (const auto& d : rep.details) INFO(d);
      CHECK(rep.pass);
      CHECK(rep.positives >= 20);
      neg_total += rep.negatives;
    }
    // Rings with m^2 != 0 admit first-order violations; enough were found.
    CHECK(neg_total >= 20);
  }
}

TEST_CASE("consistency check reports are deterministic given the seed") {
  WorkedExample ex = make_example(3, 1);
  auto ring = RingCatalog::standard().by_name("Q[e]/(e^3)");
  auto run = [&]() {
    Rng rng(77);
    CheckReport rep =
        check_model_consistency(ex, ring, "Q[e]/(e^3)", 2, 2, 64, rng);
    std::string flat = rep.name + "|" + (rep.pass ? "pass" : "fail");
    for (const auto& d : rep.details) flat += "|" + d;
    return flat;
  };
  CHECK(run() == run());
}

TEST_CASE("bounded-cofactor ideal membership") {
  std::vector<std::string> ab{"a", "b"};
  QPoly a2 = parse_poly("a^2", ab);
  QPoly target = parse_poly("a^3 + a^2*b", ab);
  CHECK(in_ideal_bounded(target, {a2}));
  CHECK_FALSE(in_ideal_bounded(parse_poly("a*b", ab), {a2}));
  CHECK(in_ideal_bounded(QPoly(ab), {a2}));
  // degree-bounded: membership requiring a cofactor of higher degree than
  // deg(target) - deg(gen) cannot be certified, and these inputs never need it
  CHECK(in_ideal_bounded(parse_poly("a^2", ab), {a2}));
}
