#pragma once

#include <random>
#include <string>
#include <vector>

#include "arcdef/test_ring.hpp"

namespace arcdef {

// The probe set for functor-of-points checks, with a few quotient and
// inclusion morphisms between its members.
struct RingCatalog {
  struct Entry {
    std::string name;
    TestRing::Ptr ring;
  };
  std::vector<Entry> entries;
  struct MorphismEntry {
    std::string name;
    RingMorphism map;
  };
  std::vector<MorphismEntry> morphisms;

  static Monomial mono(std::initializer_list<uint32_t> e) {
    return Monomial(std::vector<uint32_t>(e));
  }

  static RingCatalog standard() {
    RingCatalog cat;
    auto Q = TestRing::rationals();
    auto Qe2 = TestRing::make({"e"}, {mono({2})});
    auto Qe3 = TestRing::make({"e"}, {mono({3})});
    auto Qe4 = TestRing::make({"e"}, {mono({4})});
    auto Qab2 = TestRing::make({"a", "b"}, {mono({2, 0}), mono({1, 1}), mono({0, 2})});
    auto Qab3 = TestRing::make(
        {"a", "b"}, {mono({3, 0}), mono({2, 1}), mono({1, 2}), mono({0, 3})});
    auto Qa2b2 = TestRing::make({"a", "b"}, {mono({2, 0}), mono({0, 2})});
    cat.entries = {{"Q", Q},
                   {"Q[e]/(e^2)", Qe2},
                   {"Q[e]/(e^3)", Qe3},
                   {"Q[e]/(e^4)", Qe4},
                   {"Q[a,b]/(a,b)^2", Qab2},
                   {"Q[a,b]/(a,b)^3", Qab3},
                   {"Q[a,b]/(a^2,b^2)", Qa2b2}};

    auto add = [&](const std::string& n, TestRing::Ptr s, TestRing::Ptr t,
                   std::vector<RingElement> imgs) {
      cat.morphisms.push_back({n, RingMorphism(std::move(s), std::move(t), std::move(imgs))});
    };
    add("Q[e]/(e^4) ->> Q[e]/(e^3)", Qe4, Qe3, {Qe3->generator(0)});
    add("Q[e]/(e^3) ->> Q[e]/(e^2)", Qe3, Qe2, {Qe2->generator(0)});
    add("Q[e]/(e^2) ->> Q", Qe2, Q, {Q->zero()});
    add("Q[a,b]/(a,b)^3 ->> Q[a,b]/(a,b)^2", Qab3, Qab2,
        {Qab2->generator(0), Qab2->generator(1)});
    add("Q[a,b]/(a^2,b^2) ->> Q[a,b]/(a,b)^2", Qa2b2, Qab2,
        {Qab2->generator(0), Qab2->generator(1)});
    add("Q[e]/(e^2) -> Q[e]/(e^3), e -> e^2", Qe2, Qe3,
        {Qe3->monomial(mono({2}), 1)});
    add("Q[e]/(e^2) -> Q[a,b]/(a,b)^2, e -> a", Qe2, Qab2, {Qab2->generator(0)});
    add("Q[a,b]/(a,b)^2 -> Q[e]/(e^3), a -> e^2, b -> e^2", Qab2, Qe3,
        {Qe3->monomial(mono({2}), 1), Qe3->monomial(mono({2}), 1)});
    return cat;
  }

  const TestRing::Ptr& by_name(const std::string& name) const {
    for (const auto& e : entries)
      if (e.name == name) return e.ring;
    throw DomainError("unknown catalog ring: " + name);
  }
};

// Deterministic random generation for the property suites.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  int64_t int_in(int64_t lo, int64_t hi) {
    return std::uniform_int_distribution<int64_t>(lo, hi)(eng_);
  }

  Rational rational() {
    // Small numerators and denominators keep exact arithmetic fast.
    int64_t num = int_in(-6, 6);
    int64_t den = int_in(1, 4);
    return Rational(num, den);
  }

  Rational nonzero_rational() {
    Rational q = rational();
    while (q == 0) q = rational();
    return q;
  }

  // Random element of the maximal ideal, sparse coordinates.
  RingElement max_ideal_element(const TestRing::Ptr& ring) {
    RingElement e(ring);
    for (const auto& m : ring->basis()) {
      if (m.is_one()) continue;
      if (int_in(0, 2) == 0) continue;  // keep it sparse
      e.add_term(m, rational());
    }
    return e;
  }

  RingElement element(const TestRing::Ptr& ring) {
    RingElement e = max_ideal_element(ring);
    e.add_term(Monomial(ring->generators().size()), rational());
    return e;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace arcdef
