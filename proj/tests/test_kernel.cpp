#include <catch2/catch_amalgamated.hpp>

#include "arcdef/catalog.hpp"
#include "arcdef/poly.hpp"
#include "arcdef/weierstrass.hpp"

using namespace arcdef;

namespace {

Monomial mono(std::initializer_list<uint32_t> e) {
  return Monomial(std::vector<uint32_t>(e));
}

PowerSeries random_series(Rng& rng, const TestRing::Ptr& ring, std::size_t T,
                          int density = 2) {
  PowerSeries s(ring, T);
  for (std::size_t k = 0; k < T; ++k)
    if (rng.int_in(0, density) == 0) s.set_coeff(k, rng.element(ring));
  return s;
}

// A divisor of exact residue order n: unit coefficient at n, nilpotent below.
PowerSeries random_divisor(Rng& rng, const TestRing::Ptr& ring, std::size_t T,
                           std::size_t n) {
  PowerSeries f(ring, T);
  for (std::size_t k = 0; k < n; ++k)
    if (rng.int_in(0, 1) == 0) f.set_coeff(k, rng.max_ideal_element(ring));
  f.set_coeff(n, ring->constant(rng.nonzero_rational()) +
                     rng.max_ideal_element(ring));
  for (std::size_t k = n + 1; k < T; ++k)
    if (rng.int_in(0, 2) == 0) f.set_coeff(k, rng.element(ring));
  return f;
}

}  // namespace

TEST_CASE("test-ring construction and basis") {
  auto Qe3 = TestRing::make({"e"}, {mono({3})});
  CHECK(Qe3->dimension() == 3);
  CHECK(Qe3->nilpotency_degree() == 3);

  auto Qab2 = TestRing::make({"a", "b"}, {mono({2, 0}), mono({1, 1}), mono({0, 2})});
  CHECK(Qab2->dimension() == 3);  // 1, a, b
  CHECK(Qab2->nilpotency_degree() == 2);

  auto Qa2b2 = TestRing::make({"a", "b"}, {mono({2, 0}), mono({0, 2})});
  CHECK(Qa2b2->dimension() == 4);  // 1, a, b, ab
  CHECK(Qa2b2->nilpotency_degree() == 3);

  CHECK(TestRing::rationals()->dimension() == 1);
  CHECK(TestRing::rationals()->nilpotency_degree() == 1);

  // A non-nilpotent presentation must be rejected.
  CHECK_THROWS_AS(TestRing::make({"a", "b"}, {mono({2, 0})}), DomainError);

  // Truncated universal ring: all monomials of degree <= K.
  auto U = TestRing::make_truncated({"u", "v"}, 2);
  CHECK(U->dimension() == 6);  // 1, u, v, u^2, uv, v^2
  CHECK(U->nilpotency_degree() == 3);
}

TEST_CASE("ring arithmetic: units, inverses, nilpotents") {
  auto A = TestRing::make({"e"}, {mono({4})});
  RingElement e = A->generator(0);
  CHECK(e.pow(3) == A->monomial(mono({3}), 1));
  CHECK(e.pow(4).is_zero());
  CHECK(e.in_max_ideal());
  CHECK_FALSE(e.is_unit());

  RingElement u = A->one() + e;  // 1 + e
  RingElement inv = u.inverse();
  CHECK(u * inv == A->one());
  // geometric series: 1 - e + e^2 - e^3
  RingElement expect = A->one() - e + e.pow(2) - e.pow(3);
  CHECK(inv == expect);

  CHECK_THROWS_AS(e.inverse(), DomainError);

  Rng rng(101);
  RingCatalog cat = RingCatalog::standard();
  for (const auto& entry : cat.entries) {
    for (int trial = 0; trial < 20; ++trial) {
      RingElement x =
          entry.ring->constant(rng.nonzero_rational()) +
          rng.max_ideal_element(entry.ring);
      CHECK(x * x.inverse() == entry.ring->one());
    }
  }
}

TEST_CASE("ring morphisms validate and are multiplicative") {
  RingCatalog cat = RingCatalog::standard();
  REQUIRE(cat.morphisms.size() == 8);
  Rng rng(202);
  for (const auto& m : cat.morphisms) {
    for (int trial = 0; trial < 10; ++trial) {
      RingElement x = rng.element(m.map.source());
      RingElement y = rng.element(m.map.source());
      CHECK(m.map.apply(x * y) == m.map.apply(x) * m.map.apply(y));
      CHECK(m.map.apply(x + y) == m.map.apply(x) + m.map.apply(y));
    }
  }
  // An assignment violating the relations must be rejected: e -> a with
  // a^2 != 0 in Q[a,b]/(a^2 b^2).
  auto Qe2 = cat.by_name("Q[e]/(e^2)");
  auto Qa2b2 = cat.by_name("Q[a,b]/(a^2,b^2)");
  CHECK_NOTHROW(RingMorphism(Qe2, Qa2b2, {Qa2b2->generator(0)}));  // a^2 = 0 ok
  auto Qe3 = cat.by_name("Q[e]/(e^3)");
  CHECK_THROWS_AS(RingMorphism(Qe2, Qe3, {Qe3->generator(0)}), DomainError);
  // Non-nilpotent image rejected.
  CHECK_THROWS_AS(RingMorphism(Qe2, Qe3, {Qe3->one()}), DomainError);
}

TEST_CASE("power series precision is explicit") {
  auto A = TestRing::make({"e"}, {mono({2})});
  PowerSeries s(A, 4);
  s.set_coeff(2, A->one());
  CHECK_THROWS_AS(s.coeff(4), PrecisionError);
  CHECK_THROWS_AS(s.coeff(17), PrecisionError);

  PowerSeries t8(A, 8);
  t8.set_coeff(1, A->one());
  PowerSeries prod = s * t8;  // min-precision rule
  CHECK(prod.precision() == 4);
  CHECK(prod.coeff(3) == A->one());

  CHECK(s.order() == 2);
  CHECK(PowerSeries(A, 5).order() == std::nullopt);

  // residue_order ignores nilpotent coefficients
  PowerSeries r(A, 6);
  r.set_coeff(0, A->generator(0));
  r.set_coeff(3, A->one());
  CHECK(r.order() == 0);
  CHECK(r.residue_order() == 3);
}

TEST_CASE("series inverse and derivative") {
  auto A = TestRing::make({"e"}, {mono({3})});
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    PowerSeries s = random_series(rng, A, 16, 1);
    s.set_coeff(0, A->constant(rng.nonzero_rational()) +
                       rng.max_ideal_element(A));
    PowerSeries prod = s * s.inverse();
    CHECK(prod.coeff(0) == A->one());
    for (std::size_t k = 1; k < prod.precision(); ++k)
      CHECK(prod.coeff(k).is_zero());
  }
  PowerSeries t(A, 5);
  t.set_coeff(3, A->constant(2));
  PowerSeries d = t.derivative();
  CHECK(d.precision() == 4);
  CHECK(d.coeff(2) == A->constant(6));
}

TEST_CASE("weierstrass division: roundtrip and uniqueness, 100 instances") {
  RingCatalog cat = RingCatalog::standard();
  Rng rng(31337);
  std::size_t T = 24;
  int instances = 0;
  while (instances < 100) {
    for (const auto& entry : cat.entries) {
      const TestRing::Ptr& A = entry.ring;
      std::size_t n = static_cast<std::size_t>(rng.int_in(0, 4));
      PowerSeries F = random_divisor(rng, A, T, n);
      PowerSeries G = random_series(rng, A, T);

      WeierstrassResult d = weierstrass_divide(G, F);
      REQUIRE(d.remainder.size() == n);

      // Roundtrip: G = Q*F + R exactly on the shared precision window.
      PowerSeries back = d.quotient * F;
      for (std::size_t k = 0; k < n; ++k)
        back.set_coeff(k, back.coeff(k) + d.remainder[k]);
      CHECK(back == G.truncated(back.precision()));

      // Uniqueness: a synthesized (Q', R') pair is recovered exactly.
      // Q' is a polynomial supported below the quotient window T - n, so
      // Q'*F carries no unknown-tail contribution at any retained degree.
      PowerSeries Q2 = random_series(rng, A, T);
      for (std::size_t k = T - 4; k < T; ++k) Q2.set_coeff(k, A->zero());
      PowerSeries G2 = Q2 * F;
      std::vector<RingElement> R2;
      for (std::size_t k = 0; k < n; ++k) {
        RingElement rk = rng.element(A);
        G2.set_coeff(k, G2.coeff(k) + rk);
        R2.push_back(rk);
      }
      WeierstrassResult d2 = weierstrass_divide(G2, F);
      CHECK(d2.quotient == Q2.truncated(d2.quotient.precision()));
      for (std::size_t k = 0; k < n; ++k) CHECK(d2.remainder[k] == R2[k]);

      ++instances;
    }
  }

  // Degenerate divisor: 0 mod the maximal ideal.
  auto A = cat.by_name("Q[e]/(e^2)");
  PowerSeries bad(A, 8);
  for (std::size_t k = 0; k < 8; ++k) bad.set_coeff(k, A->generator(0));
  CHECK_THROWS_AS(weierstrass_divide(PowerSeries(A, 8), bad), DomainError);
}

TEST_CASE("distinguished root of an order-1 series") {
  auto A = TestRing::make({"e"}, {mono({3})});
  RingElement e = A->generator(0);
  // F = (t - e) * unit: root must be exactly e.
  // F(t) = (t - e)(1 + t/2) = -e + (1 - e/2) t + t^2/2
  PowerSeries F(A, 16);
  F.set_coeff(0, -e);
  F.set_coeff(1, A->one() - e * Rational(1, 2));
  F.set_coeff(2, A->constant(Rational(1, 2)));
  RingElement a = distinguished_root(F);
  // Verify F(a) = 0 by direct evaluation.
  RingElement val = A->zero();
  RingElement pw = A->one();
  for (std::size_t k = 0; k < 16; ++k) {
    val += F.coeff(k) * pw;
    pw *= a;
  }
  CHECK(val.is_zero());
  CHECK(a == e);

  Rng rng(5);
  RingCatalog cat = RingCatalog::standard();
  for (const auto& entry : cat.entries) {
    for (int trial = 0; trial < 10; ++trial) {
      PowerSeries G = random_divisor(rng, entry.ring, 16, 1);
      RingElement root = distinguished_root(G);
      RingElement v = entry.ring->zero();
      RingElement p = entry.ring->one();
      for (std::size_t k = 0; k < 16; ++k) {
        v += G.coeff(k) * p;
        p *= root;
      }
      CHECK(v.is_zero());
      CHECK(root.in_max_ideal());
    }
  }
}

TEST_CASE("substitute is a ring homomorphism") {
  auto A = TestRing::make({"e"}, {mono({2})});
  Rng rng(99);
  std::vector<std::string> vars{"u", "v"};
  std::size_t T = 12;
  for (int trial = 0; trial < 25; ++trial) {
    QPoly p(vars), q(vars);
    for (int terms = 0; terms < 4; ++terms) {
      p.add_term(mono({static_cast<uint32_t>(rng.int_in(0, 2)),
                       static_cast<uint32_t>(rng.int_in(0, 2))}),
                 rng.rational());
      q.add_term(mono({static_cast<uint32_t>(rng.int_in(0, 2)),
                       static_cast<uint32_t>(rng.int_in(0, 2))}),
                 rng.rational());
    }
    std::vector<PowerSeries> args{random_series(rng, A, T),
                                  random_series(rng, A, T)};
    CHECK(substitute(p * q, args, T) ==
          substitute(p, args, T) * substitute(q, args, T));
    CHECK(substitute(p + q, args, T) ==
          substitute(p, args, T) + substitute(q, args, T));
  }
}
