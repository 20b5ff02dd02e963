#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "thetaforge/geometry.hpp"
#include "thetaforge/givental.hpp"

using namespace thetaforge;

namespace {

std::shared_ptr<const GradedRing> p2_ring() { return builtin_p2().ring; }

} // namespace

TEST_CASE("cup products in H*(P2)") {
    auto R = p2_ring();
    RingElement p = R->basis_element(1), pp = R->basis_element(2);
    CHECK(ring_mul(p, p) == pp);
    CHECK(ring_mul(pp, p).is_zero()); // degree overflow
    CHECK(ring_mul(R->unit_element(), pp) == pp);
}

TEST_CASE("integration and identity component") {
    auto R = p2_ring();
    RingElement p = R->basis_element(1), pp = R->basis_element(2);
    CHECK(integrate(pp) == Rational(1));
    CHECK(integrate(p) == Rational(0));
    CHECK(identity_component(R->unit_element() + p * Rational(3)) == Rational(1));
    CHECK(identity_component(pp) == Rational(0));
    CHECK(identity_component(R->unit_element() * Rational(5)) == Rational(5));
}

TEST_CASE("dual basis from the Poincare pairing") {
    auto R = p2_ring();
    // On P2 the dual of 1 is p^2, of p is p, of p^2 is 1.
    CHECK(R->dual_basis_element(0) == R->basis_element(2));
    CHECK(R->dual_basis_element(1) == R->basis_element(1));
    CHECK(R->dual_basis_element(2) == R->basis_element(0));
}

TEST_CASE("bundle ring relation h^2 = D h over P2") {
    TargetGeometry X = builtin_p2();
    BundleRing B = BundleRing::build(X.ring, X.D);
    CHECK(B.total()->dim() == 6);
    RingElement h = B.h();
    RingElement hp = B.lift_times_h(X.ring->basis_element(1));
    CHECK(h * h == hp * Rational(3));
    CHECK(integrate(h * B.lift(X.ring->basis_element(2))) == Rational(1));
}

TEST_CASE("collapse_h is a ring homomorphism onto the base") {
    for (auto X : {builtin_p2(), builtin_p1xp1()}) {
        BundleRing B = BundleRing::build(X.ring, X.D);
        RingElement h = B.h();
        CHECK(B.collapse_h(h).is_zero());
        CHECK(B.collapse_h(B.lift(X.ring->unit_element()) +
                           B.lift_times_h(X.ring->basis_element(1))) ==
              X.ring->unit_element());
        CHECK(B.collapse_h((B.lift(X.D) - h) * h).is_zero()); // every term carries h

        for (size_t i = 0; i < B.total()->dim(); ++i)
            for (size_t j = 0; j < B.total()->dim(); ++j) {
                RingElement a = B.total()->basis_element(i);
                RingElement b = B.total()->basis_element(j);
                CHECK(B.collapse_h(a * b) == B.collapse_h(a) * B.collapse_h(b));
            }
    }
}

TEST_CASE("bundle ring collapse recovers the base structure constants") {
    TargetGeometry X = builtin_p1xp1();
    BundleRing B = BundleRing::build(X.ring, X.D);
    for (size_t i = 0; i < X.ring->dim(); ++i)
        for (size_t j = 0; j < X.ring->dim(); ++j) {
            RingElement lifted = B.lift(X.ring->basis_element(i)) * B.lift(X.ring->basis_element(j));
            RingElement direct = X.ring->basis_element(i) * X.ring->basis_element(j);
            CHECK(B.collapse_h(lifted) == direct);
        }
}

TEST_CASE("scalar plus nilpotent inverts; pure nilpotents do not") {
    auto R = p2_ring();
    RingElement p = R->basis_element(1), one = R->unit_element();
    RingElement inv = (one + p).inverse();
    CHECK(inv == one - p + R->basis_element(2));
    CHECK(((one * Rational(2) + p * Rational(3)) *
           (one * Rational(2) + p * Rational(3)).inverse()) == one);
    CHECK_THROWS_AS(p.inverse(), RingError);
    CHECK_THROWS_AS(R->zero_element().inverse(), RingError);
}

TEST_CASE("elements of different rings do not mix") {
    auto R1 = builtin_p2().ring;
    auto R2 = builtin_p1xp1().ring;
    CHECK_THROWS_AS(R1->unit_element() + R2->unit_element(), RingError);
    CHECK_THROWS_AS(R1->unit_element() * R2->unit_element(), RingError);
}

TEST_CASE("ring axioms are enforced at load") {
    using BE = GradedRing::BasisElement;

    // Non-associative: x x = y, x y = 1 on a 3-dim space.
    {
        GradedRing::ProductTable prod;
        prod[{1, 1}] = {{2, Rational(1)}};
        prod[{1, 2}] = {{0, Rational(1)}};
        prod[{2, 2}] = {};
        CHECK_THROWS_AS(
            GradedRing::make("bad", {BE{"1", 0}, BE{"x", 1}, BE{"y", 2}}, prod, 0, 2),
            RingError);
    }
    // Grading violation: product of degree-1 elements lands in degree 1.
    {
        GradedRing::ProductTable prod;
        prod[{1, 1}] = {{1, Rational(1)}};
        CHECK_THROWS_AS(
            GradedRing::make("bad", {BE{"1", 0}, BE{"x", 1}, BE{"y", 2}}, prod, 0, 2),
            RingError);
    }
    // Contradictory symmetric entries (commutativity failure).
    {
        GradedRing::ProductTable prod;
        prod[{1, 2}] = {{0, Rational(1)}};
        prod[{2, 1}] = {{0, Rational(2)}};
        CHECK_THROWS_AS(
            GradedRing::make("bad", {BE{"1", 0}, BE{"x", 1}, BE{"y", 1}}, prod, 0, 1),
            RingError);
    }
    // Singular Poincare pairing.
    {
        GradedRing::ProductTable prod;
        prod[{1, 1}] = {};
        prod[{1, 2}] = {};
        prod[{2, 2}] = {};
        CHECK_THROWS_AS(
            GradedRing::make("bad", {BE{"1", 0}, BE{"x", 1}, BE{"pt", 2}}, prod, 0, 2),
            RingError);
    }
    // Unit must have degree 0, point must be top degree.
    {
        GradedRing::ProductTable prod;
        CHECK_THROWS_AS(GradedRing::make("bad", {BE{"1", 1}}, prod, 0, 0), RingError);
    }
}

TEST_CASE("exact linear solver") {
    std::vector<std::vector<Rational>> A = {{Rational(2), Rational(1)},
                                            {Rational(1), Rational(3)}};
    std::vector<Rational> x;
    CHECK(solve_rational_system(A, {Rational(5), Rational(10)}, x));
    CHECK(x[0] == Rational(1));
    CHECK(x[1] == Rational(3));

    std::vector<std::vector<Rational>> S = {{Rational(1), Rational(2)},
                                            {Rational(2), Rational(4)}};
    CHECK_FALSE(solve_rational_system(S, {Rational(1), Rational(1)}, x));
}

TEST_CASE("Laurent inversion of z + h matches the geometric expansion") {
    TargetGeometry X = builtin_p2();
    BundleRing B = BundleRing::build(X.ring, X.D);
    RingElement h = B.h();
    const int32_t zmin = -6, zmax = 2;

    LaurentSeries zh = laurent_linear(h, 1, zmin, zmax);
    LaurentSeries inv = series_inverse(zh);
    // 1/(h+z) = z^{-1} (1 - h/z + h^2/z^2 - ...), exact once h nilpotent.
    CHECK(inv.z_slice(-1).constant_term() == B.total()->unit_element());
    CHECK(inv.z_slice(-2).constant_term() == -h);
    CHECK(inv.z_slice(-3).constant_term() == h * h);
    CHECK(inv.z_slice(-4).constant_term() == -(h * h * h));
    CHECK(inv * zh == laurent_unit(B.total(), zmin, zmax));

    // Window too small for the nilpotent tail: hard error.
    CHECK_THROWS_AS(series_inverse(laurent_linear(h, 1, -2, 2)), SeriesError);
}
