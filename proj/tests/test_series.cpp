#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "thetaforge/series.hpp"

#include <random>

using namespace thetaforge;

namespace {

Truncation univ(int64_t order) { return novikov_truncation({1}, order); }

using RS = TruncSeries<Rational>;

RS constant(const Truncation& t, long v) {
    RS s = RS::zero(t, Rational(1));
    s.add_term(Monomial({0}), Rational(v));
    return s;
}

RS y_power(const Truncation& t, int32_t e, Rational c) {
    RS s = RS::zero(t, Rational(1));
    s.add_term(Monomial({e}), c);
    return s;
}

Rational coeff(const RS& s, int32_t e) { return s.coefficient(Monomial({e})); }

// Random series with zero constant term, bounded support.
RS random_nilpotent(std::mt19937& rng, const Truncation& t) {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 9);
    RS s = RS::zero(t, Rational(1));
    for (int32_t e = 1; e <= t.order; ++e)
        s.add_term(Monomial({e}), Rational(num(rng), den(rng)));
    return s;
}

} // namespace

TEST_CASE("series_add basics") {
    Truncation t = univ(4);
    RS one = RS::unit(t, Rational(1));
    RS y = RS::variable(t, Rational(1), 0);

    CHECK(series_add(one + y, one - y) == constant(t, 2));
    RS s = one + y_power(t, 2, Rational(7));
    CHECK(series_add(RS::zero(t, Rational(1)), s) == s);
}

TEST_CASE("series_add truncates to the minimum order") {
    RS a = y_power(univ(3), 1, Rational(2));
    RS b = y_power(univ(2), 3, Rational(5));
    RS sum = a + b;
    CHECK(sum.truncation().order == 2);
    CHECK(coeff(sum, 1) == Rational(2));
    CHECK(coeff(sum, 3) == Rational(0)); // dropped by truncation
    CHECK(sum.size() == 1);
}

TEST_CASE("series_mul basics") {
    Truncation t = univ(4);
    RS one = RS::unit(t, Rational(1));
    RS y = RS::variable(t, Rational(1), 0);

    CHECK((one + y) * (one - y) == one - y_power(t, 2, Rational(1)));
    RS arbitrary = one + y_power(t, 1, Rational(5)) + y_power(t, 3, Rational(-2, 7));
    CHECK(arbitrary * one == arbitrary);
}

TEST_CASE("series_mul hand expansion at order 2") {
    Truncation t = univ(2);
    RS one = RS::unit(t, Rational(1));
    RS a = one + y_power(t, 1, Rational(2));
    RS b = one + y_power(t, 1, Rational(2)) + y_power(t, 2, Rational(2));
    RS p = a * b;
    CHECK(coeff(p, 0) == Rational(1));
    CHECK(coeff(p, 1) == Rational(4));
    CHECK(coeff(p, 2) == Rational(6));
}

TEST_CASE("series_exp basics and errors") {
    Truncation t = univ(2);
    CHECK(series_exp(RS::zero(t, Rational(1))) == RS::unit(t, Rational(1)));

    RS e = series_exp(y_power(t, 1, Rational(2)));
    CHECK(coeff(e, 0) == Rational(1));
    CHECK(coeff(e, 1) == Rational(2));
    CHECK(coeff(e, 2) == Rational(2));

    CHECK_THROWS_AS(series_exp(RS::unit(t, Rational(1))), SeriesError);
}

TEST_CASE("series_log basics and errors") {
    Truncation t = univ(3);
    RS one = RS::unit(t, Rational(1));
    CHECK(series_log(one) == RS::zero(t, Rational(1)));

    RS l = series_log(one + y_power(t, 1, Rational(1)));
    CHECK(coeff(l, 1) == Rational(1));
    CHECK(coeff(l, 2) == Rational(-1, 2));
    CHECK(coeff(l, 3) == Rational(1, 3));

    CHECK(series_log(series_exp(y_power(t, 1, Rational(3)))) == y_power(t, 1, Rational(3)));
    CHECK(series_exp(series_log(one + y_power(t, 1, Rational(1)))) ==
          one + y_power(t, 1, Rational(1)));

    CHECK_THROWS_AS(series_log(RS::zero(t, Rational(1))), SeriesError);
    CHECK_THROWS_AS(series_log(constant(t, 2)), SeriesError);
}

TEST_CASE("series_inverse basics") {
    Truncation t = univ(3);
    RS one = RS::unit(t, Rational(1));
    CHECK(series_inverse(one) == one);

    RS inv = series_inverse(one - y_power(t, 1, Rational(1)));
    for (int32_t e = 0; e <= 3; ++e) CHECK(coeff(inv, e) == Rational(1));

    CHECK_THROWS_AS(series_inverse(RS::zero(t, Rational(1))), SeriesError);
    CHECK_THROWS_AS(series_inverse(y_power(t, 1, Rational(1))), SeriesError);
}

TEST_CASE("series_substitute renaming, composition, zero") {
    Truncation t = univ(3);
    RS one = RS::unit(t, Rational(1));
    RS y = RS::variable(t, Rational(1), 0);
    RS s = one + y_power(t, 1, Rational(3)) + y_power(t, 3, Rational(-1, 2));

    // Renaming: substituting the identity series returns the input.
    CHECK(series_substitute(s, {y}) == s);

    // y -> q - 6q^2 into 2y at order 2.
    Truncation t2 = univ(2);
    RS q = RS::variable(t2, Rational(1), 0);
    RS assignment = q - y_power(t2, 2, Rational(6));
    RS in = y_power(t2, 1, Rational(2));
    RS outp = series_substitute(in, {assignment});
    CHECK(coeff(outp, 1) == Rational(2));
    CHECK(coeff(outp, 2) == Rational(-12));

    // y -> 0 keeps the constant term.
    RS zero_assign = RS::zero(t, Rational(1));
    CHECK(series_substitute(s, {zero_assign}) == one);
}

TEST_CASE("series_substitute rejects order-lowering assignments") {
    Truncation t = univ(3);
    RS s = y_power(t, 1, Rational(1));
    RS bad = RS::unit(t, Rational(1)); // constant term: grading 0 < weight 1
    CHECK_THROWS_AS(series_substitute(s, {bad}), SeriesError);
}

TEST_CASE("incompatible operands are rejected") {
    RS a = RS::unit(univ(3), Rational(1));
    RS b = RS::unit(novikov_truncation({1, 1}, 3), Rational(1));
    CHECK_THROWS_AS(a + b, SeriesError);
    CHECK_THROWS_AS(a * b, SeriesError);
    RS c = RS::unit(novikov_truncation({2}, 3), Rational(1));
    CHECK_THROWS_AS(a + c, SeriesError); // same arity, different grading
}

TEST_CASE("z window floor is a hard error, not a truncation") {
    Truncation t = novikov_truncation({}, 0, 0, -2, 2);
    RS zinv = RS::zero(t, Rational(1));
    zinv.add_term(Monomial({}, 0, -2), Rational(1));
    CHECK_THROWS_AS(zinv * zinv, SeriesError); // z^-4 below the floor
    RS s = RS::zero(t, Rational(1));
    CHECK_THROWS_AS(s.add_term(Monomial({}, 0, -3), Rational(1)), SeriesError);
}

TEST_CASE("aux0 obeys its own bound") {
    Truncation t = novikov_truncation({1}, 4, 2);
    RS s = RS::zero(t, Rational(1));
    s.add_term(Monomial({0}, 1, 0), Rational(1)); // y0
    RS sq = s * s;                                // y0^2: still admissible
    CHECK(sq.coefficient(Monomial({0}, 2, 0)) == Rational(1));
    RS cube = sq * s; // y0^3 exceeds aux0_max: truncated away
    CHECK(cube.is_zero());
}

TEST_CASE("exp/log round trips on randomized unit series") {
    std::mt19937 rng(20240817);
    Truncation t = univ(6);
    RS one = RS::unit(t, Rational(1));
    for (int trial = 0; trial < 100; ++trial) {
        RS n = random_nilpotent(rng, t);
        CHECK(series_log(series_exp(n)) == n);
        RS u = one + n;
        CHECK(series_exp(series_log(u)) == u);
    }
}

TEST_CASE("multiplication is commutative and associative at equal bounds") {
    std::mt19937 rng(7);
    Truncation t = novikov_truncation({1, 2}, 5);
    std::uniform_int_distribution<int> num(-5, 5), den(1, 6), e1(0, 3), e2(0, 2);
    auto random_series = [&]() {
        RS s = RS::zero(t, Rational(1));
        for (int k = 0; k < 6; ++k)
            s.add_term(Monomial({(int32_t)e1(rng), (int32_t)e2(rng)}),
                       Rational(num(rng), den(rng)));
        return s;
    };
    for (int trial = 0; trial < 50; ++trial) {
        RS a = random_series(), b = random_series(), c = random_series();
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
    }
}

TEST_CASE("inverse times original is one on random unit series") {
    std::mt19937 rng(99);
    Truncation t = univ(6);
    RS one = RS::unit(t, Rational(1));
    for (int trial = 0; trial < 50; ++trial) {
        RS u = one + random_nilpotent(rng, t);
        CHECK(series_inverse(u) * u == one);
    }
}

TEST_CASE("truncation soundness: compute loose then restrict equals compute tight") {
    std::mt19937 rng(4242);
    Truncation loose = univ(8), tight = univ(4);
    RS one_l = RS::unit(loose, Rational(1));
    for (int trial = 0; trial < 30; ++trial) {
        RS a = random_nilpotent(rng, loose);
        RS b = random_nilpotent(rng, loose);
        RS ar = a.restricted(tight), br = b.restricted(tight);

        CHECK((a + b).restricted(tight) == ar + br);
        CHECK((a * b).restricted(tight) == ar * br);
        CHECK(series_exp(a).restricted(tight) == series_exp(ar));
        CHECK(series_log(one_l + a).restricted(tight) ==
              series_log(RS::unit(tight, Rational(1)) + ar));
        CHECK(series_inverse(one_l + a).restricted(tight) ==
              series_inverse(RS::unit(tight, Rational(1)) + ar));

        RS target = RS::variable(loose, Rational(1), 0) * (one_l + a);
        CHECK(series_substitute(b, {target}).restricted(tight) ==
              series_substitute(br, {target.restricted(tight)}));
    }
}

TEST_CASE("rational parsing and serialization round trip") {
    CHECK(Rational::parse("2/1") == Rational(2));
    CHECK(Rational::parse("-560/3") == Rational(-560, 3));
    CHECK(Rational::parse("7") == Rational(7));
    CHECK(Rational(6, -4) == Rational(-3, 2)); // canonical form
    CHECK(Rational(-3, 2).str() == "-3/2");
    CHECK(Rational(4, 2).pretty() == "2");
    CHECK_THROWS_AS(Rational::parse("1/0"), std::domain_error);
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
    CHECK_THROWS_AS(Rational::parse("abc"), std::domain_error);
    CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
}
