#include "thetaforge/mirror.hpp"

namespace thetaforge {

namespace {

Rational descendant_times_factorial(const TargetGeometry& X, const CurveClass& beta) {
    Rational d = one_point_descendant(X, beta);
    return d * Rational::factorial(static_cast<unsigned>(X.ddeg(beta) - 1));
}

} // namespace

GSeries compute_g(const TargetGeometry& X, int64_t order) {
    if (order < 2) throw PipelineError("order too small: the g series starts at D.beta = 2");
    Truncation t = ddeg_truncation(X, order);
    RationalSeries s = RationalSeries::zero(t, Rational(1));
    for (auto& beta : effective_classes(X, order)) {
        if (X.ddeg(beta) < 2) continue;
        Rational c = descendant_times_factorial(X, beta);
        s.add_term(beta.monomial(), c);
    }
    return GSeries(std::move(s), X.name, X.dweights);
}

RationalSeries negate_variables(const RationalSeries& s) {
    RationalSeries out = RationalSeries::zero(s.truncation(), s.one_coeff());
    for (auto& [m, c] : s.terms()) {
        int64_t comp_sum = 0;
        for (int32_t e : m.beta) comp_sum += e;
        out.add_term(m, comp_sum % 2 == 0 ? c : -c);
    }
    return out;
}

RationalSeries g_negated(const GSeries& g) { return negate_variables(g.series); }

RationalSeries mirror_correction(const TargetGeometry& X, int64_t order) {
    if (order < 2) throw PipelineError("order too small: the g series starts at D.beta = 2");
    BundleGeometry P = build_p1_bundle(X);
    auto total = P.bundle.total();
    RingElement hD = P.bundle.h() - P.bundle.lift(X.D);

    const int32_t zmax = static_cast<int32_t>(order + 2);
    const int32_t zmin = static_cast<int32_t>(-(order + 2 * total->top_degree() + 6));
    LaurentSeries zfac = laurent_linear(total->zero_element(), 1, zmin, zmax);

    Truncation t = ddeg_truncation(X, order);
    RationalSeries G = RationalSeries::zero(t, Rational(1));

    for (auto& beta : effective_classes(X, order)) {
        const int64_t ddeg = X.ddeg(beta);

        // Closed form, display signs.
        Rational closed(0);
        if (ddeg >= 2) {
            closed = descendant_times_factorial(X, beta);
            if (ddeg % 2 == 0) closed = -closed; // (-1)^{D.beta-1}
        }

        // Independent route: z^0 coefficient of the n = 0 term of the bundle
        // I-function, which must be exactly closed * (h - D).
        JCoefficient J = toric_J_coefficient(X, beta, zmin, zmax);
        LaurentSeries L = LaurentSeries::zero(laurent_window(zmin, zmax), total->unit_element());
        for (auto& [zp, c] : J.laurent) L.add_term(Monomial({}, 0, zp), P.bundle.lift(c));
        IEFactorization F = i_function_E(P, beta, 0, zmin, zmax);
        LaurentSeries A = zfac * L * F.block_hD; // h and (-h) blocks are 1 at n = 0
        for (auto& [m, c] : A.terms())
            if (m.zpow > 0)
                throw SignConventionError("I-function term at " + beta.str() +
                                          " has a positive z power");
        RingElement extracted = A.z_slice(0).constant_term();
        if (!(extracted - hD * closed).is_zero())
            throw SignConventionError(
                "mirror-map correction at " + beta.str() +
                " disagrees with the I-function z^0 coefficient: closed form " + closed.str());

        if (!closed.is_zero()) G.add_term(beta.monomial(), closed);
    }
    return G;
}

namespace {

MirrorMap build_map_with_exponent(const std::vector<int64_t>& dweights,
                                  const RationalSeries& exponent) {
    const Truncation& t = exponent.truncation();
    const size_t rank = t.arity();
    if (dweights.size() != rank) throw PipelineError("mirror map rank mismatch");
    if (!exponent.has_zero_constant_term())
        throw PipelineError("mirror-map exponent must vanish at the origin");

    MirrorMap mm;
    mm.dweights = dweights;

    for (size_t i = 0; i < rank; ++i) {
        RationalSeries e_i = series_exp(exponent.scalar_mul(Rational(dweights[i])));
        mm.forward.push_back(RationalSeries::variable(t, Rational(1), i) * e_i);
    }

    // Fixed point: y_i <- q_i exp(-d_i g(y)), starting from y = q. Each pass
    // settles one more order; `order` passes plus a stability check suffice.
    std::vector<RationalSeries> y;
    for (size_t i = 0; i < rank; ++i) y.push_back(RationalSeries::variable(t, Rational(1), i));
    bool stable = false;
    for (int64_t pass = 0; pass <= t.order && !stable; ++pass) {
        RationalSeries sub = series_substitute(exponent, y);
        std::vector<RationalSeries> next;
        for (size_t i = 0; i < rank; ++i) {
            RationalSeries e_i = series_exp(sub.scalar_mul(Rational(-dweights[i])));
            next.push_back(RationalSeries::variable(t, Rational(1), i) * e_i);
        }
        stable = (next == y);
        y = std::move(next);
    }
    if (!stable) throw PipelineError("mirror-map inversion did not stabilize");
    mm.inverse = std::move(y);

    // Round trip must be exact to the truncation order.
    for (size_t i = 0; i < rank; ++i) {
        RationalSeries qi = RationalSeries::variable(t, Rational(1), i);
        if (!(series_substitute(mm.forward[i], mm.inverse) == qi) ||
            !(series_substitute(mm.inverse[i], mm.forward) == qi))
            throw PipelineError("mirror-map round trip failed");
    }
    return mm;
}

} // namespace

MirrorMap build_mirror_map(const GSeries& g) {
    return build_map_with_exponent(g.dweights, g.series);
}

MirrorMap build_i_to_j_map(const TargetGeometry& X, const RationalSeries& correction) {
    return build_map_with_exponent(X.dweights, -correction);
}

ThetaPotential theta_potential(const TargetGeometry& X, const GSeries& g) {
    MirrorMap mm = build_mirror_map(g);
    RationalSeries composed = series_substitute(g.series, mm.inverse);
    ThetaPotential theta{series_exp(composed), X.name, X.dweights};
    if (!(theta.series.constant_term() == Rational(1)))
        throw PipelineError("theta potential lost its constant term");
    return theta;
}

ThetaPotential theta_potential(const TargetGeometry& X, int64_t order) {
    return theta_potential(X, compute_g(X, order));
}

TwoPointExtraction two_point_invariants(const TargetGeometry& X, const ThetaPotential& theta) {
    TwoPointExtraction out;
    for (auto& beta : effective_classes(X, theta.series.truncation().order)) {
        int64_t n = X.ddeg(beta) - 1;
        if (n < 1) {
            if (!theta.series.coefficient(beta.monomial()).is_zero())
                out.skipped.push_back(beta);
            continue;
        }
        out.invariants[beta] = theta.series.coefficient(beta.monomial()) / Rational(n);
    }
    return out;
}

} // namespace thetaforge
