#include "thetaforge/givental.hpp"

namespace thetaforge {

Truncation laurent_window(int32_t zmin, int32_t zmax) {
    return novikov_truncation({}, 0, 0, zmin, zmax);
}

LaurentSeries laurent_unit(const std::shared_ptr<const GradedRing>& R, int32_t zmin, int32_t zmax) {
    return LaurentSeries::unit(laurent_window(zmin, zmax), R->unit_element());
}

LaurentSeries laurent_linear(const RingElement& cls, long a, int32_t zmin, int32_t zmax) {
    LaurentSeries s = LaurentSeries::zero(laurent_window(zmin, zmax), cls.ring()->unit_element());
    s.add_term(Monomial({}, 0, 0), cls);
    s.add_term(Monomial({}, 0, 1), cls.ring()->unit_element() * Rational(a));
    return s;
}

LaurentSeries hypergeometric_block(const RingElement& cls, int64_t m, int32_t zmin, int32_t zmax) {
    LaurentSeries out = laurent_unit(cls.ring(), zmin, zmax);
    if (m > 0) {
        for (int64_t a = 1; a <= m; ++a)
            out = out * series_inverse(laurent_linear(cls, a, zmin, zmax));
    } else if (m < 0) {
        for (int64_t a = m + 1; a <= 0; ++a)
            out = out * laurent_linear(cls, a, zmin, zmax);
    }
    return out;
}

RingElement JCoefficient::coefficient(int32_t zpow) const {
    auto it = laurent.find(zpow);
    if (it != laurent.end()) return it->second;
    if (laurent.empty()) throw PipelineError("empty J coefficient");
    return laurent.begin()->second.ring()->zero_element();
}

JCoefficient toric_J_coefficient(const TargetGeometry& X, const CurveClass& beta,
                                 int32_t zmin, int32_t zmax) {
    if (beta.components.size() != X.rank())
        throw PipelineError("curve class rank mismatch");
    if (!beta.is_effective())
        throw PipelineError("beta not effective");

    LaurentSeries H = laurent_unit(X.ring, zmin, zmax);
    for (size_t i = 0; i < X.divisor_count(); ++i)
        H = H * hypergeometric_block(X.toricdivisors[i], X.divisor_deg(i, beta), zmin, zmax);

    JCoefficient J;
    J.beta = beta;
    for (auto& [m, c] : H.terms()) {
        if (m.zpow > 0)
            throw PipelineError("J coefficient with positive z power at " + beta.str());
        J.laurent[m.zpow] = c;
    }
    return J;
}

Rational one_point_descendant(const TargetGeometry& X, const CurveClass& beta) {
    if (!beta.is_effective() || beta.is_zero())
        throw PipelineError("descendant needs a nonzero effective class");
    const int64_t ddeg = X.ddeg(beta);
    if (ddeg < 2)
        throw OutOfRangeError("out of range: descendant undefined for D.beta = " +
                              std::to_string(ddeg));

    int64_t sum_deg = 0;
    for (size_t i = 0; i < X.divisor_count(); ++i) sum_deg += X.divisor_deg(i, beta);
    int32_t zmin = static_cast<int32_t>(-(sum_deg + X.ring->top_degree() + 2));
    JCoefficient J = toric_J_coefficient(X, beta, zmin, 1);

    // z J_beta at z^{-(D.beta-1)}  ==  J_beta at z^{-D.beta}.
    RingElement slot = J.coefficient(static_cast<int32_t>(-ddeg));
    Rational value = slot.identity_component();
    if (!(slot - X.ring->unit_element() * value).is_zero())
        throw PipelineError("descendant slot at " + beta.str() +
                            " is not a pure multiple of the identity");

    // The exponential prefactor only adds terms of the form (nef)^k z^{-k}
    // against higher slices; their identity parts must vanish.
    for (int32_t k = 1; k <= 2; ++k) {
        RingElement slice = J.coefficient(static_cast<int32_t>(-ddeg + k));
        if (slice.is_zero()) continue;
        for (size_t i = 0; i < X.nefbasis.size(); ++i) {
            if (k == 1) {
                if (!(X.nefbasis[i] * slice).identity_component().is_zero())
                    throw PipelineError("prefactor contaminates the identity slot at " + beta.str());
            } else {
                for (size_t j = 0; j < X.nefbasis.size(); ++j)
                    if (!(X.nefbasis[i] * X.nefbasis[j] * slice).identity_component().is_zero())
                        throw PipelineError("prefactor contaminates the identity slot at " +
                                            beta.str());
            }
        }
    }
    return value;
}

LaurentSeries IEFactorization::assembled() const { return block_h * block_hD * block_negh; }

IEFactorization i_function_E(const BundleGeometry& P, const CurveClass& beta, int32_t n,
                             int32_t zmin, int32_t zmax) {
    if (!beta.is_effective())
        throw PipelineError("beta not effective");
    if (n < 0)
        throw PipelineError("fiber exponent must be non-negative");
    const int64_t ddeg = P.base.ddeg(beta);

    RingElement h = P.bundle.h();
    RingElement hD = h - P.bundle.lift(P.base.D);

    LaurentSeries single = hypergeometric_block(-h, -n, zmin, zmax);
    return IEFactorization{beta, n, hypergeometric_block(h, n, zmin, zmax),
                           hypergeometric_block(hD, n - ddeg, zmin, zmax), single,
                           single * single};
}

ExtractionReport reduced_extraction_check(const BundleGeometry& P, int64_t max_ddeg) {
    if (!P.base.log_cy)
        throw PipelineError("reduced extraction check requires a log Calabi-Yau base");
    const auto& X = P.base;
    auto total = P.bundle.total();

    const int32_t zmax = static_cast<int32_t>(max_ddeg + 2);
    const int32_t zmin = static_cast<int32_t>(-(max_ddeg + 2 * total->top_degree() + 6));
    LaurentSeries zfac = laurent_linear(total->zero_element(), 1, zmin, zmax);

    ExtractionReport rep;

    // beta = 0, n = 1:  z (h+z)^{-1} (h-D+z)^{-1}, with the h^2 block stripped.
    {
        IEFactorization F = i_function_E(P, X.zero_class(), 1, zmin, zmax);
        LaurentSeries A = zfac * F.block_h * F.block_hD;
        RingElement c = A.z_slice(-1).constant_term();
        rep.beta0_value = P.bundle.collapse_h(c).identity_component();
        if (!(rep.beta0_value == Rational(1))) rep.pass = false;
    }

    for (auto& beta : effective_classes(X, max_ddeg)) {
        JCoefficient J = toric_J_coefficient(X, beta, zmin, zmax);
        LaurentSeries L = LaurentSeries::zero(laurent_window(zmin, zmax), total->unit_element());
        for (auto& [zp, c] : J.laurent)
            L.add_term(Monomial({}, 0, zp), P.bundle.lift(c));

        IEFactorization F = i_function_E(P, beta, 1, zmin, zmax);
        LaurentSeries A = zfac * L * F.block_h * F.block_hD;
        RingElement c = A.z_slice(-1).constant_term();
        Rational v = P.bundle.collapse_h(c).identity_component();
        if (!v.is_zero()) {
            rep.pass = false;
            rep.violations.push_back({beta, v});
        }
    }
    return rep;
}

} // namespace thetaforge
