// Hypergeometric J/I-function engine: degree-beta toric J-coefficients,
// one-point descendant extraction, and the I-function blocks of the local
// bundle E = O_P(-X_inf) (+) O_P(-X_inf).
#pragma once

#include "thetaforge/geometry.hpp"

#include <map>

namespace thetaforge {

struct PipelineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct OutOfRangeError : PipelineError {
    using PipelineError::PipelineError;
};
// Raised when an exact-arithmetic self-check contradicts the series the
// pipeline was about to use.
struct SignConventionError : PipelineError {
    using PipelineError::PipelineError;
};

// Laurent polynomial in z with ring coefficients: a TruncSeries with no
// Novikov variables.
using LaurentSeries = TruncSeries<RingElement>;

Truncation laurent_window(int32_t zmin, int32_t zmax);
LaurentSeries laurent_unit(const std::shared_ptr<const GradedRing>& R, int32_t zmin, int32_t zmax);
// The linear factor  cls + a z.
LaurentSeries laurent_linear(const RingElement& cls, long a, int32_t zmin, int32_t zmax);
// prod_{a <= 0} (cls + a z) / prod_{a <= m} (cls + a z): inverse factors for
// m > 0, skipped numerator factors for m < 0 (including the a = 0 factor).
LaurentSeries hypergeometric_block(const RingElement& cls, int64_t m, int32_t zmin, int32_t zmax);

// Degree-beta factor of the stripped small J-function (exponential prefactor
// and global z removed): 1 for beta = 0.
struct JCoefficient {
    CurveClass beta;
    std::map<int32_t, RingElement> laurent; // zpow -> coefficient
    RingElement coefficient(int32_t zpow) const;
};

JCoefficient toric_J_coefficient(const TargetGeometry& X, const CurveClass& beta,
                                 int32_t zmin, int32_t zmax);

// <[pt] psi^{D.beta - 2}>_{0,1,beta}: the identity component of z J_{X,beta}
// at z^{-(D.beta-1)}. Requires D.beta >= 2. The extracted slot is checked to
// be a pure multiple of [1], and the exponential prefactor is checked not to
// contaminate it.
Rational one_point_descendant(const TargetGeometry& X, const CurveClass& beta);

// The three factor blocks of the I-function of E at (beta, n).
struct IEFactorization {
    CurveClass beta;
    int32_t n = 0;
    LaurentSeries block_h;         // exponent n, class h
    LaurentSeries block_hD;        // exponent n - D.beta, class h - D
    LaurentSeries block_negh_single; // exponent -n, class -h, single factor
    LaurentSeries block_negh;      // the square of the single factor

    LaurentSeries assembled() const; // product of the three blocks
};

IEFactorization i_function_E(const BundleGeometry& P, const CurveClass& beta, int32_t n,
                             int32_t zmin, int32_t zmax);

// The n = 1 reduction of the I-function extraction: for every effective beta
// with 0 < D.beta <= max_ddeg, the [1]-component (after h -> 0) of the 1/z
// coefficient of  z J_{X,beta} (h+z)^{-1} (-1)^{D.beta-1} prod_{a=0}^{D.beta-2}(D-h+az)
// vanishes, and the beta = 0 term contributes exactly 1.
struct ExtractionReport {
    bool pass = true;
    Rational beta0_value;
    struct Violation {
        CurveClass beta;
        Rational value;
    };
    std::vector<Violation> violations;
};

ExtractionReport reduced_extraction_check(const BundleGeometry& P, int64_t max_ddeg);

} // namespace thetaforge
