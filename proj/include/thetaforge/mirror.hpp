// The mirror pipeline: the descendant series g, the mirror-map correction
// read off the bundle I-function, formal inversion of the mirror map, the
// proper Landau-Ginzburg potential, and two-point invariant extraction.
//
// Sign conventions are not taken on faith: the correction series is
// recomputed from the z^0 coefficient of the assembled I-function blocks and
// any mismatch with the closed formula is a hard error.
#pragma once

#include "thetaforge/givental.hpp"

#include <map>

namespace thetaforge {

using RationalSeries = TruncSeries<Rational>;

// g(y) = sum_{D.beta >= 2} <[pt] psi^{D.beta-2}> (D.beta-1)! y^beta.
struct GSeries {
    RationalSeries series;
    std::string geometry;
    std::vector<int64_t> dweights;

    GSeries(RationalSeries s, std::string geom, std::vector<int64_t> dw)
        : series(std::move(s)), geometry(std::move(geom)), dweights(std::move(dw)) {}
};

// `order` bounds D.beta. Requires order >= 2.
GSeries compute_g(const TargetGeometry& X, int64_t order);

// Literal substitution y -> -y: each monomial picks up (-1)^{sum of components}.
RationalSeries g_negated(const GSeries& g);
RationalSeries negate_variables(const RationalSeries& s);

// The mirror-map correction G(y) = sum (-1)^{D.beta-1} (D.beta-1)! <...> y^beta:
// the series whose (h-D)-multiple is the z^0 coefficient of the bundle
// I-function. Verified degree by degree against that extraction; a mismatch
// raises SignConventionError.
RationalSeries mirror_correction(const TargetGeometry& X, int64_t order);

struct MirrorMap {
    std::vector<RationalSeries> forward; // q_i(y), one per Novikov variable
    std::vector<RationalSeries> inverse; // y_i(q)
    std::vector<int64_t> dweights;
};

// The map the theta potential inverts: q_i = y_i exp(d_i g(y)). Inverse by
// fixed-point iteration; the round trip is asserted exact to the truncation
// order before returning.
MirrorMap build_mirror_map(const GSeries& g);

// The I-to-J change of variables q_i = y_i exp(-d_i G(y)) with G the verified
// mirror correction; this is the map the local identity lives in.
MirrorMap build_i_to_j_map(const TargetGeometry& X, const RationalSeries& correction);

struct ThetaPotential {
    RationalSeries series; // in q, constant term 1
    std::string geometry;
    std::vector<int64_t> dweights;
};

// exp(g(y(q))) with y(q) the inverse mirror map.
ThetaPotential theta_potential(const TargetGeometry& X, int64_t order);
ThetaPotential theta_potential(const TargetGeometry& X, const GSeries& g);

struct TwoPointExtraction {
    std::map<CurveClass, Rational> invariants; // beta -> N_{n,1}, n = D.beta-1
    std::vector<CurveClass> skipped;           // entries with D.beta < 2
};

TwoPointExtraction two_point_invariants(const TargetGeometry& X, const ThetaPotential& theta);

} // namespace thetaforge
