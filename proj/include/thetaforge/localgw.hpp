// One-point local invariants of E = O_P(-X_inf) (+) O_P(-X_inf) at classes
// beta + f, produced through the identity
//   1 + sum_beta q^beta <[pt]>_{beta+f} = exp(-G(y))|_{y = y(q)}
// with G the verified mirror correction and y(q) the I-to-J change of
// variables, plus the sign matching against the theta route.
#pragma once

#include "thetaforge/mirror.hpp"

namespace thetaforge {

struct LocalTable {
    std::map<CurveClass, Rational> entries; // beta -> <[pt]>_{beta+f}, beta != 0
    std::string geometry;
    int64_t order = 0; // D.beta bound
};

LocalTable local_one_point(const BundleGeometry& P, int64_t order);

struct CorrespondenceReport {
    bool pass = true;
    struct Mismatch {
        CurveClass beta;
        Rational theta_coeff;
        Rational expected; // (-1)^{n+1} local(beta)
    };
    std::vector<Mismatch> mismatches;
};

// theta coefficient at q^beta must equal (-1)^{n+1} <[pt]>_{beta+f} with
// n = D.beta - 1.
CorrespondenceReport verify_sign_correspondence(const TargetGeometry& X, const LocalTable& local,
                                                const ThetaPotential& theta);

struct SymmetryRouteReport {
    bool pass = true;
    struct Mismatch {
        CurveClass beta;
        Rational n1n;      // N_{1,n}
        Rational expected; // n^2 N_{n,1}
    };
    std::vector<Mismatch> mismatches;
};

// Forward declaration; the table type lives in wdvv.hpp.
struct TwoPointTable;

SymmetryRouteReport verify_wdvv_symmetry_route(const TargetGeometry& X,
                                               const ThetaPotential& theta,
                                               const TwoPointTable& table);

} // namespace thetaforge
