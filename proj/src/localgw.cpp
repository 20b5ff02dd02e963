#include "thetaforge/localgw.hpp"
#include "thetaforge/wdvv.hpp"

namespace thetaforge {

LocalTable local_one_point(const BundleGeometry& P, int64_t order) {
    const TargetGeometry& X = P.base;
    if (!X.log_cy)
        throw PipelineError("local one-point identity requires a log Calabi-Yau base");

    RationalSeries G = mirror_correction(X, order);
    MirrorMap map = build_i_to_j_map(X, G);

    // exp(-G) re-expanded in q, and the same composite with exp and
    // substitution swapped; substitution is a ring map, so they must agree.
    RationalSeries route1 = series_substitute(series_exp(-G), map.inverse);
    RationalSeries route2 = series_exp(series_substitute(-G, map.inverse));
    if (!(route1 == route2))
        throw PipelineError("exp/substitute composition order changed the local series");

    LocalTable table;
    table.geometry = X.name;
    table.order = order;
    for (auto& [m, c] : route1.terms()) {
        CurveClass beta(m.beta);
        if (beta.is_zero()) continue; // beta = 0 is not an entry
        table.entries[beta] = c;
    }
    return table;
}

CorrespondenceReport verify_sign_correspondence(const TargetGeometry& X, const LocalTable& local,
                                                const ThetaPotential& theta) {
    CorrespondenceReport rep;
    int64_t order = std::min(local.order, theta.series.truncation().order);
    for (auto& beta : effective_classes(X, order)) {
        Rational tc = theta.series.coefficient(beta.monomial());
        auto it = local.entries.find(beta);
        Rational lv = it == local.entries.end() ? Rational(0) : it->second;
        // n + 1 = D.beta, so (-1)^{n+1} is the parity of D.beta.
        Rational expected = X.ddeg(beta) % 2 == 0 ? lv : -lv;
        if (!(tc == expected)) {
            rep.pass = false;
            rep.mismatches.push_back({beta, tc, expected});
        }
    }
    return rep;
}

SymmetryRouteReport verify_wdvv_symmetry_route(const TargetGeometry& X,
                                               const ThetaPotential& theta,
                                               const TwoPointTable& table) {
    SymmetryRouteReport rep;
    for (auto& [m, c] : theta.series.terms()) {
        CurveClass beta(m.beta);
        if (beta.is_zero()) continue;
        int64_t n = X.ddeg(beta) - 1;
        if (n < 1) continue;
        Rational n1n = table.get(beta, 1, n);
        Rational expected = table.get(beta, n, 1) * Rational(n) * Rational(n);
        if (!(n1n == expected)) {
            rep.pass = false;
            rep.mismatches.push_back({beta, n1n, expected});
        }
    }
    return rep;
}

} // namespace thetaforge
