#include "thetaforge/wdvv.hpp"

namespace thetaforge {

namespace {

// Ordered decompositions beta = beta1 + beta2 with both parts nonzero
// effective; boundary decompositions with a zero part are excluded.
std::vector<std::pair<CurveClass, CurveClass>> decompositions(const CurveClass& beta) {
    std::vector<std::pair<CurveClass, CurveClass>> out;
    const size_t r = beta.components.size();
    std::vector<int32_t> cur(r, 0);
    auto rec = [&](auto&& self, size_t j) -> void {
        if (j == r) {
            CurveClass b1{cur};
            CurveClass b2 = beta - b1;
            if (!b1.is_zero() && !b2.is_zero()) out.emplace_back(b1, b2);
            return;
        }
        for (int32_t v = 0; v <= beta.components[j]; ++v) {
            cur[j] = v;
            self(self, j + 1);
        }
        cur[j] = 0;
    };
    rec(rec, 0);
    return out;
}

// One quadratic sum of the recursion: sum over weighted products
// N_{a,1}^{beta1} N_{b,p}^{beta2}. In strict mode only decompositions where
// both factors sit on the dimension shell D.beta' = k' + p' + 1 contribute.
Rational quadratic_sum_ab(const TargetGeometry& X, const TwoPointTable& T,
                          const CurveClass& beta, int64_t k, int64_t p, WdvvMode mode) {
    Rational total(0);
    if (k < 2) return total; // needs a,b > 0 with a + b = k
    for (auto& [b1, b2] : decompositions(beta)) {
        for (int64_t a = 1; a <= k - 1; ++a) {
            int64_t b = k - a;
            if (mode == WdvvMode::Strict &&
                (X.ddeg(b1) != a + 2 || X.ddeg(b2) != b + p + 1))
                continue;
            Rational f = T.get(b1, a, 1) * T.get(b2, b, p);
            if (f.is_zero()) continue;
            total += Rational(a) * Rational(b) * f;
        }
    }
    return total;
}

Rational quadratic_sum_r(const TargetGeometry& X, const TwoPointTable& T,
                         const CurveClass& beta, int64_t k, int64_t p, WdvvMode mode) {
    Rational total(0);
    for (auto& [b1, b2] : decompositions(beta)) {
        for (int64_t r = 1; r <= p - 1; ++r) {
            if (mode == WdvvMode::Strict &&
                (X.ddeg(b1) != (p - r) + 2 || X.ddeg(b2) != k + r + 1))
                continue;
            Rational f = T.get(b1, p - r, 1) * T.get(b2, k, r);
            if (f.is_zero()) continue;
            total += Rational(p - r) * Rational(k) * f;
        }
    }
    return total;
}

} // namespace

TwoPointTable propagate_table(const TargetGeometry& X,
                              const std::map<CurveClass, Rational>& seeds, int64_t order,
                              WdvvMode mode) {
    TwoPointTable T;
    T.mode = mode;
    // Increasing D.beta, so the quadratic terms only see settled rows.
    for (auto& beta : effective_classes(X, order)) {
        int64_t n = X.ddeg(beta) - 1;
        if (n < 1) continue;
        auto it = seeds.find(beta);
        if (it == seeds.end())
            throw PipelineError("missing seed N_{n,1} for class " + beta.str());
        T.set(beta, n, 1, it->second);
        // Downward in k:  k N_{k,n-k+1} = (k+1) N_{k+1,n-k} + n N_{n,1}
        //                 + sum ab N_{a,1} N_{b,n-k} - sum (n-k-r) N_{n-k-r,1} k N_{k,r}.
        for (int64_t k = n - 1; k >= 1; --k) {
            Rational rhs = Rational(k + 1) * T.get(beta, k + 1, n - k) +
                           Rational(n) * it->second;
            rhs += quadratic_sum_ab(X, T, beta, k, n - k, mode);
            rhs -= quadratic_sum_r(X, T, beta, k, n - k, mode);
            T.set(beta, k, n - k + 1, rhs / Rational(k));
        }
    }
    return T;
}

WdvvIdentityReport check_wdvv_identity(const TargetGeometry& X, const TwoPointTable& table,
                                       int64_t order) {
    WdvvIdentityReport rep;
    for (auto& beta : effective_classes(X, order)) {
        int64_t n = X.ddeg(beta) - 1;
        for (int64_t k = 1; k <= n - 1; ++k) {
            int64_t p = n - k; // D.beta = k + p + 1
            Rational lhs = Rational(k + 1) * table.get(beta, k + 1, p) +
                           Rational(k + p) * table.get(beta, k + p, 1) +
                           quadratic_sum_ab(X, table, beta, k, p, table.mode);
            Rational rhs = Rational(k) * table.get(beta, k, p + 1) +
                           quadratic_sum_r(X, table, beta, k, p, table.mode);
            Rational residual = lhs - rhs;
            ++rep.equations_checked;
            if (!residual.is_zero()) {
                rep.pass = false;
                rep.residuals.push_back({beta, k, p, residual});
            }
        }
    }
    return rep;
}

SymmetryReport check_n2_symmetry(const TargetGeometry& X, const TwoPointTable& table) {
    SymmetryReport rep;
    std::map<CurveClass, bool> rows;
    for (auto& [key, v] : table.entries) rows[std::get<0>(key)] = true;
    for (auto& [beta, _] : rows) {
        int64_t n = X.ddeg(beta) - 1;
        if (n < 1) continue;
        Rational n1n = table.get(beta, 1, n);
        Rational expected = table.get(beta, n, 1) * Rational(n) * Rational(n);
        ++rep.rows_checked;
        if (!(n1n == expected)) {
            rep.pass = false;
            rep.mismatches.push_back({beta, n1n, expected});
        }
    }
    return rep;
}

} // namespace thetaforge
