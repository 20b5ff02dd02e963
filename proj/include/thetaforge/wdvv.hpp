// The relative WDVV recursion: propagate the two-point table N_{k,p}^beta
// from the theta seeds N_{n,1}^beta and re-check the identity and the n^2
// symmetry on the result.
#pragma once

#include "thetaforge/mirror.hpp"

#include <map>
#include <tuple>

namespace thetaforge {

enum class WdvvMode { Strict, Formal };

inline const char* wdvv_mode_name(WdvvMode m) {
    return m == WdvvMode::Strict ? "strict" : "formal";
}

struct TwoPointTable {
    // (beta, k, p) -> N_{k,p}^beta, k,p >= 1. Absent entries read as 0.
    std::map<std::tuple<CurveClass, int64_t, int64_t>, Rational> entries;
    WdvvMode mode = WdvvMode::Strict;

    Rational get(const CurveClass& beta, int64_t k, int64_t p) const {
        auto it = entries.find({beta, k, p});
        return it == entries.end() ? Rational(0) : it->second;
    }
    void set(const CurveClass& beta, int64_t k, int64_t p, const Rational& v) {
        if (v.is_zero())
            entries.erase({beta, k, p});
        else
            entries[{beta, k, p}] = v;
    }
};

// Seeds: beta -> N_{n,1}^beta with n = D.beta - 1, for all effective beta
// with 2 <= D.beta <= order. Missing seeds are an error.
TwoPointTable propagate_table(const TargetGeometry& X,
                              const std::map<CurveClass, Rational>& seeds, int64_t order,
                              WdvvMode mode);

struct WdvvIdentityReport {
    bool pass = true;
    struct Residual {
        CurveClass beta;
        int64_t k, p;
        Rational value;
    };
    std::vector<Residual> residuals; // nonzero ones only
    size_t equations_checked = 0;
};

WdvvIdentityReport check_wdvv_identity(const TargetGeometry& X, const TwoPointTable& table,
                                       int64_t order);

struct SymmetryReport {
    bool pass = true;
    struct Mismatch {
        CurveClass beta;
        Rational n1n, expected;
    };
    std::vector<Mismatch> mismatches;
    size_t rows_checked = 0;
};

SymmetryReport check_n2_symmetry(const TargetGeometry& X, const TwoPointTable& table);

} // namespace thetaforge
