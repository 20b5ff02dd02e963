// Target-geometry data: toric cohomology, Mori lattice, the nef divisor D,
// built-in examples, and the P^1-bundle builder used by the local side.
#pragma once

#include "thetaforge/ring.hpp"
#include "thetaforge/series.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace thetaforge {

struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Integer vector in the basis of Mori generators; effective iff all
// components are non-negative (the supported monoids are free).
struct CurveClass {
    std::vector<int32_t> components;

    CurveClass() = default;
    explicit CurveClass(std::vector<int32_t> c) : components(std::move(c)) {}

    bool is_zero() const {
        return std::all_of(components.begin(), components.end(),
                           [](int32_t c) { return c == 0; });
    }
    bool is_effective() const {
        return std::all_of(components.begin(), components.end(),
                           [](int32_t c) { return c >= 0; });
    }
    int64_t total_degree() const {
        int64_t s = 0;
        for (int32_t c : components) s += c;
        return s;
    }
    CurveClass operator+(const CurveClass& o) const {
        CurveClass r = *this;
        for (size_t i = 0; i < components.size(); ++i) r.components[i] += o.components[i];
        return r;
    }
    CurveClass operator-(const CurveClass& o) const {
        CurveClass r = *this;
        for (size_t i = 0; i < components.size(); ++i) r.components[i] -= o.components[i];
        return r;
    }
    Monomial monomial(int32_t aux0 = 0, int32_t zpow = 0) const {
        return Monomial(components, aux0, zpow);
    }
    auto operator<=>(const CurveClass&) const = default;

    std::string str() const; // "[d]" or "[a,b]"
    static CurveClass parse(const std::string& s);
};

struct TargetGeometry {
    std::string name;
    std::shared_ptr<const GradedRing> ring;
    std::vector<RingElement> nefbasis;      // the degree-1 basis elements
    std::vector<RingElement> toricdivisors; // boundary divisor classes
    std::vector<std::vector<int64_t>> moripairings; // row per toric divisor
    RingElement D;
    RingElement anticanonical; // sum of the toric divisor classes
    std::vector<int64_t> dweights; // D . ell_j per Mori generator
    bool log_cy = false;

    size_t rank() const { return dweights.size(); }       // Novikov variables
    size_t divisor_count() const { return toricdivisors.size(); }

    int64_t ddeg(const CurveClass& beta) const {
        int64_t s = 0;
        for (size_t j = 0; j < dweights.size(); ++j) s += dweights[j] * beta.components.at(j);
        return s;
    }
    int64_t divisor_deg(size_t i, const CurveClass& beta) const {
        int64_t s = 0;
        for (size_t j = 0; j < moripairings.at(i).size(); ++j)
            s += moripairings[i][j] * beta.components.at(j);
        return s;
    }

    CurveClass zero_class() const { return CurveClass(std::vector<int32_t>(rank(), 0)); }

    // Canonical serialized form, used for hashing and the config round trip.
    std::string canonical_json() const;
};

// P = P(O_X(-D) (+) O_X) with its bundle cohomology and the fiber class f
// appended to the curve lattice: classes are written beta + n f with beta
// the zero-section lift, so h.(beta + n f) = n and D.f = 0.
struct BundleGeometry {
    TargetGeometry base;
    BundleRing bundle;

    RingElement h() const { return bundle.h(); }
};

TargetGeometry load_geometry(const std::string& name_or_path, bool experimental_ok = false);
TargetGeometry load_geometry_from_json_text(const std::string& text, bool experimental_ok = false);
TargetGeometry builtin_p2();
TargetGeometry builtin_p1xp1();
bool is_builtin_geometry(const std::string& name);

BundleGeometry build_p1_bundle(const TargetGeometry& X);

// Checks that the toric hypergeometric series has the small-J shape
// z + 0 z^0 + O(1/z) in every degree: no z^1 or z^0 term in z J_{X,beta}
// for beta != 0 (trivial toric mirror map).
struct SmallJReport {
    bool pass = true;
    std::vector<CurveClass> failures;
};
SmallJReport validate_fano_smallJ(const TargetGeometry& X, int64_t max_ddeg);

// All effective classes with 0 < D.beta <= max_ddeg, ordered by (D.beta, lex).
std::vector<CurveClass> effective_classes(const TargetGeometry& X, int64_t max_ddeg);

// Truncation for Novikov series of this geometry, graded by D.beta.
Truncation ddeg_truncation(const TargetGeometry& X, int64_t order, int32_t aux0_max = 0,
                           int32_t zmin = 0, int32_t zmax = 0);

} // namespace thetaforge
