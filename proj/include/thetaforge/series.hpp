// Sparse multivariate truncated power series over an exact coefficient ring.
//
// Monomials are Novikov exponents (one slot per effective-curve generator)
// together with an auxiliary fiber variable power and a Laurent power of z.
// Truncation bounds a positive-weight grading of the Novikov part; the z
// window is hard: products that would leave it raise instead of dropping
// terms, because the pipeline reads exact 1/z coefficients.
//
// Coefficient types must provide: is_zero(), +, -, unary -, *, *(Rational),
// inverse(), ==.
#pragma once

#include "thetaforge/rational.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace thetaforge {

struct SeriesError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Monomial {
    std::vector<int32_t> beta; // Novikov exponents, all >= 0
    int32_t aux0 = 0;          // power of the fiber variable (y0 / q0)
    int32_t zpow = 0;          // Laurent power of z

    Monomial() = default;
    explicit Monomial(std::vector<int32_t> b, int32_t a = 0, int32_t z = 0)
        : beta(std::move(b)), aux0(a), zpow(z) {}

    bool is_constant() const {
        return aux0 == 0 && zpow == 0 &&
               std::all_of(beta.begin(), beta.end(), [](int32_t e) { return e == 0; });
    }
    bool novikov_trivial() const {
        return std::all_of(beta.begin(), beta.end(), [](int32_t e) { return e == 0; });
    }

    Monomial operator*(const Monomial& o) const {
        if (beta.size() != o.beta.size())
            throw SeriesError("monomial arity mismatch");
        Monomial r(beta, aux0 + o.aux0, zpow + o.zpow);
        for (size_t i = 0; i < beta.size(); ++i) r.beta[i] += o.beta[i];
        return r;
    }

    auto operator<=>(const Monomial&) const = default;
};

// Truncation spec shared by compatible series.
struct Truncation {
    std::vector<int64_t> weights; // positive grading weight per Novikov variable
    int64_t order = 0;            // max allowed grading value
    int32_t aux0_max = 0;
    int32_t zmin = 0, zmax = 0;

    size_t arity() const { return weights.size(); }

    int64_t grading(const Monomial& m) const {
        if (m.beta.size() != weights.size())
            throw SeriesError("monomial arity does not match truncation");
        int64_t g = 0;
        for (size_t i = 0; i < weights.size(); ++i) g += weights[i] * m.beta[i];
        return g;
    }

    bool admits(const Monomial& m) const {
        if (m.aux0 < 0 || m.aux0 > aux0_max) return false;
        if (m.zpow > zmax) return false; // zpow < zmin handled separately (hard error)
        for (int32_t e : m.beta)
            if (e < 0) return false;
        return grading(m) <= order;
    }

    bool same_weights(const Truncation& o) const { return weights == o.weights; }

    // Componentwise minimum of two compatible truncations.
    Truncation meet(const Truncation& o) const {
        if (!same_weights(o))
            throw SeriesError("incompatible truncation gradings");
        Truncation t = *this;
        t.order = std::min(order, o.order);
        t.aux0_max = std::min(aux0_max, o.aux0_max);
        t.zmin = std::max(zmin, o.zmin);
        t.zmax = std::min(zmax, o.zmax);
        return t;
    }

    bool operator==(const Truncation&) const = default;
};

inline Truncation novikov_truncation(std::vector<int64_t> weights, int64_t order,
                                     int32_t aux0_max = 0, int32_t zmin = 0,
                                     int32_t zmax = 0) {
    Truncation t;
    t.weights = std::move(weights);
    t.order = order;
    t.aux0_max = aux0_max;
    t.zmin = zmin;
    t.zmax = zmax;
    return t;
}

template <class Coeff>
class TruncSeries {
public:
    TruncSeries(Truncation trunc, Coeff one)
        : trunc_(std::move(trunc)), one_(std::move(one)) {}

    static TruncSeries zero(const Truncation& t, const Coeff& one) {
        return TruncSeries(t, one);
    }
    static TruncSeries unit(const Truncation& t, const Coeff& one) {
        TruncSeries s(t, one);
        s.add_term(Monomial(std::vector<int32_t>(t.arity(), 0)), one);
        return s;
    }
    static TruncSeries monomial_series(const Truncation& t, const Coeff& one,
                                       const Monomial& m, const Coeff& c) {
        TruncSeries s(t, one);
        s.add_term(m, c);
        return s;
    }
    // The i-th Novikov variable as a series.
    static TruncSeries variable(const Truncation& t, const Coeff& one, size_t i) {
        std::vector<int32_t> e(t.arity(), 0);
        e.at(i) = 1;
        return monomial_series(t, one, Monomial(std::move(e)), one);
    }

    const Truncation& truncation() const { return trunc_; }
    const Coeff& one_coeff() const { return one_; }
    const std::map<Monomial, Coeff>& terms() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    size_t size() const { return coeffs_.size(); }

    Coeff coefficient(const Monomial& m) const {
        auto it = coeffs_.find(m);
        if (it == coeffs_.end()) return zero_coeff();
        return it->second;
    }
    Coeff constant_term() const {
        return coefficient(Monomial(std::vector<int32_t>(trunc_.arity(), 0)));
    }

    bool has_zero_constant_term() const { return constant_term().is_zero(); }

    // Inserts c on m, respecting truncation. zpow below window is a hard error.
    void add_term(const Monomial& m, const Coeff& c) {
        if (c.is_zero()) return;
        if (m.zpow < trunc_.zmin)
            throw SeriesError("z power " + std::to_string(m.zpow) +
                              " below window floor " + std::to_string(trunc_.zmin));
        if (m.zpow > trunc_.zmax)
            throw SeriesError("z power " + std::to_string(m.zpow) +
                              " above window ceiling " + std::to_string(trunc_.zmax));
        if (!trunc_.admits(m)) return; // Novikov/aux truncation: silent drop
        auto it = coeffs_.find(m);
        if (it == coeffs_.end()) {
            coeffs_.emplace(m, c);
        } else {
            it->second = it->second + c;
            if (it->second.is_zero()) coeffs_.erase(it);
        }
    }

    TruncSeries operator-() const {
        TruncSeries r(trunc_, one_);
        for (auto& [m, c] : coeffs_) r.coeffs_.emplace(m, -c);
        return r;
    }

    TruncSeries operator+(const TruncSeries& o) const {
        check_compatible(o);
        TruncSeries r(trunc_.meet(o.trunc_), one_);
        for (auto& [m, c] : coeffs_) r.add_term(m, c);
        for (auto& [m, c] : o.coeffs_) r.add_term(m, c);
        return r;
    }
    TruncSeries operator-(const TruncSeries& o) const { return *this + (-o); }

    TruncSeries operator*(const TruncSeries& o) const {
        check_compatible(o);
        TruncSeries r(trunc_.meet(o.trunc_), one_);
        for (auto& [ma, ca] : coeffs_) {
            for (auto& [mb, cb] : o.coeffs_) {
                Monomial m = ma * mb;
                // Novikov overflow is truncation; z overflow is not.
                if (m.zpow >= r.trunc_.zmin && m.zpow <= r.trunc_.zmax &&
                    !r.trunc_.admits(m))
                    continue;
                Coeff c = ca * cb;
                r.add_term(m, c);
            }
        }
        return r;
    }

    TruncSeries scalar_mul(const Rational& s) const {
        TruncSeries r(trunc_, one_);
        if (s.is_zero()) return r;
        for (auto& [m, c] : coeffs_) r.add_term(m, c * s);
        return r;
    }

    // Restriction to a tighter truncation (soundness: computing loose then
    // restricting equals computing tight).
    TruncSeries restricted(const Truncation& t) const {
        Truncation nt = trunc_.meet(t);
        TruncSeries r(nt, one_);
        for (auto& [m, c] : coeffs_) {
            if (m.zpow < nt.zmin || m.zpow > nt.zmax) continue;
            r.add_term(m, c);
        }
        return r;
    }

    bool operator==(const TruncSeries& o) const { return coeffs_ == o.coeffs_; }

    // The z-slice: sum of terms with the given z power, returned with zpow 0.
    TruncSeries z_slice(int32_t zp) const {
        Truncation t = trunc_;
        TruncSeries r(t, one_);
        for (auto& [m, c] : coeffs_) {
            if (m.zpow != zp) continue;
            Monomial m0 = m;
            m0.zpow = 0;
            r.add_term(m0, c);
        }
        return r;
    }

    int32_t max_zpow() const {
        int32_t mz = trunc_.zmin;
        bool any = false;
        for (auto& [m, c] : coeffs_) {
            if (!any || m.zpow > mz) mz = m.zpow;
            any = true;
        }
        if (!any) throw SeriesError("max_zpow of zero series");
        return mz;
    }

private:
    Coeff zero_coeff() const { return one_ * Rational(0); }

    void check_compatible(const TruncSeries& o) const {
        if (trunc_.arity() != o.trunc_.arity())
            throw SeriesError("series arity mismatch");
        if (!trunc_.same_weights(o.trunc_))
            throw SeriesError("series grading mismatch");
        if (!(one_ == o.one_))
            throw SeriesError("incompatible coefficient rings");
    }

    Truncation trunc_;
    Coeff one_;
    std::map<Monomial, Coeff> coeffs_;
};

template <class Coeff>
TruncSeries<Coeff> series_add(const TruncSeries<Coeff>& a, const TruncSeries<Coeff>& b) {
    return a + b;
}

template <class Coeff>
TruncSeries<Coeff> series_mul(const TruncSeries<Coeff>& a, const TruncSeries<Coeff>& b) {
    return a * b;
}

// exp(a) = sum a^k / k!, requires zero constant term.
template <class Coeff>
TruncSeries<Coeff> series_exp(const TruncSeries<Coeff>& a) {
    if (!a.has_zero_constant_term())
        throw SeriesError("series_exp: nonzero constant term");
    TruncSeries<Coeff> r = TruncSeries<Coeff>::unit(a.truncation(), a.one_coeff());
    TruncSeries<Coeff> t = r;
    int64_t kmax = a.truncation().order + a.truncation().aux0_max + 1;
    for (int64_t k = 1; k <= kmax && !t.is_zero(); ++k) {
        t = (t * a).scalar_mul(Rational(1, k));
        r = r + t;
    }
    return r;
}

// log(a) = sum (-1)^{k+1} (a-1)^k / k, requires constant term 1.
template <class Coeff>
TruncSeries<Coeff> series_log(const TruncSeries<Coeff>& a) {
    if (!(a.constant_term() == a.one_coeff()))
        throw SeriesError("series_log: constant term is not 1");
    TruncSeries<Coeff> u = a - TruncSeries<Coeff>::unit(a.truncation(), a.one_coeff());
    TruncSeries<Coeff> r = TruncSeries<Coeff>::zero(a.truncation(), a.one_coeff());
    TruncSeries<Coeff> p = TruncSeries<Coeff>::unit(a.truncation(), a.one_coeff());
    int64_t kmax = a.truncation().order + a.truncation().aux0_max + 1;
    for (int64_t k = 1; k <= kmax; ++k) {
        p = p * u;
        if (p.is_zero()) break;
        Rational c(k % 2 == 1 ? 1 : -1, k);
        r = r + p.scalar_mul(c);
    }
    return r;
}

// Geometric-series inversion. Pivots on the constant term when that is
// invertible; otherwise on the top z-slice (Laurent inversion, e.g. 1/(z+h)
// with h nilpotent). A window too small to absorb the nilpotent tail raises
// rather than truncating.
template <class Coeff>
TruncSeries<Coeff> series_inverse(const TruncSeries<Coeff>& a) {
    if (a.is_zero()) throw SeriesError("series_inverse: zero series");
    const Truncation& t = a.truncation();
    Monomial pivot(std::vector<int32_t>(t.arity(), 0));

    bool const_pivot = true;
    try {
        (void)a.constant_term().inverse();
    } catch (const std::exception&) {
        const_pivot = false;
    }
    if (!const_pivot) {
        // Laurent pivot: the top z-slice must be a lone invertible constant.
        pivot.zpow = a.max_zpow();
        TruncSeries<Coeff> slice = a.z_slice(pivot.zpow);
        if (slice.size() != 1 || !(slice.terms().begin()->first ==
                                   Monomial(std::vector<int32_t>(t.arity(), 0))))
            throw SeriesError("series_inverse: non-invertible constant term");
    }
    Coeff c = a.coefficient(pivot);
    Coeff cinv = c.inverse(); // throws if not invertible

    Monomial antipivot(std::vector<int32_t>(t.arity(), 0), 0, -pivot.zpow);
    if (antipivot.zpow < t.zmin)
        throw SeriesError("series_inverse: window too small for the pivot shift");
    TruncSeries<Coeff> shift_inv =
        TruncSeries<Coeff>::monomial_series(t, a.one_coeff(), antipivot, cinv);
    TruncSeries<Coeff> unit = TruncSeries<Coeff>::unit(t, a.one_coeff());
    TruncSeries<Coeff> v = shift_inv * a - unit; // zero constant term after pivot
    TruncSeries<Coeff> r = unit;
    TruncSeries<Coeff> p = unit;
    int64_t kmax = t.order + t.aux0_max + (int64_t)(t.zmax - t.zmin) + 1;
    for (int64_t k = 1; k <= kmax; ++k) {
        p = p * v;
        if (p.is_zero()) break;
        r = (k % 2 == 1) ? r - p : r + p;
        if (k == kmax && !p.is_zero())
            throw SeriesError("series_inverse: expansion did not terminate in window");
    }
    return r * shift_inv;
}

// Formal composition: replaces Novikov variable i by assignment[i]. Every
// substituted monomial must weigh at least as much as the variable it
// replaces, so truncation stays sound. aux0 and z powers pass through.
template <class Coeff>
TruncSeries<Coeff> series_substitute(const TruncSeries<Coeff>& a,
                                     const std::vector<TruncSeries<Coeff>>& assignment) {
    const Truncation& src = a.truncation();
    if (assignment.size() != src.arity())
        throw SeriesError("substitution arity mismatch");
    if (src.arity() == 0) return a;

    const Truncation& dst = assignment[0].truncation();
    if (!src.same_weights(dst))
        throw SeriesError("substitution must preserve the grading weights");
    for (size_t i = 0; i < assignment.size(); ++i) {
        if (!(assignment[i].truncation().same_weights(dst)))
            throw SeriesError("substitution assignments disagree on grading");
        for (auto& [m, c] : assignment[i].terms()) {
            if (dst.grading(m) < src.weights[i])
                throw SeriesError("substitution lowers order below the variable weight");
        }
    }

    Truncation rt = dst;
    rt.order = std::min(rt.order, src.order);

    TruncSeries<Coeff> result(rt, a.one_coeff());
    // Memoized powers of each assignment, computed at the result truncation.
    std::vector<std::vector<TruncSeries<Coeff>>> powers(assignment.size());
    auto power = [&](size_t i, int32_t e) -> const TruncSeries<Coeff>& {
        auto& tab = powers[i];
        if (tab.empty()) tab.push_back(TruncSeries<Coeff>::unit(rt, a.one_coeff()));
        while ((int32_t)tab.size() <= e)
            tab.push_back(tab.back() * assignment[i].restricted(rt));
        return tab[e];
    };

    for (auto& [m, c] : a.terms()) {
        TruncSeries<Coeff> term = TruncSeries<Coeff>::monomial_series(
            rt, a.one_coeff(), Monomial(std::vector<int32_t>(rt.arity(), 0), m.aux0, m.zpow), c);
        for (size_t i = 0; i < m.beta.size(); ++i)
            if (m.beta[i] > 0) term = term * power(i, m.beta[i]);
        result = result + term;
    }
    return result;
}

} // namespace thetaforge
