// Finite-dimensional graded commutative rings given by structure constants:
// even cohomology of the targets, with integration against the point class.
#pragma once

#include "thetaforge/rational.hpp"

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace thetaforge {

struct RingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class RingElement;

class GradedRing : public std::enable_shared_from_this<GradedRing> {
public:
    struct BasisElement {
        std::string name;
        int degree = 0; // complex degree
    };

    // Sparse structure constants: (i,j) -> list of (k, c) with e_i e_j = sum c e_k.
    using ProductTable = std::map<std::pair<size_t, size_t>, std::vector<std::pair<size_t, Rational>>>;

    // Validates all ring axioms (commutativity, associativity, additivity of the
    // grading, unit behaviour) on every basis pair/triple. Unit products are
    // filled in automatically. When `compact` is set the Poincare pairing must
    // be invertible and the dual basis is precomputed.
    static std::shared_ptr<const GradedRing> make(std::string name,
                                                  std::vector<BasisElement> basis,
                                                  ProductTable products,
                                                  size_t unit_index,
                                                  size_t point_index,
                                                  bool compact = true);

    size_t dim() const { return basis_.size(); }
    const std::string& name() const { return name_; }
    const BasisElement& basis(size_t i) const { return basis_.at(i); }
    size_t unit_index() const { return unit_; }
    size_t point_index() const { return point_; }
    int top_degree() const { return top_degree_; }
    bool compact() const { return compact_; }

    const std::vector<std::pair<size_t, Rational>>& basis_product(size_t i, size_t j) const;

    RingElement zero_element() const;
    RingElement unit_element() const;
    RingElement basis_element(size_t i) const;
    RingElement element(std::vector<Rational> coords) const;

    // Row i of the inverse pairing matrix expressed on the basis: the element
    // dual to basis_i under integrate(x * y).
    RingElement dual_basis_element(size_t i) const;

private:
    GradedRing() = default;
    std::string name_;
    std::vector<BasisElement> basis_;
    ProductTable products_;
    size_t unit_ = 0, point_ = 0;
    int top_degree_ = 0;
    bool compact_ = true;
    std::vector<std::vector<Rational>> dual_; // coords of dual basis elements
    static const std::vector<std::pair<size_t, Rational>> empty_product_;
};

class RingElement {
public:
    RingElement() = default;
    RingElement(std::shared_ptr<const GradedRing> ring, std::vector<Rational> coords)
        : ring_(std::move(ring)), coords_(std::move(coords)) {
        if (coords_.size() != ring_->dim())
            throw RingError("coordinate vector does not match ring dimension");
    }

    const std::shared_ptr<const GradedRing>& ring() const { return ring_; }
    const std::vector<Rational>& coords() const { return coords_; }
    const Rational& coord(size_t i) const { return coords_.at(i); }

    bool is_zero() const {
        for (auto& c : coords_)
            if (!c.is_zero()) return false;
        return true;
    }

    RingElement operator-() const;
    RingElement operator+(const RingElement& o) const;
    RingElement operator-(const RingElement& o) const;
    RingElement operator*(const RingElement& o) const;
    RingElement operator*(const Rational& s) const;
    bool operator==(const RingElement& o) const;

    // Inverse of s + m with s an invertible scalar part and m nilpotent.
    RingElement inverse() const;

    Rational integrate() const { return coords_.at(ring_->point_index()); }
    Rational identity_component() const { return coords_.at(ring_->unit_index()); }

    std::string str() const;

private:
    void check_same_ring(const RingElement& o) const {
        if (ring_.get() != o.ring_.get())
            throw RingError("elements of different rings");
    }
    std::shared_ptr<const GradedRing> ring_;
    std::vector<Rational> coords_;
};

inline RingElement ring_mul(const RingElement& a, const RingElement& b) { return a * b; }
inline Rational integrate(const RingElement& a) { return a.integrate(); }
inline Rational identity_component(const RingElement& a) { return a.identity_component(); }

// H*(X)[h] / (h^2 - D h): the cohomology of the P^1-bundle P(O(-D) (+) O),
// realized as a GradedRing of twice the base dimension with basis
// {phi_a, h phi_a}.
class BundleRing {
public:
    static BundleRing build(std::shared_ptr<const GradedRing> base, const RingElement& D);

    const std::shared_ptr<const GradedRing>& total() const { return total_; }
    const std::shared_ptr<const GradedRing>& base() const { return base_; }
    const RingElement& relation_divisor() const { return D_; }

    RingElement h() const; // c1(O_P(1))
    RingElement lift(const RingElement& base_elem) const;       // pullback
    RingElement lift_times_h(const RingElement& base_elem) const;
    RingElement collapse_h(const RingElement& total_elem) const; // h -> 0

private:
    std::shared_ptr<const GradedRing> total_;
    std::shared_ptr<const GradedRing> base_;
    RingElement D_;
};

// Exact dense linear solve A x = b over the rationals (Gaussian elimination).
// Returns false when the system is singular/inconsistent.
bool solve_rational_system(std::vector<std::vector<Rational>> A, std::vector<Rational> b,
                           std::vector<Rational>& x);

} // namespace thetaforge
