#include "thetaforge/ring.hpp"

#include <algorithm>
#include <sstream>

namespace thetaforge {

const std::vector<std::pair<size_t, Rational>> GradedRing::empty_product_ = {};

namespace {

std::vector<Rational> multiply_coords(const GradedRing& R,
                                      const std::vector<Rational>& a,
                                      const std::vector<Rational>& b) {
    std::vector<Rational> out(R.dim(), Rational(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (size_t j = 0; j < b.size(); ++j) {
            if (b[j].is_zero()) continue;
            Rational c = a[i] * b[j];
            for (auto& [k, s] : R.basis_product(i, j)) out[k] += c * s;
        }
    }
    return out;
}

} // namespace

std::shared_ptr<const GradedRing> GradedRing::make(std::string name,
                                                   std::vector<BasisElement> basis,
                                                   ProductTable products,
                                                   size_t unit_index,
                                                   size_t point_index,
                                                   bool compact) {
    auto ring = std::shared_ptr<GradedRing>(new GradedRing());
    ring->name_ = std::move(name);
    ring->basis_ = std::move(basis);
    ring->unit_ = unit_index;
    ring->point_ = point_index;
    ring->compact_ = compact;
    const size_t n = ring->basis_.size();
    if (n == 0) throw RingError("empty basis");
    if (unit_index >= n || point_index >= n) throw RingError("unit/point index out of range");
    if (ring->basis_[unit_index].degree != 0) throw RingError("unit must have degree 0");

    ring->top_degree_ = 0;
    for (auto& b : ring->basis_) ring->top_degree_ = std::max(ring->top_degree_, b.degree);
    if (ring->basis_[point_index].degree != ring->top_degree_)
        throw RingError("point class must have top degree");

    // Symmetrize and fill unit products; reject contradictory entries.
    ProductTable full;
    auto put = [&](size_t i, size_t j, std::vector<std::pair<size_t, Rational>> val) {
        std::sort(val.begin(), val.end(),
                  [](auto& a, auto& b) { return a.first < b.first; });
        std::vector<std::pair<size_t, Rational>> clean;
        for (auto& [k, c] : val) {
            if (c.is_zero()) continue;
            if (!clean.empty() && clean.back().first == k)
                clean.back().second += c;
            else
                clean.emplace_back(k, c);
        }
        std::erase_if(clean, [](auto& kv) { return kv.second.is_zero(); });
        auto key = std::make_pair(i, j);
        auto it = full.find(key);
        if (it != full.end()) {
            if (it->second != clean) throw RingError("contradictory structure constants");
            return;
        }
        full.emplace(key, std::move(clean));
    };
    for (auto& [ij, val] : products) {
        put(ij.first, ij.second, val);
        put(ij.second, ij.first, val); // commutativity imposed; duplicates must agree
    }
    for (size_t j = 0; j < n; ++j) {
        put(unit_index, j, {{j, Rational(1)}});
        put(j, unit_index, {{j, Rational(1)}});
    }
    std::erase_if(full, [](auto& kv) { return kv.second.empty(); });
    ring->products_ = std::move(full);

    // Grading additivity: every term of e_i e_j has degree d_i + d_j.
    for (auto& [ij, val] : ring->products_) {
        int d = ring->basis_[ij.first].degree + ring->basis_[ij.second].degree;
        for (auto& [k, c] : val)
            if (ring->basis_[k].degree != d)
                throw RingError("grading violated by product of " +
                                ring->basis_[ij.first].name + " and " +
                                ring->basis_[ij.second].name);
    }

    // Associativity on all basis triples.
    auto basis_coords = [&](size_t i) {
        std::vector<Rational> v(n, Rational(0));
        v[i] = Rational(1);
        return v;
    };
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            for (size_t k = 0; k < n; ++k) {
                auto ij = multiply_coords(*ring, basis_coords(i), basis_coords(j));
                auto left = multiply_coords(*ring, ij, basis_coords(k));
                auto jk = multiply_coords(*ring, basis_coords(j), basis_coords(k));
                auto right = multiply_coords(*ring, basis_coords(i), jk);
                if (left != right)
                    throw RingError("associativity fails on (" + ring->basis_[i].name +
                                    ", " + ring->basis_[j].name + ", " +
                                    ring->basis_[k].name + ")");
            }

    if (compact) {
        // Poincare pairing and dual basis.
        std::vector<std::vector<Rational>> G(n, std::vector<Rational>(n, Rational(0)));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                auto prod = multiply_coords(*ring, basis_coords(i), basis_coords(j));
                G[i][j] = prod[point_index];
            }
        ring->dual_.resize(n);
        for (size_t i = 0; i < n; ++i) {
            std::vector<Rational> e(n, Rational(0));
            e[i] = Rational(1);
            std::vector<Rational> x;
            if (!solve_rational_system(G, e, x))
                throw RingError("Poincare pairing is singular");
            ring->dual_[i] = std::move(x);
        }
    }
    return ring;
}

const std::vector<std::pair<size_t, Rational>>& GradedRing::basis_product(size_t i, size_t j) const {
    auto it = products_.find({i, j});
    if (it == products_.end()) return empty_product_;
    return it->second;
}

RingElement GradedRing::zero_element() const {
    return RingElement(shared_from_this(), std::vector<Rational>(dim(), Rational(0)));
}
RingElement GradedRing::unit_element() const { return basis_element(unit_); }
RingElement GradedRing::basis_element(size_t i) const {
    std::vector<Rational> v(dim(), Rational(0));
    v.at(i) = Rational(1);
    return RingElement(shared_from_this(), std::move(v));
}
RingElement GradedRing::element(std::vector<Rational> coords) const {
    return RingElement(shared_from_this(), std::move(coords));
}
RingElement GradedRing::dual_basis_element(size_t i) const {
    if (!compact_) throw RingError("dual basis requires a compact ring");
    return RingElement(shared_from_this(), dual_.at(i));
}

RingElement RingElement::operator-() const {
    std::vector<Rational> v = coords_;
    for (auto& c : v) c = -c;
    return RingElement(ring_, std::move(v));
}
RingElement RingElement::operator+(const RingElement& o) const {
    check_same_ring(o);
    std::vector<Rational> v = coords_;
    for (size_t i = 0; i < v.size(); ++i) v[i] += o.coords_[i];
    return RingElement(ring_, std::move(v));
}
RingElement RingElement::operator-(const RingElement& o) const { return *this + (-o); }
RingElement RingElement::operator*(const RingElement& o) const {
    check_same_ring(o);
    return RingElement(ring_, multiply_coords(*ring_, coords_, o.coords_));
}
RingElement RingElement::operator*(const Rational& s) const {
    std::vector<Rational> v = coords_;
    for (auto& c : v) c *= s;
    return RingElement(ring_, std::move(v));
}
bool RingElement::operator==(const RingElement& o) const {
    return ring_.get() == o.ring_.get() && coords_ == o.coords_;
}

RingElement RingElement::inverse() const {
    Rational s = identity_component();
    if (s.is_zero()) throw RingError("element has no invertible scalar part");
    RingElement m = *this - ring_->unit_element() * s; // nilpotent part
    RingElement acc = ring_->unit_element();
    RingElement pw = ring_->unit_element();
    Rational sinv = s.inverse();
    int bound = ring_->top_degree() + 1;
    for (int k = 1; k <= bound; ++k) {
        pw = pw * m * (-sinv);
        if (pw.is_zero()) break;
        acc = acc + pw;
        if (k == bound && !pw.is_zero())
            throw RingError("non-nilpotent correction in inverse");
    }
    return acc * sinv;
}

std::string RingElement::str() const {
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < coords_.size(); ++i) {
        if (coords_[i].is_zero()) continue;
        if (!first) os << " + ";
        os << coords_[i].pretty() << "*" << ring_->basis(i).name;
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

BundleRing BundleRing::build(std::shared_ptr<const GradedRing> base, const RingElement& D) {
    if (D.ring().get() != base.get()) throw RingError("divisor not in the base ring");
    const size_t m = base->dim();
    std::vector<GradedRing::BasisElement> basis(2 * m);
    for (size_t i = 0; i < m; ++i) {
        basis[i] = base->basis(i);
        basis[m + i] = {"h*" + base->basis(i).name, base->basis(i).degree + 1};
    }
    basis[m + base->unit_index()].name = "h";

    GradedRing::ProductTable prod;
    auto base_coords = [&](size_t i, size_t j) {
        return (base->basis_element(i) * base->basis_element(j)).coords();
    };
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = i; j < m; ++j) {
            auto bc = base_coords(i, j);
            std::vector<std::pair<size_t, Rational>> plain, shifted, hh;
            for (size_t k = 0; k < m; ++k)
                if (!bc[k].is_zero()) {
                    plain.emplace_back(k, bc[k]);
                    shifted.emplace_back(m + k, bc[k]);
                }
            // (h phi_i)(h phi_j) = h^2 phi_i phi_j = h (D phi_i phi_j)
            auto dc = (base->element(bc) * D).coords();
            for (size_t k = 0; k < m; ++k)
                if (!dc[k].is_zero()) hh.emplace_back(m + k, dc[k]);
            prod[{i, j}] = plain;
            prod[{i, m + j}] = shifted;
            prod[{j, m + i}] = shifted;
            prod[{m + i, m + j}] = hh;
        }
    }

    BundleRing br;
    br.base_ = base;
    br.D_ = D;
    br.total_ = GradedRing::make(base->name() + "_p1bundle", std::move(basis), std::move(prod),
                                 base->unit_index(), m + base->point_index(), true);
    return br;
}

RingElement BundleRing::h() const {
    return total_->basis_element(base_->dim() + base_->unit_index());
}

RingElement BundleRing::lift(const RingElement& e) const {
    if (e.ring().get() != base_.get()) throw RingError("lift expects a base-ring element");
    std::vector<Rational> v(total_->dim(), Rational(0));
    for (size_t i = 0; i < base_->dim(); ++i) v[i] = e.coord(i);
    return total_->element(std::move(v));
}

RingElement BundleRing::lift_times_h(const RingElement& e) const {
    if (e.ring().get() != base_.get()) throw RingError("lift expects a base-ring element");
    std::vector<Rational> v(total_->dim(), Rational(0));
    for (size_t i = 0; i < base_->dim(); ++i) v[base_->dim() + i] = e.coord(i);
    return total_->element(std::move(v));
}

RingElement BundleRing::collapse_h(const RingElement& e) const {
    if (e.ring().get() != total_.get())
        throw RingError("collapse_h expects an element of the bundle ring");
    std::vector<Rational> v(base_->dim(), Rational(0));
    for (size_t i = 0; i < base_->dim(); ++i) v[i] = e.coord(i);
    return base_->element(std::move(v));
}

bool solve_rational_system(std::vector<std::vector<Rational>> A, std::vector<Rational> b,
                           std::vector<Rational>& x) {
    const size_t n = A.size();
    for (auto& row : A)
        if (row.size() != n) throw RingError("solve: non-square matrix");
    if (b.size() != n) throw RingError("solve: rhs size mismatch");

    std::vector<size_t> perm(n);
    for (size_t i = 0; i < n; ++i) perm[i] = i;
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && A[piv][col].is_zero()) ++piv;
        if (piv == n) return false;
        std::swap(A[col], A[piv]);
        std::swap(b[col], b[piv]);
        Rational inv = A[col][col].inverse();
        for (auto& c : A[col]) c *= inv;
        b[col] *= inv;
        for (size_t r = 0; r < n; ++r) {
            if (r == col || A[r][col].is_zero()) continue;
            Rational f = A[r][col];
            for (size_t c = 0; c < n; ++c) A[r][c] -= f * A[col][c];
            b[r] -= f * b[col];
        }
    }
    x = std::move(b);
    return true;
}

} // namespace thetaforge
