#include "thetaforge/geometry.hpp"
#include "thetaforge/givental.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace thetaforge {

using ordered_json = nlohmann::ordered_json;

std::string CurveClass::str() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < components.size(); ++i) {
        if (i) os << ",";
        os << components[i];
    }
    os << "]";
    return os.str();
}

CurveClass CurveClass::parse(const std::string& s) {
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw GeometryError("malformed curve class '" + s + "'");
    std::vector<int32_t> comps;
    std::string body = s.substr(1, s.size() - 2);
    std::istringstream is(body);
    std::string tok;
    while (std::getline(is, tok, ','))
        comps.push_back(static_cast<int32_t>(std::stol(tok)));
    if (comps.empty()) throw GeometryError("empty curve class '" + s + "'");
    return CurveClass(std::move(comps));
}

namespace {

// Solves sum_i x_i col_i = v (columns over the ring basis); any solution.
bool express_in_columns(const std::vector<std::vector<Rational>>& cols,
                        const std::vector<Rational>& v, std::vector<Rational>& x) {
    const size_t rows = v.size(), ncols = cols.size();
    // Gaussian elimination on the augmented [cols | v].
    std::vector<std::vector<Rational>> A(rows, std::vector<Rational>(ncols + 1, Rational(0)));
    for (size_t c = 0; c < ncols; ++c)
        for (size_t r = 0; r < rows; ++r) A[r][c] = cols[c][r];
    for (size_t r = 0; r < rows; ++r) A[r][ncols] = v[r];

    std::vector<size_t> pivot_col;
    size_t r = 0;
    for (size_t c = 0; c < ncols && r < rows; ++c) {
        size_t pr = r;
        while (pr < rows && A[pr][c].is_zero()) ++pr;
        if (pr == rows) continue;
        std::swap(A[r], A[pr]);
        Rational inv = A[r][c].inverse();
        for (auto& e : A[r]) e *= inv;
        for (size_t rr = 0; rr < rows; ++rr) {
            if (rr == r || A[rr][c].is_zero()) continue;
            Rational f = A[rr][c];
            for (size_t cc = 0; cc <= ncols; ++cc) A[rr][cc] -= f * A[r][cc];
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (size_t rr = r; rr < rows; ++rr)
        if (!A[rr][ncols].is_zero()) return false; // inconsistent
    x.assign(ncols, Rational(0));
    for (size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = A[i][ncols];
    return true;
}

std::vector<Rational> parse_coords(const ordered_json& arr, size_t dim, const std::string& what) {
    if (!arr.is_array() || arr.size() != dim)
        throw GeometryError("schema: " + what + " must be an array of " + std::to_string(dim) +
                            " rationals");
    std::vector<Rational> v;
    v.reserve(dim);
    for (auto& e : arr) v.push_back(Rational::parse(e.get<std::string>()));
    return v;
}

void finalize_geometry(TargetGeometry& G) {
    const auto& ring = G.ring;
    // Nef basis: the degree-1 basis elements.
    G.nefbasis.clear();
    for (size_t i = 0; i < ring->dim(); ++i)
        if (ring->basis(i).degree == 1) G.nefbasis.push_back(ring->basis_element(i));
    if (G.nefbasis.empty()) throw GeometryError("no degree-1 classes in the ring");

    const size_t rank = G.moripairings.empty() ? 0 : G.moripairings.front().size();
    if (rank == 0) throw GeometryError("empty Mori pairing matrix");
    for (auto& row : G.moripairings)
        if (row.size() != rank) throw GeometryError("ragged Mori pairing matrix");
    if (G.moripairings.size() != G.toricdivisors.size())
        throw GeometryError("pairing rows do not match toric divisors");

    // c1 = sum of boundary classes; log CY iff D equals it.
    G.anticanonical = ring->zero_element();
    for (auto& d : G.toricdivisors) G.anticanonical = G.anticanonical + d;
    G.log_cy = (G.D == G.anticanonical);

    std::vector<std::vector<Rational>> cols;
    for (auto& d : G.toricdivisors) cols.push_back(d.coords());

    // D as a boundary combination gives its Mori pairings.
    std::vector<Rational> x;
    if (!express_in_columns(cols, G.D.coords(), x))
        throw GeometryError("D is not a combination of the toric boundary classes");
    G.dweights.assign(rank, 0);
    for (size_t j = 0; j < rank; ++j) {
        Rational s(0);
        for (size_t i = 0; i < cols.size(); ++i)
            s += x[i] * Rational(G.moripairings[i][j]);
        if (!s.is_integer())
            throw GeometryError("non-integral pairing of D with a Mori generator");
        G.dweights[j] = std::stoll(s.pretty());
        if (G.dweights[j] < 0)
            throw GeometryError("D not nef: D pairs " + std::to_string(G.dweights[j]) +
                                " with Mori generator " + std::to_string(j));
    }

    // Full-rank check on the nef-basis pairing matrix.
    if (G.nefbasis.size() != rank)
        throw GeometryError("number of degree-1 classes does not match the Mori rank");
    std::vector<std::vector<Rational>> P(rank, std::vector<Rational>(rank, Rational(0)));
    for (size_t k = 0; k < rank; ++k) {
        std::vector<Rational> xk;
        if (!express_in_columns(cols, G.nefbasis[k].coords(), xk))
            throw GeometryError("degree-1 class not spanned by the toric boundary");
        for (size_t j = 0; j < rank; ++j) {
            Rational s(0);
            for (size_t i = 0; i < cols.size(); ++i)
                s += xk[i] * Rational(G.moripairings[i][j]);
            P[k][j] = s;
        }
    }
    // Invertibility via solving against each unit vector.
    for (size_t k = 0; k < rank; ++k) {
        std::vector<Rational> e(rank, Rational(0)), sol;
        e[k] = Rational(1);
        if (!solve_rational_system(P, e, sol))
            throw GeometryError("nef pairing matrix is singular");
    }
}

} // namespace

TargetGeometry builtin_p2() {
    using BE = GradedRing::BasisElement;
    GradedRing::ProductTable prod;
    prod[{1, 1}] = {{2, Rational(1)}};
    prod[{1, 2}] = {};
    prod[{2, 2}] = {};
    auto ring = GradedRing::make("p2", {BE{"1", 0}, BE{"p", 1}, BE{"p2", 2}}, prod, 0, 2);

    TargetGeometry G;
    G.name = "p2";
    G.ring = ring;
    RingElement p = ring->basis_element(1);
    G.toricdivisors = {p, p, p};
    G.moripairings = {{1}, {1}, {1}};
    G.D = p * Rational(3);
    finalize_geometry(G);
    return G;
}

TargetGeometry builtin_p1xp1() {
    using BE = GradedRing::BasisElement;
    GradedRing::ProductTable prod;
    prod[{1, 1}] = {};
    prod[{1, 2}] = {{3, Rational(1)}};
    prod[{2, 2}] = {};
    prod[{1, 3}] = {};
    prod[{2, 3}] = {};
    prod[{3, 3}] = {};
    auto ring = GradedRing::make(
        "p1xp1", {BE{"1", 0}, BE{"p1", 1}, BE{"p2", 1}, BE{"p1p2", 2}}, prod, 0, 3);

    TargetGeometry G;
    G.name = "p1xp1";
    G.ring = ring;
    RingElement p1 = ring->basis_element(1), p2 = ring->basis_element(2);
    G.toricdivisors = {p1, p1, p2, p2};
    G.moripairings = {{1, 0}, {1, 0}, {0, 1}, {0, 1}};
    G.D = p1 * Rational(2) + p2 * Rational(2);
    finalize_geometry(G);
    return G;
}

bool is_builtin_geometry(const std::string& name) { return name == "p2" || name == "p1xp1"; }

TargetGeometry load_geometry_from_json_text(const std::string& text, bool) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw GeometryError(std::string("schema: invalid JSON: ") + e.what());
    }
    for (const char* key : {"name", "basis", "structconst", "toricdivisors", "moripairings",
                            "D", "point"})
        if (!doc.contains(key)) throw GeometryError(std::string("schema: missing field '") + key + "'");

    std::vector<GradedRing::BasisElement> basis;
    for (auto& b : doc["basis"]) {
        if (!b.contains("name") || !b.contains("degree"))
            throw GeometryError("schema: basis entries need name and degree");
        basis.push_back({b["name"].get<std::string>(), b["degree"].get<int>()});
    }
    const size_t dim = basis.size();

    GradedRing::ProductTable prod;
    for (auto& t : doc["structconst"]) {
        if (!t.is_array() || t.size() != 4)
            throw GeometryError("schema: structconst entries are [i,j,k,\"num/den\"]");
        size_t i = t[0].get<size_t>(), j = t[1].get<size_t>(), k = t[2].get<size_t>();
        if (i >= dim || j >= dim || k >= dim) throw GeometryError("schema: structconst index out of range");
        prod[{i, j}].emplace_back(k, Rational::parse(t[3].get<std::string>()));
    }

    size_t unit = 0;
    if (doc.contains("unit")) {
        unit = doc["unit"].get<size_t>();
    } else {
        size_t found = dim;
        for (size_t i = 0; i < dim; ++i)
            if (basis[i].degree == 0) {
                if (found != dim) throw GeometryError("schema: ambiguous unit, specify 'unit'");
                found = i;
            }
        if (found == dim) throw GeometryError("schema: no degree-0 basis element");
        unit = found;
    }
    size_t point = doc["point"].get<size_t>();

    std::shared_ptr<const GradedRing> ring;
    try {
        ring = GradedRing::make(doc["name"].get<std::string>(), basis, prod, unit, point);
    } catch (const RingError& e) {
        throw GeometryError(std::string("ring axioms: ") + e.what());
    }

    TargetGeometry G;
    G.name = doc["name"].get<std::string>();
    G.ring = ring;
    for (auto& d : doc["toricdivisors"])
        G.toricdivisors.push_back(ring->element(parse_coords(d, dim, "toricdivisors")));
    for (auto& row : doc["moripairings"]) {
        std::vector<int64_t> r;
        for (auto& e : row) r.push_back(e.get<int64_t>());
        G.moripairings.push_back(std::move(r));
    }
    G.D = ring->element(parse_coords(doc["D"], dim, "D"));
    finalize_geometry(G);
    return G;
}

TargetGeometry load_geometry(const std::string& name_or_path, bool experimental_ok) {
    if (name_or_path == "p2") return builtin_p2();
    if (name_or_path == "p1xp1") return builtin_p1xp1();
    std::ifstream in(name_or_path);
    if (!in)
        throw GeometryError("unknown geometry '" + name_or_path +
                            "' (not a built-in, and no such config file)");
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_geometry_from_json_text(ss.str(), experimental_ok);
}

std::string TargetGeometry::canonical_json() const {
    ordered_json doc;
    doc["name"] = name;
    doc["basis"] = ordered_json::array();
    for (size_t i = 0; i < ring->dim(); ++i)
        doc["basis"].push_back({{"name", ring->basis(i).name}, {"degree", ring->basis(i).degree}});
    doc["structconst"] = ordered_json::array();
    for (size_t i = 0; i < ring->dim(); ++i)
        for (size_t j = i; j < ring->dim(); ++j)
            for (auto& [k, c] : ring->basis_product(i, j))
                doc["structconst"].push_back({i, j, k, c.str()});
    auto coords_json = [](const RingElement& e) {
        ordered_json a = ordered_json::array();
        for (auto& c : e.coords()) a.push_back(c.str());
        return a;
    };
    doc["toricdivisors"] = ordered_json::array();
    for (auto& d : toricdivisors) doc["toricdivisors"].push_back(coords_json(d));
    doc["moripairings"] = moripairings;
    doc["D"] = coords_json(D);
    doc["point"] = ring->point_index();
    doc["unit"] = ring->unit_index();
    return doc.dump();
}

BundleGeometry build_p1_bundle(const TargetGeometry& X) {
    BundleGeometry P;
    P.base = X;
    P.bundle = BundleRing::build(X.ring, X.D);
    return P;
}

std::vector<CurveClass> effective_classes(const TargetGeometry& X, int64_t max_ddeg) {
    for (int64_t w : X.dweights)
        if (w <= 0)
            throw GeometryError("class enumeration needs positive D-weights (D ample on curves)");
    std::vector<CurveClass> out;
    std::vector<int32_t> cur(X.rank(), 0);
    // Depth-first over the box, then sort by (D.beta, lex).
    auto rec = [&](auto&& self, size_t j, int64_t used) -> void {
        if (j == X.rank()) {
            CurveClass c{cur};
            if (!c.is_zero()) out.push_back(std::move(c));
            return;
        }
        for (int64_t v = 0; used + v * X.dweights[j] <= max_ddeg; ++v) {
            cur[j] = static_cast<int32_t>(v);
            self(self, j + 1, used + v * X.dweights[j]);
        }
        cur[j] = 0;
    };
    rec(rec, 0, 0);
    std::sort(out.begin(), out.end(), [&](const CurveClass& a, const CurveClass& b) {
        int64_t da = X.ddeg(a), db = X.ddeg(b);
        if (da != db) return da < db;
        return a.components < b.components;
    });
    return out;
}

Truncation ddeg_truncation(const TargetGeometry& X, int64_t order, int32_t aux0_max,
                           int32_t zmin, int32_t zmax) {
    std::vector<int64_t> w = X.dweights;
    for (int64_t& x : w)
        if (x <= 0) throw GeometryError("series truncation needs positive D-weights");
    return novikov_truncation(std::move(w), order, aux0_max, zmin, zmax);
}

SmallJReport validate_fano_smallJ(const TargetGeometry& X, int64_t max_ddeg) {
    SmallJReport rep;
    for (auto& beta : effective_classes(X, max_ddeg)) {
        int64_t sum_ddeg = 0;
        for (size_t i = 0; i < X.divisor_count(); ++i) sum_ddeg += X.divisor_deg(i, beta);
        int32_t zmin = static_cast<int32_t>(-(sum_ddeg + X.ring->top_degree() + 2));
        JCoefficient J = toric_J_coefficient(X, beta, zmin, 2);
        // z J_beta must be O(1/z): no z^{-1}, z^0 or higher in J_beta itself.
        for (auto& [zp, c] : J.laurent) {
            if (zp >= -1 && !c.is_zero()) {
                rep.pass = false;
                rep.failures.push_back(beta);
                break;
            }
        }
    }
    return rep;
}

} // namespace thetaforge
