// thetaforge: exact-arithmetic two-point relative invariants and the proper
// Landau-Ginzburg potential of a toric Fano log Calabi-Yau pair, with
// cross-route verification.
#include "thetaforge/io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>

using namespace thetaforge;

namespace {

constexpr int kExitVerifyFailed = 1;
constexpr int kExitGeometryError = 2;
constexpr int kExitPipelineError = 3;

struct Options {
    std::string geometry;
    int64_t order = 6; // total Mori degree
    std::string format = "json";
    std::string out;
    std::string cache_dir;
    std::string mode = "strict";
    bool experimental = false;
};

int64_t internal_order(const TargetGeometry& X, int64_t cli_order) {
    int64_t maxw = *std::max_element(X.dweights.begin(), X.dweights.end());
    return cli_order * maxw;
}

void require_log_cy(const TargetGeometry& X, const Options& opt) {
    if (!X.log_cy && !opt.experimental)
        throw GeometryError("geometry '" + X.name +
                            "' is not log Calabi-Yau (D != c1); pass --experimental to proceed");
    if (!X.log_cy && opt.experimental)
        std::cerr << "warning: D is not anticanonical; results are outside the proven "
                     "hypotheses and labeled experimental\n";
}

void emit(const Options& opt, const std::string& default_name, const std::string& content) {
    std::string path = opt.out.empty() ? default_name : opt.out;
    if (path == "-") {
        std::cout << content;
        return;
    }
    write_file_atomic(path, content);
    std::cout << path << "\n";
}

std::string ext(const Options& opt) { return opt.format == "csv" ? ".csv" : ".json"; }

// The g series, through the cache when one is configured.
GSeries load_or_compute_g(const TargetGeometry& X, int64_t iorder, const Cache& cache,
                          bool* from_cache = nullptr) {
    std::string key = cache_key("g", hex64(fnv1a64(X.canonical_json())), iorder);
    std::string warn;
    if (auto hit = cache.load(key, warn)) {
        if (from_cache) *from_cache = true;
        return GSeries(series_from_json(X, iorder, *hit), X.name, X.dweights);
    }
    if (!warn.empty()) std::cerr << warn << "\n";
    GSeries g = compute_g(X, iorder);
    cache.store(key, series_to_json(X, g.series));
    if (from_cache) *from_cache = false;
    return g;
}

int cmd_compute_g(const Options& opt) {
    TargetGeometry X = load_geometry(opt.geometry);
    require_log_cy(X, opt);
    int64_t iorder = internal_order(X, opt.order);
    Cache cache(opt.cache_dir.empty() ? std::nullopt : std::optional(opt.cache_dir));
    GSeries g = load_or_compute_g(X, iorder, cache);
    Manifest m = make_manifest(X, opt.order, iorder, {"g"});
    emit(opt, "g_" + X.name + "_o" + std::to_string(opt.order) + ".json",
         render_json(m, series_to_json(X, g.series, opt.order)));
    return 0;
}

int cmd_mirror_map(const Options& opt) {
    TargetGeometry X = load_geometry(opt.geometry);
    require_log_cy(X, opt);
    int64_t iorder = internal_order(X, opt.order);
    Cache cache(opt.cache_dir.empty() ? std::nullopt : std::optional(opt.cache_dir));
    MirrorMap mm = build_mirror_map(load_or_compute_g(X, iorder, cache));
    ordered_json data;
    data["forward"] = ordered_json::array();
    data["inverse"] = ordered_json::array();
    for (size_t i = 0; i < mm.forward.size(); ++i) {
        data["forward"].push_back(series_to_json(X, mm.forward[i], opt.order));
        data["inverse"].push_back(series_to_json(X, mm.inverse[i], opt.order));
    }
    Manifest m = make_manifest(X, opt.order, iorder, {"g", "mirror-map"});
    emit(opt, "mirror_map_" + X.name + "_o" + std::to_string(opt.order) + ".json",
         render_json(m, data));
    return 0;
}

int cmd_theta(const Options& opt) {
    TargetGeometry X = load_geometry(opt.geometry);
    require_log_cy(X, opt);
    int64_t iorder = internal_order(X, opt.order);
    Cache cache(opt.cache_dir.empty() ? std::nullopt : std::optional(opt.cache_dir));
    ThetaPotential theta = theta_potential(X, load_or_compute_g(X, iorder, cache));
    TwoPointExtraction two = two_point_invariants(X, theta);

    Manifest m = make_manifest(X, opt.order, iorder, {"g", "mirror-map", "theta"});
    std::vector<std::vector<std::string>> rows;
    for (auto& beta : effective_classes(X, iorder)) {
        if (beta.total_degree() > opt.order) continue;
        Rational c = theta.series.coefficient(beta.monomial());
        if (c.is_zero()) continue;
        int64_t dd = X.ddeg(beta);
        auto it = two.invariants.find(beta);
        std::string n1 = it == two.invariants.end() ? "" : it->second.str();
        rows.push_back({beta.str(), std::to_string(dd), std::to_string(dd - 1), c.str(), n1});
    }
    if (opt.format == "csv") {
        emit(opt, "theta_" + X.name + "_o" + std::to_string(opt.order) + ".csv",
             render_csv(m, {"beta", "D.beta", "n", "theta_coeff", "N_n1"}, rows));
    } else {
        ordered_json data = ordered_json::array();
        for (auto& r : rows)
            data.push_back({{"beta", r[0]},
                            {"D.beta", std::stoll(r[1])},
                            {"n", std::stoll(r[2])},
                            {"theta_coeff", r[3]},
                            {"N_n1", r[4]}});
        emit(opt, "theta_" + X.name + "_o" + std::to_string(opt.order) + ".json",
             render_json(m, data));
    }
    return 0;
}

int cmd_two_point_table(const Options& opt) {
    TargetGeometry X = load_geometry(opt.geometry);
    require_log_cy(X, opt);
    int64_t iorder = internal_order(X, opt.order);
    Cache cache(opt.cache_dir.empty() ? std::nullopt : std::optional(opt.cache_dir));
    ThetaPotential theta = theta_potential(X, load_or_compute_g(X, iorder, cache));
    TwoPointExtraction two = two_point_invariants(X, theta);
    WdvvMode mode = opt.mode == "formal" ? WdvvMode::Formal : WdvvMode::Strict;
    TwoPointTable table = propagate_table(X, two.invariants, iorder, mode);

    Manifest m = make_manifest(X, opt.order, iorder, {"g", "theta", "two-point-table"},
                               wdvv_mode_name(mode));
    std::vector<std::vector<std::string>> rows;
    for (auto& [key, v] : table.entries) {
        auto& [beta, k, p] = key;
        if (beta.total_degree() > opt.order) continue;
        rows.push_back({beta.str(), std::to_string(k), std::to_string(p), v.str(),
                        wdvv_mode_name(mode)});
    }
    if (opt.format == "json") {
        ordered_json data = ordered_json::array();
        for (auto& r : rows)
            data.push_back({{"beta", r[0]},
                            {"k", std::stoll(r[1])},
                            {"p", std::stoll(r[2])},
                            {"value", r[3]},
                            {"mode", r[4]}});
        emit(opt, "two_point_table_" + X.name + "_o" + std::to_string(opt.order) + ".json",
             render_json(m, data));
    } else {
        emit(opt, "two_point_table_" + X.name + "_o" + std::to_string(opt.order) + ".csv",
             render_csv(m, {"beta", "k", "p", "value", "mode"}, rows));
    }
    return 0;
}

int cmd_local_invariants(const Options& opt) {
    TargetGeometry X = load_geometry(opt.geometry);
    require_log_cy(X, opt);
    int64_t iorder = internal_order(X, opt.order);
    BundleGeometry P = build_p1_bundle(X);
    LocalTable local = local_one_point(P, iorder);

    Manifest m = make_manifest(X, opt.order, iorder, {"mirror-correction", "local-invariants"});
    std::vector<std::vector<std::string>> rows;
    for (auto& [beta, v] : local.entries) {
        if (beta.total_degree() > opt.order) continue;
        rows.push_back({beta.str(), std::to_string(X.ddeg(beta)), v.str()});
    }
    if (opt.format == "csv") {
        emit(opt, "local_invariants_" + X.name + "_o" + std::to_string(opt.order) + ".csv",
             render_csv(m, {"beta", "D.beta", "value"}, rows));
    } else {
        ordered_json data = ordered_json::object();
        for (auto& r : rows) data[r[0]] = r[2];
        emit(opt, "local_invariants_" + X.name + "_o" + std::to_string(opt.order) + ".json",
             render_json(m, data));
    }
    return 0;
}

int cmd_verify(const Options& opt) {
    TargetGeometry X = load_geometry(opt.geometry);
    int64_t iorder = internal_order(X, opt.order);
    Cache cache(opt.cache_dir.empty() ? std::nullopt : std::optional(opt.cache_dir));

    struct Line {
        std::string name;
        bool pass;
        std::string detail;
    };
    std::vector<Line> lines;
    auto add = [&](const std::string& name, bool pass, const std::string& detail = "") {
        lines.push_back({name, pass, detail});
        std::cout << (pass ? "[PASS] " : "[FAIL] ") << name
                  << (detail.empty() ? "" : ": " + detail) << "\n";
    };

    SmallJReport smallj = validate_fano_smallJ(X, iorder);
    add("small-J shape (trivial toric mirror map)", smallj.pass,
        smallj.pass ? "" : std::to_string(smallj.failures.size()) + " failing degrees");

    BundleGeometry P = build_p1_bundle(X);
    ExtractionReport ext_rep = reduced_extraction_check(P, iorder);
    add("reduced I-function extraction (beta=0 gives 1, beta!=0 vanish)", ext_rep.pass,
        "beta=0 value " + ext_rep.beta0_value.pretty() + ", " +
            std::to_string(ext_rep.violations.size()) + " violations");

    GSeries g = load_or_compute_g(X, iorder, cache);

    bool round_trip = true;
    std::string rt_detail;
    MirrorMap mm;
    try {
        mm = build_mirror_map(g); // asserts forward/inverse round trip internally
    } catch (const std::exception& e) {
        round_trip = false;
        rt_detail = e.what();
    }
    add("mirror-map round trip", round_trip, rt_detail);

    ThetaPotential theta = theta_potential(X, g);
    LocalTable local = local_one_point(P, iorder);
    CorrespondenceReport sign = verify_sign_correspondence(X, local, theta);
    add("sign correspondence theta vs local", sign.pass,
        sign.pass ? "" : std::to_string(sign.mismatches.size()) + " mismatches");

    TwoPointExtraction two = two_point_invariants(X, theta);
    WdvvMode mode = opt.mode == "formal" ? WdvvMode::Formal : WdvvMode::Strict;
    TwoPointTable table = propagate_table(X, two.invariants, iorder, mode);
    WdvvIdentityReport wdvv = check_wdvv_identity(X, table, iorder);
    add("WDVV identity residuals", wdvv.pass,
        std::to_string(wdvv.equations_checked) + " equations");
    SymmetryReport sym = check_n2_symmetry(X, table);
    add("n^2 symmetry N_{1,n} = n^2 N_{n,1}", sym.pass,
        std::to_string(sym.rows_checked) + " rows");
    SymmetryRouteReport route = verify_wdvv_symmetry_route(X, theta, table);
    add("WDVV route vs theta seeds", route.pass);

    bool all = std::all_of(lines.begin(), lines.end(), [](const Line& l) { return l.pass; });
    std::cout << (all ? "verify: all checks passed\n" : "verify: FAILURES present\n");

    if (!opt.out.empty()) {
        ordered_json data = ordered_json::array();
        for (auto& l : lines)
            data.push_back({{"check", l.name}, {"pass", l.pass}, {"detail", l.detail}});
        Manifest m = make_manifest(X, opt.order, iorder, {"verify"}, wdvv_mode_name(mode));
        write_file_atomic(opt.out, render_json(m, data));
    }
    return all ? 0 : kExitVerifyFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact mirror-theorem pipeline for two-point relative invariants"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--cache-dir", opt.cache_dir, "cache directory (overrides THETAFORGE_CACHE)");

    auto add_common = [&](CLI::App* sub, bool with_mode = false) {
        sub->add_option("geometry", opt.geometry, "built-in name (p2, p1xp1) or config path")
            ->required();
        sub->add_option("--order", opt.order, "series order in total curve degree")
            ->check(CLI::PositiveNumber);
        sub->add_option("--format", opt.format, "output format")
            ->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--out", opt.out, "output path ('-' for stdout)");
        sub->add_flag("--experimental", opt.experimental,
                      "allow non log Calabi-Yau geometries");
        if (with_mode)
            sub->add_option("--mode", opt.mode, "quadratic-term evaluation mode")
                ->check(CLI::IsMember({"strict", "formal"}));
    };

    auto* cg = app.add_subcommand("compute-g", "descendant series g(y)");
    add_common(cg);
    auto* mmc = app.add_subcommand("mirror-map", "forward and inverse mirror map");
    add_common(mmc);
    auto* th = app.add_subcommand("theta", "theta potential and N_{n,1} invariants");
    add_common(th);
    auto* tp = app.add_subcommand("two-point-table", "full N_{k,p} table via WDVV");
    add_common(tp, true);
    auto* li = app.add_subcommand("local-invariants", "one-point local invariants of E");
    add_common(li);
    auto* vf = app.add_subcommand("verify", "run all cross-route checks");
    add_common(vf, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cg->parsed()) return cmd_compute_g(opt);
        if (mmc->parsed()) return cmd_mirror_map(opt);
        if (th->parsed()) return cmd_theta(opt);
        if (tp->parsed()) return cmd_two_point_table(opt);
        if (li->parsed()) return cmd_local_invariants(opt);
        if (vf->parsed()) return cmd_verify(opt);
    } catch (const GeometryError& e) {
        std::cerr << "geometry error: " << e.what() << "\n";
        return kExitGeometryError;
    } catch (const std::exception& e) {
        std::cerr << "pipeline error: " << e.what() << "\n";
        return kExitPipelineError;
    }
    return 0;
}
