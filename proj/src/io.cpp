#include "thetaforge/io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace thetaforge {

namespace fs = std::filesystem;

uint64_t fnv1a64(const std::string& data) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

ordered_json Manifest::to_json() const {
    ordered_json m;
    m["artifact"] = "thetaforge";
    m["version"] = kArtifactVersion;
    m["geometry"] = geometry;
    m["geometry_hash"] = geometry_hash;
    m["order"] = order;
    m["internal_order"] = internal_order;
    m["stages"] = stages;
    if (!mode.empty()) m["mode"] = mode;
    return m;
}

std::string Manifest::csv_comments() const {
    std::ostringstream os;
    os << "# artifact=thetaforge version=" << kArtifactVersion << "\n";
    os << "# geometry=" << geometry << " geometry_hash=" << geometry_hash << "\n";
    os << "# order=" << order << " internal_order=" << internal_order;
    if (!mode.empty()) os << " mode=" << mode;
    os << "\n# stages=";
    for (size_t i = 0; i < stages.size(); ++i) os << (i ? "," : "") << stages[i];
    os << "\n";
    return os.str();
}

Manifest make_manifest(const TargetGeometry& X, int64_t order, int64_t internal_order,
                       std::vector<std::string> stages, std::string mode) {
    Manifest m;
    m.geometry = X.name;
    m.geometry_hash = hex64(fnv1a64(X.canonical_json()));
    m.order = order;
    m.internal_order = internal_order;
    m.stages = std::move(stages);
    m.mode = std::move(mode);
    return m;
}

ordered_json series_to_json(const TargetGeometry& X, const RationalSeries& s,
                            int64_t max_total_degree) {
    ordered_json out = ordered_json::object();
    Rational c0 = s.constant_term();
    if (!c0.is_zero()) out[X.zero_class().str()] = c0.str();
    for (auto& beta : effective_classes(X, s.truncation().order)) {
        if (max_total_degree >= 0 && beta.total_degree() > max_total_degree) continue;
        Rational c = s.coefficient(beta.monomial());
        if (!c.is_zero()) out[beta.str()] = c.str();
    }
    return out;
}

RationalSeries series_from_json(const TargetGeometry& X, int64_t internal_order,
                                const ordered_json& data) {
    RationalSeries s = RationalSeries::zero(ddeg_truncation(X, internal_order), Rational(1));
    for (auto& [key, val] : data.items())
        s.add_term(CurveClass::parse(key).monomial(), Rational::parse(val.get<std::string>()));
    return s;
}

std::string render_csv(const Manifest& manifest, const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream os;
    os << manifest.csv_comments();
    for (size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << "\n";
    for (auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << "\n";
    }
    return os.str();
}

std::string render_json(const Manifest& manifest, const ordered_json& data) {
    ordered_json doc;
    doc["manifest"] = manifest.to_json();
    doc["data"] = data;
    return doc.dump(2) + "\n";
}

void write_file_atomic(const std::string& path, const std::string& content) {
    fs::path target(path);
    fs::path dir = target.parent_path();
    if (!dir.empty()) fs::create_directories(dir);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, target);
}

Cache::Cache(const std::optional<std::string>& dir) {
    if (dir && !dir->empty()) {
        dir_ = *dir;
    } else if (const char* env = std::getenv("THETAFORGE_CACHE"); env && *env) {
        dir_ = env;
    }
}

std::string Cache::path_for(const std::string& key) const {
    return (fs::path(dir_) / (key + ".json")).string();
}

std::optional<ordered_json> Cache::load(const std::string& key, std::string& warn) const {
    if (!enabled()) return std::nullopt;
    fs::path p(path_for(key));
    std::error_code ec;
    if (!fs::exists(p, ec)) return std::nullopt;
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        ordered_json doc = ordered_json::parse(ss.str());
        if (!doc.contains("key") || doc["key"].get<std::string>() != key || !doc.contains("data"))
            throw std::runtime_error("cache payload shape");
        return doc["data"];
    } catch (const std::exception&) {
        warn = "warning: corrupted cache file ignored: " + p.string();
        return std::nullopt;
    }
}

void Cache::store(const std::string& key, const ordered_json& payload) const {
    if (!enabled()) return;
    ordered_json doc;
    doc["key"] = key;
    doc["data"] = payload;
    write_file_atomic(path_for(key), doc.dump());
}

std::string cache_key(const std::string& stage, const std::string& geometry_hash,
                      int64_t internal_order) {
    return stage + "_" + geometry_hash + "_o" + std::to_string(internal_order);
}

} // namespace thetaforge
