// Output serialization, run manifests, and the content-addressed cache.
// Rationals travel as "num/den" strings everywhere; files are byte-stable
// across reruns (manifests carry no timestamps).
#pragma once

#include "thetaforge/localgw.hpp"
#include "thetaforge/mirror.hpp"
#include "thetaforge/wdvv.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace thetaforge {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kArtifactVersion = "0.1.0";

uint64_t fnv1a64(const std::string& data);
std::string hex64(uint64_t v);

struct Manifest {
    std::string geometry;
    std::string geometry_hash;
    int64_t order = 0;          // CLI order (total Mori degree)
    int64_t internal_order = 0; // D.beta truncation bound
    std::vector<std::string> stages;
    std::string mode; // set for table outputs

    ordered_json to_json() const;
    std::string csv_comments() const;
};

Manifest make_manifest(const TargetGeometry& X, int64_t order, int64_t internal_order,
                       std::vector<std::string> stages, std::string mode = "");

// Series <-> JSON object keyed by curve-class strings, in (D.beta, lex) order.
ordered_json series_to_json(const TargetGeometry& X, const RationalSeries& s,
                            int64_t max_total_degree = -1);
RationalSeries series_from_json(const TargetGeometry& X, int64_t internal_order,
                                const ordered_json& data);

std::string render_csv(const Manifest& manifest, const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows);
std::string render_json(const Manifest& manifest, const ordered_json& data);

// Atomic write: temp file in the target directory, then rename.
void write_file_atomic(const std::string& path, const std::string& content);

class Cache {
public:
    // Resolution order: explicit dir, then THETAFORGE_CACHE, else disabled.
    explicit Cache(const std::optional<std::string>& dir);

    bool enabled() const { return !dir_.empty(); }
    std::string path_for(const std::string& key) const;

    // Returns the payload on a clean hit; on a corrupted file emits a warning
    // through `warn` and reports a miss.
    std::optional<ordered_json> load(const std::string& key, std::string& warn) const;
    void store(const std::string& key, const ordered_json& payload) const;

private:
    std::string dir_;
};

std::string cache_key(const std::string& stage, const std::string& geometry_hash,
                      int64_t internal_order);

} // namespace thetaforge
