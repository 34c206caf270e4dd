#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "../errors.hpp"
#include "fit.hpp"
#include "joint_moment.hpp"

namespace lmlab {

// One JSON line per (spec, T): {ids, k, T, value, error, clamped_fraction, wall_ms}.
struct MomentRecord {
    std::vector<std::string> ids;
    std::vector<double> k;
    double T = 0, value = 0, error = 0, clamped_fraction = 0, wall_ms = 0;
};

inline MomentRecord make_record(const MomentSpec& spec, const MomentResult& r) {
    MomentRecord m;
    for (const auto& id : spec.ids) m.ids.push_back(id.canonical());
    m.k = spec.k;
    m.T = spec.T;
    m.value = r.value;
    m.error = r.error;
    m.clamped_fraction = r.clamped_fraction;
    m.wall_ms = r.wall_ms;
    return m;
}

inline std::string to_json_line(const MomentRecord& m) {
    nlohmann::ordered_json j;
    j["ids"] = m.ids;
    j["k"] = m.k;
    j["T"] = m.T;
    j["value"] = m.value;
    j["error"] = m.error;
    j["clamped_fraction"] = m.clamped_fraction;
    j["wall_ms"] = m.wall_ms;
    return j.dump();
}

inline std::vector<MomentRecord> read_records(std::istream& is) {
    std::vector<MomentRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            MomentRecord m;
            m.ids = j.at("ids").get<std::vector<std::string>>();
            m.k = j.at("k").get<std::vector<double>>();
            m.T = j.at("T").get<double>();
            m.value = j.at("value").get<double>();
            m.error = j.value("error", 0.0);
            m.clamped_fraction = j.value("clamped_fraction", 0.0);
            m.wall_ms = j.value("wall_ms", 0.0);
            out.push_back(std::move(m));
        } catch (const nlohmann::json::exception& e) {
            throw DataError("moment record line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

// Fit over the records matching ids and k.
inline FitResult fit_records(const std::vector<MomentRecord>& recs, const std::vector<std::string>& ids,
                             const std::vector<double>& k) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : recs)
        if (r.ids == ids && r.k == k) pts.emplace_back(r.T, r.value);
    return scaling_fit(pts);
}

} // namespace lmlab
