#pragma once

#include <cstdint>
#include <fstream>
#include <limits>

#include "json.hpp"

#include "chipfire/digraph.hpp"
#include "chipfire/lattice.hpp"
#include "chipfire/sandpile.hpp"

namespace chipfire {

using nlohmann::json;

/// Desk-scale values stay JSON numbers; anything outside int64 becomes a
/// decimal string so no digit is ever lost.
inline json int_to_json(const Int& x) {
    static const Int lo = (std::numeric_limits<std::int64_t>::min)();
    static const Int hi = (std::numeric_limits<std::int64_t>::max)();
    if (x >= lo && x <= hi) return x.convert_to<std::int64_t>();
    return x.str();
}

inline json vec_to_json(const Vec& v) {
    json arr = json::array();
    for (const Int& x : v) arr.push_back(int_to_json(x));
    return arr;
}

inline json vec_list_to_json(const std::vector<Vec>& list) {
    json arr = json::array();
    for (const Vec& v : list) arr.push_back(vec_to_json(v));
    return arr;
}

/// Matrix input schema: {"n": int, "rows": [[int, ...], ...]}, row-major.
inline Mat matrix_from_json(const json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("rows")) {
        throw UsageError("matrix JSON must be an object with \"n\" and \"rows\"");
    }
    if (!j["n"].is_number_integer() || j["n"].get<std::int64_t>() < 1) {
        throw UsageError("matrix JSON field \"n\" must be a positive integer");
    }
    const auto n = static_cast<std::size_t>(j["n"].get<std::int64_t>());
    if (!j["rows"].is_array() || j["rows"].size() != n) {
        throw UsageError("matrix JSON field \"rows\" must be an array of n rows");
    }
    Mat m(n, Vec(n));
    for (std::size_t i = 0; i < n; ++i) {
        const json& row = j["rows"][i];
        if (!row.is_array() || row.size() != n) {
            throw UsageError("matrix JSON row " + std::to_string(i + 1) +
                             " must be an array of n integers");
        }
        for (std::size_t k = 0; k < n; ++k) {
            if (!row[k].is_number_integer()) {
                throw UsageError("matrix JSON entry (" + std::to_string(i + 1) + "," +
                                 std::to_string(k + 1) + ") is not an integer");
            }
            m[i][k] = row[k].get<std::int64_t>();
        }
    }
    return m;
}

inline Mat load_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open matrix file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw UsageError("malformed JSON in " + path + ": " + e.what());
    }
    return matrix_from_json(j);
}

inline json matrix_to_json(const Mat& m) {
    json rows = json::array();
    for (const Vec& r : m) rows.push_back(vec_to_json(r));
    return json{{"n", m.size()}, {"rows", rows}};
}

inline json record_to_json(const ToppleRecord& record) {
    return json{{"sequence", record.sequence},
                {"representation", vec_to_json(record.representation)}};
}

inline json validation_to_json(const ValidationReport& report) {
    json j{{"is_toppling", report.is_toppling},
           {"det", int_to_json(report.det)},
           {"violations", report.violations}};
    j["row_certificate"] =
        report.row_certificate ? vec_to_json(report.row_certificate->r) : json(nullptr);
    j["column_certificate"] =
        report.column_certificate ? vec_to_json(*report.column_certificate) : json(nullptr);
    return j;
}

inline json audit_to_json(const AuditReport& report) {
    return json{{"det", int_to_json(report.det)},
                {"parking_count", report.parking_count},
                {"recurrent_count", report.recurrent_count},
                {"violations", report.violations}};
}

inline json digraph_to_json(const SandpileDigraph& d) {
    json mult = json::array();
    for (const auto& row : d.multiplicity) {
        json r = json::array();
        for (const Int& x : row) r.push_back(int_to_json(x));
        mult.push_back(r);
    }
    return json{{"n", d.n}, {"multiplicity", mult}};
}

}  // namespace chipfire
