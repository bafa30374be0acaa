#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace crgeo {

/// One verified identity or classification probe. `identity` is a plain
/// ASCII rendering of the checked relation; `residual` is the largest
/// absolute deviation seen over all sampled points and probe vectors.
struct CheckRow {
    std::string id;
    std::string identity;
    double residual = 0.0;
    double tol = 0.0;
    std::string verdict;  // "pass" | "fail" | "n/a"
    std::string note;

    static CheckRow make(std::string id, std::string identity, double residual, double tol,
                         std::string note = "") {
        CheckRow r;
        r.id = std::move(id);
        r.identity = std::move(identity);
        r.residual = residual;
        r.tol = tol;
        r.verdict = residual <= tol ? "pass" : "fail";
        r.note = std::move(note);
        return r;
    }

    static CheckRow not_applicable(std::string id, std::string identity, std::string note) {
        CheckRow r;
        r.id = std::move(id);
        r.identity = std::move(identity);
        r.verdict = "n/a";
        r.note = std::move(note);
        return r;
    }
};

struct Report {
    std::vector<CheckRow> rows;
    std::map<std::string, std::string> labels;  // classification verdicts etc.

    void add(CheckRow row) { rows.push_back(std::move(row)); }

    void label(const std::string& key, const std::string& value) { labels[key] = value; }

    bool all_passed() const {
        for (const CheckRow& r : rows)
            if (r.verdict == "fail") return false;
        return true;
    }

    double worst_residual() const {
        double w = 0.0;
        for (const CheckRow& r : rows)
            if (r.verdict != "n/a" && r.residual > w) w = r.residual;
        return w;
    }

    const CheckRow* find(const std::string& id) const {
        for (const CheckRow& r : rows)
            if (r.id == id) return &r;
        return nullptr;
    }
};

/// FNV-1a, used to fingerprint the input text inside reports.
inline std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return s;
}

inline nlohmann::json to_json(const Report& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const CheckRow& r : report.rows) {
        nlohmann::json row;
        row["id"] = r.id;
        row["identity"] = r.identity;
        if (r.verdict != "n/a") {
            row["residual"] = r.residual;
            row["tol"] = r.tol;
        }
        row["verdict"] = r.verdict;
        if (!r.note.empty()) row["note"] = r.note;
        rows.push_back(row);
    }
    nlohmann::json j;
    j["rows"] = rows;
    j["labels"] = report.labels;
    j["all_passed"] = report.all_passed();
    return j;
}

} // namespace crgeo
