#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "kgeom/linalg.hpp"

namespace kgeom {

enum class CheckKind { Residual, Margin, Info };

struct CheckRecord {
    std::string check;
    int point_index = 0;
    Vec point;           // chart point the record was evaluated at
    std::string digest;  // FNV-1a of check name and inputs
    std::map<std::string, double> values;
    double residual = 0.0;  // residual, or the margin for inequality checks
    double tolerance = 0.0;
    bool pass = false;
    std::string note;

    bool operator==(const CheckRecord&) const = default;
};

struct RunReport {
    nlohmann::json config_echo;
    std::string timestamp;  // excluded from comparisons
    std::string kernel;     // active kernel variant
    std::vector<CheckRecord> records;
    int total = 0;
    int passed = 0;
    int failed = 0;
    std::map<std::string, double> worst;  // per check: max residual / min margin

    bool equivalent(const RunReport& o) const;  // everything but the timestamp
};

std::string digest_inputs(const std::string& check, const Vec& point);

nlohmann::json to_json(const RunReport& r);
RunReport report_from_json(const nlohmann::json& j);
std::string render_text(const RunReport& r);

}  // namespace kgeom
