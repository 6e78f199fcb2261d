#pragma once

#include <string>
#include <vector>

#include "kgeom/config.hpp"
#include "kgeom/report.hpp"

// Check catalog and orchestration. A run evaluates every requested check at
// every sample point; a failing or throwing point produces a failing record
// and the run keeps going. Records are canonicalized (check name, then point
// index) so identical config+seed gives identical reports.

namespace kgeom {

struct CheckInfo {
    std::string name;
    std::string description;
    double default_tol;
    CheckKind kind;
};

// stable (alphabetical) order
const std::vector<CheckInfo>& check_catalog();
const CheckInfo* find_check(const std::string& name);

RunReport run_config(const RunConfig& cfg, int jobs = 1, double tol_scale = 1.0);

// builtin fixtures, parameter schemas and the check catalog
std::string list_builtins_text();

}  // namespace kgeom
