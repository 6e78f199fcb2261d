#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kgeom/chen.hpp"
#include "kgeom/immersion.hpp"

// Run configuration: sections of key = value pairs, arrays in brackets,
// '#' comments. Configs are archival artifacts; parsing reports line
// numbers on errors.
//
//   [ambient]     kind = flat | fubini_study | complex_hyperbolic ; m = 2
//   [immersion]   builtin = SPH3 ; param = 1.0
//                 (or components = ["u","v","0","0"] ; vars = [u, v] ;
//                  domain = [[-1,1],[-1,1]])
//   [sample]      grid = [5,5]  or  random = 20 ; seed = 42
//   [checks]      names = [chen.thm1, submanifold.gauss]
//                 tol.<check> = 1e-8 overrides
//   [conventions] ric_term = ambient | intrinsic
//   [output]      format = text | json ; path = report.json

namespace kgeom {

struct RunConfig {
    AmbientKind kind = AmbientKind::Flat;
    int m = 2;

    std::string builtin;  // empty when expression-based
    double param = 0.0;
    std::vector<std::string> components;
    std::vector<std::string> vars;
    Box domain;

    std::vector<int> grid;  // empty -> random sampling
    int random_count = 0;
    unsigned long long seed = 0;
    bool has_seed = false;

    std::vector<std::string> checks;
    std::map<std::string, double> tol_overrides;
    RicSource ric_source = RicSource::Ambient;
    EinsteinSource einstein_source = EinsteinSource::Ambient;

    std::string out_format = "text";
    std::string out_path;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

nlohmann::json config_echo(const RunConfig& cfg);

AmbientSpace ambient_from_config(const RunConfig& cfg);
Immersion immersion_from_config(const RunConfig& cfg);
std::vector<Vec> sample_points_from_config(const RunConfig& cfg, const Immersion& S);

}  // namespace kgeom
