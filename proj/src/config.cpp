#include "kgeom/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace kgeom {

namespace {

struct ConfigError : Error {
    ConfigError(const std::string& what, int line)
        : Error("config: " + what + " (line " + std::to_string(line) + ")") {}
};

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string strip_quotes(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\'')))
        return s.substr(1, s.size() - 2);
    return s;
}

// split the inside of a bracket array at top-level commas
std::vector<std::string> split_array(const std::string& raw, int line) {
    std::string s = trim(raw);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw ConfigError("expected a bracketed array, got '" + raw + "'", line);
    s = s.substr(1, s.size() - 2);
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '[') ++depth;
        if (c == ']') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!trim(cur).empty()) out.push_back(trim(cur));
    return out;
}

double parse_number(const std::string& s, int line) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) throw ConfigError("expected a number, got '" + s + "'", line);
    return v;
}

struct RawConfig {
    // (section, key) -> (value, line)
    std::map<std::pair<std::string, std::string>, std::pair<std::string, int>> kv;

    bool has(const std::string& sec, const std::string& key) const { return kv.count({sec, key}) > 0; }
    std::pair<std::string, int> get(const std::string& sec, const std::string& key) const {
        auto it = kv.find({sec, key});
        if (it == kv.end()) throw Error("config: missing key '" + key + "' in section [" + sec + "]");
        return it->second;
    }
};

RawConfig tokenize(const std::string& text) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("unterminated section header", lineno);
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw ConfigError("empty section name", lineno);
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value'", lineno);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key", lineno);
        if (section.empty()) throw ConfigError("key outside any section", lineno);
        raw.kv[{section, key}] = {value, lineno};
    }
    return raw;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    RawConfig raw = tokenize(text);
    RunConfig cfg;

    auto [kind_s, kind_l] = raw.get("ambient", "kind");
    cfg.kind = ambient_kind_from_string(strip_quotes(kind_s));
    (void)kind_l;
    cfg.m = static_cast<int>(parse_number(raw.get("ambient", "m").first, raw.get("ambient", "m").second));

    if (raw.has("immersion", "builtin")) {
        cfg.builtin = strip_quotes(raw.get("immersion", "builtin").first);
        if (raw.has("immersion", "param"))
            cfg.param = parse_number(raw.get("immersion", "param").first,
                                     raw.get("immersion", "param").second);
    } else if (raw.has("immersion", "components")) {
        auto [comp_s, comp_l] = raw.get("immersion", "components");
        for (const std::string& c : split_array(comp_s, comp_l)) cfg.components.push_back(strip_quotes(c));
        auto [vars_s, vars_l] = raw.get("immersion", "vars");
        for (const std::string& v : split_array(vars_s, vars_l)) cfg.vars.push_back(strip_quotes(v));
        auto [dom_s, dom_l] = raw.get("immersion", "domain");
        for (const std::string& r : split_array(dom_s, dom_l)) {
            auto pair = split_array(r, dom_l);
            if (pair.size() != 2) throw ConfigError("domain ranges need two endpoints", dom_l);
            cfg.domain.ranges.push_back({parse_number(pair[0], dom_l), parse_number(pair[1], dom_l)});
        }
    } else {
        throw Error("config: [immersion] needs either 'builtin' or 'components'");
    }

    if (raw.has("sample", "grid")) {
        auto [grid_s, grid_l] = raw.get("sample", "grid");
        for (const std::string& g : split_array(grid_s, grid_l))
            cfg.grid.push_back(static_cast<int>(parse_number(g, grid_l)));
    } else if (raw.has("sample", "random")) {
        auto [rnd_s, rnd_l] = raw.get("sample", "random");
        cfg.random_count = static_cast<int>(parse_number(rnd_s, rnd_l));
        if (!raw.has("sample", "seed"))
            throw Error("config: random sampling requires a seed in [sample]");
    } else {
        throw Error("config: [sample] needs 'grid' or 'random'");
    }
    if (raw.has("sample", "seed")) {
        auto [seed_s, seed_l] = raw.get("sample", "seed");
        cfg.seed = static_cast<unsigned long long>(parse_number(seed_s, seed_l));
        cfg.has_seed = true;
    }

    auto [names_s, names_l] = raw.get("checks", "names");
    for (const std::string& n : split_array(names_s, names_l)) cfg.checks.push_back(strip_quotes(n));
    for (const auto& [sk, vl] : raw.kv) {
        if (sk.first != "checks" || sk.second.rfind("tol.", 0) != 0) continue;
        double tol = parse_number(vl.first, vl.second);
        if (!(tol > 0.0)) throw ConfigError("tolerance must be positive", vl.second);
        cfg.tol_overrides[sk.second.substr(4)] = tol;
    }

    if (raw.has("conventions", "ric_term")) {
        std::string v = strip_quotes(raw.get("conventions", "ric_term").first);
        if (v == "ambient")
            cfg.ric_source = RicSource::Ambient;
        else if (v == "intrinsic")
            cfg.ric_source = RicSource::Intrinsic;
        else
            throw ConfigError("ric_term must be 'ambient' or 'intrinsic'",
                              raw.get("conventions", "ric_term").second);
    }
    if (raw.has("conventions", "einstein")) {
        std::string v = strip_quotes(raw.get("conventions", "einstein").first);
        if (v == "ambient")
            cfg.einstein_source = EinsteinSource::Ambient;
        else if (v == "submanifold")
            cfg.einstein_source = EinsteinSource::Submanifold;
        else
            throw ConfigError("einstein must be 'ambient' or 'submanifold'",
                              raw.get("conventions", "einstein").second);
    }
    if (raw.has("output", "format")) {
        cfg.out_format = strip_quotes(raw.get("output", "format").first);
        if (cfg.out_format != "text" && cfg.out_format != "json")
            throw ConfigError("output format must be 'text' or 'json'",
                              raw.get("output", "format").second);
    }
    if (raw.has("output", "path")) cfg.out_path = strip_quotes(raw.get("output", "path").first);
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

nlohmann::json config_echo(const RunConfig& cfg) {
    nlohmann::json j;
    j["ambient"] = {{"kind", to_string(cfg.kind)}, {"m", cfg.m}};
    if (!cfg.builtin.empty())
        j["immersion"] = {{"builtin", cfg.builtin}, {"param", cfg.param}};
    else {
        j["immersion"] = {{"components", cfg.components}, {"vars", cfg.vars}};
        nlohmann::json dom = nlohmann::json::array();
        for (const auto& r : cfg.domain.ranges) dom.push_back({r[0], r[1]});
        j["immersion"]["domain"] = dom;
    }
    if (!cfg.grid.empty())
        j["sample"] = {{"grid", cfg.grid}};
    else
        j["sample"] = {{"random", cfg.random_count}};
    if (cfg.has_seed) j["sample"]["seed"] = cfg.seed;
    j["checks"] = cfg.checks;
    if (!cfg.tol_overrides.empty()) j["tol_overrides"] = cfg.tol_overrides;
    j["conventions"] = {
        {"ric_term", cfg.ric_source == RicSource::Ambient ? "ambient" : "intrinsic"},
        {"einstein", cfg.einstein_source == EinsteinSource::Ambient ? "ambient" : "submanifold"}};
    return j;
}

AmbientSpace ambient_from_config(const RunConfig& cfg) { return make_ambient(cfg.kind, cfg.m); }

Immersion immersion_from_config(const RunConfig& cfg) {
    AmbientSpace A = ambient_from_config(cfg);
    if (!cfg.builtin.empty()) return make_builtin(cfg.builtin, cfg.param, A);
    return make_expr_immersion(A, cfg.components, cfg.vars, cfg.domain);
}

std::vector<Vec> sample_points_from_config(const RunConfig& cfg, const Immersion& S) {
    if (!cfg.grid.empty()) return sample_grid(S.domain, cfg.grid);
    return sample_random(S.domain, cfg.random_count, cfg.seed);
}

}  // namespace kgeom
