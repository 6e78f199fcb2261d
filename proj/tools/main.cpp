#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "kgeom/checks.hpp"

namespace {

std::string resolve_out_path(const std::string& path) {
    if (path.empty() || path.front() == '/') return path;
    const char* dir = std::getenv("KGEOM_OUT_DIR");
    if (!dir || !*dir) return path;
    std::string d(dir);
    if (d.back() != '/') d.push_back('/');
    return d + path;
}

int emit(const kgeom::RunReport& rep, const std::string& format, const std::string& path) {
    std::string body =
        format == "json" ? kgeom::to_json(rep).dump(2) + "\n" : kgeom::render_text(rep);
    std::string out = resolve_out_path(path);
    if (out.empty()) {
        std::cout << body;
    } else {
        std::ofstream f(out);
        if (!f) {
            std::cerr << "error: cannot write '" << out << "'\n";
            return 2;
        }
        f << body;
    }
    return rep.failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical curvature-identity and inequality verifier for Kaehler model spaces"};
    app.require_subcommand(1);

    std::string config_path, format_override, out_override, report_path;
    double tol_scale = 1.0;
    unsigned long long seed_override = 0;
    bool has_seed_override = false;
    int jobs = 1;

    CLI::App* verify = app.add_subcommand("verify", "run the checks of a config file");
    verify->add_option("config", config_path, "config file")->required();
    verify->add_option("--tol-scale", tol_scale, "multiply every tolerance");
    verify->add_option("--seed", seed_override, "override the sample seed")
        ->each([&](const std::string&) { has_seed_override = true; });
    verify->add_option("--jobs", jobs, "worker threads for point dispatch");
    verify->add_option("--format", format_override, "text|json (overrides the config)");
    verify->add_option("--out", out_override, "output path (overrides the config)");

    CLI::App* list = app.add_subcommand("list", "print builtin fixtures and the check catalog");

    CLI::App* report = app.add_subcommand("report", "re-render a JSON report");
    report->add_option("json", report_path, "report file")->required();
    std::string report_format = "text";
    report->add_option("--format", report_format, "text|json");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            std::cout << kgeom::list_builtins_text();
            return 0;
        }
        if (report->parsed()) {
            std::ifstream in(report_path);
            if (!in) {
                std::cerr << "error: cannot open '" << report_path << "'\n";
                return 2;
            }
            nlohmann::json j;
            in >> j;
            kgeom::RunReport rep = kgeom::report_from_json(j);
            std::string body =
                report_format == "json" ? kgeom::to_json(rep).dump(2) + "\n" : kgeom::render_text(rep);
            std::cout << body;
            return 0;
        }
        kgeom::RunConfig cfg = kgeom::parse_config_file(config_path);
        if (has_seed_override) {
            cfg.seed = seed_override;
            cfg.has_seed = true;
        }
        kgeom::RunReport rep = kgeom::run_config(cfg, jobs, tol_scale);
        std::string format = format_override.empty() ? cfg.out_format : format_override;
        std::string path = out_override.empty() ? cfg.out_path : out_override;
        return emit(rep, format, path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
