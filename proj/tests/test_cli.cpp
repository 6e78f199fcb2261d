#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "kgeom/checks.hpp"

using namespace kgeom;

namespace {

const char* kSlantConfig = R"(
[ambient]
kind = flat
m = 2

[immersion]
builtin = SLANT
param = 0.5

[sample]
random = 4
seed = 42

[checks]
names = [chen.thm1, submanifold.gauss]
tol.chen.thm1 = 1e-8
)";

int run_binary(const std::string& args) {
    std::string cmd = std::string(KGEOM_BIN) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("config parsing") {
    RunConfig cfg = parse_config_text(kSlantConfig);
    CHECK(cfg.kind == AmbientKind::Flat);
    CHECK(cfg.m == 2);
    CHECK(cfg.builtin == "SLANT");
    CHECK(cfg.param == doctest::Approx(0.5));
    CHECK(cfg.random_count == 4);
    CHECK(cfg.seed == 42);
    REQUIRE(cfg.checks.size() == 2);
    CHECK(cfg.checks[0] == "chen.thm1");
    CHECK(cfg.tol_overrides.at("chen.thm1") == doctest::Approx(1e-8));

    // parse errors carry line numbers
    CHECK_THROWS_WITH_AS(parse_config_text("[ambient]\nkind flat\n"), doctest::Contains("line 2"),
                         Error);
    // random sampling requires a seed
    CHECK_THROWS_WITH_AS(
        parse_config_text("[ambient]\nkind = flat\nm = 2\n[immersion]\nbuiltin = LAGR2\n"
                          "[sample]\nrandom = 3\n[checks]\nnames = [chen.thm1]\n"),
        doctest::Contains("seed"), Error);
}

TEST_CASE("unknown checks are named") {
    std::string text = std::string(kSlantConfig);
    text.replace(text.find("chen.thm1,"), 10, "chen.thm9,");
    RunConfig cfg = parse_config_text(text);
    CHECK_THROWS_WITH_AS(run_config(cfg), doctest::Contains("chen.thm9"), Error);
}

TEST_CASE("flat slant run: all pass with zero margins") {
    RunConfig cfg = parse_config_text(kSlantConfig);
    RunReport rep = run_config(cfg);
    CHECK(rep.failed == 0);
    CHECK(rep.total == 8);  // 2 checks x 4 points
    for (const CheckRecord& rec : rep.records) {
        CHECK(rec.pass);
        if (rec.check == "chen.thm1") CHECK(std::fabs(rec.values.at("margin")) <= 1e-10);
    }
    CHECK(rep.worst.count("chen.thm1") == 1);
    // records are canonically ordered
    for (std::size_t i = 1; i < rep.records.size(); ++i) {
        const auto& a = rep.records[i - 1];
        const auto& b = rep.records[i];
        CHECK((a.check < b.check || (a.check == b.check && a.point_index < b.point_index)));
    }
}

TEST_CASE("determinism: identical config and seed give identical JSON sans timestamp") {
    RunConfig cfg = parse_config_text(kSlantConfig);
    nlohmann::json a = to_json(run_config(cfg));
    nlohmann::json b = to_json(run_config(cfg));
    a.erase("timestamp");
    b.erase("timestamp");
    CHECK(a.dump() == b.dump());
}

TEST_CASE("report JSON round trip and text rendering") {
    RunConfig cfg = parse_config_text(kSlantConfig);
    RunReport rep = run_config(cfg);
    RunReport back = report_from_json(to_json(rep));
    CHECK(back.equivalent(rep));
    CHECK(back.timestamp == rep.timestamp);

    std::string text = render_text(rep);
    CHECK(text.find("chen.thm1") != std::string::npos);
    CHECK(text.find("failed 0") != std::string::npos);
    CHECK(text.find("exits nonzero") == std::string::npos);  // no failure detail block

    // a failing run renders the advice line (sphere residuals are tiny but nonzero)
    RunConfig fail_cfg = parse_config_text(kSlantConfig);
    fail_cfg.builtin = "SPH3";
    fail_cfg.param = 1.0;
    fail_cfg.tol_overrides["submanifold.gauss"] = 1e-300;
    RunReport fail_rep = run_config(fail_cfg);
    CHECK(fail_rep.failed > 0);
    std::string fail_text = render_text(fail_rep);
    CHECK(fail_text.find("failures:") != std::string::npos);
    CHECK(fail_text.find("exits nonzero") != std::string::npos);
}

TEST_CASE("empty check list gives an empty summary") {
    RunConfig cfg = parse_config_text(kSlantConfig);
    cfg.checks.clear();
    cfg.tol_overrides.clear();
    RunReport rep = run_config(cfg);
    CHECK(rep.total == 0);
    CHECK(rep.failed == 0);
}

TEST_CASE("worker pool matches the sequential run") {
    RunConfig cfg = parse_config_text(kSlantConfig);
    nlohmann::json a = to_json(run_config(cfg, 1));
    nlohmann::json b = to_json(run_config(cfg, 3));
    a.erase("timestamp");
    b.erase("timestamp");
    CHECK(a.dump() == b.dump());
}

TEST_CASE("per-point errors do not abort the run") {
    // the slant plane is not CR, so the split check fails pointwise with a note
    RunConfig cfg = parse_config_text(kSlantConfig);
    cfg.checks = {"crwarp.split", "chen.thm1"};
    cfg.tol_overrides.clear();
    RunReport rep = run_config(cfg);
    int split_fail = 0, thm1_pass = 0;
    for (const CheckRecord& rec : rep.records) {
        if (rec.check == "crwarp.split" && !rec.pass) {
            ++split_fail;
            CHECK(rec.note.find("spectrum") != std::string::npos);
        }
        if (rec.check == "chen.thm1" && rec.pass) ++thm1_pass;
    }
    CHECK(split_fail == 4);
    CHECK(thm1_pass == 4);
}

TEST_CASE("expression-immersion configs run and agree with the builtin") {
    const char* text = R"cfg(
[ambient]
kind = flat
m = 2
[immersion]
components = ["u*cos(t)", "v*cos(t)", "u*sin(t)", "v*sin(t)"]
vars = [u, v, t]
domain = [[0.5, 2.5], [-0.5, 0.5], [0.3, 1.1]]
[sample]
grid = [2, 2, 2]
[checks]
names = [crwarp.split, crwarp.w8, crwarp.thm3]
)cfg";
    RunConfig cfg = parse_config_text(text);
    CHECK(cfg.builtin.empty());
    REQUIRE(cfg.components.size() == 4);
    RunReport rep = run_config(cfg);
    CHECK(rep.failed == 0);

    RunConfig builtin_cfg = parse_config_text(text);
    builtin_cfg.components.clear();
    builtin_cfg.vars.clear();
    builtin_cfg.builtin = "CRW";
    RunReport rep2 = run_config(builtin_cfg);
    REQUIRE(rep.records.size() == rep2.records.size());
    for (std::size_t i = 0; i < rep.records.size(); ++i) {
        if (rep.records[i].check != "crwarp.thm3") continue;
        CHECK(rep.records[i].values.at("margin") ==
              doctest::Approx(rep2.records[i].values.at("margin")).epsilon(1e-9));
    }
}

TEST_CASE("catalog listing is stable and complete") {
    std::string a = list_builtins_text();
    std::string b = list_builtins_text();
    CHECK(a == b);
    CHECK(a.find("SPH3") != std::string::npos);
    CHECK(a.find("crwarp.thm3") != std::string::npos);
    // catalog order is alphabetical
    const auto& cat = check_catalog();
    for (std::size_t i = 1; i < cat.size(); ++i) CHECK(cat[i - 1].name < cat[i].name);
}

TEST_CASE("binary exit codes: passing, failing, config error") {
    std::string dir = KGEOM_CONFIG_DIR;
    CHECK(run_binary("verify " + dir + "/slant_flat.cfg --out /tmp/kgeom_pass.json") == 0);
    CHECK(run_binary("verify " + dir + "/sphere_equality_fail.cfg --out /tmp/kgeom_fail.txt") == 1);
    CHECK(run_binary("verify /nonexistent.cfg") == 2);
    CHECK(run_binary("list") == 0);
    // report re-rendering of the JSON artifact
    CHECK(run_binary("report /tmp/kgeom_pass.json --format text") == 0);
}

TEST_CASE("committed regression configs stay green") {
    std::string dir = KGEOM_CONFIG_DIR;
    for (const char* cfg : {"fs2_line_bochner.cfg", "crw_audit.cfg", "sphere_audit.cfg",
                            "slant_margins.cfg"}) {
        INFO(cfg);
        CHECK(run_binary("verify " + dir + "/" + cfg + " --out /tmp/kgeom_reg.out") == 0);
    }
}

TEST_CASE("KGEOM_OUT_DIR resolves relative output paths") {
    std::string cmd = std::string("mkdir -p /tmp/kgeom_outdir && KGEOM_OUT_DIR=/tmp/kgeom_outdir ") +
                      KGEOM_BIN + " verify " + KGEOM_CONFIG_DIR +
                      "/slant_flat.cfg --out rel.json > /dev/null 2>&1";
    CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    std::ifstream f("/tmp/kgeom_outdir/rel.json");
    CHECK(f.good());
}

TEST_CASE("binary determinism end to end") {
    std::string dir = KGEOM_CONFIG_DIR;
    CHECK(run_binary("verify " + dir + "/fs2_line_bochner.cfg --out /tmp/kgeom_a.json") == 0);
    CHECK(run_binary("verify " + dir + "/fs2_line_bochner.cfg --out /tmp/kgeom_b.json") == 0);
    auto slurp = [](const char* p) {
        std::ifstream in(p);
        nlohmann::json j;
        in >> j;
        j.erase("timestamp");
        return j.dump();
    };
    CHECK(slurp("/tmp/kgeom_a.json") == slurp("/tmp/kgeom_b.json"));
}
