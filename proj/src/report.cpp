#include "kgeom/report.hpp"

#include <array>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <sstream>

namespace kgeom {

bool RunReport::equivalent(const RunReport& o) const {
    return config_echo == o.config_echo && kernel == o.kernel && records == o.records &&
           total == o.total && passed == o.passed && failed == o.failed && worst == o.worst;
}

std::string digest_inputs(const std::string& check, const Vec& point) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](const unsigned char* p, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 1099511628211ULL;
        }
    };
    mix(reinterpret_cast<const unsigned char*>(check.data()), check.size());
    for (double x : point) {
        unsigned char buf[sizeof(double)];
        std::memcpy(buf, &x, sizeof(double));
        mix(buf, sizeof buf);
    }
    char out[17];
    std::snprintf(out, sizeof out, "%016" PRIx64, h);
    return out;
}

nlohmann::json to_json(const RunReport& r) {
    nlohmann::json j;
    j["config"] = r.config_echo;
    j["timestamp"] = r.timestamp;
    j["kernel"] = r.kernel;
    j["records"] = nlohmann::json::array();
    for (const CheckRecord& rec : r.records) {
        nlohmann::json jr;
        jr["check"] = rec.check;
        jr["point_index"] = rec.point_index;
        jr["point"] = rec.point;
        jr["inputs_digest"] = rec.digest;
        jr["values"] = rec.values;
        jr["residual"] = rec.residual;
        jr["tolerance"] = rec.tolerance;
        jr["pass"] = rec.pass;
        if (!rec.note.empty()) jr["note"] = rec.note;
        j["records"].push_back(std::move(jr));
    }
    j["summary"] = {{"total", r.total}, {"passed", r.passed}, {"failed", r.failed}, {"worst", r.worst}};
    return j;
}

RunReport report_from_json(const nlohmann::json& j) {
    RunReport r;
    r.config_echo = j.at("config");
    r.timestamp = j.at("timestamp").get<std::string>();
    r.kernel = j.at("kernel").get<std::string>();
    for (const auto& jr : j.at("records")) {
        CheckRecord rec;
        rec.check = jr.at("check").get<std::string>();
        rec.point_index = jr.at("point_index").get<int>();
        rec.point = jr.at("point").get<Vec>();
        rec.digest = jr.at("inputs_digest").get<std::string>();
        rec.values = jr.at("values").get<std::map<std::string, double>>();
        rec.residual = jr.at("residual").get<double>();
        rec.tolerance = jr.at("tolerance").get<double>();
        rec.pass = jr.at("pass").get<bool>();
        if (jr.contains("note")) rec.note = jr.at("note").get<std::string>();
        r.records.push_back(std::move(rec));
    }
    const auto& s = j.at("summary");
    r.total = s.at("total").get<int>();
    r.passed = s.at("passed").get<int>();
    r.failed = s.at("failed").get<int>();
    r.worst = s.at("worst").get<std::map<std::string, double>>();
    return r;
}

std::string render_text(const RunReport& r) {
    std::ostringstream os;
    char line[160];
    os << "check                          records   pass   fail   worst\n";
    os << "------------------------------------------------------------------\n";
    std::map<std::string, std::array<int, 3>> counts;  // total, pass, fail
    for (const CheckRecord& rec : r.records) {
        auto& c = counts[rec.check];
        ++c[0];
        if (rec.pass)
            ++c[1];
        else
            ++c[2];
    }
    for (const auto& [name, c] : counts) {
        double worst = r.worst.count(name) ? r.worst.at(name) : 0.0;
        std::snprintf(line, sizeof line, "%-30s %7d %6d %6d   %.6e\n", name.c_str(), c[0], c[1], c[2],
                      worst);
        os << line;
    }
    os << "------------------------------------------------------------------\n";
    std::snprintf(line, sizeof line, "total %d   passed %d   failed %d   (kernel: %s)\n", r.total,
                  r.passed, r.failed, r.kernel.c_str());
    os << line;
    if (r.failed > 0) {
        os << "\nfailures:\n";
        for (const CheckRecord& rec : r.records) {
            if (rec.pass) continue;
            os << "  " << rec.check << " @ point " << rec.point_index << " [";
            for (std::size_t i = 0; i < rec.point.size(); ++i) {
                if (i) os << ", ";
                std::snprintf(line, sizeof line, "%.6g", rec.point[i]);
                os << line;
            }
            std::snprintf(line, sizeof line, "]: residual %.6e vs tolerance %.6e", rec.residual,
                          rec.tolerance);
            os << line;
            if (!rec.note.empty()) os << "  (" << rec.note << ")";
            os << "\n";
        }
        os << "note: verify exits nonzero when failures are present\n";
    }
    return os.str();
}

}  // namespace kgeom
