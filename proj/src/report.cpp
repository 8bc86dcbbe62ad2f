#include "dynpin/report.hpp"

#include <cstdio>
#include <string>

namespace dynpin {

namespace {

nlohmann::ordered_json one_based(const AssignmentProfile& profile) {
    auto arr = nlohmann::ordered_json::array();
    for (std::size_t cpu : profile.cpu_of) arr.push_back(cpu + 1);
    return arr;
}

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

}  // namespace

nlohmann::ordered_json to_json(const EquilibriumReport& report, std::uint64_t max_f_values) {
    nlohmann::ordered_json doc;
    doc["agents"] = report.agents;
    doc["cpus"] = report.cpus;
    doc["tolerance"] = report.tolerance;
    doc["speed_scale"] = report.speed_scale;
    doc["f_max"] = report.f_max;
    doc["pure_nash"] = nlohmann::ordered_json::array();
    for (const auto& p : report.pure_nash) doc["pure_nash"].push_back(one_based(p));
    doc["efficient"] = nlohmann::ordered_json::array();
    for (const auto& p : report.efficient) doc["efficient"].push_back(one_based(p));
    if (report.f_values.size() <= max_f_values) {
        auto table = nlohmann::ordered_json::array();
        for (std::uint64_t code = 0; code < report.f_values.size(); ++code) {
            table.push_back({{"profile", one_based(profile_from_code(code, report.agents, report.cpus))},
                             {"f", report.f_values[code]}});
        }
        doc["f_values"] = std::move(table);
    } else {
        doc["f_values"] = nullptr;
        doc["f_values_omitted"] = report.f_values.size();
    }
    return doc;
}

nlohmann::ordered_json to_json(const CompletionStats& stats) {
    nlohmann::ordered_json doc;
    doc["makespans_sec"] = stats.makespans;
    doc["mean_sec"] = stats.mean;
    doc["sd_sec"] = stats.sd;
    doc["sd_defined"] = stats.sd_defined;
    return doc;
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
    out << kTraceCsvHeader << '\n';
    for (const auto& rec : trace.steps) {
        const std::string time = num(static_cast<double>(rec.step + 1) * trace.period_sec);
        for (std::size_t i = 0; i < rec.active.size(); ++i) {
            const auto& x = rec.strategies[i];
            out << rec.step << ',' << time << ',' << rec.active[i] + 1 << ',' << rec.profile[i] + 1 << ','
                << num(rec.true_speeds[i]) << ',' << num(rec.measured_speeds[i]) << ',' << num(rec.utility) << ','
                << num(x.max()) << ',' << x.argmax() + 1 << '\n';
        }
    }
}

}  // namespace dynpin
