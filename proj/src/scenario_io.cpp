#include "dynpin/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "dynpin/errors.hpp"

namespace dynpin {

namespace {

using nlohmann::json;

const json& require(const json& obj, const std::string& key, const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(path + key, "missing required field");
    return *it;
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& path) {
    for (const auto& [key, value] : obj.items()) {
        if (!known.contains(key)) throw ParseError(path + key, "unknown field");
    }
}

double number(const json& value, const std::string& field) {
    if (!value.is_number()) throw ParseError(field, "expected a number, got " + std::string(value.type_name()));
    const double x = value.get<double>();
    if (!std::isfinite(x)) throw ParseError(field, "must be finite");
    return x;
}

std::uint64_t unsigned_integer(const json& value, const std::string& field) {
    if (!value.is_number_unsigned()) {
        throw ParseError(field, "expected a non-negative integer, got " + std::string(value.type_name()));
    }
    return value.get<std::uint64_t>();
}

std::vector<double> number_array(const json& value, const std::string& field) {
    if (!value.is_array()) throw ParseError(field, "expected an array, got " + std::string(value.type_name()));
    std::vector<double> out;
    for (std::size_t i = 0; i < value.size(); ++i) out.push_back(number(value[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

void check(bool ok, const std::string& field, const std::string& constraint) {
    if (!ok) throw ParseError(field, "must satisfy " + constraint);
}

Platform parse_platform(const json& doc) {
    if (!doc.is_object()) throw ParseError("platform", "expected an object");
    reject_unknown(doc, {"capacities", "loads"}, "platform.");
    Platform p;
    p.capacities = number_array(require(doc, "capacities", "platform."), "platform.capacities");
    p.loads = number_array(require(doc, "loads", "platform."), "platform.loads");
    check(!p.capacities.empty(), "platform.capacities", "at least one CPU");
    check(p.loads.size() == p.capacities.size(), "platform.loads", "same length as platform.capacities");
    for (std::size_t j = 0; j < p.capacities.size(); ++j) {
        check(p.capacities[j] > 0.0, "platform.capacities[" + std::to_string(j) + "]", "capacity > 0");
        check(p.loads[j] >= 0.0 && p.loads[j] < 1.0, "platform.loads[" + std::to_string(j) + "]", "0 <= load < 1");
    }
    return p;
}

ThreadSpec parse_thread(const json& doc, const std::string& path) {
    if (!doc.is_object()) throw ParseError(path, "expected an object");
    reject_unknown(doc, {"demand", "total_work", "arrival_step"}, path + ".");
    ThreadSpec t;
    t.demand = number(require(doc, "demand", path + "."), path + ".demand");
    check(t.demand > 0.0, path + ".demand", "demand > 0");
    if (const auto it = doc.find("total_work"); it != doc.end() && !it->is_null()) {
        t.total_work = number(*it, path + ".total_work");
        check(t.total_work > 0.0, path + ".total_work", "total_work > 0 (or null for unbounded)");
    }
    if (const auto it = doc.find("arrival_step"); it != doc.end()) {
        t.arrival_step = static_cast<std::size_t>(unsigned_integer(*it, path + ".arrival_step"));
    }
    return t;
}

Scenario parse_document(const json& doc) {
    if (!doc.is_object()) throw ParseError("", "scenario document must be a JSON object");
    reject_unknown(doc,
                   {"name", "description", "platform", "threads", "period_sec", "horizon_steps", "noise_cv", "gamma",
                    "epsilon", "lambda", "speed_scale", "seed"},
                   "");

    Scenario s;
    s.platform = parse_platform(require(doc, "platform", ""));

    const json& threads = require(doc, "threads", "");
    if (!threads.is_array()) throw ParseError("threads", "expected an array");
    check(!threads.empty(), "threads", "at least one thread");
    for (std::size_t i = 0; i < threads.size(); ++i) {
        s.threads.push_back(parse_thread(threads[i], "threads[" + std::to_string(i) + "]"));
    }

    s.period_sec = number(require(doc, "period_sec", ""), "period_sec");
    check(s.period_sec > 0.0, "period_sec", "period_sec > 0");
    s.horizon_steps = static_cast<std::size_t>(unsigned_integer(require(doc, "horizon_steps", ""), "horizon_steps"));
    check(s.horizon_steps >= 1, "horizon_steps", "horizon_steps >= 1");
    s.noise_cv = number(require(doc, "noise_cv", ""), "noise_cv");
    check(s.noise_cv >= 0.0, "noise_cv", "noise_cv >= 0");
    s.gamma = number(require(doc, "gamma", ""), "gamma");
    check(s.gamma >= 0.0, "gamma", "gamma >= 0");
    s.epsilon = number(require(doc, "epsilon", ""), "epsilon");
    check(s.epsilon > 0.0 && s.epsilon <= 1.0, "epsilon", "0 < epsilon <= 1");
    s.lambda = number(require(doc, "lambda", ""), "lambda");
    check(s.lambda >= 0.0 && s.lambda < 1.0, "lambda", "0 <= lambda < 1");
    s.speed_scale = number(require(doc, "speed_scale", ""), "speed_scale");
    check(s.speed_scale > 0.0, "speed_scale", "speed_scale > 0");
    s.seed = unsigned_integer(require(doc, "seed", ""), "seed");

    for (std::size_t i = 0; i < s.threads.size(); ++i) {
        check(s.threads[i].arrival_step < s.horizon_steps, "threads[" + std::to_string(i) + "].arrival_step",
              "arrival_step < horizon_steps");
    }

    const GameValidation v = validate_game(s.full_game());
    if (!v.ok) throw ParseError("gamma", "all-thread game is invalid: " + v.diagnostics);
    return s;
}

}  // namespace

Scenario parse_scenario_text(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        // Translate the byte offset into a line/column pair.
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        std::ostringstream msg;
        msg << "syntax error at line " << line << ", column " << column << ": " << e.what();
        throw ParseError("", msg.str());
    }
    return parse_document(doc);
}

Scenario parse_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("", "cannot read scenario file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_scenario_text(buffer.str());
    } catch (const ParseError& e) {
        throw ParseError(e.field(), e.detail() + " (in " + path.string() + ")");
    }
}

nlohmann::ordered_json to_json(const Scenario& s) {
    nlohmann::ordered_json doc;
    doc["platform"] = {{"capacities", s.platform.capacities}, {"loads", s.platform.loads}};
    doc["threads"] = nlohmann::ordered_json::array();
    for (const auto& t : s.threads) {
        nlohmann::ordered_json thread;
        thread["demand"] = t.demand;
        thread["total_work"] = std::isinf(t.total_work) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(t.total_work);
        thread["arrival_step"] = t.arrival_step;
        doc["threads"].push_back(std::move(thread));
    }
    doc["period_sec"] = s.period_sec;
    doc["horizon_steps"] = s.horizon_steps;
    doc["noise_cv"] = s.noise_cv;
    doc["gamma"] = s.gamma;
    doc["epsilon"] = s.epsilon;
    doc["lambda"] = s.lambda;
    doc["speed_scale"] = s.speed_scale;
    doc["seed"] = s.seed;
    return doc;
}

}  // namespace dynpin
