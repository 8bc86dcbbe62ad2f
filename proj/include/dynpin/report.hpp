#pragma once

#include <cstdint>
#include <ostream>

#include <json.hpp>

#include "dynpin/metrics.hpp"
#include "dynpin/oracle.hpp"
#include "dynpin/sim.hpp"

namespace dynpin {

/// Profiles are written with 1-based CPU numbers. The per-profile objective
/// table is included up to `max_f_values` entries.
nlohmann::ordered_json to_json(const EquilibriumReport& report, std::uint64_t max_f_values = 100'000);

nlohmann::ordered_json to_json(const CompletionStats& stats);

inline constexpr const char* kTraceCsvHeader =
    "step,time_sec,thread_id,cpu,true_speed,measured_speed,utility,strategy_max,strategy_argmax";

/// One row per (step, active thread). thread_id, cpu and strategy_argmax are
/// 1-based; time_sec is the end of the period.
void write_trace_csv(std::ostream& out, const Trace& trace);

}  // namespace dynpin
