#pragma once

#include <ostream>
#include <string>

#include "gnd/adversary.hpp"
#include "gnd/fractional_solver.hpp"
#include "gnd/instance.hpp"
#include "gnd/online_solver.hpp"
#include "gnd/verifier.hpp"

namespace gnd {

// One JSON record per request plus a trailing summary record.
void write_trace_jsonl(const RunTrace& trace, const Instance& inst, std::ostream& out);

// request,marginal_cost,cumulative_cost
void write_trace_csv(const RunTrace& trace, std::ostream& out);

std::string certificate_to_json(const Certificate& cert);
std::string fractional_report_to_json(const FractionalReport& report, const Instance& inst);
std::string adversary_report_to_json(const AdversaryRunReport& report);

} // namespace gnd
