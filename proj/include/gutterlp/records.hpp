#ifndef GUTTERLP_RECORDS_HPP
#define GUTTERLP_RECORDS_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gutterlp/model.hpp"
#include "gutterlp/solver.hpp"
#include "gutterlp/testkit.hpp"

namespace gutterlp {

/// One-line JSON object: verdict, point, objective, iterations,
/// epsilon_final, diagnostics (in that order).
std::string result_record_json(const SolveResult& result);

/// One-line JSON object: iteration, kind, p0, dir, gutter, detail.
std::string trace_event_json(const TraceEvent& event);

/// Inverse of trace_event_json applied line by line; blank lines are skipped.
/// Throws SyntaxError on malformed records.
std::vector<TraceEvent> parse_trace_jsonl(std::string_view text);

std::string oracle_record_json(const testkit::OracleResult& result);

std::string certificate_json(const testkit::GeneratedInstance& instance);

/// Two-dimensional rendering: shaded feasible half-planes, constraint lines
/// and the trajectory of the ball centre. Throws InvalidArgument unless
/// lp.dimension == 2.
std::string render_svg(const LinearProgram& lp, const std::vector<TraceEvent>& trace,
                       const std::optional<Vector>& final_point);

}  // namespace gutterlp

#endif  // GUTTERLP_RECORDS_HPP
