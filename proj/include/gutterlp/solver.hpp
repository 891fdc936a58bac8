#ifndef GUTTERLP_SOLVER_HPP
#define GUTTERLP_SOLVER_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gutterlp/gram.hpp"
#include "gutterlp/model.hpp"

namespace gutterlp {

enum class TraceKind {
    SelectTarget,
    Move,
    Resolved,
    ObstacleBackoff,
    GutterAppend,
    GutterSkipDegenerate,
    ShrinkBall,
    EqualitySwitch,
    Stall,
    GutterFull,
    MEscalation,
};

std::string_view to_string(TraceKind kind);
std::optional<TraceKind> trace_kind_from_string(std::string_view name);

/// Snapshot taken right after a geometric event. `dir` is empty when no
/// direction exists (for instance once the gutter holds n rows).
struct TraceEvent {
    std::size_t iteration = 0;
    TraceKind kind = TraceKind::Move;
    Vector p0;
    Vector dir;
    std::vector<std::size_t> gutter;
    std::string detail;
};

using TraceSink = std::function<void(const TraceEvent&)>;

struct SolverState {
    Vector p0;
    double epsilon = 0.0;
    GutterBasis gutter;
    Vector dir;
    std::size_t target_index = 0;
    /// Constraints held as equalities: input EQ rows plus planes switched
    /// to equality when the feasible region turns out to be flat.
    std::vector<std::size_t> pinned_eq;
    std::size_t outer_iter = 0;
    std::size_t inner_iter = 0;

    bool is_pinned(std::size_t index) const;
};

enum class ResolveKind { Resolved, GutterFull, Stall };
enum class StallReason { None, NoSlope, UnboundedRay, IterationCap };

struct ResolveOutcome {
    ResolveKind kind = ResolveKind::Stall;
    StallReason reason = StallReason::None;
    std::string diagnostic;
};

enum class RepairKind { ShrunkBall, EqualityMode, Infeasible, Inconclusive };

struct RepairOutcome {
    RepairKind kind = RepairKind::Inconclusive;
    std::string diagnostic;
};

struct InitialPoint {
    /// Empty when the equality constraints contradict each other.
    std::optional<Vector> point;
    std::vector<std::size_t> pinned;
    std::string diagnostic;
};

/// Start point for a solve: `start` (or the origin) projected onto the EQ
/// constraints so every pinned equality holds from the first step.
InitialPoint initial_point(const LinearProgram& lp, const std::optional<Vector>& start,
                           const SolverConfig& config);

/// Rebuilds the gutter from the pinned equalities and makes `target` the
/// constraint being resolved.
void begin_target(const LinearProgram& lp, SolverState& state, std::size_t target, const SolverConfig& config);

/// Moves the ball towards the target plane without crossing any satisfied
/// plane, collecting touched planes into the gutter and sliding along their
/// intersection. Returns once the target is resolved, the gutter fills all n
/// dimensions, or no useful direction remains.
ResolveOutcome resolve_constraint(const LinearProgram& lp, SolverState& state, const SolverConfig& config,
                                  const TraceSink& sink = {});

/// Called after a stall or full gutter: shrinks an oversized ball, pins a
/// flat region as equalities, or concludes infeasibility.
RepairOutcome repair_or_conclude(const LinearProgram& lp, SolverState& state, const SolverConfig& config,
                                 const TraceSink& sink = {});

SolveResult solve_feasibility(const LinearProgram& lp, const SolverConfig& config,
                              const std::optional<Vector>& start = std::nullopt, const TraceSink& sink = {});

/// Phase I followed by the search against an artificial objective plane
/// c.x >= M. Throws Error(NoObjective) when `lp` has no objective.
SolveResult solve_optimum(const LinearProgram& lp, const SolverConfig& config,
                          const std::optional<Vector>& start = std::nullopt, const TraceSink& sink = {});

}  // namespace gutterlp

#endif  // GUTTERLP_SOLVER_HPP
