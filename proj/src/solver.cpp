#include "gutterlp/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "gutterlp/error.hpp"
#include "gutterlp/geometry.hpp"

namespace gutterlp {
namespace {

constexpr std::array<std::string_view, 11> kTraceKindNames = {
    "SELECT_TARGET",  "MOVE",          "RESOLVED", "OBSTACLE_BACKOFF", "GUTTER_APPEND", "GUTTER_SKIP_DEGENERATE",
    "SHRINK_BALL",    "EQUALITY_SWITCH", "STALL",  "GUTTER_FULL",      "M_ESCALATION",
};

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void emit(const TraceSink& sink, const SolverState& state, TraceKind kind, std::string detail,
          bool with_dir = true) {
    if (!sink) return;
    TraceEvent ev;
    ev.iteration = state.inner_iter;
    ev.kind = kind;
    ev.p0 = state.p0;
    if (with_dir) ev.dir = state.dir;
    ev.gutter = state.gutter.indices();
    ev.detail = std::move(detail);
    sink(ev);
}

void require_ready(const LinearProgram& lp, const SolverConfig& config) {
    config.validate();
    if (lp.dimension == 0 || lp.constraints.empty()) {
        throw Error(ErrorCode::InvalidArgument, "empty linear program");
    }
    if (!is_normalized(lp)) {
        throw Error(ErrorCode::InvalidArgument, "linear program must be normalized before solving");
    }
}

// Unit vector along the target normal restricted to the gutter's null space,
// which equals (P3 - P1)/|P3 - P1| for the projections P1 of the centre and
// P3 of its target-plane image onto the gutter intersection. The projector is
// applied twice so the result stays orthogonal to every gutter row even when
// the target normal almost lies in their span.
bool refresh_direction(const LinearProgram& lp, SolverState& state, const SolverConfig& config) {
    const Vector& target_normal = lp.constraints[state.target_index].normal;
    Vector w = state.gutter.null_space_part(target_normal);
    const double slope = w.norm();
    if (!(slope > config.geom_tol)) {
        state.dir = Vector();
        return false;
    }
    w /= slope;
    w = state.gutter.null_space_part(w);
    state.dir = w / w.norm();
    return true;
}

void rebuild_pinned_gutter(const LinearProgram& lp, SolverState& state, const SolverConfig& config) {
    state.gutter = GutterBasis(lp.dimension);
    for (std::size_t index : state.pinned_eq) {
        // Dependent pinned planes are implied by the independent ones.
        state.gutter.append_row(index, lp.constraints[index].normal, config.geom_tol);
    }
}

std::size_t most_violated(const LinearProgram& lp, const SolverState& state, const SolverConfig& config,
                          bool& any) {
    any = false;
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lp.size(); ++i) {
        const Constraint& c = lp.constraints[i];
        if (satisfies(c, state.p0, config.feas_tol)) continue;
        const double d = signed_distance(c, state.p0);
        if (!any || d < best_d) {
            best = i;
            best_d = d;
            any = true;
        }
    }
    return best;
}

struct Obstacle {
    std::size_t index = 0;
    double t = std::numeric_limits<double>::infinity();
    double distance = 0.0;
    double cosine = 0.0;
};

// First satisfied plane the ray approaches. A plane the centre already
// touches (d <= 0) is hit at t = 0.
std::optional<Obstacle> scan_obstacles(const LinearProgram& lp, const SolverState& state,
                                       const std::vector<std::size_t>& skipped, const SolverConfig& config) {
    std::optional<Obstacle> best;
    for (std::size_t j = 0; j < lp.size(); ++j) {
        if (j == state.target_index || state.is_pinned(j) || state.gutter.contains(j)) continue;
        if (std::find(skipped.begin(), skipped.end(), j) != skipped.end()) continue;
        const Constraint& c = lp.constraints[j];
        const double d = signed_distance(c, state.p0);
        if (d < -config.feas_tol) continue;  // violated: not protected
        const double cosine = c.normal.dot(state.dir);
        if (cosine >= -config.geom_tol) continue;
        const double t = std::max(d, 0.0) / -cosine;
        if (!best || t < best->t) best = Obstacle{j, t, d, cosine};
    }
    return best;
}

void move_along(SolverState& state, double t, const TraceSink& sink, std::string detail) {
    const Vector next = state.p0 + t * state.dir;
    if (next == state.p0) return;
    state.p0 = next;
    emit(sink, state, TraceKind::Move, std::move(detail));
}

}  // namespace

std::string_view to_string(TraceKind kind) { return kTraceKindNames[static_cast<std::size_t>(kind)]; }

std::optional<TraceKind> trace_kind_from_string(std::string_view name) {
    for (std::size_t k = 0; k < kTraceKindNames.size(); ++k) {
        if (kTraceKindNames[k] == name) return static_cast<TraceKind>(k);
    }
    return std::nullopt;
}

bool SolverState::is_pinned(std::size_t index) const {
    return std::find(pinned_eq.begin(), pinned_eq.end(), index) != pinned_eq.end();
}

InitialPoint initial_point(const LinearProgram& lp, const std::optional<Vector>& start, const SolverConfig& config) {
    InitialPoint out;
    Vector p = start ? *start : Vector::Zero(static_cast<Eigen::Index>(lp.dimension));
    require_dimension(lp.dimension, static_cast<std::size_t>(p.size()), "start point");

    GutterBasis basis(lp.dimension);
    std::vector<std::size_t> dependent;
    for (std::size_t i = 0; i < lp.size(); ++i) {
        if (lp.constraints[i].sense != Sense::EQ) continue;
        out.pinned.push_back(i);
        if (basis.append_row(i, lp.constraints[i].normal, config.geom_tol) == AppendStatus::Degenerate) {
            dependent.push_back(i);
        }
    }
    if (!basis.empty()) {
        p = project_onto_intersection(lp, basis, p, Vector::Zero(static_cast<Eigen::Index>(basis.size())));
    }
    for (std::size_t i : dependent) {
        if (std::abs(signed_distance(lp.constraints[i], p)) > config.feas_tol) {
            out.diagnostic = "equality constraint " + std::to_string(i) + " contradicts the other equalities";
            return out;
        }
    }
    out.point = std::move(p);
    return out;
}

void begin_target(const LinearProgram& lp, SolverState& state, std::size_t target, const SolverConfig& config) {
    if (target >= lp.size()) throw Error(ErrorCode::InvalidArgument, "target index out of range");
    state.target_index = target;
    rebuild_pinned_gutter(lp, state, config);
    if (state.gutter.size() < lp.dimension) {
        refresh_direction(lp, state, config);
    } else {
        state.dir = Vector();
    }
}

ResolveOutcome resolve_constraint(const LinearProgram& lp, SolverState& state, const SolverConfig& config,
                                  const TraceSink& sink) {
    const std::size_t n = lp.dimension;
    const std::size_t i = state.target_index;
    const Constraint& target = lp.constraints.at(i);
    const std::size_t inner_cap = config.inner_limit(lp);
    const double eps = state.epsilon;
    const double contact = eps + config.feas_tol;

    std::vector<std::size_t> skipped;
    std::size_t local_iters = 0;

    if (state.gutter.size() >= n) {
        emit(sink, state, TraceKind::GutterFull, "pinned planes fill the space", false);
        return {ResolveKind::GutterFull, StallReason::None, "gutter full"};
    }
    if (!refresh_direction(lp, state, config)) {
        emit(sink, state, TraceKind::Stall, "target normal lies in the span of the pinned planes", false);
        return {ResolveKind::Stall, StallReason::NoSlope, "no slope on the gutter"};
    }

    while (true) {
        if (++local_iters > inner_cap) {
            emit(sink, state, TraceKind::Stall, "inner iteration cap reached");
            return {ResolveKind::Stall, StallReason::IterationCap,
                    "inner iteration cap reached while resolving constraint " + std::to_string(i)};
        }
        ++state.inner_iter;

        const double target_cos = target.normal.dot(state.dir);
        const double target_d = signed_distance(target, state.p0);
        const bool target_hit = target_cos > config.geom_tol;
        const double target_t =
            target_hit ? std::max(-target_d, 0.0) / target_cos : std::numeric_limits<double>::infinity();
        const std::optional<Obstacle> obstacle = scan_obstacles(lp, state, skipped, config);

        if (!target_hit && !obstacle) {
            emit(sink, state, TraceKind::Stall, "UNBOUNDED_RAY");
            return {ResolveKind::Stall, StallReason::UnboundedRay,
                    "UNBOUNDED_RAY: direction escapes without meeting constraint " + std::to_string(i)};
        }

        if (target_hit && (!obstacle || target_t < obstacle->t)) {
            // Overshoot along the ray so the centre ends at distance eps
            // beyond the target plane, but never past the next obstacle.
            double t_land = target_t + eps / target_cos;
            std::string detail = "target=" + std::to_string(i);
            if (obstacle && obstacle->t < t_land) {
                t_land = 0.5 * (target_t + obstacle->t);
                detail += " overshoot limited by constraint " + std::to_string(obstacle->index);
            }
            move_along(state, t_land, sink, detail);
            emit(sink, state, TraceKind::Resolved, "target=" + std::to_string(i));
            return {ResolveKind::Resolved, StallReason::None, {}};
        }

        const std::size_t j = obstacle->index;
        if (obstacle->distance > contact) {
            // Stop on the ray with the obstacle exactly eps away, then start
            // over from the target normal with an empty (pinned-only) gutter.
            const double t_stop = obstacle->t - eps / -obstacle->cosine;
            move_along(state, std::max(t_stop, 0.0), sink, "approach constraint " + std::to_string(j));
            rebuild_pinned_gutter(lp, state, config);
            skipped.clear();
            if (!refresh_direction(lp, state, config)) {
                emit(sink, state, TraceKind::Stall, "target normal lies in the span of the pinned planes", false);
                return {ResolveKind::Stall, StallReason::NoSlope, "no slope on the gutter"};
            }
            emit(sink, state, TraceKind::ObstacleBackoff, "obstacle=" + std::to_string(j));
            continue;
        }

        // The ball already touches plane j: it joins the gutter.
        if (state.gutter.append_row(j, lp.constraints[j].normal, config.geom_tol) == AppendStatus::Degenerate) {
            skipped.push_back(j);
            emit(sink, state, TraceKind::GutterSkipDegenerate, "constraint=" + std::to_string(j));
            continue;
        }
        if (state.gutter.size() >= n) {
            state.dir = Vector();
            emit(sink, state, TraceKind::GutterAppend, "constraint=" + std::to_string(j), false);
            emit(sink, state, TraceKind::GutterFull, "gutter holds n rows", false);
            return {ResolveKind::GutterFull, StallReason::None, "gutter full"};
        }
        const bool has_slope = refresh_direction(lp, state, config);
        emit(sink, state, TraceKind::GutterAppend, "constraint=" + std::to_string(j), has_slope);
        if (!has_slope) {
            emit(sink, state, TraceKind::Stall, "no slope on the gutter", false);
            return {ResolveKind::Stall, StallReason::NoSlope, "no slope on the gutter"};
        }
        skipped.clear();
    }
}

RepairOutcome repair_or_conclude(const LinearProgram& lp, SolverState& state, const SolverConfig& config,
                                 const TraceSink& sink) {
    const std::size_t i = state.target_index;
    const Constraint& target = lp.constraints.at(i);
    const Vector zeros = Vector::Zero(static_cast<Eigen::Index>(state.gutter.size()));
    const Vector apex = project_onto_intersection(lp, state.gutter, state.p0, zeros);
    const double apex_d = signed_distance(target, apex);
    const double centre_d = signed_distance(target, state.p0);

    if (apex_d < -config.feas_tol) {
        return {RepairKind::Infeasible, "constraint " + std::to_string(i) +
                                            " is separated from the gutter apex (d=" + format_double(apex_d) + ")"};
    }
    const bool flat = std::abs(apex_d) <= config.feas_tol;
    if (flat && target.sense == Sense::GT) {
        return {RepairKind::Infeasible,
                "strict constraint " + std::to_string(i) + " can only be met with equality"};
    }

    // Every plane the centre satisfies must survive the move towards the apex.
    for (std::size_t k = 0; k < lp.size(); ++k) {
        if (k == i) continue;
        const Constraint& c = lp.constraints[k];
        if (satisfies(c, state.p0, config.feas_tol) && !satisfies(c, apex, config.feas_tol)) {
            return {RepairKind::Inconclusive,
                    "gutter apex violates constraint " + std::to_string(k) + "; cannot repair"};
        }
    }

    if (flat) {
        std::vector<std::size_t> joined = state.pinned_eq;
        for (std::size_t g : state.gutter.indices()) {
            if (std::find(joined.begin(), joined.end(), g) == joined.end()) joined.push_back(g);
        }
        if (std::find(joined.begin(), joined.end(), i) == joined.end()) joined.push_back(i);
        state.pinned_eq = std::move(joined);
        rebuild_pinned_gutter(lp, state, config);
        state.p0 = project_onto_intersection(lp, state.gutter, state.p0,
                                             Vector::Zero(static_cast<Eigen::Index>(state.gutter.size())));
        state.dir = Vector();
        emit(sink, state, TraceKind::EqualitySwitch, "target=" + std::to_string(i) + " pinned with gutter", false);
        return {RepairKind::EqualityMode, {}};
    }

    // Ball too large for the corner: centre the new ball halfway between the
    // apex O and the point I where segment O->p0 meets the target plane.
    const double s = apex_d / (apex_d - centre_d);
    const Vector crossing = apex + s * (state.p0 - apex);
    const Vector centre = 0.5 * (apex + crossing);
    double radius = std::numeric_limits<double>::infinity();
    for (std::size_t g : state.gutter.indices()) {
        if (state.is_pinned(g)) continue;
        radius = std::min(radius, signed_distance(lp.constraints[g], centre));
    }
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        return {RepairKind::Inconclusive, "no positive radius fits the gutter corner"};
    }
    state.p0 = centre;
    state.epsilon = radius;
    state.dir = Vector();
    emit(sink, state, TraceKind::ShrinkBall, "epsilon=" + format_double(radius), false);
    return {RepairKind::ShrunkBall, {}};
}

namespace {

// Phase I on an already-initialised state. Returns a verdict only when the
// search ends; FEASIBLE leaves the witness in state.p0.
SolveResult run_feasibility(const LinearProgram& lp, SolverState& state, const SolverConfig& config,
                            const TraceSink& sink) {
    SolveResult result;
    const std::size_t outer_cap = config.outer_limit(lp);
    while (true) {
        bool any = false;
        const std::size_t target = most_violated(lp, state, config, any);
        if (!any) {
            result.verdict = Verdict::Feasible;
            result.point = state.p0;
            break;
        }
        if (state.outer_iter >= outer_cap) {
            result.verdict = Verdict::Stalled;
            result.diagnostics.push_back("outer iteration cap reached");
            break;
        }
        ++state.outer_iter;

        begin_target(lp, state, target, config);
        emit(sink, state, TraceKind::SelectTarget,
             "target=" + std::to_string(target) +
                 " d=" + format_double(signed_distance(lp.constraints[target], state.p0)),
             state.dir.size() != 0);

        const ResolveOutcome outcome = resolve_constraint(lp, state, config, sink);
        if (outcome.kind == ResolveKind::Resolved) continue;
        if (outcome.kind == ResolveKind::Stall && outcome.reason != StallReason::NoSlope) {
            result.verdict = Verdict::Stalled;
            result.diagnostics.push_back(outcome.diagnostic);
            break;
        }
        const RepairOutcome repair = repair_or_conclude(lp, state, config, sink);
        if (repair.kind == RepairKind::ShrunkBall || repair.kind == RepairKind::EqualityMode) continue;
        result.verdict = repair.kind == RepairKind::Infeasible ? Verdict::Infeasible : Verdict::Stalled;
        result.diagnostics.push_back(outcome.diagnostic);
        result.diagnostics.push_back(repair.diagnostic);
        break;
    }
    result.iterations = state.inner_iter;
    result.epsilon_final = state.epsilon;
    return result;
}

// Position of the first (lowest constraint index) non-pinned gutter row whose
// multiplier in ascent = sum y_k a_k is positive. Leaving that plane raises
// the objective, so the current gutter intersection is not optimal.
std::optional<std::size_t> blocking_row(const SolverState& state, const Vector& ascent, double tol) {
    if (state.gutter.empty()) return std::nullopt;
    const Vector y = state.gutter.gram_inverse() * state.gutter.apply(ascent);
    const std::vector<std::size_t>& rows = state.gutter.indices();
    std::optional<std::size_t> best;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (state.is_pinned(rows[k]) || !(y(static_cast<Eigen::Index>(k)) > tol)) continue;
        if (!best || rows[k] < rows[*best]) best = k;
    }
    return best;
}

void release_row(const LinearProgram& lp, SolverState& state, std::size_t position, const SolverConfig& config) {
    const std::vector<std::size_t> rows = state.gutter.indices();
    state.gutter = GutterBasis(lp.dimension);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (k != position) state.gutter.append_row(rows[k], lp.constraints[rows[k]].normal, config.geom_tol);
    }
}

SolverState make_state(const LinearProgram& lp, const SolverConfig& config, const InitialPoint& init) {
    SolverState state;
    state.p0 = *init.point;
    state.epsilon = config.epsilon;
    state.gutter = GutterBasis(lp.dimension);
    state.pinned_eq = init.pinned;
    return state;
}

}  // namespace

SolveResult solve_feasibility(const LinearProgram& lp, const SolverConfig& config, const std::optional<Vector>& start,
                              const TraceSink& sink) {
    require_ready(lp, config);
    const InitialPoint init = initial_point(lp, start, config);
    if (!init.point) {
        SolveResult result;
        result.verdict = Verdict::Infeasible;
        result.epsilon_final = config.epsilon;
        result.diagnostics.push_back(init.diagnostic);
        return result;
    }
    SolverState state = make_state(lp, config, init);
    return run_feasibility(lp, state, config, sink);
}

SolveResult solve_optimum(const LinearProgram& lp, const SolverConfig& config, const std::optional<Vector>& start,
                          const TraceSink& sink) {
    require_ready(lp, config);
    if (!lp.objective) throw Error(ErrorCode::NoObjective, "linear program has no objective");
    const Vector& coefficients = lp.objective->coefficients;
    require_dimension(lp.dimension, static_cast<std::size_t>(coefficients.size()), "objective");

    const InitialPoint init = initial_point(lp, start, config);
    if (!init.point) {
        SolveResult result;
        result.verdict = Verdict::Infeasible;
        result.epsilon_final = config.epsilon;
        result.diagnostics.push_back(init.diagnostic);
        return result;
    }
    SolverState state = make_state(lp, config, init);
    SolveResult result = run_feasibility(lp, state, config, sink);
    if (result.verdict != Verdict::Feasible) return result;

    const Vector ascent = lp.objective->sense == ObjectiveSense::Maximize ? coefficients : Vector(-coefficients);
    const double ascent_norm = ascent.norm();
    if (!(ascent_norm > config.geom_tol)) {
        result.verdict = Verdict::Optimal;
        result.objective_value = coefficients.dot(state.p0);
        result.diagnostics.push_back("zero objective: every feasible point is optimal");
        return result;
    }

    // The artificial plane c.x >= M is appended as constraint m.
    LinearProgram augmented = lp;
    augmented.objective.reset();
    const std::size_t artificial = lp.size();
    augmented.constraints.push_back(Constraint{ascent / ascent_norm, 0.0, Sense::GE});
    auto raise_plane = [&] {
        Constraint& c = augmented.constraints[artificial];
        c.offset = c.normal.dot(state.p0) + std::max(1.0, state.p0.norm()) * config.big_M_growth;
    };
    raise_plane();

    for (std::size_t escalation = 0;; ++escalation) {
        begin_target(augmented, state, artificial, config);
        emit(sink, state, TraceKind::SelectTarget,
             "target=" + std::to_string(artificial) + " objective M=" +
                 format_double(augmented.constraints[artificial].offset),
             state.dir.size() != 0);
        ResolveOutcome outcome = resolve_constraint(augmented, state, config, sink);

        // A full or flat gutter is only optimal when no plane in it holds the
        // objective back; otherwise let go of one such plane and keep sliding.
        const Vector& ascent_unit = augmented.constraints[artificial].normal;
        for (std::size_t releases = 0;; ++releases) {
            const bool settled = outcome.kind == ResolveKind::GutterFull ||
                                 (outcome.kind == ResolveKind::Stall && outcome.reason == StallReason::NoSlope);
            if (!settled) break;
            const std::optional<std::size_t> position = blocking_row(state, ascent_unit, config.geom_tol);
            if (!position) break;
            if (releases >= config.inner_limit(lp)) {
                outcome = {ResolveKind::Stall, StallReason::IterationCap, "gutter release cap reached"};
                break;
            }
            const std::size_t released = state.gutter.indices()[*position];
            release_row(augmented, state, *position, config);
            const bool has_slope = refresh_direction(augmented, state, config);
            emit(sink, state, TraceKind::SelectTarget,
                 "target=" + std::to_string(artificial) + " release constraint=" + std::to_string(released), has_slope);
            outcome = resolve_constraint(augmented, state, config, sink);
        }
        result.iterations = state.inner_iter;

        if (outcome.kind == ResolveKind::Resolved) {
            if (escalation >= config.max_M_escalations) {
                result.verdict = Verdict::Unbounded;
                result.point.reset();
                result.diagnostics.push_back("objective plane reached after " + std::to_string(escalation + 1) +
                                             " placements");
                return result;
            }
            raise_plane();
            emit(sink, state, TraceKind::MEscalation,
                 "M=" + format_double(augmented.constraints[artificial].offset), false);
            continue;
        }
        if (outcome.kind == ResolveKind::Stall && outcome.reason != StallReason::NoSlope) {
            result.verdict = Verdict::Stalled;
            result.point = state.p0;
            result.diagnostics.push_back(outcome.diagnostic);
            return result;
        }

        // Remove the eps gaps: the optimum sits on the gutter intersection.
        const Vector optimum = project_onto_intersection(
            augmented, state.gutter, state.p0, Vector::Zero(static_cast<Eigen::Index>(state.gutter.size())));
        if (!check_point(lp, optimum, config.feas_tol)) {
            result.verdict = Verdict::Stalled;
            result.point = state.p0;
            result.diagnostics.push_back("projected optimum violates a constraint; ball centre returned");
            return result;
        }
        result.verdict = Verdict::Optimal;
        result.point = optimum;
        result.objective_value = coefficients.dot(optimum);
        result.epsilon_final = state.epsilon;
        return result;
    }
}

}  // namespace gutterlp
