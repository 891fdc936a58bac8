#ifndef GUTTERLP_TESTKIT_HPP
#define GUTTERLP_TESTKIT_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gutterlp/model.hpp"
#include "gutterlp/solver.hpp"

// Ground truth for tests, the bench harness and the CLI's oracle command.
// Nothing in here shares code paths with the solver's projection or Gram
// machinery: the dense solves go through Eigen's LU factorizations.
namespace gutterlp::testkit {

struct OracleResult {
    Verdict verdict = Verdict::Infeasible;
    std::optional<Vector> point;
    std::optional<double> objective_value;
};

inline constexpr std::size_t kOracleMaxDimension = 8;
inline constexpr std::size_t kOracleMaxConstraints = 20;

/// Brute-force vertex enumeration over every n-subset of the constraint
/// planes plus the faces of the box |x_k| <= bound. Strict constraints are
/// treated as their closure. Without an objective the first feasible vertex
/// is returned as a FEASIBLE witness. Throws Error(ScaleExceeded) beyond
/// n = 8 or m = 20.
OracleResult oracle_solve(const LinearProgram& lp, double bound = 1e3);

/// Closest point to p satisfying rows . q = targets, from a dense KKT solve.
/// Throws Error(RankDeficient) when the rows are dependent.
Vector oracle_projection(const Matrix& rows, const Vector& p, const Vector& targets);

struct FeasibleInterior {
    Vector point;
    double slack = 0.0;
};

struct InfeasiblePair {
    std::size_t index_a = 0;
    std::size_t index_b = 0;
};

using Certificate = std::variant<FeasibleInterior, InfeasiblePair>;

struct GeneratedInstance {
    LinearProgram lp;
    Certificate certificate;
    std::uint64_t seed = 0;
};

/// m GE constraints with unit normals drawn uniformly on the sphere, all
/// satisfied with margin >= slack at an interior point z in [-1, 1]^n (or at
/// `forced_interior` when given).
GeneratedInstance gen_feasible(std::size_t n, std::size_t m, double slack, std::uint64_t seed,
                               const std::optional<Vector>& forced_interior = std::nullopt);

/// As gen_feasible, then two constraints are overwritten with a.x >= beta and
/// -a.x >= beta' where beta + beta' >= 0.5, so the system is empty.
GeneratedInstance gen_infeasible(std::size_t n, std::size_t m, std::uint64_t seed);

/// Random objective with standard normal coefficients.
Objective random_objective(std::size_t n, std::uint64_t seed, ObjectiveSense sense = ObjectiveSense::Maximize);

/// Verifies a certificate against its instance.
bool certificate_holds(const GeneratedInstance& instance, double tol = 1e-12);

struct TraceReport {
    bool ok = true;
    std::size_t events = 0;
    std::size_t moves = 0;
    double max_orthogonality = 0.0;
    std::size_t max_gutter = 0;
    std::vector<std::string> violations;
};

struct TraceCheckOptions {
    double orthogonality_tol = 1e-8;
    double feas_tol = 1e-8;
    /// A constraint satisfied before a move (d >= -feas_tol) counts as broken
    /// when it ends below -violation_factor * feas_tol.
    double violation_factor = 10.0;
};

/// Replays a trace against the instance and re-evaluates signed distances
/// per event: (a) directions are orthogonal to every gutter row, (b) no
/// change of the centre breaks a satisfied constraint, (c) the gutter never
/// exceeds n rows and GUTTER_FULL fires exactly at n.
TraceReport check_trace(const LinearProgram& lp, const std::vector<TraceEvent>& events,
                        const TraceCheckOptions& options = {});

/// Small hand-built instances with known behaviour.
namespace fixtures {

/// Two satisfied planes meeting at a corner below the target y >= 1. A ball
/// of radius zero slides into the corner and wrongly concludes
/// infeasibility; a positive radius disambiguates the corner. `dimension`
/// must be 2 or 3 (the third axis is free).
LinearProgram epsilon_counterexample(std::size_t dimension = 2);
Vector epsilon_counterexample_start(std::size_t dimension = 2);

enum class WedgeTarget { Oversized, ApexTangent, Separated };

/// Wedge y >= x, y >= -x with apex at the origin and a tilted target
/// -x/2 - (sqrt(3)/2) y >= b. b = -0.001 leaves a sliver next to the apex too
/// thin for a 0.01 ball, b = 0 touches the apex only and b = 0.5 misses the
/// wedge entirely.
LinearProgram wedge(WedgeTarget target);
Vector wedge_start();

}  // namespace fixtures

}  // namespace gutterlp::testkit

#endif  // GUTTERLP_TESTKIT_HPP
