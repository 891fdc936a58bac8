#ifndef GUTTERLP_MODEL_HPP
#define GUTTERLP_MODEL_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace gutterlp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Constraint sense after parsing. `<=` and `<` rows are negated into GE/GT
/// before they reach the core, so every normal points into its feasible side.
enum class Sense { GE, GT, EQ };

struct Constraint {
    Vector normal;
    double offset = 0.0;
    Sense sense = Sense::GE;
};

enum class ObjectiveSense { Minimize, Maximize };

struct Objective {
    ObjectiveSense sense = ObjectiveSense::Maximize;
    Vector coefficients;
};

/// Dense LP instance `normal_i . x (sense_i) offset_i` with an optional linear
/// objective. Instances handed to the solver are expected to be normalized
/// (see `normalize`), after which they are treated as immutable.
struct LinearProgram {
    std::size_t dimension = 0;
    std::vector<Constraint> constraints;
    std::optional<Objective> objective;

    std::size_t size() const noexcept { return constraints.size(); }
};

/// Scales every constraint by the reciprocal norm of its normal.
/// Throws ZeroNormalError for normals with norm <= geom_tol and
/// DimensionMismatch when a normal's length differs from `dimension`.
LinearProgram normalize(LinearProgram raw, double geom_tol = 1e-9);

/// True when every normal has unit length within `tol`.
bool is_normalized(const LinearProgram& lp, double tol = 1e-12);

/// Satisfaction test with slack: GE needs d >= -tol, GT needs d > tol,
/// EQ needs |d| <= tol, where d is the signed distance.
bool satisfies(const Constraint& c, const Vector& p, double feas_tol);

bool check_point(const LinearProgram& lp, const Vector& p, double feas_tol);

struct SolverConfig {
    double epsilon = 1e-2;
    double geom_tol = 1e-9;
    double feas_tol = 1e-8;
    /// 0 selects the default 10*m*n.
    std::size_t max_outer_iters = 0;
    /// 0 selects the default 100*n.
    std::size_t max_inner_iters = 0;
    double big_M_growth = 8.0;
    std::size_t max_M_escalations = 6;

    /// Throws Error(InvalidArgument) on out-of-range values. `epsilon` may be
    /// zero, which disables the ball and is only useful for diagnostics.
    void validate() const;
    std::size_t outer_limit(const LinearProgram& lp) const;
    std::size_t inner_limit(const LinearProgram& lp) const;
};

enum class Verdict { Feasible, Optimal, Infeasible, Unbounded, Stalled };

std::string_view to_string(Verdict v);
std::string_view to_string(Sense s);

struct SolveResult {
    Verdict verdict = Verdict::Stalled;
    std::optional<Vector> point;
    std::optional<double> objective_value;
    std::size_t iterations = 0;
    double epsilon_final = 0.0;
    std::vector<std::string> diagnostics;
};

}  // namespace gutterlp

#endif  // GUTTERLP_MODEL_HPP
