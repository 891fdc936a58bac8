#include "gutterlp/model.hpp"

#include <cmath>
#include <limits>

#include "gutterlp/error.hpp"
#include "gutterlp/geometry.hpp"

namespace gutterlp {

LinearProgram normalize(LinearProgram raw, double geom_tol) {
    if (raw.dimension == 0) {
        throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
    }
    if (raw.constraints.empty()) {
        throw Error(ErrorCode::InvalidArgument, "at least one constraint is required");
    }
    for (std::size_t i = 0; i < raw.constraints.size(); ++i) {
        Constraint& c = raw.constraints[i];
        require_dimension(raw.dimension, static_cast<std::size_t>(c.normal.size()), "constraint normal");
        const double norm = c.normal.norm();
        if (!(norm > geom_tol)) {
            throw ZeroNormalError(i);
        }
        // Rows within a few ulps of unit length are left as they are, so
        // normalizing twice or re-reading a serialized instance keeps the bits.
        if (std::abs(norm - 1.0) > 8 * std::numeric_limits<double>::epsilon()) {
            c.normal /= norm;
            c.offset /= norm;
        }
    }
    if (raw.objective) {
        require_dimension(raw.dimension, static_cast<std::size_t>(raw.objective->coefficients.size()),
                          "objective");
    }
    return raw;
}

bool is_normalized(const LinearProgram& lp, double tol) {
    for (const Constraint& c : lp.constraints) {
        if (static_cast<std::size_t>(c.normal.size()) != lp.dimension) return false;
        if (std::abs(c.normal.norm() - 1.0) > tol) return false;
    }
    return true;
}

bool satisfies(const Constraint& c, const Vector& p, double feas_tol) {
    const double d = signed_distance(c, p);
    switch (c.sense) {
        case Sense::GE:
            return d >= -feas_tol;
        case Sense::GT:
            return d > feas_tol;
        case Sense::EQ:
            return std::abs(d) <= feas_tol;
    }
    return false;
}

bool check_point(const LinearProgram& lp, const Vector& p, double feas_tol) {
    require_dimension(lp.dimension, static_cast<std::size_t>(p.size()), "point");
    for (const Constraint& c : lp.constraints) {
        if (!satisfies(c, p, feas_tol)) return false;
    }
    return true;
}

void SolverConfig::validate() const {
    auto fail = [](const char* what) { throw Error(ErrorCode::InvalidArgument, what); };
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) fail("epsilon must be finite and non-negative");
    if (!(geom_tol > 0.0)) fail("geom_tol must be positive");
    if (!(feas_tol > 0.0)) fail("feas_tol must be positive");
    if (epsilon != 0.0 && !(epsilon > geom_tol)) fail("epsilon must exceed geom_tol");
    if (!(big_M_growth > 1.0)) fail("big_M_growth must exceed 1");
    if (max_M_escalations == 0) fail("max_M_escalations must be positive");
}

std::size_t SolverConfig::outer_limit(const LinearProgram& lp) const {
    return max_outer_iters != 0 ? max_outer_iters : 10 * lp.size() * lp.dimension;
}

std::size_t SolverConfig::inner_limit(const LinearProgram& lp) const {
    return max_inner_iters != 0 ? max_inner_iters : 100 * lp.dimension;
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Feasible:
            return "FEASIBLE";
        case Verdict::Optimal:
            return "OPTIMAL";
        case Verdict::Infeasible:
            return "INFEASIBLE";
        case Verdict::Unbounded:
            return "UNBOUNDED";
        case Verdict::Stalled:
            return "STALLED";
    }
    return "?";
}

std::string_view to_string(Sense s) {
    switch (s) {
        case Sense::GE:
            return ">=";
        case Sense::GT:
            return ">";
        case Sense::EQ:
            return "=";
    }
    return "?";
}

}  // namespace gutterlp
