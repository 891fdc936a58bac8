#ifndef GUTTERLP_GEOMETRY_HPP
#define GUTTERLP_GEOMETRY_HPP

#include <cstddef>
#include <optional>
#include <span>

#include "gutterlp/gram.hpp"
#include "gutterlp/model.hpp"

namespace gutterlp {

/// Half-line origin + t * direction, t >= 0. The direction must be unit.
class Ray {
public:
    Ray(Vector origin, Vector direction);

    const Vector& origin() const noexcept { return origin_; }
    const Vector& direction() const noexcept { return direction_; }
    Vector at(double t) const { return origin_ + t * direction_; }

private:
    Vector origin_;
    Vector direction_;
};

struct RayHit {
    double t = 0.0;
    Vector point;
};

struct HitRecord {
    std::size_t constraint_index = 0;
    double t = 0.0;
    Vector point;
};

/// normal . p - offset. Negative on the infeasible side of a GE constraint.
double signed_distance(const Constraint& c, const Vector& p);

/// Intersection of the ray with the constraint's plane. Returns nothing when
/// the ray is parallel (|normal . direction| <= geom_tol) or the plane lies
/// behind or at the origin (t <= geom_tol).
std::optional<RayHit> ray_hit(const Constraint& c, const Ray& r, double geom_tol);

/// Nearest plane hit among `candidates`; ties resolve to the lowest index.
std::optional<HitRecord> first_obstacle(const LinearProgram& lp, std::span<const std::size_t> candidates,
                                        const Ray& r, double geom_tol);

/// Euclidean-closest point q to p with signed_distance(row_k, q) == targets_k
/// for every basis row:  q = p - G^T (G G^T)^-1 (d(p) - targets).
/// `basis` row indices refer to constraints of `lp`.
Vector project_onto_intersection(const LinearProgram& lp, const GutterBasis& basis, const Vector& p,
                                 const Vector& targets);

/// Signed distances from p to each basis plane, in basis order.
Vector basis_distances(const LinearProgram& lp, const GutterBasis& basis, const Vector& p);

}  // namespace gutterlp

#endif  // GUTTERLP_GEOMETRY_HPP
