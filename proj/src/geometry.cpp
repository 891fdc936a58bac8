#include "gutterlp/geometry.hpp"

#include <cmath>
#include <utility>

#include "gutterlp/error.hpp"

namespace gutterlp {

Ray::Ray(Vector origin, Vector direction) : origin_(std::move(origin)), direction_(std::move(direction)) {
    require_dimension(static_cast<std::size_t>(origin_.size()), static_cast<std::size_t>(direction_.size()),
                      "ray direction");
    if (std::abs(direction_.norm() - 1.0) > 1e-12) {
        throw Error(ErrorCode::InvalidArgument, "ray direction must have unit norm");
    }
}

double signed_distance(const Constraint& c, const Vector& p) {
    require_dimension(static_cast<std::size_t>(c.normal.size()), static_cast<std::size_t>(p.size()), "point");
    return c.normal.dot(p) - c.offset;
}

std::optional<RayHit> ray_hit(const Constraint& c, const Ray& r, double geom_tol) {
    const double cosine = c.normal.dot(r.direction());
    if (std::abs(cosine) <= geom_tol) return std::nullopt;
    const double t = -signed_distance(c, r.origin()) / cosine;
    if (!(t > geom_tol)) return std::nullopt;
    return RayHit{t, r.at(t)};
}

std::optional<HitRecord> first_obstacle(const LinearProgram& lp, std::span<const std::size_t> candidates,
                                        const Ray& r, double geom_tol) {
    std::optional<HitRecord> best;
    for (std::size_t index : candidates) {
        if (index >= lp.size()) {
            throw Error(ErrorCode::InvalidArgument, "candidate index out of range");
        }
        auto hit = ray_hit(lp.constraints[index], r, geom_tol);
        if (!hit) continue;
        if (!best || hit->t < best->t || (hit->t == best->t && index < best->constraint_index)) {
            best = HitRecord{index, hit->t, std::move(hit->point)};
        }
    }
    return best;
}

Vector basis_distances(const LinearProgram& lp, const GutterBasis& basis, const Vector& p) {
    Vector d(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k) {
        d(static_cast<Eigen::Index>(k)) = signed_distance(lp.constraints.at(basis.indices()[k]), p);
    }
    return d;
}

Vector project_onto_intersection(const LinearProgram& lp, const GutterBasis& basis, const Vector& p,
                                 const Vector& targets) {
    require_dimension(basis.size(), static_cast<std::size_t>(targets.size()), "projection targets");
    Vector q = p - basis.correction(basis_distances(lp, basis, p) - targets);
    // One refinement step removes most of the rounding error left by an
    // ill-conditioned Gram matrix.
    q -= basis.correction(basis_distances(lp, basis, q) - targets);
    return q;
}

}  // namespace gutterlp
