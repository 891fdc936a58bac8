#ifndef GUTTERLP_GRAM_HPP
#define GUTTERLP_GRAM_HPP

#include <cstddef>
#include <vector>

#include "gutterlp/model.hpp"

namespace gutterlp {

enum class AppendStatus { Appended, Degenerate };

/*
 * Active-plane basis of a gutter: the rows of G (unit normals of the planes
 * the ball currently touches) together with the inverse of the Gram matrix
 * G G^T.
 *
 * Rows are only ever appended. Each append borders the previous inverse Q
 * with one row and column:
 *
 *   b = G a,   r = Q b,   s = a.a - b.r
 *
 *   (G' G'^T)^-1 = | Q + r r^T / s   -r / s |
 *                  | -r^T / s          1 / s |
 *
 * so an append costs O(t^2) instead of a fresh O(t^3) inversion. The Schur
 * complement s equals the squared distance from `a` to span(G); a pivot
 * below geom_tol means the new plane adds no independent direction.
 *
 * Errors in Q grow with every bordering step, roughly by cond(G G^T) each
 * time, so Q and the pivot are carried in long double and rounded to the
 * double copy returned by gram_inverse() after each append. On targets where
 * long double is plain double this degrades gracefully to the textbook update.
 */
class GutterBasis {
public:
    explicit GutterBasis(std::size_t dimension = 0) : dimension_(dimension) {}

    /// Throws DuplicateIndex if `index` is already a row and
    /// DimensionMismatch for a normal of the wrong length.
    AppendStatus append_row(std::size_t index, const Vector& normal, double geom_tol);

    /// G^T (G G^T)^-1 residuals.
    Vector correction(const Vector& residuals) const;

    /// Component of `v` orthogonal to every row, i.e. (I - G^T (GG^T)^-1 G) v.
    Vector null_space_part(const Vector& v) const;

    /// G v: the dot product of `v` with each row.
    Vector apply(const Vector& v) const;

    void reset() noexcept;

    std::size_t size() const noexcept { return indices_.size(); }
    bool empty() const noexcept { return indices_.empty(); }
    std::size_t dimension() const noexcept { return dimension_; }
    bool contains(std::size_t index) const noexcept;

    const std::vector<std::size_t>& indices() const noexcept { return indices_; }
    const Matrix& gram_inverse() const noexcept { return inverse_; }
    /// t x n matrix G.
    Matrix rows() const;
    Vector row(std::size_t k) const { return rows_.col(static_cast<Eigen::Index>(k)); }

private:
    std::size_t dimension_;
    std::vector<std::size_t> indices_;
    // Normals stored column-wise (n x t) so appends are contiguous.
    Matrix rows_;
    Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> wide_inverse_;
    Matrix inverse_;
};

}  // namespace gutterlp

#endif  // GUTTERLP_GRAM_HPP
