#include "gutterlp/gram.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gutterlp/error.hpp"

namespace gutterlp {

AppendStatus GutterBasis::append_row(std::size_t index, const Vector& normal, double geom_tol) {
    require_dimension(dimension_, static_cast<std::size_t>(normal.size()), "gutter row");
    if (contains(index)) {
        throw Error(ErrorCode::DuplicateIndex,
                    "constraint " + std::to_string(index) + " is already in the gutter");
    }
    const Eigen::Index t = static_cast<Eigen::Index>(indices_.size());

    using WideVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
    const WideVector a = normal.cast<long double>();
    const WideVector b = t > 0 ? WideVector(rows_.cast<long double>().transpose() * a) : WideVector();
    const WideVector r = t > 0 ? WideVector(wide_inverse_ * b) : WideVector();
    const long double pivot = a.squaredNorm() - (t > 0 ? b.dot(r) : 0.0L);
    if (!(std::abs(static_cast<double>(pivot)) > geom_tol)) {
        return AppendStatus::Degenerate;
    }

    decltype(wide_inverse_) next(t + 1, t + 1);
    if (t > 0) {
        next.topLeftCorner(t, t) = wide_inverse_ + (r * r.transpose()) / pivot;
        next.topRightCorner(t, 1) = -r / pivot;
        next.bottomLeftCorner(1, t) = next.topRightCorner(t, 1).transpose();
    }
    next(t, t) = 1.0L / pivot;
    wide_inverse_ = std::move(next);
    inverse_ = wide_inverse_.cast<double>();

    rows_.conservativeResize(static_cast<Eigen::Index>(dimension_), t + 1);
    rows_.col(t) = normal;
    indices_.push_back(index);
    return AppendStatus::Appended;
}

Vector GutterBasis::correction(const Vector& residuals) const {
    require_dimension(indices_.size(), static_cast<std::size_t>(residuals.size()), "gutter residuals");
    if (indices_.empty()) {
        return Vector::Zero(static_cast<Eigen::Index>(dimension_));
    }
    return rows_ * (inverse_ * residuals);
}

Vector GutterBasis::null_space_part(const Vector& v) const {
    require_dimension(dimension_, static_cast<std::size_t>(v.size()), "vector");
    if (indices_.empty()) return v;
    return v - correction(apply(v));
}

Vector GutterBasis::apply(const Vector& v) const {
    require_dimension(dimension_, static_cast<std::size_t>(v.size()), "vector");
    if (indices_.empty()) return Vector();
    return rows_.transpose() * v;
}

void GutterBasis::reset() noexcept {
    indices_.clear();
    rows_.resize(static_cast<Eigen::Index>(dimension_), 0);
    wide_inverse_.resize(0, 0);
    inverse_.resize(0, 0);
}

bool GutterBasis::contains(std::size_t index) const noexcept {
    return std::find(indices_.begin(), indices_.end(), index) != indices_.end();
}

Matrix GutterBasis::rows() const {
    if (indices_.empty()) return Matrix(0, static_cast<Eigen::Index>(dimension_));
    return rows_.transpose();
}

}  // namespace gutterlp
