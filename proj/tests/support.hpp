#ifndef GUTTERLP_TESTS_SUPPORT_HPP
#define GUTTERLP_TESTS_SUPPORT_HPP

#include <initializer_list>
#include <vector>

#include "gutterlp/model.hpp"

namespace test_support {

inline gutterlp::Vector vec(std::initializer_list<double> values) {
    gutterlp::Vector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index k = 0;
    for (double x : values) v(k++) = x;
    return v;
}

struct Row {
    std::vector<double> normal;
    gutterlp::Sense sense;
    double offset;
};

// Builds and normalizes an LP from literal rows.
inline gutterlp::LinearProgram lp_of(std::size_t n, std::initializer_list<Row> rows) {
    gutterlp::LinearProgram lp;
    lp.dimension = n;
    for (const Row& r : rows) {
        gutterlp::Vector a = Eigen::Map<const gutterlp::Vector>(r.normal.data(), static_cast<Eigen::Index>(r.normal.size()));
        lp.constraints.push_back(gutterlp::Constraint{a, r.offset, r.sense});
    }
    return gutterlp::normalize(std::move(lp));
}

inline double max_abs(const gutterlp::Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace test_support

#endif  // GUTTERLP_TESTS_SUPPORT_HPP
