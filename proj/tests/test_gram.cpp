#include <doctest.h>

#include <cmath>
#include <random>

#include "gutterlp/error.hpp"
#include "gutterlp/geometry.hpp"
#include "gutterlp/gram.hpp"
#include "support.hpp"

using namespace gutterlp;
using test_support::max_abs;
using test_support::vec;

namespace {

double inf_norm(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("orthonormal rows give an identity inverse") {
    GutterBasis basis(3);
    REQUIRE(basis.append_row(0, vec({1, 0, 0}), 1e-9) == AppendStatus::Appended);
    REQUIRE(basis.append_row(4, vec({0, 1, 0}), 1e-9) == AppendStatus::Appended);
    CHECK(inf_norm(basis.gram_inverse() - Matrix::Identity(2, 2)) == 0.0);
    CHECK(basis.indices() == std::vector<std::size_t>{0, 4});
    CHECK(basis.contains(4));
    CHECK_FALSE(basis.contains(1));
}

TEST_CASE("bordered inverse of two oblique rows") {
    GutterBasis basis(2);
    basis.append_row(0, vec({1, 0}), 1e-9);
    REQUIRE(basis.append_row(1, vec({1 / std::sqrt(2.0), 1 / std::sqrt(2.0)}), 1e-9) == AppendStatus::Appended);
    Matrix expected(2, 2);
    expected << 2, -std::sqrt(2.0), -std::sqrt(2.0), 2;
    CHECK(inf_norm(basis.gram_inverse() - expected) <= 1e-12);
}

TEST_CASE("a repeated direction is degenerate and leaves the basis unchanged") {
    GutterBasis basis(2);
    basis.append_row(0, vec({1, 0}), 1e-9);
    CHECK(basis.append_row(1, vec({1, 0}), 1e-9) == AppendStatus::Degenerate);
    CHECK(basis.size() == 1);
    CHECK(inf_norm(basis.gram_inverse() - Matrix::Identity(1, 1)) == 0.0);
}

TEST_CASE("duplicate index and shape errors") {
    GutterBasis basis(2);
    basis.append_row(3, vec({1, 0}), 1e-9);
    CHECK_THROWS_AS(basis.append_row(3, vec({0, 1}), 1e-9), Error);
    CHECK_THROWS_AS(basis.append_row(5, vec({0, 1, 0}), 1e-9), Error);
    CHECK_THROWS_AS(basis.correction(vec({1, 2})), Error);
}

TEST_CASE("correction") {
    GutterBasis single(2);
    single.append_row(0, vec({1, 0}), 1e-9);
    CHECK(max_abs(single.correction(vec({-1})) - vec({-1, 0})) == 0.0);

    GutterBasis two(3);
    two.append_row(0, vec({1, 0, 0}), 1e-9);
    two.append_row(1, vec({0, 1, 0}), 1e-9);
    CHECK(max_abs(two.correction(vec({2, 3})) - vec({2, 3, 0})) == 0.0);

    GutterBasis empty(3);
    CHECK(max_abs(empty.correction(Vector(0)) - Vector::Zero(3)) == 0.0);
}

TEST_CASE("reset") {
    GutterBasis basis(2);
    basis.append_row(0, vec({1, 0}), 1e-9);
    basis.append_row(1, vec({0, 1}), 1e-9);
    basis.reset();
    CHECK(basis.empty());
    CHECK(basis.gram_inverse().size() == 0);
    basis.reset();
    CHECK(basis.empty());
    REQUIRE(basis.append_row(0, vec({1, 0}), 1e-9) == AppendStatus::Appended);
    CHECK(basis.gram_inverse().rows() == 1);
    CHECK(basis.gram_inverse()(0, 0) == 1.0);
}

TEST_CASE("null-space part is orthogonal to every row") {
    GutterBasis basis(3);
    basis.append_row(0, vec({1, 0, 0}), 1e-9);
    basis.append_row(1, vec({0.6, 0.8, 0}), 1e-9);
    const Vector v = basis.null_space_part(vec({1, 2, 3}));
    CHECK(max_abs(basis.apply(v)) <= 1e-15);
    CHECK(max_abs(v - vec({0, 0, 3})) <= 1e-15);
}

TEST_CASE("incremental inverse matches direct inversion and stays symmetric") {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = 2 + trial % 15;
        GutterBasis basis(static_cast<std::size_t>(n));
        for (Eigen::Index k = 0; k + 1 < n; ++k) {
            Vector a(n);
            for (Eigen::Index j = 0; j < n; ++j) a(j) = gauss(rng);
            REQUIRE(basis.append_row(static_cast<std::size_t>(k), a.normalized(), 1e-9) == AppendStatus::Appended);
            const Matrix g = basis.rows();
            const Matrix direct = (g * g.transpose()).inverse();
            CHECK(inf_norm(basis.gram_inverse() - direct) <= 1e-10);
            CHECK(inf_norm(basis.gram_inverse() - basis.gram_inverse().transpose()) <= 1e-12);
            CHECK(inf_norm(g * g.transpose() * basis.gram_inverse() - Matrix::Identity(k + 1, k + 1)) <= 1e-10);
        }
    }
}

TEST_CASE("correction reproduces the projection displacement") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Index n = 3 + trial % 4;
        LinearProgram lp;
        lp.dimension = static_cast<std::size_t>(n);
        GutterBasis basis(lp.dimension);
        for (Eigen::Index k = 0; k < n - 1; ++k) {
            Vector a(n);
            for (Eigen::Index j = 0; j < n; ++j) a(j) = gauss(rng);
            lp.constraints.push_back({a.normalized(), gauss(rng), Sense::GE});
            basis.append_row(static_cast<std::size_t>(k), lp.constraints.back().normal, 1e-9);
        }
        Vector p(n);
        for (Eigen::Index j = 0; j < n; ++j) p(j) = gauss(rng);
        const Vector displacement = basis.correction(basis_distances(lp, basis, p));
        const Vector q = project_onto_intersection(lp, basis, p, Vector::Zero(n - 1));
        // The projection adds a refinement step, so the two agree to
        // projection accuracy rather than bit for bit.
        CHECK(max_abs((p - q) - displacement) <= 1e-9);
    }
}
