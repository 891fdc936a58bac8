#include "gutterlp/testkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "gutterlp/error.hpp"

namespace gutterlp::testkit {
namespace {

// Distribution code is spelled out instead of using <random> distributions,
// whose output is implementation-defined; generated instances must be
// reproducible across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() {
        if (cached_) {
            cached_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        cached_ = true;
        return radius * std::cos(angle);
    }

    Vector unit_vector(std::size_t n) {
        Vector v(static_cast<Eigen::Index>(n));
        double norm = 0.0;
        do {
            for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = normal();
            norm = v.norm();
        } while (norm < 1e-12);
        return v / norm;
    }

    std::size_t index(std::size_t bound) { return static_cast<std::size_t>(uniform() * static_cast<double>(bound)); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool cached_ = false;
};

struct Plane {
    Vector normal;
    double offset;
    Sense sense;
};

std::vector<Plane> planes_with_box(const LinearProgram& lp, double bound) {
    std::vector<Plane> planes;
    for (const Constraint& c : lp.constraints) planes.push_back({c.normal, c.offset, c.sense});
    const auto n = static_cast<Eigen::Index>(lp.dimension);
    for (Eigen::Index k = 0; k < n; ++k) {
        Vector e = Vector::Zero(n);
        e(k) = 1.0;
        planes.push_back({e, -bound, Sense::GE});
        planes.push_back({-e, -bound, Sense::GE});
    }
    return planes;
}

bool feasible_vertex(const std::vector<Plane>& planes, const Vector& x, double tol) {
    const double scaled = tol * std::max(1.0, x.lpNorm<Eigen::Infinity>());
    for (const Plane& p : planes) {
        const double d = p.normal.dot(x) - p.offset;
        if (p.sense == Sense::EQ ? std::abs(d) > scaled : d < -scaled) return false;
    }
    return true;
}

// Calls visit(subset) for every k-subset of {0..count-1} in lexicographic order.
template <typename Visit>
void for_each_subset(std::size_t count, std::size_t k, Visit&& visit) {
    if (k > count) return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        visit(idx);
        std::size_t pos = k;
        while (pos > 0 && idx[pos - 1] == count - k + pos - 1) --pos;
        if (pos == 0) return;
        ++idx[pos - 1];
        for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }
}

struct Enumeration {
    bool any = false;
    Vector best_point;
    double best_value = -std::numeric_limits<double>::infinity();
    bool best_interior = false;  // some optimal vertex lies strictly inside the box
};

Enumeration enumerate_vertices(const LinearProgram& lp, double bound, const Vector* ascent) {
    constexpr double kFeasTol = 1e-9;
    const std::vector<Plane> planes = planes_with_box(lp, bound);
    const auto n = static_cast<Eigen::Index>(lp.dimension);
    Enumeration out;
    Matrix a(n, n);
    Vector b(n);
    for_each_subset(planes.size(), lp.dimension, [&](const std::vector<std::size_t>& subset) {
        if (out.any && !ascent) return;
        for (Eigen::Index r = 0; r < n; ++r) {
            const Plane& p = planes[subset[static_cast<std::size_t>(r)]];
            a.row(r) = p.normal.transpose();
            b(r) = p.offset;
        }
        Eigen::FullPivLU<Matrix> lu(a);
        lu.setThreshold(1e-10);
        if (lu.rank() < n) return;
        const Vector x = lu.solve(b);
        if (!feasible_vertex(planes, x, kFeasTol)) return;
        const bool interior = x.lpNorm<Eigen::Infinity>() < bound * (1.0 - 1e-9);
        if (!ascent) {
            out.any = true;
            out.best_point = x;
            return;
        }
        const double value = ascent->dot(x);
        const double tie = 1e-9 * std::max(1.0, std::abs(value));
        if (!out.any || value > out.best_value + tie) {
            out.best_value = value;
            out.best_point = x;
            out.best_interior = interior;
        } else if (std::abs(value - out.best_value) <= tie && interior && !out.best_interior) {
            out.best_point = x;
            out.best_interior = true;
        }
        out.any = true;
    });
    return out;
}

}  // namespace

OracleResult oracle_solve(const LinearProgram& lp, double bound) {
    if (lp.dimension > kOracleMaxDimension || lp.size() > kOracleMaxConstraints) {
        throw Error(ErrorCode::ScaleExceeded, "oracle is limited to n <= " + std::to_string(kOracleMaxDimension) +
                                                  " and m <= " + std::to_string(kOracleMaxConstraints));
    }
    if (!(bound > 0.0)) throw Error(ErrorCode::InvalidArgument, "oracle bound must be positive");

    OracleResult result;
    if (!lp.objective) {
        const Enumeration e = enumerate_vertices(lp, bound, nullptr);
        result.verdict = e.any ? Verdict::Feasible : Verdict::Infeasible;
        if (e.any) result.point = e.best_point;
        return result;
    }

    const Vector& c = lp.objective->coefficients;
    const Vector ascent = lp.objective->sense == ObjectiveSense::Maximize ? c : Vector(-c);
    const Enumeration e = enumerate_vertices(lp, bound, &ascent);
    if (!e.any) {
        result.verdict = Verdict::Infeasible;
        return result;
    }
    if (!e.best_interior) {
        const Enumeration wider = enumerate_vertices(lp, 10.0 * bound, &ascent);
        if (wider.best_value > e.best_value + 1e-9 * std::max(1.0, std::abs(e.best_value))) {
            result.verdict = Verdict::Unbounded;
            return result;
        }
    }
    result.verdict = Verdict::Optimal;
    result.point = e.best_point;
    result.objective_value = c.dot(e.best_point);
    return result;
}

Vector oracle_projection(const Matrix& rows, const Vector& p, const Vector& targets) {
    const Eigen::Index t = rows.rows();
    const Eigen::Index n = rows.cols();
    require_dimension(static_cast<std::size_t>(n), static_cast<std::size_t>(p.size()), "point");
    require_dimension(static_cast<std::size_t>(t), static_cast<std::size_t>(targets.size()), "targets");
    if (t == 0) return p;

    Eigen::FullPivLU<Matrix> rank_check(rows);
    rank_check.setThreshold(1e-10);
    if (rank_check.rank() < t) throw Error(ErrorCode::RankDeficient, "projection rows are linearly dependent");

    // [ I  G^T ] [q     ]   [p      ]
    // [ G  0   ] [lambda] = [targets]
    Matrix kkt = Matrix::Zero(n + t, n + t);
    kkt.topLeftCorner(n, n).setIdentity();
    kkt.topRightCorner(n, t) = rows.transpose();
    kkt.bottomLeftCorner(t, n) = rows;
    Vector rhs(n + t);
    rhs << p, targets;
    const Vector solution = Eigen::FullPivLU<Matrix>(kkt).solve(rhs);
    return solution.head(n);
}

GeneratedInstance gen_feasible(std::size_t n, std::size_t m, double slack, std::uint64_t seed,
                               const std::optional<Vector>& forced_interior) {
    if (n == 0 || m == 0) throw Error(ErrorCode::InvalidArgument, "n and m must be positive");
    if (!(slack > 0.0)) throw Error(ErrorCode::InvalidArgument, "slack must be positive");
    Rng rng(seed);
    Vector z(static_cast<Eigen::Index>(n));
    for (Eigen::Index k = 0; k < z.size(); ++k) z(k) = rng.uniform(-1.0, 1.0);
    if (forced_interior) {
        require_dimension(n, static_cast<std::size_t>(forced_interior->size()), "forced interior point");
        z = *forced_interior;
    }

    GeneratedInstance out;
    out.seed = seed;
    out.lp.dimension = n;
    for (std::size_t i = 0; i < m; ++i) {
        Vector a = rng.unit_vector(n);
        const double jitter = rng.uniform(0.0, 2.0);
        const double offset = a.dot(z) - (slack + jitter);
        out.lp.constraints.push_back(Constraint{std::move(a), offset, Sense::GE});
    }
    out.certificate = FeasibleInterior{z, slack};
    return out;
}

GeneratedInstance gen_infeasible(std::size_t n, std::size_t m, std::uint64_t seed) {
    if (m < 2) throw Error(ErrorCode::InvalidArgument, "an infeasible instance needs m >= 2");
    GeneratedInstance out = gen_feasible(n, m, 0.1, seed);
    const Vector z = std::get<FeasibleInterior>(out.certificate).point;

    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    const std::size_t first = rng.index(m);
    std::size_t second = rng.index(m - 1);
    if (second >= first) ++second;

    const Vector a = rng.unit_vector(n);
    const double lift = rng.uniform(0.0, 1.0);
    const double extra = rng.uniform(0.0, 0.5);
    // a.x >= beta and -a.x >= beta' with beta + beta' = 0.5 + extra.
    const double beta = a.dot(z) + lift;
    const double beta_prime = -a.dot(z) + 0.5 - lift + extra;
    out.lp.constraints[first] = Constraint{a, beta, Sense::GE};
    out.lp.constraints[second] = Constraint{-a, beta_prime, Sense::GE};
    out.certificate = InfeasiblePair{first, second};
    return out;
}

Objective random_objective(std::size_t n, std::uint64_t seed, ObjectiveSense sense) {
    Rng rng(seed * 0x2545f4914f6cdd1dULL + 17);
    Objective obj;
    obj.sense = sense;
    obj.coefficients.resize(static_cast<Eigen::Index>(n));
    for (Eigen::Index k = 0; k < obj.coefficients.size(); ++k) obj.coefficients(k) = rng.normal();
    return obj;
}

bool certificate_holds(const GeneratedInstance& instance, double tol) {
    const LinearProgram& lp = instance.lp;
    if (const auto* interior = std::get_if<FeasibleInterior>(&instance.certificate)) {
        for (const Constraint& c : lp.constraints) {
            const double d = c.normal.dot(interior->point) - c.offset;
            if (c.sense == Sense::EQ ? std::abs(d) > tol : d < interior->slack - tol) return false;
        }
        return true;
    }
    const auto& pair = std::get<InfeasiblePair>(instance.certificate);
    if (pair.index_a >= lp.size() || pair.index_b >= lp.size() || pair.index_a == pair.index_b) return false;
    const Constraint& a = lp.constraints[pair.index_a];
    const Constraint& b = lp.constraints[pair.index_b];
    return (a.normal + b.normal).norm() <= tol && a.offset + b.offset > 0.0;
}

TraceReport check_trace(const LinearProgram& lp, const std::vector<TraceEvent>& events,
                        const TraceCheckOptions& options) {
    TraceReport report;
    report.events = events.size();
    const std::size_t n = lp.dimension;
    auto flag = [&](std::size_t k, const std::string& what) {
        report.ok = false;
        if (report.violations.size() < 50) {
            report.violations.push_back("event " + std::to_string(k) + ": " + what);
        }
    };

    const double broken = -options.violation_factor * options.feas_tol;
    for (std::size_t k = 0; k < events.size(); ++k) {
        const TraceEvent& ev = events[k];
        if (static_cast<std::size_t>(ev.p0.size()) != n) {
            flag(k, "p0 has the wrong dimension");
            continue;
        }
        report.max_gutter = std::max(report.max_gutter, ev.gutter.size());
        if (ev.gutter.size() > n) flag(k, "gutter exceeds n rows");
        if (ev.kind == TraceKind::GutterFull && ev.gutter.size() != n) {
            flag(k, "GUTTER_FULL with " + std::to_string(ev.gutter.size()) + " rows");
        }
        if (ev.kind == TraceKind::GutterAppend && ev.gutter.size() == n &&
            (k + 1 >= events.size() || events[k + 1].kind != TraceKind::GutterFull)) {
            flag(k, "gutter reached n rows without GUTTER_FULL");
        }
        bool bad_index = false;
        for (std::size_t g : ev.gutter) bad_index = bad_index || g >= lp.size();
        if (bad_index) {
            flag(k, "gutter references an unknown constraint");
            continue;
        }

        if (ev.dir.size() != 0) {
            if (static_cast<std::size_t>(ev.dir.size()) != n) {
                flag(k, "dir has the wrong dimension");
            } else {
                if (ev.gutter.size() >= n) flag(k, "direction computed from a full gutter");
                if (std::abs(ev.dir.norm() - 1.0) > 1e-9) flag(k, "direction is not unit");
                for (std::size_t g : ev.gutter) {
                    const double dot = std::abs(ev.dir.dot(lp.constraints[g].normal));
                    report.max_orthogonality = std::max(report.max_orthogonality, dot);
                    if (dot > options.orthogonality_tol) {
                        flag(k, "direction not orthogonal to gutter row " + std::to_string(g));
                    }
                }
            }
        }

        if (k == 0) continue;
        const Vector& before = events[k - 1].p0;
        if (static_cast<std::size_t>(before.size()) != n) continue;
        const bool moved = ev.p0 != before;
        if (ev.kind == TraceKind::Move) {
            ++report.moves;
            if (!moved) flag(k, "MOVE without displacement");
        }
        if (!moved) continue;
        for (std::size_t c = 0; c < lp.size(); ++c) {
            const Constraint& con = lp.constraints[c];
            const double d0 = con.normal.dot(before) - con.offset;
            const double d1 = con.normal.dot(ev.p0) - con.offset;
            const bool was_satisfied = con.sense == Sense::EQ ? std::abs(d0) <= options.feas_tol : d0 >= -options.feas_tol;
            const bool now_broken = con.sense == Sense::EQ ? std::abs(d1) > -broken : d1 < broken;
            if (was_satisfied && now_broken) {
                flag(k, std::string(to_string(ev.kind)) + " broke constraint " + std::to_string(c));
            }
        }
    }
    return report;
}

namespace fixtures {

LinearProgram epsilon_counterexample(std::size_t dimension) {
    if (dimension != 2 && dimension != 3) {
        throw Error(ErrorCode::InvalidArgument, "fixture is defined for n = 2 or n = 3");
    }
    auto row = [dimension](double x, double y) {
        Vector v = Vector::Zero(static_cast<Eigen::Index>(dimension));
        v(0) = x;
        v(1) = y;
        return v;
    };
    LinearProgram lp;
    lp.dimension = dimension;
    lp.constraints.push_back({row(0.6, -0.8), 0.0, Sense::GE});
    lp.constraints.push_back({row(0.28, -0.96), 0.0, Sense::GE});
    lp.constraints.push_back({row(0.0, 1.0), 1.0, Sense::GE});
    return lp;
}

Vector epsilon_counterexample_start(std::size_t dimension) {
    Vector p = Vector::Zero(static_cast<Eigen::Index>(dimension));
    p(0) = -2.0;
    p(1) = -3.0;
    return p;
}

LinearProgram wedge(WedgeTarget target) {
    const double r = std::numbers::sqrt2 / 2.0;
    LinearProgram lp;
    lp.dimension = 2;
    lp.constraints.push_back({Vector{{-r, r}}, 0.0, Sense::GE});
    lp.constraints.push_back({Vector{{r, r}}, 0.0, Sense::GE});
    double offset = 0.0;
    switch (target) {
        case WedgeTarget::Oversized:
            offset = -0.001;
            break;
        case WedgeTarget::ApexTangent:
            offset = 0.0;
            break;
        case WedgeTarget::Separated:
            offset = 0.5;
            break;
    }
    lp.constraints.push_back({Vector{{-0.5, -std::numbers::sqrt3 / 2.0}}, offset, Sense::GE});
    return lp;
}

Vector wedge_start() { return Vector{{0.0, 5.0}}; }

}  // namespace fixtures

}  // namespace gutterlp::testkit
