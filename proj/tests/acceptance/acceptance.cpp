// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit when any
// criterion fails. Runs that stall or disagree with the oracle are written,
// with their traces, under ./acceptance_logs for inspection.
#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gutterlp/geometry.hpp"
#include "gutterlp/gram.hpp"
#include "gutterlp/lp_format.hpp"
#include "gutterlp/records.hpp"
#include "gutterlp/solver.hpp"
#include "gutterlp/testkit.hpp"

namespace fs = std::filesystem;
using namespace gutterlp;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool pass = false;
    std::string summary;
};

int failures = 0;

void report(int number, const std::string& title, const Outcome& outcome) {
    std::cout << (outcome.pass ? "PASS" : "FAIL") << "  criterion " << number << ": " << title << " -- "
              << outcome.summary << std::endl;
    if (!outcome.pass) ++failures;
}

std::string fmt(double v, int precision = 3) {
    std::ostringstream os;
    os.precision(precision);
    os << v;
    return os.str();
}

Vector random_unit(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> gauss;
    Vector v(n);
    for (Eigen::Index k = 0; k < n; ++k) v(k) = gauss(rng);
    return v.normalized();
}

fs::path log_dir() {
    const fs::path dir = fs::current_path() / "acceptance_logs";
    fs::create_directories(dir);
    return dir;
}

void log_run(const std::string& name, const LinearProgram& lp, const SolveResult& result,
             const std::vector<TraceEvent>& trace, const std::string& note) {
    const fs::path base = log_dir() / name;
    std::ofstream(base.string() + ".lp") << serialize_lp(lp);
    std::ofstream(base.string() + ".result.json") << result_record_json(result) << '\n';
    std::ofstream out(base.string() + ".trace.jsonl");
    for (const TraceEvent& ev : trace) out << trace_event_json(ev) << '\n';
    std::cout << "      logged " << name << ": " << note << std::endl;
}

// Shared by criteria 3-5 and consumed by criterion 6.
struct TraceTally {
    std::size_t runs = 0;
    std::size_t failed = 0;
    double max_orthogonality = 0.0;
    std::vector<std::string> first_violations;

    void add(const std::string& name, const LinearProgram& lp, const std::vector<TraceEvent>& trace) {
        const testkit::TraceReport rep = testkit::check_trace(lp, trace);
        ++runs;
        max_orthogonality = std::max(max_orthogonality, rep.max_orthogonality);
        if (!rep.ok) {
            ++failed;
            if (first_violations.size() < 3) first_violations.push_back(name + ": " + rep.violations.front());
        }
    }
};

TraceTally trace_tally;

// Sizes sweep n in [2, 6] and m in [3, 15] across consecutive seeds.
std::size_t size_n(std::uint64_t seed) { return 2 + seed % 5; }
std::size_t size_m(std::uint64_t seed) { return 3 + (seed / 5) % 13; }

Outcome projection_equivalence() {
    const auto start = Clock::now();
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> uniform(-5, 5);
    double worst = 0.0;
    for (int pair = 0; pair < 1000; ++pair) {
        const std::size_t n = 2 + pair % 7;
        const std::size_t t = 1 + (pair / 7) % (n - 1);
        LinearProgram lp;
        lp.dimension = n;
        GutterBasis basis(n);
        for (std::size_t k = 0; k < t; ++k) {
            lp.constraints.push_back({random_unit(rng, static_cast<Eigen::Index>(n)), uniform(rng), Sense::GE});
            basis.append_row(k, lp.constraints[k].normal, 1e-9);
        }
        if (basis.size() != t) return {false, "random rows unexpectedly dependent at pair " + std::to_string(pair)};
        Vector p(static_cast<Eigen::Index>(n));
        for (Eigen::Index k = 0; k < p.size(); ++k) p(k) = uniform(rng);
        Vector targets = Vector::Zero(static_cast<Eigen::Index>(t));
        if (pair % 2 == 1) targets.setConstant(0.01);
        Vector rhs = targets;
        for (std::size_t k = 0; k < t; ++k) rhs(static_cast<Eigen::Index>(k)) += lp.constraints[k].offset;

        const Vector q = project_onto_intersection(lp, basis, p, targets);
        const Vector oracle = testkit::oracle_projection(basis.rows(), p, rhs);
        worst = std::max(worst, (q - oracle).cwiseAbs().maxCoeff());
    }
    const double elapsed = seconds_since(start);
    return {worst <= 1e-8 && elapsed < 5.0,
            "1000 pairs, max error " + fmt(worst) + " (limit 1e-08), " + fmt(elapsed) + " s (limit 5 s)"};
}

// Squared distance from `a` to the span of `rows`, from an SVD least-squares
// fit. Serves as the rank oracle for degenerate appends.
double distance_to_span_sq(const Matrix& rows, const Vector& a) {
    if (rows.rows() == 0) return a.squaredNorm();
    const Matrix gt = rows.transpose();
    const Vector fit = gt.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(a);
    return (a - gt * fit).squaredNorm();
}

Outcome incremental_inverse() {
    using WideMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    const auto start = Clock::now();
    const double geom_tol = 1e-9;
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> uniform(-1, 1);
    double worst = 0.0, worst_residual = 0.0;
    std::size_t appends = 0, dependent_cases = 0, near_cases = 0, mismatches = 0;

    auto flag_matches = [&](AppendStatus status, double dist_sq) {
        return (status == AppendStatus::Degenerate) == (dist_sq <= geom_tol);
    };

    for (int seq = 0; seq < 200; ++seq) {
        const Eigen::Index n = 2 + seq % 15;
        GutterBasis basis(static_cast<std::size_t>(n));
        std::size_t index = 0;
        while (static_cast<Eigen::Index>(basis.size()) < n - 1) {
            const Matrix rows = basis.rows();
            Vector combination;
            if (!basis.empty()) {
                Vector w(rows.rows());
                for (Eigen::Index k = 0; k < w.size(); ++k) w(k) = uniform(rng);
                combination = (rows.transpose() * w).normalized();

                // A combination of existing rows must be rejected.
                const double dist_sq = distance_to_span_sq(rows, combination);
                ++dependent_cases;
                if (!flag_matches(basis.append_row(index++, combination, geom_tol), dist_sq)) ++mismatches;

                // Nudged off the span it must be accepted; probed on a copy so
                // the sequence itself stays one of random independent rows.
                GutterBasis probe = basis;
                const Vector nudged =
                    (combination + 0.05 * basis.null_space_part(random_unit(rng, n)).normalized()).normalized();
                ++near_cases;
                if (!flag_matches(probe.append_row(index++, nudged, geom_tol), distance_to_span_sq(rows, nudged))) {
                    ++mismatches;
                }
            }

            const Vector a = random_unit(rng, n);
            const double dist_sq = distance_to_span_sq(rows, a);
            const AppendStatus status = basis.append_row(index++, a, geom_tol);
            ++appends;
            if (!flag_matches(status, dist_sq)) ++mismatches;
            if (status != AppendStatus::Appended) continue;

            // From-scratch reference: G G^T formed and inverted in extended
            // precision, so its own rounding stays far below the tolerance.
            const Matrix g = basis.rows();
            const WideMatrix wide_g = g.cast<long double>();
            const WideMatrix gram = wide_g * wide_g.transpose();
            const Matrix direct = gram.inverse().cast<double>();
            worst = std::max(worst, (basis.gram_inverse() - direct).cwiseAbs().maxCoeff());
            const Matrix residual = g * g.transpose() * basis.gram_inverse() - Matrix::Identity(g.rows(), g.rows());
            worst_residual = std::max(worst_residual, residual.cwiseAbs().maxCoeff());
        }
    }
    const double elapsed = seconds_since(start);
    return {worst <= 1e-10 && worst_residual <= 1e-10 && mismatches == 0 && elapsed < 5.0,
            "200 sequences, " + std::to_string(appends) + " random appends, max |inverse diff| " + fmt(worst) +
                " (limit 1e-10), max |GG^T Q - I| " + fmt(worst_residual) + ", " + std::to_string(dependent_cases) +
                " dependent + " + std::to_string(near_cases) + " near-dependent probes, " +
                std::to_string(mismatches) + " flag mismatches, " + fmt(elapsed) + " s"};
}

Outcome feasible_suite() {
    SolverConfig config;
    config.epsilon = 0.01;
    std::size_t feasible = 0, unsound = 0, stalled = 0, other = 0;
    double slowest = 0.0;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        const auto inst = testkit::gen_feasible(size_n(seed), size_m(seed), 0.1, seed);
        std::vector<TraceEvent> trace;
        const auto start = Clock::now();
        const SolveResult r =
            solve_feasibility(inst.lp, config, std::nullopt, [&](const TraceEvent& e) { trace.push_back(e); });
        slowest = std::max(slowest, seconds_since(start));
        const std::string name = "feasible_seed" + std::to_string(seed);
        trace_tally.add(name, inst.lp, trace);
        if (r.verdict == Verdict::Feasible) {
            ++feasible;
            if (!r.point || !check_point(inst.lp, *r.point, config.feas_tol)) {
                ++unsound;
                log_run(name, inst.lp, r, trace, "returned point fails check_point");
            }
        } else if (r.verdict == Verdict::Stalled) {
            ++stalled;
            log_run(name, inst.lp, r, trace, "STALLED");
        } else {
            ++other;
            log_run(name, inst.lp, r, trace, std::string(to_string(r.verdict)) + " on a feasible instance");
        }
    }
    const double rate = static_cast<double>(feasible) / 200.0;
    return {rate >= 0.99 && unsound == 0 && slowest < 1.0,
            std::to_string(feasible) + "/200 FEASIBLE (" + fmt(100 * rate, 4) + "%, need >= 99%), " +
                std::to_string(unsound) + " unsound, " + std::to_string(stalled) + " stalled, " +
                std::to_string(other) + " other, slowest " + fmt(slowest * 1e3) + " ms (limit 1000 ms)"};
}

Outcome infeasible_suite() {
    SolverConfig config;
    config.epsilon = 0.01;
    std::size_t infeasible = 0, stalled = 0, false_witness = 0, other = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto inst = testkit::gen_infeasible(size_n(seed), size_m(seed), seed);
        std::vector<TraceEvent> trace;
        const SolveResult r =
            solve_feasibility(inst.lp, config, std::nullopt, [&](const TraceEvent& e) { trace.push_back(e); });
        const std::string name = "infeasible_seed" + std::to_string(seed);
        trace_tally.add(name, inst.lp, trace);
        switch (r.verdict) {
            case Verdict::Infeasible: ++infeasible; break;
            case Verdict::Stalled: ++stalled; break;
            case Verdict::Feasible:
                ++false_witness;
                log_run(name, inst.lp, r, trace, "false FEASIBLE witness");
                break;
            default:
                ++other;
                log_run(name, inst.lp, r, trace, "unexpected verdict");
        }
    }
    return {false_witness == 0 && other == 0,
            std::to_string(infeasible) + " INFEASIBLE, " + std::to_string(stalled) + " STALLED, " +
                std::to_string(false_witness) + " false witnesses, " + std::to_string(other) + " other verdicts"};
}

Outcome phase_two_accuracy() {
    const auto start = Clock::now();
    SolverConfig config;
    config.epsilon = 0.01;
    std::size_t used = 0, close = 0, over = 0, scanned = 0;
    for (std::uint64_t seed = 1; used < 100 && seed < 100000; ++seed) {
        ++scanned;
        auto inst = testkit::gen_feasible(size_n(seed), size_m(seed), 0.1, seed);
        inst.lp.objective = testkit::random_objective(inst.lp.dimension, seed, ObjectiveSense::Maximize);
        const testkit::OracleResult oracle = testkit::oracle_solve(inst.lp);
        if (oracle.verdict != Verdict::Optimal) continue;
        ++used;
        std::vector<TraceEvent> trace;
        const SolveResult r =
            solve_optimum(inst.lp, config, std::nullopt, [&](const TraceEvent& e) { trace.push_back(e); });
        const std::string name = "optimum_seed" + std::to_string(seed);
        trace_tally.add(name, inst.lp, trace);
        const double target = *oracle.objective_value;
        if (r.verdict == Verdict::Optimal && r.objective_value) {
            const double v = *r.objective_value;
            if (v > target + 1e-6) {
                ++over;
                log_run(name, inst.lp, r, trace, "value " + fmt(v, 12) + " exceeds oracle " + fmt(target, 12));
            }
            if (std::abs(v - target) <= 1e-4) {
                ++close;
            } else {
                log_run(name, inst.lp, r, trace, "value " + fmt(v, 12) + " vs oracle " + fmt(target, 12));
            }
        } else {
            log_run(name, inst.lp, r, trace,
                    std::string(to_string(r.verdict)) + " vs oracle OPTIMAL " + fmt(target, 12));
        }
    }
    const double rate = used == 0 ? 0.0 : static_cast<double>(close) / static_cast<double>(used);
    return {used == 100 && over == 0 && rate >= 0.9,
            std::to_string(used) + " bounded instances (from " + std::to_string(scanned) + " seeds), " +
                std::to_string(close) + " within 1e-04 (" + fmt(100 * rate, 4) + "%, need >= 90%), " +
                std::to_string(over) + " above the oracle optimum, " + fmt(seconds_since(start)) + " s"};
}

Outcome trace_invariants() {
    std::string summary = std::to_string(trace_tally.runs) + " traces from criteria 3-5, " +
                          std::to_string(trace_tally.failed) + " with violations, max |dir . row| " +
                          fmt(trace_tally.max_orthogonality) + " (limit 1e-08)";
    for (const std::string& v : trace_tally.first_violations) summary += "; " + v;
    return {trace_tally.runs == 400 && trace_tally.failed == 0, summary};
}

Outcome epsilon_regression() {
    std::string summary;
    bool pass = true;
    for (std::size_t dim : {2u, 3u}) {
        const LinearProgram lp = testkit::fixtures::epsilon_counterexample(dim);
        const Vector start = testkit::fixtures::epsilon_counterexample_start(dim);
        SolverConfig zero;
        zero.epsilon = 0.0;
        SolverConfig ball;
        ball.epsilon = 0.01;
        const SolveResult a = solve_feasibility(lp, zero, start);
        const SolveResult b = solve_feasibility(lp, ball, start);
        const bool ok = (a.verdict == Verdict::Infeasible || a.verdict == Verdict::Stalled) &&
                        b.verdict == Verdict::Feasible && check_point(lp, *b.point, ball.feas_tol);
        pass = pass && ok;
        summary += (summary.empty() ? "" : "; ") + std::string("n=") + std::to_string(dim) + ": eps=0 -> " +
                   std::string(to_string(a.verdict)) + ", eps=0.01 -> " + std::string(to_string(b.verdict));
    }
    return {pass, summary};
}

Outcome repair_fixtures() {
    using testkit::fixtures::WedgeTarget;
    SolverConfig config;
    config.epsilon = 0.01;
    auto run = [&](WedgeTarget which, std::vector<TraceEvent>& trace) {
        return solve_feasibility(testkit::fixtures::wedge(which), config, testkit::fixtures::wedge_start(),
                                 [&](const TraceEvent& e) { trace.push_back(e); });
    };
    auto has = [](const std::vector<TraceEvent>& trace, TraceKind kind) {
        return std::any_of(trace.begin(), trace.end(), [&](const TraceEvent& e) { return e.kind == kind; });
    };

    std::vector<TraceEvent> t1, t2, t3;
    const SolveResult oversized = run(WedgeTarget::Oversized, t1);
    const SolveResult tangent = run(WedgeTarget::ApexTangent, t2);
    const SolveResult separated = run(WedgeTarget::Separated, t3);

    const bool shrink_ok = has(t1, TraceKind::ShrinkBall) && oversized.verdict == Verdict::Feasible;

    // Every plane pinned by the switch must hold with |d| <= 1e-8 at the answer.
    bool tangent_ok = has(t2, TraceKind::EqualitySwitch) && tangent.verdict == Verdict::Feasible;
    double worst_pinned = 0.0;
    if (tangent_ok) {
        const LinearProgram lp = testkit::fixtures::wedge(WedgeTarget::ApexTangent);
        auto sw = std::find_if(t2.begin(), t2.end(), [](const TraceEvent& e) { return e.kind == TraceKind::EqualitySwitch; });
        std::vector<std::size_t> pinned = sw->gutter;
        const std::size_t target = lp.size() - 1;
        if (std::find(pinned.begin(), pinned.end(), target) == pinned.end()) pinned.push_back(target);
        for (std::size_t k : pinned) worst_pinned = std::max(worst_pinned, std::abs(signed_distance(lp.constraints[k], *tangent.point)));
        tangent_ok = worst_pinned <= 1e-8;
    }
    const bool separated_ok = separated.verdict == Verdict::Infeasible;

    return {shrink_ok && tangent_ok && separated_ok,
            std::string("oversized: ") + (has(t1, TraceKind::ShrinkBall) ? "SHRINK_BALL, " : "no shrink, ") +
                std::string(to_string(oversized.verdict)) + " (eps " + fmt(oversized.epsilon_final, 6) +
                "); apex-tangent: " + (has(t2, TraceKind::EqualitySwitch) ? "EQUALITY_SWITCH, " : "no switch, ") +
                std::string(to_string(tangent.verdict)) + ", max pinned |d| " + fmt(worst_pinned) +
                "; separated: " + std::string(to_string(separated.verdict))};
}

Outcome one_dimensional_infeasibility() {
    LinearProgram lp = parse_lp("vars 1\nc 1 >= 1\nc -1 >= 0\n");
    std::vector<TraceEvent> trace;
    const SolveResult r = solve_feasibility(lp, SolverConfig{}, std::nullopt,
                                            [&](const TraceEvent& e) { trace.push_back(e); });
    const bool gutter_full = std::any_of(trace.begin(), trace.end(),
                                         [](const TraceEvent& e) { return e.kind == TraceKind::GutterFull; });
    return {r.verdict == Verdict::Infeasible && gutter_full && r.iterations <= 5,
            std::string(to_string(r.verdict)) + (gutter_full ? " via GUTTER_FULL" : " without GUTTER_FULL") + " after " +
                std::to_string(r.iterations) + " inner iterations (limit 5)"};
}

struct Captured {
    int code = -1;
    std::string out;
};

Captured capture(const std::string& command) {
    Captured c;
    FILE* pipe = popen(command.c_str(), "r");
    if (pipe == nullptr) return c;
    std::array<char, 4096> buffer{};
    std::size_t got = 0;
    while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) c.out.append(buffer.data(), got);
    const int status = pclose(pipe);
    c.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return c;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism() {
    const fs::path dir = log_dir() / "determinism";
    fs::create_directories(dir);
    std::size_t comparisons = 0, differing = 0, with_events = 0;
    const std::vector<std::string> flag_sets = {"", "--epsilon 0.05", "--phase optimize", "--phase optimize --seed 3",
                                                "--feas-tol 1e-7 --max-iter 500"};
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto inst = seed % 2 ? testkit::gen_feasible(size_n(seed), size_m(seed), 0.1, seed)
                             : testkit::gen_infeasible(size_n(seed), size_m(seed), seed);
        inst.lp.objective = testkit::random_objective(inst.lp.dimension, seed);
        const fs::path file = dir / ("instance" + std::to_string(seed) + ".lp");
        std::ofstream(file) << serialize_lp(inst.lp);
        for (const std::string& flags : flag_sets) {
            std::string records[2];
            std::string traces[2];
            for (int rep = 0; rep < 2; ++rep) {
                const fs::path trace = dir / ("trace" + std::to_string(rep) + ".jsonl");
                const Captured c = capture(std::string(GUTTERLP_CLI) + " solve " + file.string() + " " + flags +
                                           " --trace " + trace.string() + " 2>&1");
                records[rep] = std::to_string(c.code) + "|" + c.out;
                traces[rep] = slurp(trace);
            }
            ++comparisons;
            if (records[0] != records[1] || traces[0] != traces[1]) ++differing;
            if (!traces[0].empty()) ++with_events;
        }
    }
    return {differing == 0 && comparisons == 50 && with_events > 0,
            std::to_string(comparisons) + " repeated CLI runs over 10 files x 5 flag sets (" +
                std::to_string(with_events) + " with non-empty traces), " + std::to_string(differing) +
                " with differing records or traces"};
}

}  // namespace

int main() {
    std::cout.setf(std::ios::unitbuf);
    report(1, "projection matches the dense oracle", projection_equivalence());
    report(2, "incremental Gram inverse matches direct inversion", incremental_inverse());
    report(3, "feasible suite soundness and success", feasible_suite());
    report(4, "infeasible suite soundness", infeasible_suite());
    report(5, "phase two accuracy against the oracle", phase_two_accuracy());
    report(6, "trace invariants on every run of criteria 3-5", trace_invariants());
    report(7, "epsilon counterexample regression", epsilon_regression());
    report(8, "wedge repair fixtures", repair_fixtures());
    report(9, "one-dimensional contradiction", one_dimensional_infeasibility());
    report(10, "determinism of records and traces", determinism());
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
