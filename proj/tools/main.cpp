// Command-line front end. Talks to the solver exclusively through the C API.
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gutterlp/gutterlp.h"

namespace {

enum ExitCode : int {
    kExitSolved = 0,
    kExitInfeasible = 1,
    kExitUnbounded = 2,
    kExitStalled = 3,
    kExitUsage = 64,
    kExitData = 65,
    kExitNoInput = 66,
    kExitInternal = 70,
    kExitCantCreate = 73,
};

struct ProblemDeleter {
    void operator()(glp_problem* p) const { glp_problem_free(p); }
};
struct OptionsDeleter {
    void operator()(glp_options* o) const { glp_options_free(o); }
};
struct ResultDeleter {
    void operator()(glp_result* r) const { glp_result_free(r); }
};
struct StringDeleter {
    void operator()(char* s) const { glp_string_free(s); }
};
using ProblemPtr = std::unique_ptr<glp_problem, ProblemDeleter>;
using OptionsPtr = std::unique_ptr<glp_options, OptionsDeleter>;
using ResultPtr = std::unique_ptr<glp_result, ResultDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

// Raised inside subcommands; carries the process exit code.
struct CliFailure {
    int code;
    std::string message;
};

int exit_code_for(glp_status status) {
    switch (status) {
        case GLP_OK: return kExitSolved;
        case GLP_ERR_SYNTAX:
        case GLP_ERR_DIMENSION_MISMATCH:
        case GLP_ERR_ZERO_NORMAL: return kExitData;
        case GLP_ERR_IO: return kExitNoInput;
        case GLP_ERR_INVALID_ARGUMENT:
        case GLP_ERR_SCALE_EXCEEDED:
        case GLP_ERR_NO_OBJECTIVE: return kExitUsage;
        default: return kExitInternal;
    }
}

void check(glp_status status) {
    if (status != GLP_OK) throw CliFailure{exit_code_for(status), glp_last_error()};
}

int exit_code_for(glp_verdict verdict) {
    switch (verdict) {
        case GLP_FEASIBLE:
        case GLP_OPTIMAL: return kExitSolved;
        case GLP_INFEASIBLE: return kExitInfeasible;
        case GLP_UNBOUNDED: return kExitUnbounded;
        case GLP_STALLED: return kExitStalled;
    }
    return kExitInternal;
}

std::string take(char* text) {
    StringPtr owned(text);
    return owned ? std::string(owned.get()) : std::string();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliFailure{kExitCantCreate, "cannot open '" + path + "' for writing"};
    out << content;
    if (!out) throw CliFailure{kExitCantCreate, "failed writing '" + path + "'"};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliFailure{kExitNoInput, "cannot open '" + path + "'"};
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

ProblemPtr load(const std::string& path) {
    glp_problem* raw = nullptr;
    check(glp_problem_load(path.c_str(), &raw));
    return ProblemPtr(raw);
}

std::vector<double> parse_coordinates(const std::string& text) {
    std::vector<double> values;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size() || !std::isfinite(v)) {
            throw CliFailure{kExitUsage, "--start: '" + item + "' is not a number"};
        }
        values.push_back(v);
    }
    if (values.empty()) throw CliFailure{kExitUsage, "--start needs at least one coordinate"};
    return values;
}

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& text) {
    const auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            const std::uint64_t v = std::stoull(text);
            return {v, v};
        }
        const std::uint64_t lo = std::stoull(text.substr(0, dots));
        const std::uint64_t hi = std::stoull(text.substr(dots + 2));
        if (hi < lo) throw CliFailure{kExitUsage, "--seeds: empty range"};
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw CliFailure{kExitUsage, "--seeds expects A..B"};
    }
}

struct SolverFlags {
    std::optional<double> epsilon;
    std::optional<double> feas_tol;
    std::optional<double> geom_tol;
    std::optional<std::size_t> max_iter;
    std::string phase = "feasibility";

    void attach(CLI::App* cmd) {
        cmd->add_option("--epsilon", epsilon, "Ball radius")->check(CLI::NonNegativeNumber);
        cmd->add_option("--feas-tol", feas_tol, "Feasibility tolerance")->check(CLI::NonNegativeNumber);
        cmd->add_option("--geom-tol", geom_tol, "Geometric tolerance")->check(CLI::NonNegativeNumber);
        cmd->add_option("--max-iter", max_iter, "Outer iteration cap (0 = automatic)");
        cmd->add_option("--phase", phase, "feasibility or optimize")
            ->check(CLI::IsMember({"feasibility", "optimize"}));
    }

    OptionsPtr build() const {
        glp_options* raw = nullptr;
        check(glp_options_create(&raw));
        OptionsPtr options(raw);
        if (epsilon) check(glp_options_set_epsilon(raw, *epsilon));
        if (feas_tol) check(glp_options_set_feas_tol(raw, *feas_tol));
        if (geom_tol) check(glp_options_set_geom_tol(raw, *geom_tol));
        if (max_iter) check(glp_options_set_max_iter(raw, *max_iter));
        check(glp_options_set_phase(raw, optimize() ? GLP_PHASE_OPTIMIZE : GLP_PHASE_FEASIBILITY));
        return options;
    }

    bool optimize() const { return phase == "optimize"; }
    double feasibility_tolerance() const { return feas_tol.value_or(1e-8); }
};

// --- solve -------------------------------------------------------------

struct SolveArgs {
    std::string input;
    SolverFlags flags;
    std::optional<std::string> start;
    std::optional<std::string> trace_path;
    std::optional<std::string> svg_path;
    std::optional<std::uint64_t> seed;
};

// A seed without an explicit start draws the start uniformly from [-1, 1]^n.
// The conversion is spelled out so the draw does not depend on the standard
// library's distribution implementation.
std::vector<double> seeded_start(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    std::vector<double> x(n);
    for (double& v : x) v = 2.0 * (static_cast<double>(engine() >> 11) * 0x1.0p-53) - 1.0;
    return x;
}

int run_solve(const SolveArgs& args) {
    ProblemPtr problem = load(args.input);
    const std::size_t n = glp_problem_dimension(problem.get());
    if (args.svg_path && n != 2) {
        throw CliFailure{kExitUsage, "--svg is only available for 2-dimensional problems (this one has n = " +
                                         std::to_string(n) + ")"};
    }
    OptionsPtr options = args.flags.build();
    std::optional<std::vector<double>> start;
    if (args.start) {
        start = parse_coordinates(*args.start);
        if (start->size() != n) {
            throw CliFailure{kExitUsage, "--start has " + std::to_string(start->size()) + " coordinates, expected " +
                                             std::to_string(n)};
        }
    } else if (args.seed) {
        start = seeded_start(n, *args.seed);
    }
    if (start) check(glp_options_set_start(options.get(), start->data(), start->size()));
    check(glp_options_set_record_trace(options.get(), args.trace_path || args.svg_path ? 1 : 0));

    glp_result* raw = nullptr;
    check(glp_solve(problem.get(), options.get(), &raw));
    ResultPtr result(raw);

    char* text = nullptr;
    check(glp_result_record_json(result.get(), &text));
    std::cout << take(text) << '\n';
    if (args.trace_path) {
        check(glp_result_trace_jsonl(result.get(), &text));
        write_file(*args.trace_path, take(text));
    }
    if (args.svg_path) {
        check(glp_result_render_svg(result.get(), problem.get(), &text));
        write_file(*args.svg_path, take(text));
    }
    return exit_code_for(glp_result_verdict(result.get()));
}

// --- gen ---------------------------------------------------------------

struct GenArgs {
    bool feasible = false;
    bool infeasible = false;
    std::size_t n = 2;
    std::size_t m = 4;
    double slack = 0.1;
    std::uint64_t seed = 0;
    std::optional<std::string> objective;
    std::string output;
};

int run_gen(const GenArgs& args) {
    if (args.feasible == args.infeasible) throw CliFailure{kExitUsage, "pass exactly one of --feasible/--infeasible"};
    glp_problem* raw = nullptr;
    char* cert = nullptr;
    if (args.feasible) {
        check(glp_generate_feasible(args.n, args.m, args.slack, args.seed, &raw, &cert));
    } else {
        check(glp_generate_infeasible(args.n, args.m, args.seed, &raw, &cert));
    }
    ProblemPtr problem(raw);
    const std::string certificate = take(cert);
    if (args.objective) {
        check(glp_problem_set_random_objective(problem.get(), args.seed, *args.objective == "max" ? 1 : 0));
    }
    char* text = nullptr;
    check(glp_problem_serialize(problem.get(), &text));
    write_file(args.output, take(text));
    write_file(args.output + ".cert.json", certificate + "\n");
    return kExitSolved;
}

// --- oracle ------------------------------------------------------------

int run_oracle(const std::string& input) {
    ProblemPtr problem = load(input);
    char* text = nullptr;
    check(glp_oracle_solve(problem.get(), &text));
    const std::string record = take(text);
    std::cout << record << '\n';
    const auto verdict = nlohmann::json::parse(record).at("verdict").get<std::string>();
    for (glp_verdict v : {GLP_FEASIBLE, GLP_OPTIMAL, GLP_INFEASIBLE, GLP_UNBOUNDED, GLP_STALLED}) {
        if (verdict == glp_verdict_name(v)) return exit_code_for(v);
    }
    return kExitInternal;
}

// --- check-trace -------------------------------------------------------

int run_check_trace(const std::string& input, const std::string& trace_path) {
    ProblemPtr problem = load(input);
    const std::string trace = read_file(trace_path);
    int ok = 0;
    char* report = nullptr;
    check(glp_check_trace(problem.get(), trace.c_str(), &ok, &report));
    std::cout << take(report) << '\n';
    return ok ? kExitSolved : kExitInfeasible;
}

// --- bench -------------------------------------------------------------

struct BenchArgs {
    std::string seeds = "1..50";
    bool feasible = false;
    bool infeasible = false;
    std::optional<std::size_t> n;
    std::optional<std::size_t> m;
    double slack = 0.1;
    SolverFlags flags;
};

struct BenchTotals {
    std::size_t instances = 0;
    std::size_t solved = 0;
    std::size_t stalled = 0;
    std::size_t disagreements = 0;
    std::size_t unsound = 0;
    std::size_t trace_failures = 0;
};

int run_bench(const BenchArgs& args) {
    if (args.feasible == args.infeasible) throw CliFailure{kExitUsage, "pass exactly one of --feasible/--infeasible"};
    const auto [first, last] = parse_seed_range(args.seeds);
    OptionsPtr options = args.flags.build();
    check(glp_options_set_record_trace(options.get(), 1));
    const bool optimize = args.flags.optimize();

    BenchTotals totals;
    const auto bench_start = std::chrono::steady_clock::now();
    for (std::uint64_t seed = first;; ++seed) {
        // Default sizes sweep n in [2, 6] and m in [3, 15] across seeds.
        const std::size_t n = args.n.value_or(2 + seed % 5);
        const std::size_t m = args.m.value_or(3 + (seed * 7) % 13);
        glp_problem* raw = nullptr;
        char* cert = nullptr;
        if (args.feasible) {
            check(glp_generate_feasible(n, m, args.slack, seed, &raw, &cert));
        } else {
            check(glp_generate_infeasible(n, m, seed, &raw, &cert));
        }
        ProblemPtr problem(raw);
        glp_string_free(cert);
        if (optimize) check(glp_problem_set_random_objective(problem.get(), seed, 1));

        const auto t0 = std::chrono::steady_clock::now();
        glp_result* result_raw = nullptr;
        check(glp_solve(problem.get(), options.get(), &result_raw));
        ResultPtr result(result_raw);
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

        const glp_verdict verdict = glp_result_verdict(result.get());
        bool sound = true;
        if (glp_result_point_size(result.get()) == n && (verdict == GLP_FEASIBLE || verdict == GLP_OPTIMAL)) {
            std::vector<double> x(n);
            check(glp_result_point(result.get(), x.data(), x.size()));
            int ok = 0;
            check(glp_problem_check_point(problem.get(), x.data(), n, args.flags.feasibility_tolerance(), &ok));
            sound = ok != 0;
        }
        if (args.infeasible && (verdict == GLP_FEASIBLE || verdict == GLP_OPTIMAL)) sound = false;

        char* trace = nullptr;
        check(glp_result_trace_jsonl(result.get(), &trace));
        int trace_ok = 0;
        check(glp_check_trace(problem.get(), StringPtr(trace).get(), &trace_ok, nullptr));

        nlohmann::ordered_json record;
        record["seed"] = seed;
        record["n"] = n;
        record["m"] = m;
        record["verdict"] = glp_verdict_name(verdict);
        record["sound"] = sound;
        record["trace_ok"] = trace_ok != 0;

        char* oracle_text = nullptr;
        const glp_status oracle_status = glp_oracle_solve(problem.get(), &oracle_text);
        std::optional<bool> agree;
        if (oracle_status == GLP_OK) {
            const auto oracle = nlohmann::json::parse(take(oracle_text));
            const std::string oracle_verdict = oracle.at("verdict").get<std::string>();
            record["oracle"] = oracle_verdict;
            if (verdict != GLP_STALLED) {
                agree = oracle_verdict == glp_verdict_name(verdict);
                double value = 0;
                if (*agree && verdict == GLP_OPTIMAL && glp_result_objective(result.get(), &value)) {
                    agree = std::abs(value - oracle.at("objective").get<double>()) <= 1e-4;
                }
            }
        } else if (oracle_status != GLP_ERR_SCALE_EXCEEDED) {
            check(oracle_status);
        } else {
            record["oracle"] = nullptr;
        }
        record["agree"] = agree ? nlohmann::ordered_json(*agree) : nlohmann::ordered_json(nullptr);
        record["ms"] = std::round(ms * 1000.0) / 1000.0;
        std::cout << record.dump() << '\n';

        ++totals.instances;
        if (verdict == GLP_STALLED) ++totals.stalled;
        else ++totals.solved;
        if (agree && !*agree) ++totals.disagreements;
        if (!sound) ++totals.unsound;
        if (!trace_ok) ++totals.trace_failures;
        if (seed == last) break;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - bench_start).count();
    nlohmann::ordered_json summary;
    summary["instances"] = totals.instances;
    summary["solved"] = totals.solved;
    summary["stalled"] = totals.stalled;
    summary["disagreements"] = totals.disagreements;
    summary["unsound"] = totals.unsound;
    summary["trace_failures"] = totals.trace_failures;
    summary["seconds"] = seconds;
    std::cout << summary.dump() << '\n';
    return totals.unsound == 0 && totals.trace_failures == 0 ? kExitSolved : kExitInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ball-and-gutter linear feasibility and optimization solver"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(glp_version()));

    SolveArgs solve_args;
    CLI::App* solve = app.add_subcommand("solve", "Solve an LP file and print a result record");
    solve->add_option("input", solve_args.input, "LP file")->required();
    solve_args.flags.attach(solve);
    solve->add_option("--start", solve_args.start, "Start point x1,..,xn");
    solve->add_option("--trace", solve_args.trace_path, "Write a JSONL trace");
    solve->add_option("--svg", solve_args.svg_path, "Write an SVG rendering (n = 2 only)");
    solve->add_option("--seed", solve_args.seed, "Seed for a random start point when --start is absent");

    GenArgs gen_args;
    CLI::App* gen = app.add_subcommand("gen", "Generate a random instance with a certificate sidecar");
    gen->add_flag("--feasible", gen_args.feasible, "Instance with a strictly interior point");
    gen->add_flag("--infeasible", gen_args.infeasible, "Instance containing a contradictory pair");
    gen->add_option("-n", gen_args.n, "Dimension")->check(CLI::PositiveNumber);
    gen->add_option("-m", gen_args.m, "Constraint count")->check(CLI::PositiveNumber);
    gen->add_option("--slack", gen_args.slack, "Minimum slack at the interior point")->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_args.seed, "Generator seed");
    gen->add_option("--objective", gen_args.objective, "Attach a random objective")
        ->check(CLI::IsMember({"min", "max"}));
    gen->add_option("-o,--output", gen_args.output, "LP file to write; the certificate goes to <output>.cert.json")
        ->required();

    std::string oracle_input;
    CLI::App* oracle = app.add_subcommand("oracle", "Reference solve by vertex enumeration (n <= 8, m <= 20)");
    oracle->add_option("input", oracle_input, "LP file")->required();

    BenchArgs bench_args;
    CLI::App* bench = app.add_subcommand("bench", "Run solver and oracle over a seeded batch");
    bench->add_option("--seeds", bench_args.seeds, "Seed range A..B");
    bench->add_flag("--feasible", bench_args.feasible, "Feasible instances");
    bench->add_flag("--infeasible", bench_args.infeasible, "Infeasible instances");
    bench->add_option("-n", bench_args.n, "Fixed dimension")->check(CLI::PositiveNumber);
    bench->add_option("-m", bench_args.m, "Fixed constraint count")->check(CLI::PositiveNumber);
    bench->add_option("--slack", bench_args.slack, "Slack for feasible instances")->check(CLI::PositiveNumber);
    bench_args.flags.attach(bench);

    std::string check_input;
    std::string check_trace_path;
    CLI::App* check_trace_cmd = app.add_subcommand("check-trace", "Replay a JSONL trace against an LP file");
    check_trace_cmd->add_option("input", check_input, "LP file")->required();
    check_trace_cmd->add_option("trace", check_trace_path, "JSONL trace")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (solve->parsed()) return run_solve(solve_args);
        if (gen->parsed()) return run_gen(gen_args);
        if (oracle->parsed()) return run_oracle(oracle_input);
        if (bench->parsed()) return run_bench(bench_args);
        if (check_trace_cmd->parsed()) return run_check_trace(check_input, check_trace_path);
    } catch (const CliFailure& failure) {
        std::cerr << "error: " << failure.message << '\n';
        return failure.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitUsage;
}
