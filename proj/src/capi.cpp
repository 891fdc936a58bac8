#include "gutterlp/gutterlp.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gutterlp/error.hpp"
#include "gutterlp/lp_format.hpp"
#include "gutterlp/model.hpp"
#include "gutterlp/records.hpp"
#include "gutterlp/solver.hpp"
#include "gutterlp/testkit.hpp"

struct glp_problem {
    gutterlp::LinearProgram lp;
};

struct glp_options {
    gutterlp::SolverConfig config;
    glp_phase phase = GLP_PHASE_FEASIBILITY;
    std::optional<gutterlp::Vector> start;
    bool record_trace = false;
};

struct glp_result {
    gutterlp::SolveResult result;
    std::vector<gutterlp::TraceEvent> trace;
};

namespace {

thread_local std::string last_error;

glp_status fail(glp_status status, const std::string& message) {
    last_error = message;
    return status;
}

glp_status status_for(gutterlp::ErrorCode code) {
    using gutterlp::ErrorCode;
    switch (code) {
        case ErrorCode::InvalidArgument: return GLP_ERR_INVALID_ARGUMENT;
        case ErrorCode::SyntaxError: return GLP_ERR_SYNTAX;
        case ErrorCode::DimensionMismatch: return GLP_ERR_DIMENSION_MISMATCH;
        case ErrorCode::ZeroNormal: return GLP_ERR_ZERO_NORMAL;
        case ErrorCode::Io: return GLP_ERR_IO;
        case ErrorCode::ScaleExceeded: return GLP_ERR_SCALE_EXCEEDED;
        case ErrorCode::NoObjective: return GLP_ERR_NO_OBJECTIVE;
        case ErrorCode::DuplicateIndex:
        case ErrorCode::DegenerateBasis:
        case ErrorCode::RankDeficient: return GLP_ERR_DEGENERATE;
    }
    return GLP_ERR_INTERNAL;
}

// Runs `body` and converts any exception into a status code.
template <class Body>
glp_status guarded(Body&& body) {
    try {
        return body();
    } catch (const gutterlp::Error& e) {
        return fail(status_for(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(GLP_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(GLP_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(GLP_ERR_INTERNAL, "unknown error");
    }
}

char* duplicate(const std::string& text) {
    char* out = new char[text.size() + 1];
    std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

glp_status emit_string(const std::string& text, char** out) {
    if (out == nullptr) return fail(GLP_ERR_INVALID_ARGUMENT, "output pointer is null");
    *out = duplicate(text);
    return GLP_OK;
}

glp_status null_argument(const char* name) {
    return fail(GLP_ERR_INVALID_ARGUMENT, std::string(name) + " is null");
}

glp_status set_tolerance(glp_options* options, double value, double gutterlp::SolverConfig::*field,
                         const char* name) {
    if (options == nullptr) return null_argument("options");
    if (!std::isfinite(value) || value < 0) {
        return fail(GLP_ERR_INVALID_ARGUMENT, std::string(name) + " must be finite and non-negative");
    }
    options->config.*field = value;
    return GLP_OK;
}

glp_status wrap_instance(gutterlp::testkit::GeneratedInstance instance, glp_problem** out, char** certificate_json) {
    if (out == nullptr) return null_argument("out");
    std::string cert = gutterlp::certificate_json(instance);
    // Generated rows are already unit length; normalize makes that a checked fact.
    auto* problem = new glp_problem{gutterlp::normalize(std::move(instance.lp))};
    if (certificate_json != nullptr) *certificate_json = duplicate(cert);
    *out = problem;
    return GLP_OK;
}

}  // namespace

extern "C" {

const char* glp_last_error(void) { return last_error.c_str(); }

const char* glp_version(void) { return "0.1.0"; }

const char* glp_verdict_name(glp_verdict verdict) {
    switch (verdict) {
        case GLP_FEASIBLE: return "FEASIBLE";
        case GLP_OPTIMAL: return "OPTIMAL";
        case GLP_INFEASIBLE: return "INFEASIBLE";
        case GLP_UNBOUNDED: return "UNBOUNDED";
        case GLP_STALLED: return "STALLED";
    }
    return "UNKNOWN";
}

void glp_string_free(char* text) { delete[] text; }

glp_status glp_problem_parse(const char* text, glp_problem** out) {
    if (text == nullptr) return null_argument("text");
    if (out == nullptr) return null_argument("out");
    return guarded([&] {
        *out = new glp_problem{gutterlp::parse_lp(text)};
        return GLP_OK;
    });
}

glp_status glp_problem_load(const char* path, glp_problem** out) {
    if (path == nullptr) return null_argument("path");
    if (out == nullptr) return null_argument("out");
    return guarded([&] {
        *out = new glp_problem{gutterlp::load_lp(path)};
        return GLP_OK;
    });
}

void glp_problem_free(glp_problem* problem) { delete problem; }

size_t glp_problem_dimension(const glp_problem* problem) { return problem ? problem->lp.dimension : 0; }

size_t glp_problem_constraint_count(const glp_problem* problem) { return problem ? problem->lp.size() : 0; }

int glp_problem_has_objective(const glp_problem* problem) {
    return problem != nullptr && problem->lp.objective.has_value() ? 1 : 0;
}

glp_status glp_problem_serialize(const glp_problem* problem, char** out) {
    if (problem == nullptr) return null_argument("problem");
    return guarded([&] { return emit_string(gutterlp::serialize_lp(problem->lp), out); });
}

glp_status glp_problem_check_point(const glp_problem* problem, const double* x, size_t n, double feas_tol,
                                   int* satisfied) {
    if (problem == nullptr) return null_argument("problem");
    if (x == nullptr) return null_argument("x");
    if (satisfied == nullptr) return null_argument("satisfied");
    return guarded([&] {
        gutterlp::require_dimension(problem->lp.dimension, n, "point");
        const gutterlp::Vector p = Eigen::Map<const gutterlp::Vector>(x, static_cast<Eigen::Index>(n));
        *satisfied = gutterlp::check_point(problem->lp, p, feas_tol) ? 1 : 0;
        return GLP_OK;
    });
}

glp_status glp_problem_set_random_objective(glp_problem* problem, uint64_t seed, int maximize) {
    if (problem == nullptr) return null_argument("problem");
    return guarded([&] {
        problem->lp.objective = gutterlp::testkit::random_objective(
            problem->lp.dimension, seed,
            maximize ? gutterlp::ObjectiveSense::Maximize : gutterlp::ObjectiveSense::Minimize);
        return GLP_OK;
    });
}

glp_status glp_options_create(glp_options** out) {
    if (out == nullptr) return null_argument("out");
    return guarded([&] {
        *out = new glp_options{};
        return GLP_OK;
    });
}

void glp_options_free(glp_options* options) { delete options; }

glp_status glp_options_set_epsilon(glp_options* options, double epsilon) {
    return set_tolerance(options, epsilon, &gutterlp::SolverConfig::epsilon, "epsilon");
}

glp_status glp_options_set_feas_tol(glp_options* options, double feas_tol) {
    return set_tolerance(options, feas_tol, &gutterlp::SolverConfig::feas_tol, "feas_tol");
}

glp_status glp_options_set_geom_tol(glp_options* options, double geom_tol) {
    return set_tolerance(options, geom_tol, &gutterlp::SolverConfig::geom_tol, "geom_tol");
}

glp_status glp_options_set_max_iter(glp_options* options, size_t max_iter) {
    if (options == nullptr) return null_argument("options");
    options->config.max_outer_iters = max_iter;
    return GLP_OK;
}

glp_status glp_options_set_phase(glp_options* options, glp_phase phase) {
    if (options == nullptr) return null_argument("options");
    if (phase != GLP_PHASE_FEASIBILITY && phase != GLP_PHASE_OPTIMIZE) {
        return fail(GLP_ERR_INVALID_ARGUMENT, "unknown phase");
    }
    options->phase = phase;
    return GLP_OK;
}

glp_status glp_options_set_start(glp_options* options, const double* x, size_t n) {
    if (options == nullptr) return null_argument("options");
    if (x == nullptr) {
        options->start.reset();
        return GLP_OK;
    }
    return guarded([&] {
        options->start = gutterlp::Vector(Eigen::Map<const gutterlp::Vector>(x, static_cast<Eigen::Index>(n)));
        return GLP_OK;
    });
}

glp_status glp_options_set_record_trace(glp_options* options, int enabled) {
    if (options == nullptr) return null_argument("options");
    options->record_trace = enabled != 0;
    return GLP_OK;
}

glp_status glp_solve(const glp_problem* problem, const glp_options* options, glp_result** out) {
    if (problem == nullptr) return null_argument("problem");
    if (out == nullptr) return null_argument("out");
    return guarded([&] {
        const glp_options defaults{};
        const glp_options& opts = options != nullptr ? *options : defaults;
        if (opts.start) {
            gutterlp::require_dimension(problem->lp.dimension, static_cast<std::size_t>(opts.start->size()),
                                        "start point");
        }
        auto result = std::make_unique<glp_result>();
        gutterlp::TraceSink sink;
        if (opts.record_trace) {
            sink = [trace = &result->trace](const gutterlp::TraceEvent& ev) { trace->push_back(ev); };
        }
        if (opts.phase == GLP_PHASE_OPTIMIZE) {
            result->result = gutterlp::solve_optimum(problem->lp, opts.config, opts.start, sink);
        } else {
            result->result = gutterlp::solve_feasibility(problem->lp, opts.config, opts.start, sink);
        }
        *out = result.release();
        return GLP_OK;
    });
}

void glp_result_free(glp_result* result) { delete result; }

glp_verdict glp_result_verdict(const glp_result* result) {
    return result ? static_cast<glp_verdict>(result->result.verdict) : GLP_STALLED;
}

size_t glp_result_point_size(const glp_result* result) {
    return result && result->result.point ? static_cast<size_t>(result->result.point->size()) : 0;
}

glp_status glp_result_point(const glp_result* result, double* buffer, size_t capacity) {
    if (result == nullptr) return null_argument("result");
    if (!result->result.point) return fail(GLP_ERR_INVALID_ARGUMENT, "result has no point");
    const auto& p = *result->result.point;
    if (buffer == nullptr || capacity < static_cast<size_t>(p.size())) {
        return fail(GLP_ERR_INVALID_ARGUMENT, "buffer too small for result point");
    }
    for (Eigen::Index k = 0; k < p.size(); ++k) buffer[k] = p(k);
    return GLP_OK;
}

int glp_result_objective(const glp_result* result, double* value) {
    if (result == nullptr || !result->result.objective_value) return 0;
    if (value != nullptr) *value = *result->result.objective_value;
    return 1;
}

size_t glp_result_iterations(const glp_result* result) { return result ? result->result.iterations : 0; }

double glp_result_epsilon_final(const glp_result* result) { return result ? result->result.epsilon_final : 0.0; }

glp_status glp_result_record_json(const glp_result* result, char** out) {
    if (result == nullptr) return null_argument("result");
    return guarded([&] { return emit_string(gutterlp::result_record_json(result->result), out); });
}

glp_status glp_result_trace_jsonl(const glp_result* result, char** out) {
    if (result == nullptr) return null_argument("result");
    return guarded([&] {
        std::string text;
        for (const auto& ev : result->trace) {
            text += gutterlp::trace_event_json(ev);
            text += '\n';
        }
        return emit_string(text, out);
    });
}

glp_status glp_result_render_svg(const glp_result* result, const glp_problem* problem, char** out) {
    if (result == nullptr) return null_argument("result");
    if (problem == nullptr) return null_argument("problem");
    return guarded([&] {
        return emit_string(gutterlp::render_svg(problem->lp, result->trace, result->result.point), out);
    });
}

glp_status glp_check_trace(const glp_problem* problem, const char* trace_jsonl, int* ok, char** report) {
    if (problem == nullptr) return null_argument("problem");
    if (trace_jsonl == nullptr) return null_argument("trace_jsonl");
    if (ok == nullptr) return null_argument("ok");
    return guarded([&] {
        const auto events = gutterlp::parse_trace_jsonl(trace_jsonl);
        const auto summary = gutterlp::testkit::check_trace(problem->lp, events);
        *ok = summary.ok ? 1 : 0;
        if (report != nullptr) {
            nlohmann::ordered_json j;
            j["ok"] = summary.ok;
            j["events"] = summary.events;
            j["moves"] = summary.moves;
            j["max_orthogonality"] = summary.max_orthogonality;
            j["max_gutter"] = summary.max_gutter;
            j["violations"] = summary.violations;
            *report = duplicate(j.dump());
        }
        return GLP_OK;
    });
}

glp_status glp_generate_feasible(size_t n, size_t m, double slack, uint64_t seed, glp_problem** out,
                                 char** certificate_json) {
    return guarded([&] { return wrap_instance(gutterlp::testkit::gen_feasible(n, m, slack, seed), out, certificate_json); });
}

glp_status glp_generate_infeasible(size_t n, size_t m, uint64_t seed, glp_problem** out, char** certificate_json) {
    return guarded([&] { return wrap_instance(gutterlp::testkit::gen_infeasible(n, m, seed), out, certificate_json); });
}

glp_status glp_oracle_solve(const glp_problem* problem, char** record_json) {
    if (problem == nullptr) return null_argument("problem");
    return guarded([&] {
        return emit_string(gutterlp::oracle_record_json(gutterlp::testkit::oracle_solve(problem->lp)), record_json);
    });
}

}  // extern "C"
