#include "gutterlp/records.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "gutterlp/error.hpp"
#include "gutterlp/lp_format.hpp"

namespace gutterlp {
namespace {

using Json = nlohmann::ordered_json;

Json vector_json(const Vector& v) {
    Json arr = Json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) arr.push_back(v(k));
    return arr;
}

Json optional_vector_json(const std::optional<Vector>& v) { return v ? vector_json(*v) : Json(nullptr); }

Vector vector_from_json(const Json& j, std::size_t line) {
    if (!j.is_array()) throw SyntaxError(line, "expected an array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t k = 0; k < j.size(); ++k) {
        if (!j[k].is_number()) throw SyntaxError(line, "expected a number");
        v(static_cast<Eigen::Index>(k)) = j[k].get<double>();
    }
    return v;
}

}  // namespace

std::string result_record_json(const SolveResult& result) {
    Json j;
    j["verdict"] = std::string(to_string(result.verdict));
    j["point"] = optional_vector_json(result.point);
    j["objective"] = result.objective_value ? Json(*result.objective_value) : Json(nullptr);
    j["iterations"] = result.iterations;
    j["epsilon_final"] = result.epsilon_final;
    j["diagnostics"] = result.diagnostics;
    return j.dump();
}

std::string trace_event_json(const TraceEvent& event) {
    Json j;
    j["iteration"] = event.iteration;
    j["kind"] = std::string(to_string(event.kind));
    j["p0"] = vector_json(event.p0);
    j["dir"] = vector_json(event.dir);
    j["gutter"] = event.gutter;
    j["detail"] = event.detail;
    return j.dump();
}

std::vector<TraceEvent> parse_trace_jsonl(std::string_view text) {
    std::vector<TraceEvent> events;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        const std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        Json j;
        try {
            j = Json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw SyntaxError(line_no, e.what());
        }
        try {
            TraceEvent ev;
            ev.iteration = j.at("iteration").get<std::size_t>();
            const auto kind = trace_kind_from_string(j.at("kind").get<std::string>());
            if (!kind) throw SyntaxError(line_no, "unknown event kind");
            ev.kind = *kind;
            ev.p0 = vector_from_json(j.at("p0"), line_no);
            ev.dir = vector_from_json(j.at("dir"), line_no);
            ev.gutter = j.at("gutter").get<std::vector<std::size_t>>();
            ev.detail = j.at("detail").get<std::string>();
            events.push_back(std::move(ev));
        } catch (const nlohmann::json::exception& e) {
            throw SyntaxError(line_no, e.what());
        }
    }
    return events;
}

std::string oracle_record_json(const testkit::OracleResult& result) {
    Json j;
    j["verdict"] = std::string(to_string(result.verdict));
    j["point"] = optional_vector_json(result.point);
    j["objective"] = result.objective_value ? Json(*result.objective_value) : Json(nullptr);
    return j.dump();
}

std::string certificate_json(const testkit::GeneratedInstance& instance) {
    Json j;
    j["seed"] = instance.seed;
    if (const auto* interior = std::get_if<testkit::FeasibleInterior>(&instance.certificate)) {
        j["kind"] = "feasible_interior";
        j["point"] = vector_json(interior->point);
        j["slack"] = interior->slack;
    } else {
        const auto& pair = std::get<testkit::InfeasiblePair>(instance.certificate);
        j["kind"] = "infeasible_pair";
        j["index_a"] = pair.index_a;
        j["index_b"] = pair.index_b;
    }
    return j.dump();
}

namespace {

struct Point2 {
    double x;
    double y;
};

// Sutherland-Hodgman step: keep the part of `poly` with a.p >= b.
std::vector<Point2> clip_half_plane(const std::vector<Point2>& poly, double ax, double ay, double b) {
    std::vector<Point2> out;
    const std::size_t count = poly.size();
    for (std::size_t k = 0; k < count; ++k) {
        const Point2& p = poly[k];
        const Point2& q = poly[(k + 1) % count];
        const double dp = ax * p.x + ay * p.y - b;
        const double dq = ax * q.x + ay * q.y - b;
        if (dp >= 0) out.push_back(p);
        if ((dp >= 0) != (dq >= 0)) {
            const double s = dp / (dp - dq);
            out.push_back({p.x + s * (q.x - p.x), p.y + s * (q.y - p.y)});
        }
    }
    return out;
}

}  // namespace

std::string render_svg(const LinearProgram& lp, const std::vector<TraceEvent>& trace,
                       const std::optional<Vector>& final_point) {
    if (lp.dimension != 2) throw Error(ErrorCode::InvalidArgument, "SVG output requires a 2-dimensional problem");

    std::vector<Point2> path;
    for (const TraceEvent& ev : trace) {
        const Point2 p{ev.p0(0), ev.p0(1)};
        if (path.empty() || path.back().x != p.x || path.back().y != p.y) path.push_back(p);
    }
    if (final_point) path.push_back({(*final_point)(0), (*final_point)(1)});

    double xmin = -1, xmax = 1, ymin = -1, ymax = 1;
    if (!path.empty()) {
        xmin = xmax = path.front().x;
        ymin = ymax = path.front().y;
        for (const Point2& p : path) {
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        }
    }
    const double pad = std::max({1.0, 0.2 * (xmax - xmin), 0.2 * (ymax - ymin)});
    xmin -= pad;
    xmax += pad;
    ymin -= pad;
    ymax += pad;

    constexpr double kSize = 600.0;
    const double scale = kSize / std::max(xmax - xmin, ymax - ymin);
    const double width = (xmax - xmin) * scale;
    const double height = (ymax - ymin) * scale;
    auto sx = [&](double x) { return format_number((x - xmin) * scale); };
    auto sy = [&](double y) { return format_number((ymax - y) * scale); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_number(width) << "\" height=\""
        << format_number(height) << "\" viewBox=\"0 0 " << format_number(width) << ' ' << format_number(height)
        << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    const std::vector<Point2> box = {{xmin, ymin}, {xmax, ymin}, {xmax, ymax}, {xmin, ymax}};
    for (std::size_t i = 0; i < lp.size(); ++i) {
        const Constraint& c = lp.constraints[i];
        const std::vector<Point2> region = clip_half_plane(box, c.normal(0), c.normal(1), c.offset);
        if (region.size() >= 3) {
            svg << "<polygon fill=\"#2ca02c\" fill-opacity=\"0.08\" points=\"";
            for (const Point2& p : region) svg << sx(p.x) << ',' << sy(p.y) << ' ';
            svg << "\"/>\n";
        }
        // The boundary segment is the part of the box edge set lying on the line.
        std::vector<Point2> on_line;
        for (const Point2& p : region) {
            if (std::abs(c.normal(0) * p.x + c.normal(1) * p.y - c.offset) <= 1e-9 * (1.0 + pad)) on_line.push_back(p);
        }
        if (on_line.size() >= 2) {
            const char* dash = c.sense == Sense::GT ? " stroke-dasharray=\"6,4\"" : "";
            svg << "<line x1=\"" << sx(on_line.front().x) << "\" y1=\"" << sy(on_line.front().y) << "\" x2=\""
                << sx(on_line.back().x) << "\" y2=\"" << sy(on_line.back().y)
                << "\" stroke=\"#1f77b4\" stroke-width=\"1.5\"" << dash << "><title>constraint " << i
                << "</title></line>\n";
        }
    }

    if (!path.empty()) {
        svg << "<polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\" points=\"";
        for (const Point2& p : path) svg << sx(p.x) << ',' << sy(p.y) << ' ';
        svg << "\"/>\n";
        svg << "<circle cx=\"" << sx(path.front().x) << "\" cy=\"" << sy(path.front().y)
            << "\" r=\"4\" fill=\"#d62728\"/>\n";
        svg << "<circle cx=\"" << sx(path.back().x) << "\" cy=\"" << sy(path.back().y)
            << "\" r=\"5\" fill=\"none\" stroke=\"#000\" stroke-width=\"2\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace gutterlp
