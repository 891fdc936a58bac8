#include "gutterlp/lp_format.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "gutterlp/error.hpp"

namespace gutterlp {
namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
        const std::size_t start = pos;
        while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' && line[pos] != '\r') ++pos;
        if (pos > start) tokens.push_back(line.substr(start, pos - start));
    }
    return tokens;
}

double parse_number(std::string_view token, std::size_t line_no) {
    double value = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (!token.empty() && token.front() == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
        throw SyntaxError(line_no, "invalid number '" + std::string(token) + "'");
    }
    return value;
}

Vector parse_coefficients(const std::vector<std::string_view>& tokens, std::size_t from, std::size_t count,
                          std::size_t line_no) {
    Vector v(static_cast<Eigen::Index>(count));
    for (std::size_t k = 0; k < count; ++k) v(static_cast<Eigen::Index>(k)) = parse_number(tokens[from + k], line_no);
    return v;
}

}  // namespace

LinearProgram parse_lp(std::string_view text) {
    LinearProgram raw;
    bool have_vars = false;
    bool have_objective = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;

    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const std::vector<std::string_view> tokens = tokenize(line);
        if (tokens.empty()) continue;

        const std::string_view keyword = tokens[0];
        if (!have_vars) {
            if (keyword != "vars" || tokens.size() != 2) {
                throw SyntaxError(line_no, "expected 'vars <n>' before anything else");
            }
            std::size_t n = 0;
            const auto [ptr, ec] = std::from_chars(tokens[1].data(), tokens[1].data() + tokens[1].size(), n);
            if (ec != std::errc() || ptr != tokens[1].data() + tokens[1].size() || n == 0) {
                throw SyntaxError(line_no, "'vars' needs a positive integer");
            }
            raw.dimension = n;
            have_vars = true;
            continue;
        }

        const std::size_t n = raw.dimension;
        if (keyword == "objective") {
            if (have_objective) throw SyntaxError(line_no, "duplicate objective");
            if (tokens.size() != n + 2) {
                throw SyntaxError(line_no, "objective needs a sense and " + std::to_string(n) + " coefficients");
            }
            Objective obj;
            if (tokens[1] == "max") {
                obj.sense = ObjectiveSense::Maximize;
            } else if (tokens[1] == "min") {
                obj.sense = ObjectiveSense::Minimize;
            } else {
                throw SyntaxError(line_no, "objective sense must be 'min' or 'max'");
            }
            obj.coefficients = parse_coefficients(tokens, 2, n, line_no);
            raw.objective = std::move(obj);
            have_objective = true;
        } else if (keyword == "c") {
            if (tokens.size() != n + 3) {
                throw SyntaxError(line_no, "constraint needs " + std::to_string(n) + " coefficients, an operator and a bound");
            }
            Constraint c;
            c.normal = parse_coefficients(tokens, 1, n, line_no);
            const std::string_view op = tokens[n + 1];
            c.offset = parse_number(tokens[n + 2], line_no);
            if (op == ">=") {
                c.sense = Sense::GE;
            } else if (op == ">") {
                c.sense = Sense::GT;
            } else if (op == "=") {
                c.sense = Sense::EQ;
            } else if (op == "<=" || op == "<") {
                c.sense = op == "<=" ? Sense::GE : Sense::GT;
                c.normal = -c.normal;
                c.offset = -c.offset;
            } else {
                throw SyntaxError(line_no, "unknown operator '" + std::string(op) + "'");
            }
            raw.constraints.push_back(std::move(c));
        } else if (keyword == "vars") {
            throw SyntaxError(line_no, "duplicate 'vars' line");
        } else {
            throw SyntaxError(line_no, "unknown keyword '" + std::string(keyword) + "'");
        }
    }
    if (!have_vars) throw SyntaxError(line_no, "missing 'vars' line");
    if (raw.constraints.empty()) throw SyntaxError(line_no, "no constraints");
    return normalize(std::move(raw));
}

LinearProgram load_lp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_lp(buf.str());
}

std::string format_number(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string serialize_lp(const LinearProgram& lp) {
    std::string out = "vars " + std::to_string(lp.dimension) + "\n";
    if (lp.objective) {
        out += lp.objective->sense == ObjectiveSense::Maximize ? "objective max" : "objective min";
        for (Eigen::Index k = 0; k < lp.objective->coefficients.size(); ++k) {
            out += ' ' + format_number(lp.objective->coefficients(k));
        }
        out += '\n';
    }
    for (const Constraint& c : lp.constraints) {
        out += 'c';
        for (Eigen::Index k = 0; k < c.normal.size(); ++k) out += ' ' + format_number(c.normal(k));
        out += ' ';
        out += to_string(c.sense);
        out += ' ' + format_number(c.offset) + '\n';
    }
    return out;
}

}  // namespace gutterlp
