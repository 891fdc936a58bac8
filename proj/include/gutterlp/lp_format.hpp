#ifndef GUTTERLP_LP_FORMAT_HPP
#define GUTTERLP_LP_FORMAT_HPP

#include <string>
#include <string_view>

#include "gutterlp/model.hpp"

namespace gutterlp {

// Line-oriented LP text format, '#' starts a comment:
//
//   vars <n>
//   objective <min|max> <c1> ... <cn>       (optional)
//   c <a1> ... <an> <op> <b>                op in {>=, >, =, <=, <}
//
// `<=` and `<` rows are negated into `>=` and `>` on load, and every row is
// normalized before it is returned.

/// Throws SyntaxError (with 1-based line numbers) and ZeroNormalError.
LinearProgram parse_lp(std::string_view text);

LinearProgram load_lp(const std::string& path);

/// Emits shortest round-trip decimal forms, so parse_lp(serialize_lp(lp))
/// reproduces lp.
std::string serialize_lp(const LinearProgram& lp);

std::string format_number(double v);

}  // namespace gutterlp

#endif  // GUTTERLP_LP_FORMAT_HPP
