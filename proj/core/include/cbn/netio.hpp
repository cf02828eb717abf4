#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "cbn/core.hpp"

namespace cbn {

/// Parses the line-oriented network format:
///
///   network <name>
///   variable <name> { states: <s1>, <s2>, ... }
///   probability ( <child> )            { v1, v2, ...; }
///   probability ( <child> | <p1>, ... ) { <p1state>, ...: v1, v2, ...; ... }
///
/// Whitespace is insignificant, `#` starts a comment that runs to end of
/// line. A probability block needs exactly one row per joint parent state;
/// rows may appear in any order. The parsed network must pass
/// validate_network. Throws ParseError with a 1-based source location.
CausalNetwork parse_network(std::string_view text);

/// Canonical text form; parse_network(write_network(net)) is structurally
/// identical to net, with probabilities preserved to full double precision.
std::string write_network(const CausalNetwork& net, std::string_view name = "net");

CausalNetwork load_network(const std::filesystem::path& path);
void save_network(const CausalNetwork& net, const std::filesystem::path& path,
                  std::string_view name = "net");

}  // namespace cbn
