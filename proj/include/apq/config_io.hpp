#pragma once

#include "apq/problem.hpp"

#include <string>
#include <string_view>

namespace apq {

/// Parses and validates a JSON configuration. Unknown keys are rejected in
/// strict mode (the default); without it they are reported to stderr and
/// ignored. Throws ParseError (with line/column) on malformed JSON and
/// ValidationError naming the field and violated constraint, including the
/// statically checkable hypothesis clauses.
ProblemSpec parse_config(const std::string& path, bool strict = true);
ProblemSpec parse_config_text(std::string_view text, bool strict = true);

/// The problem description with every default materialized, as a JSON
/// document that parses back to the same description.
std::string resolved_config_text(const ProblemSpec& spec);

} // namespace apq
