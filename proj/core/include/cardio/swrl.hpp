#pragma once

#include <string>
#include <string_view>

#include "cardio/tree2rules.hpp"

namespace cardio {

/// Renders a rule set as SWRL text, one rule per line:
///
///   Patient(?pt) ^ ap_hi(?pt, ?V1) ^ swrlb:lessThanOrEqual(?V1, '129'^^xsd:decimal) -> absence(?pt)
///
/// Each atom gets a fresh variable ?V1, ?V2, ... in antecedent order; every
/// literal is typed xsd:decimal. The document opens with `#` comment lines
/// carrying the default class and source fingerprint, which parse_swrl reads
/// back.
std::string serialize_swrl(const RuleSet& rules);

/// Inverse of serialize_swrl. Also accepts "→" for the arrow, a bare
/// consequent class ("→ presence"), arbitrary variable names, free
/// whitespace and line breaks inside a rule, and identifiers hyphen-wrapped
/// across a line break ("ac-\ntive"). Throws ParseError with line/column on
/// syntax errors, unknown properties or builtins, and non-decimal literals.
RuleSet parse_swrl(std::string_view text);

}  // namespace cardio
