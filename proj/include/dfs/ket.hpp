#pragma once

#include <string>

#include "dfs/schmidt.hpp"
#include "dfs/types.hpp"

namespace dfs {

/// Parses a two-sender ket expression over C^d (x) C^d:
///   expr  := ('+'|'-')? term (('+'|'-') term)*
///   term  := coeff? '|' digit digit '>' | coeff? '(' expr ')'
///   coeff := decimal | decimal '/' decimal | decimal '/sqrt(' decimal ')'
///            | '(' re (',' im)? ')'
/// Whitespace is insignificant, amplitudes accumulate per basis label, and
/// the result is NOT normalized; callers report or fix the norm themselves.
/// Syntax problems throw ContractViolation naming the offending position.
PureState parse_ket(const std::string& text, Eigen::Index d);

/// Ket form with full-precision complex coefficients; parse_ket maps it
/// back to the same amplitudes. Needs single-digit basis labels (d <= 9).
std::string format_ket(const PureState& state);

}  // namespace dfs
