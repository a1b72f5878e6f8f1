#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "topograd/objective.hpp"

namespace topograd::cli {

/// Parses sums of diagram losses written as in figure captions:
///   E(2,0,2;PD0)   -E(1,0,2;PD1)   0.5*E(2,1,1;PD1) - E(2,0,2;PD0)*3
/// A leading '-' (or a negative factor) means "increase". Throws
/// std::invalid_argument naming the offending column.
std::vector<LossTerm> parse_loss_expr(std::string_view text);

/// Canonical text that parses back to the same terms.
std::string format_loss_expr(const std::vector<LossTerm>& terms);

}  // namespace topograd::cli
