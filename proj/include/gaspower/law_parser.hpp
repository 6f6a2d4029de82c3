#pragma once

#include "gaspower/pressure.hpp"

#include <string_view>

namespace gaspower {

// Parses a pressure-law expression. A law is a sum of optionally weighted terms,
// e.g. "gamma(1/1.4, 1.4)", "0.5*log + 0.5*inverse". Recognized terms:
//   gamma(kappa, gamma)      isothermal(c)         inverse        log
//   generalized(alpha, delta)                      sum_gamma
//   integral_gamma(g0, g1)   linear_combination([law, ...], [w, ...])
// Numeric arguments accept a fraction a/b. Malformed input raises a config error.
PressureLaw parse_law(std::string_view text);

}  // namespace gaspower
