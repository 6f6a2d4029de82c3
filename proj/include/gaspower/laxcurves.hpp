#pragma once

#include "gaspower/pressure.hpp"

#include <string_view>

namespace gaspower {

struct GasState {
    double rho = 1.0;
    double q = 0.0;

    double velocity() const noexcept { return q / rho; }
    friend bool operator==(const GasState&, const GasState&) = default;
};

// Orientation of a pipe relative to a junction: incoming pipes end at it and
// are connected through L_l, outgoing pipes start at it and use L_r.
enum class Side { incoming, outgoing };
enum class WaveType { rarefaction, shock };

std::string_view to_string(Side side) noexcept;
std::string_view to_string(WaveType wave) noexcept;

double lambda1(const GasState& u, const PressureLaw& law);
double lambda2(const GasState& u, const PressureLaw& law);
bool is_subsonic(const GasState& u, const PressureLaw& law);
// Domain error unless rho > 0 and |q/rho| < c(rho).
void require_subsonic(const GasState& u, const PressureLaw& law);

// (rho/rho_l)(rho - rho_l)(p(rho) - p(rho_l)), defined for rho >= rho_l.
double f_shock(double rho, double rho_l, const PressureLaw& law);

// Momentum reachable from U_l by a 1-wave ending in density rho.
double lax_left(double rho, const GasState& ul, const PressureLaw& law);
// Momentum reachable from U_r by a 2-wave ending in density rho.
double lax_right(double rho, const GasState& ur, const PressureLaw& law);
// At rho == rho_U both return the rarefaction-side limit.
double lax_left_deriv(double rho, const GasState& ul, const PressureLaw& law);
double lax_right_deriv(double rho, const GasState& ur, const PressureLaw& law);

double lax_curve(Side side, double rho, const GasState& u, const PressureLaw& law);
double lax_curve_deriv(Side side, double rho, const GasState& u, const PressureLaw& law);

// Density below which the wave would travel into the junction instead of away
// from it: root of the curve derivative, or 0 if the derivative never changes sign.
double rho_min(const GasState& u, Side side, const PressureLaw& law);

// Smallest density at which the trace state turns super-sonic
// (lambda2 < 0 incoming, lambda1 > 0 outgoing). +inf when no such density
// exists below 1e6 * rho_U.
double rho_max(const GasState& u, Side side, const PressureLaw& law);

WaveType wave_type(double rho_star, const GasState& u) noexcept;
// As wave_type, but rejects rho_star <= rho_min with an inadmissible error.
WaveType classify_wave(double rho_star, const GasState& u, Side side, const PressureLaw& law);

}  // namespace gaspower
