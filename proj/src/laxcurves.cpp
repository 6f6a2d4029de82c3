#include "gaspower/laxcurves.hpp"

#include "gaspower/error.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <limits>
#include <sstream>

namespace gaspower {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string describe(const GasState& u) {
    std::ostringstream os;
    os.precision(10);
    os << "(" << u.rho << ", " << u.q << ")";
    return os.str();
}

// Mean slope of p between a and b; the local derivative when they nearly coincide.
double secant_slope(double a, double b, const PressureLaw& law) {
    const double d = b - a;
    if (std::abs(d) <= 1e-8 * std::max(std::abs(a), std::abs(b))) return law.dp(0.5 * (a + b));
    return (law.pressure(b) - law.pressure(a)) / d;
}

// sqrt(f) written as d * sqrt(rho s / rho_l) to avoid cancellation near rho_l.
double sqrt_f(double rho, double rho_l, const PressureLaw& law) {
    const double d = rho - rho_l;
    if (d == 0.0) return 0.0;
    const double s = secant_slope(rho_l, rho, law);
    return d * std::sqrt(rho * s / rho_l);
}

// d/drho sqrt(f) on the shock branch.
double sqrt_f_deriv(double rho, double rho_l, const PressureLaw& law) {
    const double d = rho - rho_l;
    const double s = secant_slope(rho_l, rho, law);
    const double root = std::sqrt(rho * s / rho_l);
    if (d == 0.0) return root;
    return root + (d * s + rho * (law.dp(rho) - s)) / (2.0 * rho_l * root);
}

template <class F>
double solve_bracketed(F&& g, double lo, double hi, double g_lo, double g_hi) {
    std::uintmax_t iters = 200;
    auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-12 * std::max(1.0, std::abs(a)); };
    auto r = boost::math::tools::toms748_solve(g, lo, hi, g_lo, g_hi, tol, iters);
    return 0.5 * (r.first + r.second);
}

}  // namespace

std::string_view to_string(Side side) noexcept { return side == Side::incoming ? "in" : "out"; }

std::string_view to_string(WaveType wave) noexcept { return wave == WaveType::rarefaction ? "r" : "s"; }

double lambda1(const GasState& u, const PressureLaw& law) { return u.q / u.rho - law.sound_speed(u.rho); }

double lambda2(const GasState& u, const PressureLaw& law) { return u.q / u.rho + law.sound_speed(u.rho); }

bool is_subsonic(const GasState& u, const PressureLaw& law) {
    if (!(u.rho > 0.0) || !std::isfinite(u.q)) return false;
    return std::abs(u.q / u.rho) < law.sound_speed(u.rho);
}

void require_subsonic(const GasState& u, const PressureLaw& law) {
    if (!(u.rho > 0.0)) throw Error(ErrorCategory::domain, "state " + describe(u) + " has nonpositive density");
    if (!is_subsonic(u, law)) throw Error(ErrorCategory::domain, "state " + describe(u) + " is not sub-sonic");
}

double f_shock(double rho, double rho_l, const PressureLaw& law) {
    if (!(rho_l > 0.0) || !(rho >= rho_l)) {
        throw Error(ErrorCategory::domain, "f_shock needs rho >= rho_l > 0");
    }
    return rho / rho_l * (rho - rho_l) * (law.pressure(rho) - law.pressure(rho_l));
}

double lax_left(double rho, const GasState& ul, const PressureLaw& law) {
    const double u = ul.q / ul.rho;
    if (rho <= ul.rho) return rho * (u + law.rarefaction_integral(rho, ul.rho));
    return rho * u - sqrt_f(rho, ul.rho, law);
}

double lax_right(double rho, const GasState& ur, const PressureLaw& law) {
    const double u = ur.q / ur.rho;
    if (rho <= ur.rho) return rho * (u - law.rarefaction_integral(rho, ur.rho));
    return rho * u + sqrt_f(rho, ur.rho, law);
}

double lax_left_deriv(double rho, const GasState& ul, const PressureLaw& law) {
    const double u = ul.q / ul.rho;
    if (rho <= ul.rho) return u + law.rarefaction_integral(rho, ul.rho) - law.sound_speed(rho);
    return u - sqrt_f_deriv(rho, ul.rho, law);
}

double lax_right_deriv(double rho, const GasState& ur, const PressureLaw& law) {
    const double u = ur.q / ur.rho;
    if (rho <= ur.rho) return u - law.rarefaction_integral(rho, ur.rho) + law.sound_speed(rho);
    return u + sqrt_f_deriv(rho, ur.rho, law);
}

double lax_curve(Side side, double rho, const GasState& u, const PressureLaw& law) {
    return side == Side::incoming ? lax_left(rho, u, law) : lax_right(rho, u, law);
}

double lax_curve_deriv(Side side, double rho, const GasState& u, const PressureLaw& law) {
    return side == Side::incoming ? lax_left_deriv(rho, u, law) : lax_right_deriv(rho, u, law);
}

double rho_min(const GasState& u, Side side, const PressureLaw& law) {
    require_subsonic(u, law);
    // Work with the incoming orientation; the outgoing curve is its mirror.
    const GasState w = side == Side::incoming ? u : GasState{u.rho, -u.q};
    auto g = [&](double rho) { return lax_left_deriv(rho, w, law); };

    // g is decreasing; g(rho_U) = lambda1(U) < 0.
    double hi = w.rho;
    double g_hi = g(hi);
    const double floor = 1e-9 * w.rho;
    while (hi > floor) {
        const double lo = std::max(hi / 10.0, floor);
        const double g_lo = g(lo);
        if (g_lo >= 0.0) {
            if (g_lo == 0.0) return lo;
            return solve_bracketed(g, lo, hi, g_lo, g_hi);
        }
        hi = lo;
        g_hi = g_lo;
    }
    return 0.0;
}

double rho_max(const GasState& u, Side side, const PressureLaw& law) {
    require_subsonic(u, law);
    const GasState w = side == Side::incoming ? u : GasState{u.rho, -u.q};
    auto l2 = [&](double rho) { return lax_left(rho, w, law) / rho + law.sound_speed(rho); };

    const std::size_t points = 2000;
    const double lo = std::log(1e-9 * w.rho);
    const double hi = std::log(1e6 * w.rho);
    double prev = std::exp(lo);
    double v_prev = l2(prev);
    if (v_prev < 0.0) return prev;
    for (std::size_t i = 1; i < points; ++i) {
        const double rho = std::exp(lo + (hi - lo) * static_cast<double>(i) / (points - 1));
        const double v = l2(rho);
        if (v < 0.0) return solve_bracketed(l2, prev, rho, v_prev, v);
        prev = rho;
        v_prev = v;
    }
    return kInf;
}

WaveType wave_type(double rho_star, const GasState& u) noexcept {
    return rho_star <= u.rho ? WaveType::rarefaction : WaveType::shock;
}

WaveType classify_wave(double rho_star, const GasState& u, Side side, const PressureLaw& law) {
    const double lo = rho_min(u, side, law);
    if (!(rho_star > lo)) {
        std::ostringstream os;
        os.precision(10);
        os << "junction density " << rho_star << " is not above rho_min " << lo;
        throw Error(ErrorCategory::inadmissible, os.str());
    }
    return wave_type(rho_star, u);
}

}  // namespace gaspower
