#include "gaspower/friction.hpp"

#include "gaspower/error.hpp"

#include <cmath>
#include <numbers>

namespace gaspower {

namespace {

constexpr double kA = 2.51;
constexpr double kB = 3.71;

// lambda q|q| and its derivative in q.
struct Drag {
    double value = 0.0;
    double dq = 0.0;
};

Drag drag(double q, const PipeGeometry& pipe, double viscosity) {
    const double q_lam = kLaminarReynolds * viscosity / pipe.diameter;
    const double aq = std::abs(q);
    if (aq < q_lam) {
        const double lam = colebrook(kLaminarReynolds, pipe.diameter, pipe.roughness).lambda;
        const double slope = lam * q_lam;
        return {slope * q, slope};
    }
    const auto c = colebrook(pipe.diameter * aq / viscosity, pipe.diameter, pipe.roughness);
    const double dre_dq = pipe.diameter / viscosity * (q > 0.0 ? 1.0 : -1.0);
    return {c.lambda * q * aq, c.dlambda_dre * dre_dq * q * aq + 2.0 * c.lambda * aq};
}

}  // namespace

ColebrookResult colebrook(double reynolds, double diameter, double roughness) {
    if (!(reynolds > 0.0) || !(diameter > 0.0)) {
        throw Error(ErrorCategory::domain, "Colebrook formula needs Re > 0 and d > 0");
    }
    const double b = roughness / (kB * diameter);
    auto g = [&](double x) { return -2.0 * std::log10(kA * x / reynolds + b); };
    ColebrookResult r;
    double x = 1.0 / std::sqrt(0.02);
    for (r.iterations = 1; r.iterations <= 100; ++r.iterations) {
        const double next = g(x);
        const double step = std::abs(next - x);
        x = next;
        if (step <= 1e-14 * std::abs(x)) break;
    }
    r.lambda = 1.0 / (x * x);
    r.residual = x - g(x);
    // Implicit differentiation of h(x, Re) = x + 2 log10(a x / Re + b) = 0.
    const double inner = kA * x / reynolds + b;
    const double h_x = 1.0 + 2.0 / std::numbers::ln10 * (kA / reynolds) / inner;
    const double h_re = -2.0 / std::numbers::ln10 * (kA * x / (reynolds * reynolds)) / inner;
    const double dx_dre = -h_re / h_x;
    r.dlambda_dre = -2.0 / (x * x * x) * dx_dre;
    return r;
}

double friction_source(double rho, double q, const PipeGeometry& pipe, double viscosity) {
    if (!(rho > 0.0)) throw Error(ErrorCategory::domain, "friction source needs rho > 0");
    if (q == 0.0) return 0.0;
    return -drag(q, pipe, viscosity).value / (2.0 * pipe.diameter * rho);
}

FrictionTerm friction_source_jacobian(double rho, double q, const PipeGeometry& pipe, double viscosity) {
    if (!(rho > 0.0)) throw Error(ErrorCategory::domain, "friction source needs rho > 0");
    const Drag d = drag(q, pipe, viscosity);
    const double k = 1.0 / (2.0 * pipe.diameter);
    FrictionTerm t;
    t.value = -k * d.value / rho;
    t.drho = k * d.value / (rho * rho);
    t.dq = -k * d.dq / rho;
    return t;
}

}  // namespace gaspower
