#pragma once

#include "gaspower/network.hpp"

namespace gaspower {

// Below this Reynolds number lambda(q) q|q| is interpolated linearly to zero.
inline constexpr double kLaminarReynolds = 100.0;

struct ColebrookResult {
    double lambda = 0.0;
    double dlambda_dre = 0.0;
    int iterations = 0;
    double residual = 0.0;  // of the implicit equation in 1/sqrt(lambda)
};

// Prandtl-Colebrook friction factor for Re > 0: fixed point on 1/sqrt(lambda)
// from lambda = 0.02 until the update drops below 1e-14.
ColebrookResult colebrook(double reynolds, double diameter, double roughness);

struct FrictionTerm {
    double value = 0.0;  // S
    double drho = 0.0;
    double dq = 0.0;
};

// S = -lambda(q) / (2 d) q|q| / rho with Re(q) = d |q| / eta.
double friction_source(double rho, double q, const PipeGeometry& pipe, double viscosity);
FrictionTerm friction_source_jacobian(double rho, double q, const PipeGeometry& pipe, double viscosity);

}  // namespace gaspower
