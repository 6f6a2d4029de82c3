#include "gaspower/error.hpp"
#include "gaspower/laxcurves.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace gaspower;

namespace {

const PressureLaw kGamma = gamma_law(1.0, 1.4);
const GasState kLeft{4.0, 1.0};
const GasState kRight{3.0, -1.0};

}  // namespace

TEST(Eigenvalues, SoundSpeedSplit) {
    const GasState u{2.0, 1.0};
    const double c = kGamma.sound_speed(2.0);
    EXPECT_DOUBLE_EQ(lambda1(u, kGamma), 0.5 - c);
    EXPECT_DOUBLE_EQ(lambda2(u, kGamma), 0.5 + c);
    EXPECT_TRUE(is_subsonic(u, kGamma));
    EXPECT_FALSE(is_subsonic({1.0, 2.0}, kGamma));
    EXPECT_THROW(require_subsonic({1.0, 2.0}, kGamma), Error);
}

TEST(LaxCurves, ShockOracle) {
    EXPECT_NEAR(f_shock(5.0, 4.0, kGamma), 3.192331484012999, 1e-14);
    EXPECT_NEAR(lax_left(5.0, kLeft, kGamma), -0.5367096809535115, 1e-14);
}

TEST(LaxCurves, PassThroughTheirState) {
    EXPECT_DOUBLE_EQ(lax_left(4.0, kLeft, kGamma), 1.0);
    EXPECT_DOUBLE_EQ(lax_right(3.0, kRight, kGamma), -1.0);
    EXPECT_EQ(f_shock(4.0, 4.0, kGamma), 0.0);
}

TEST(LaxCurves, RightCurveMirrorsLeftCurve) {
    for (double r : {1.0, 2.9, 3.0, 3.5, 8.0}) {
        EXPECT_NEAR(lax_right(r, kRight, kGamma), -lax_left(r, {kRight.rho, -kRight.q}, kGamma), 1e-14);
        EXPECT_NEAR(lax_right_deriv(r, kRight, kGamma), -lax_left_deriv(r, {kRight.rho, -kRight.q}, kGamma), 1e-13);
    }
}

TEST(LaxCurves, DerivativesMatchFiniteDifferences) {
    for (double r : {0.8, 2.0, 3.7, 4.3, 6.0, 20.0}) {
        const double h = 1e-6 * r;
        const double fd_l = (lax_left(r + h, kLeft, kGamma) - lax_left(r - h, kLeft, kGamma)) / (2 * h);
        const double fd_r = (lax_right(r + h, kRight, kGamma) - lax_right(r - h, kRight, kGamma)) / (2 * h);
        EXPECT_NEAR(lax_left_deriv(r, kLeft, kGamma), fd_l, 1e-7) << r;
        EXPECT_NEAR(lax_right_deriv(r, kRight, kGamma), fd_r, 1e-7) << r;
    }
}

TEST(LaxCurves, RarefactionBranchFollowsFirstEigenvalue) {
    // On the rarefaction branch the trace velocity minus sound speed equals the slope.
    for (double r : {1.0, 2.0, 3.5}) {
        const GasState trace{r, lax_left(r, kLeft, kGamma)};
        EXPECT_NEAR(lax_left_deriv(r, kLeft, kGamma), lambda1(trace, kGamma), 1e-12);
    }
}

TEST(LaxCurves, ContinuousDerivativeAtTheState) {
    const double h = 1e-7;
    EXPECT_NEAR(lax_left_deriv(4.0 - h, kLeft, kGamma), lax_left_deriv(4.0 + h, kLeft, kGamma), 1e-5);
    EXPECT_NEAR(lax_left_deriv(4.0, kLeft, kGamma), lambda1(kLeft, kGamma), 1e-14);
}

TEST(LaxCurves, SideDispatch) {
    EXPECT_EQ(lax_curve(Side::incoming, 3.3, kLeft, kGamma), lax_left(3.3, kLeft, kGamma));
    EXPECT_EQ(lax_curve(Side::outgoing, 3.3, kRight, kGamma), lax_right(3.3, kRight, kGamma));
    EXPECT_EQ(lax_curve_deriv(Side::outgoing, 2.0, kRight, kGamma), lax_right_deriv(2.0, kRight, kGamma));
}

TEST(RhoMin, ValidationStates) {
    EXPECT_NEAR(rho_min(kLeft, Side::incoming, kGamma), 1.8819392622582372, 1e-10);
    EXPECT_NEAR(rho_min(kRight, Side::outgoing, kGamma), 1.5040872599419366, 1e-10);
}

TEST(RhoMin, IsothermalAtRest) {
    const auto law = isothermal_law(1.0);
    EXPECT_NEAR(rho_min({1.0, 0.0}, Side::incoming, law), std::exp(-1.0), 1e-12);
    EXPECT_NEAR(rho_min({1.0, 0.0}, Side::outgoing, law), std::exp(-1.0), 1e-12);
}

TEST(RhoMin, ZeroWhenSlopeNeverVanishes) {
    // log law: c = 1/sqrt(rho) grows at low density faster than the integral term
    const auto law = log_law();
    const double r = rho_min({1.0, 0.0}, Side::incoming, law);
    EXPECT_GE(r, 0.0);
    EXPECT_LT(r, 1.0);
    if (r > 0.0) {
        EXPECT_NEAR(lax_left_deriv(r, {1.0, 0.0}, law), 0.0, 1e-9);
    }
}

TEST(RhoMax, IsothermalShockBranchTurnsSupersonic) {
    const auto law = isothermal_law(1.0);
    const double want = (3.0 + std::sqrt(5.0)) / 2.0;
    EXPECT_NEAR(rho_max({1.0, 0.0}, Side::incoming, law), want, 1e-9);
    EXPECT_NEAR(rho_max({1.0, 0.0}, Side::outgoing, law), want, 1e-9);
}

TEST(RhoMax, TraceIsSonicThere) {
    const double r = rho_max(kLeft, Side::incoming, kGamma);
    ASSERT_TRUE(std::isfinite(r));
    EXPECT_NEAR(lambda2({r, lax_left(r, kLeft, kGamma)}, kGamma), 0.0, 1e-9);
}

TEST(WaveClassification, ShockAboveRarefactionBelow) {
    EXPECT_EQ(wave_type(4.5, kLeft), WaveType::shock);
    EXPECT_EQ(wave_type(3.5, kLeft), WaveType::rarefaction);
    EXPECT_EQ(classify_wave(3.5, kLeft, Side::incoming, kGamma), WaveType::rarefaction);
    try {
        (void)classify_wave(1.5, kLeft, Side::incoming, kGamma);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::inadmissible);
    }
    EXPECT_EQ(to_string(WaveType::shock), std::string_view("s"));
    EXPECT_EQ(to_string(Side::outgoing), std::string_view("out"));
}
