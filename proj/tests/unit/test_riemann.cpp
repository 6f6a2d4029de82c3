#include "gaspower/error.hpp"
#include "gaspower/riemann.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

using namespace gaspower;

namespace {

const PressureLaw kGamma = gamma_law(1.0, 1.4);
const GasState kLeft{4.0, 1.0};
const GasState kRight{3.0, -1.0};

struct DemandCase {
    double epsilon;
    double rho_star;
    double q_left;
    double q_right;
    WaveType left;
    WaveType right;
};

class GasPowerJunction : public ::testing::TestWithParam<DemandCase> {};

}  // namespace

TEST(Interface, MatchesOracle) {
    const auto sol = solve_interface(kLeft, kRight, kGamma);
    EXPECT_NEAR(sol.rho_star, 4.187180377296763, 1e-10);
    EXPECT_NEAR(sol.traces[0].q, sol.traces[1].q, 1e-12);
    EXPECT_EQ(sol.waves[0], WaveType::shock);
    EXPECT_EQ(sol.waves[1], WaveType::shock);
    EXPECT_TRUE(sol.admissible);
}

TEST_P(GasPowerJunction, MatchesOracle) {
    const auto& c = GetParam();
    const auto sol = solve_gas_power_junction(kLeft, kRight, c.epsilon, kGamma);
    EXPECT_NEAR(sol.rho_star, c.rho_star, 1e-10);
    EXPECT_NEAR(sol.traces[0].q, c.q_left, 1e-10);
    EXPECT_NEAR(sol.traces[1].q, c.q_right, 1e-10);
    EXPECT_EQ(sol.waves[0], c.left);
    EXPECT_EQ(sol.waves[1], c.right);
    EXPECT_NEAR(sol.flux_residual(), 0.0, 1e-12);
    EXPECT_TRUE(sol.subsonic_traces);
}

INSTANTIATE_TEST_SUITE_P(
    ValidationDemands, GasPowerJunction,
    ::testing::Values(
        DemandCase{0.25, 4.107673323767944, 0.8561089149977912, 0.6061089149977907, WaveType::shock, WaveType::shock},
        DemandCase{1.75, 3.5801545828441403, 1.508033629899244, -0.24196637010075606, WaveType::rarefaction,
                   WaveType::shock},
        DemandCase{3.25, 2.897939332665922, 2.1366849665164347, -1.1133150334835664, WaveType::rarefaction,
                   WaveType::rarefaction}));

TEST(Thresholds, ValidationStates) {
    const auto th = wave_thresholds(kLeft, kRight, kGamma);
    EXPECT_NEAR(th.shock_shock_upper, 0.5787706016257383, 1e-10);
    EXPECT_NEAR(th.mixed_upper, 3.059411342567443, 1e-10);
    EXPECT_NEAR(th.max_extraction, 4.389248655181786, 1e-9);
    EXPECT_NEAR(max_extraction(kLeft, kRight, kGamma), th.max_extraction, 1e-12);
}

TEST(Thresholds, IsothermalAtRest) {
    EXPECT_NEAR(max_extraction({1.0, 0.0}, {1.0, 0.0}, isothermal_law(1.0)), 2.0 / std::exp(1.0), 1e-12);
}

TEST(Thresholds, DemandAboveMaximumIsRejected) {
    try {
        (void)solve_gas_power_junction(kLeft, kRight, 4.5, kGamma);
        FAIL();
    } catch (const InvalidDemandError& e) {
        EXPECT_EQ(e.category(), ErrorCategory::invalid_demand);
        EXPECT_DOUBLE_EQ(e.demand(), 4.5);
        EXPECT_NEAR(e.max_extraction(), 4.389248655181786, 1e-9);
    }
}

TEST(Junction, MultiPipeConservesMass) {
    const std::array in{GasState{2.0, 0.5}, GasState{2.2, 0.1}};
    const std::array out{GasState{1.9, 0.3}, GasState{2.1, 0.2}, GasState{2.0, -0.1}};
    const auto sol = solve_multi_junction(in, out, 0.2, kGamma);
    double balance = -0.2;
    for (std::size_t i = 0; i < sol.traces.size(); ++i) {
        balance += sol.sides[i] == Side::incoming ? sol.traces[i].q : -sol.traces[i].q;
        EXPECT_DOUBLE_EQ(sol.traces[i].rho, sol.rho_star);
    }
    EXPECT_NEAR(balance, 0.0, 1e-12);
    EXPECT_NEAR(sol.flux_residual(), 0.0, 1e-12);
}

TEST(Junction, CompressorScalesPipePressure) {
    const std::array pipes{JunctionPipe{{2.0, 0.4}, Side::incoming, 1.0},
                           JunctionPipe{{2.0, 0.4}, Side::outgoing, 1.05}};
    const auto sol = solve_junction(pipes, 0.0, kGamma);
    EXPECT_NEAR(kGamma.pressure(sol.traces[1].rho), 1.05 * kGamma.pressure(sol.rho_star), 1e-11);
    EXPECT_NEAR(sol.traces[0].q, sol.traces[1].q, 1e-11);
}

TEST(Junction, ConstantStateIsFixedPoint) {
    const GasState u{2.0, 0.3};
    const auto sol = solve_interface(u, u, kGamma);
    EXPECT_NEAR(sol.rho_star, 2.0, 1e-12);
    EXPECT_NEAR(sol.traces[0].q, 0.3, 1e-12);
}

TEST(Junction, RandomStatesAreConservative) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> rho(0.5, 5.0);
    std::uniform_real_distribution<double> mach(-0.8, 0.8);
    for (int k = 0; k < 200; ++k) {
        const double rl = rho(rng);
        const double rr = rho(rng);
        const GasState ul{rl, rl * mach(rng) * kGamma.sound_speed(rl)};
        const GasState ur{rr, rr * mach(rng) * kGamma.sound_speed(rr)};
        const auto sol = solve_interface(ul, ur, kGamma);
        EXPECT_NEAR(sol.flux_residual(), 0.0, 1e-10 * (1 + std::abs(ul.q) + std::abs(ur.q)));
        // right of the maximizer of L_l - L_r
        EXPECT_LE(lax_left_deriv(sol.rho_star, ul, kGamma) - lax_right_deriv(sol.rho_star, ur, kGamma), 1e-12);
    }
}

TEST(Interface, WaveMayCrossTheInterface) {
    // Fast flow to the left: the 2-rarefaction is dragged across x = 0.
    const GasState ul{0.687404, -0.204468};
    const GasState ur{3.065206, -2.713164};
    const auto sol = solve_interface(ul, ur, kGamma);
    EXPECT_NEAR(sol.rho_star, 1.8659686299381788, 1e-10);
    EXPECT_NEAR(sol.traces[0].q, -2.9568014731300636, 1e-10);
    EXPECT_NEAR(sol.traces[0].q, sol.traces[1].q, 1e-12);
    EXPECT_NEAR(sol.rho_min_junction, 2.166936165685539, 1e-10);
    EXPECT_LT(sol.rho_star, sol.rho_min_junction);
    EXPECT_FALSE(sol.admissible);
    EXPECT_THROW((void)solve_gas_power_junction(ul, ur, 0.0, kGamma), Error);
}

TEST(Junction, NoIntersectionIsReported) {
    // delta > 2 with these velocities: the two Lax curves never meet
    const auto law = generalized_gamma_law(1.0, 2.2);
    const double c = law.sound_speed(1.0);
    const GasState ul{1.0, -0.95 * c};
    const GasState ur{1.0, 0.95 * c};
    try {
        (void)solve_interface(ul, ur, law);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::no_solution);
    }
}

TEST(SelfSimilar, ConstantOutsideTheWaves) {
    const auto sol = solve_gas_power_junction(kLeft, kRight, 1.75, kGamma);
    EXPECT_EQ(sample_solution(sol, -50.0, kGamma), kLeft);
    EXPECT_EQ(sample_solution(sol, 50.0, kGamma), kRight);
    const GasState at_left = sample_solution(sol, -1e-12, kGamma);
    const GasState at_right = sample_solution(sol, 0.0, kGamma);
    EXPECT_NEAR(at_left.rho, sol.rho_star, 1e-9);
    EXPECT_NEAR(at_left.q, sol.traces[0].q, 1e-9);
    EXPECT_NEAR(at_right.q, sol.traces[1].q, 1e-9);
}

TEST(SelfSimilar, RarefactionFanIsContinuous) {
    // epsilon = 3.25: both waves are rarefactions, so rho(xi) has no jumps
    const auto sol = solve_gas_power_junction(kLeft, kRight, 3.25, kGamma);
    double prev = sample_solution(sol, -3.0, kGamma).rho;
    for (int i = 1; i <= 3000; ++i) {
        const double xi = -3.0 + 1e-3 * i;
        if (std::abs(xi) < 1e-9) {
            prev = sample_solution(sol, xi, kGamma).rho;
            continue;
        }
        const double r = sample_solution(sol, xi, kGamma).rho;
        EXPECT_LT(std::abs(r - prev), 5e-3) << xi;
        prev = r;
    }
}

TEST(SelfSimilar, ShockSpeedSatisfiesRankineHugoniot) {
    const auto sol = solve_gas_power_junction(kLeft, kRight, 0.25, kGamma);
    // Right shock speed from the jump condition.
    const GasState behind = sol.traces[1];
    const double s = (kRight.q - behind.q) / (kRight.rho - behind.rho);
    EXPECT_NEAR(sample_solution(sol, s - 1e-9, kGamma).rho, behind.rho, 1e-9);
    EXPECT_NEAR(sample_solution(sol, s + 1e-9, kGamma).rho, kRight.rho, 1e-9);
}
