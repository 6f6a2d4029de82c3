#include "gaspower/error.hpp"
#include "gaspower/powerflow.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>

using namespace gaspower;
using namespace gaspower::power;

namespace {

// Nine-bus system, admittances in p.u.
PowerGrid case9() {
    PowerGrid g;
    g.buses = {{"N1", BusKind::slack, 0, 0, 1, 0, 0.0, -17.3611},
               {"N2", BusKind::pv, 1.63, 0, 1, 0, 0.0, -16.0},
               {"N3", BusKind::pv, 0.85, 0, 1, 0, 0.0, -17.0648},
               {"N4", BusKind::pq, 0, 0, 1, 0, 3.3074, -39.3089},
               {"N5", BusKind::pq, -0.9, -0.3, 1, 0, 3.2242, -15.8409},
               {"N6", BusKind::pq, 0, 0, 1, 0, 2.4371, -32.1539},
               {"N7", BusKind::pq, -1.0, -0.35, 1, 0, 2.7722, -23.3032},
               {"N8", BusKind::pq, 0, 0, 1, 0, 2.8047, -35.4456},
               {"N9", BusKind::pq, -1.25, -0.5, 1, 0, 2.5528, -17.3382}};
    g.lines = {{"TL14", "N1", "N4", 0.0, 17.3611},     {"TL45", "N4", "N5", -1.9422, 10.5107},
               {"TL56", "N5", "N6", -1.2820, 5.5882},  {"TL36", "N3", "N6", 0.0, 17.0648},
               {"TL67", "N6", "N7", -1.1551, 9.7843},  {"TL78", "N7", "N8", -1.6171, 13.6980},
               {"TL82", "N8", "N2", 0.0, 16.0},        {"TL89", "N8", "N9", -1.1876, 5.9751},
               {"TL94", "N9", "N4", -1.3652, 11.6041}};
    return g;
}

constexpr std::array kVm{1.0, 1.0, 1.0, 0.9870068005898228, 0.9754713852326746,
                         1.0033736795953696, 0.9856496259712403, 0.9961871790849951, 0.9576215898873494};
constexpr std::array kVa{0.0, 0.16875159184001234, 0.08327246415951038, -0.04200388631108417, -0.07011442681007617,
                         0.03360939461064318, 0.010848611629607747, 0.0663075802082304, -0.07592061652191358};

}  // namespace

TEST(Admittance, AssembledFromBusesAndLines) {
    const auto y = build_admittance(case9());
    EXPECT_EQ(y.B(0, 0), -17.3611);
    EXPECT_EQ(y.B(0, 3), 17.3611);
    EXPECT_EQ(y.B(3, 0), 17.3611);
    EXPECT_EQ(y.G(3, 4), -1.9422);
    EXPECT_EQ(y.G(0, 1), 0.0);
    EXPECT_TRUE(y.G.isApprox(y.G.transpose()));
    EXPECT_TRUE(y.B.isApprox(y.B.transpose()));
}

TEST(Admittance, RejectsBrokenGrids) {
    auto no_slack = case9();
    no_slack.buses[0].kind = BusKind::pv;
    auto two_slack = case9();
    two_slack.buses[1].kind = BusKind::slack;
    auto island = case9();
    island.lines.erase(island.lines.begin());  // N1 only connects through TL14
    auto loop = case9();
    loop.lines.push_back({"X", "N4", "N4", 0.0, 1.0});
    auto dup = case9();
    dup.lines.push_back({"Y", "N5", "N4", 0.0, 1.0});
    for (const auto* g : {&no_slack, &two_slack, &island, &loop, &dup}) {
        try {
            validate(*g);
            ADD_FAILURE();
        } catch (const Error& e) {
            EXPECT_EQ(e.category(), ErrorCategory::config) << e.what();
        }
    }
}

TEST(Newton, Case9MatchesOracle) {
    const auto grid = case9();
    const auto sol = solve_newton(grid);
    EXPECT_LE(sol.iterations, 10);
    EXPECT_LE(sol.mismatch, 1e-8);
    for (std::size_t k = 0; k < 9; ++k) {
        const auto i = static_cast<Eigen::Index>(k);
        EXPECT_NEAR(sol.vm[i], kVm[k], 1e-9) << grid.buses[k].id;
        EXPECT_NEAR(sol.va[i], kVa[k], 1e-9) << grid.buses[k].id;
    }
    EXPECT_NEAR(sol.P[0], 0.7195469626174426, 1e-9);
    EXPECT_NEAR(sol.Q[0], 0.24069034093687236, 1e-9);
}

TEST(Newton, VoltageConstraintsHoldExactly) {
    const auto grid = case9();
    const auto sol = solve_newton(grid);
    for (std::size_t k = 0; k < 9; ++k) {
        const auto i = static_cast<Eigen::Index>(k);
        const auto kind = grid.buses[k].kind;
        if (kind != BusKind::pq) {
            EXPECT_EQ(sol.vm[i], grid.buses[k].vm);
        }
        if (kind != BusKind::slack) {
            EXPECT_NEAR(sol.P[i], grid.buses[k].P, 1e-8);
        }
        if (kind == BusKind::pq) {
            EXPECT_NEAR(sol.Q[i], grid.buses[k].Q, 1e-8);
        }
    }
    EXPECT_EQ(sol.va[0], 0.0);
}

TEST(Newton, HeavierLoadRaisesSlackPower) {
    auto grid = case9();
    grid.buses[4].P = -1.8;
    grid.buses[4].Q = -0.6;
    EXPECT_NEAR(solve_newton(grid).P[0], 1.648705188499976, 1e-9);
}

TEST(Newton, WarmStartFromSolutionIsImmediate) {
    const auto grid = case9();
    const auto first = solve_newton(grid);
    const auto again = solve_newton(first.apply(grid), InitialGuess::warm);
    EXPECT_LE(again.iterations, 1);
    EXPECT_TRUE(again.vm.isApprox(first.vm, 1e-12));
}

TEST(Newton, DivergenceIsReported) {
    auto grid = case9();
    for (auto& b : grid.buses) {
        if (b.kind == BusKind::pq) b.P *= 40.0;
    }
    try {
        (void)solve_newton(grid);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::divergence);
    }
}

TEST(Jacobian, MatchesFiniteDifferences) {
    const auto grid = case9();
    const auto y = build_admittance(grid);
    const auto layout = unknown_layout(grid);
    Eigen::VectorXd vm(9), va(9);
    for (Eigen::Index k = 0; k < 9; ++k) {
        vm[k] = 1.0 + 0.01 * static_cast<double>(k % 3);
        va[k] = 0.02 * static_cast<double>(k) - 0.05;
    }
    const Eigen::MatrixXd J = mismatch_jacobian(grid, y, vm, va);
    ASSERT_EQ(static_cast<std::size_t>(J.rows()), layout.size());
    const double h = 1e-7;
    for (std::size_t c = 0; c < layout.size(); ++c) {
        Eigen::VectorXd vp = vm, vn = vm, ap = va, an = va;
        if (c < layout.angle_buses.size()) {
            const auto b = static_cast<Eigen::Index>(layout.angle_buses[c]);
            ap[b] += h;
            an[b] -= h;
        } else {
            const auto b = static_cast<Eigen::Index>(layout.magnitude_buses[c - layout.angle_buses.size()]);
            vp[b] += h;
            vn[b] -= h;
        }
        // mismatch = spec - calc, so its derivative is -J
        const Eigen::VectorXd fd = -(mismatch(grid, y, vp, ap) - mismatch(grid, y, vn, an)) / (2 * h);
        EXPECT_LT((J.col(static_cast<Eigen::Index>(c)) - fd).cwiseAbs().maxCoeff(), 1e-6) << c;
    }
}

TEST(Injections, InvariantUnderCommonAngleShift) {
    const auto y = build_admittance(case9());
    Eigen::VectorXd vm = Eigen::Map<const Eigen::VectorXd>(kVm.data(), 9);
    Eigen::VectorXd va = Eigen::Map<const Eigen::VectorXd>(kVa.data(), 9);
    Eigen::VectorXd P1, Q1, P2, Q2;
    injections(y, vm, va, P1, Q1);
    injections(y, vm, (va.array() + 0.7).matrix(), P2, Q2);
    EXPECT_LT((P1 - P2).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((Q1 - Q2).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Buses, KindNames) {
    EXPECT_EQ(to_string(BusKind::pq), "PQ");
    EXPECT_EQ(to_string(BusKind::pv), "PV");
    EXPECT_EQ(to_string(BusKind::slack), "slack");
    EXPECT_EQ(case9().slack_index(), 0u);
    EXPECT_EQ(case9().bus_index("N7"), 6u);
}
