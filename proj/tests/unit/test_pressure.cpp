#include "gaspower/error.hpp"
#include "gaspower/law_parser.hpp"
#include "gaspower/pressure.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <limits>

using namespace gaspower;

namespace {

std::vector<PressureLaw> sample_laws() {
    return {gamma_law(1.0, 1.4),  isothermal_law(2.0),      inverse_law(),
            log_law(),            sum_gamma_law(),          integral_gamma_law(),
            generalized_gamma_law(0.7, 1.5), generalized_gamma_law(2.0, -1.7)};
}

// Same gamma law, but without closed forms so PressureLaw has to integrate.
PressureLaw opaque_gamma(double kappa, double g) {
    return custom_law("opaque", {[=](double r) { return kappa * std::pow(r, g); },
                                 [=](double r) { return kappa * g * std::pow(r, g - 1); },
                                 [=](double r) { return kappa * g * (g - 1) * std::pow(r, g - 2); },
                                 {}});
}

}  // namespace

TEST(PressureLaw, GammaLawValues) {
    const auto law = gamma_law(1.0, 1.4);
    EXPECT_DOUBLE_EQ(law.pressure(2.0), std::pow(2.0, 1.4));
    EXPECT_DOUBLE_EQ(law.dp(2.0), 1.4 * std::pow(2.0, 0.4));
    EXPECT_DOUBLE_EQ(law.sound_speed(4.0), std::sqrt(1.4 * std::pow(4.0, 0.4)));
}

TEST(PressureLaw, NamedLawsMatchTheirFormulas) {
    EXPECT_DOUBLE_EQ(inverse_law().pressure(4.0), -0.25);
    EXPECT_DOUBLE_EQ(log_law().pressure(std::exp(2.0)), 2.0);
    EXPECT_DOUBLE_EQ(isothermal_law(340.0).pressure(2.0), 2.0 * 340.0 * 340.0);
    const double r = 2.5;
    EXPECT_NEAR(integral_gamma_law().pressure(r), (r * r * r - r) / std::log(r), 1e-12 * r * r * r);
    // Every law of the family is scaled to unit slope at rho = 1.
    EXPECT_NEAR(sum_gamma_law().dp(1.0), 1.0, 1e-14);
    EXPECT_NEAR(gamma_law(1.0 / 1.4, 1.4).dp(1.0), 1.0, 1e-14);
}

TEST(PressureLaw, DerivativesAgreeWithFiniteDifferences) {
    for (const auto& law : sample_laws()) {
        for (double r : {0.3, 1.0, 2.7, 11.0}) {
            const double h = 1e-5 * r;
            const double dp_fd = (law.pressure(r + h) - law.pressure(r - h)) / (2 * h);
            const double d2p_fd = (law.dp(r + h) - law.dp(r - h)) / (2 * h);
            const double d3p_fd = (law.d2p(r + h) - law.d2p(r - h)) / (2 * h);
            SCOPED_TRACE(law.label() + " at rho=" + std::to_string(r));
            EXPECT_NEAR(law.dp(r), dp_fd, 1e-7 * (1 + std::abs(dp_fd)));
            EXPECT_NEAR(law.d2p(r), d2p_fd, 1e-7 * (1 + std::abs(d2p_fd)));
            EXPECT_NEAR(law.d3p(r), d3p_fd, 1e-6 * (1 + std::abs(d3p_fd)));
        }
    }
}

TEST(PressureLaw, RarefactionIntegralClosedFormMatchesQuadrature) {
    const auto closed = gamma_law(1.0, 1.4);
    const auto numeric = opaque_gamma(1.0, 1.4);
    for (auto [a, b] : {std::pair{0.5, 4.0}, {3.0, 3.01}, {4.0, 1.2}, {1e-3, 1.0}}) {
        EXPECT_NEAR(closed.rarefaction_integral(a, b), numeric.rarefaction_integral(a, b), 1e-11);
    }
    EXPECT_EQ(closed.rarefaction_integral(2.0, 2.0), 0.0);
}

TEST(PressureLaw, IsothermalIntegralIsLogarithmic) {
    const auto law = isothermal_law(3.0);
    EXPECT_NEAR(law.rarefaction_integral(1.0, std::exp(1.0)), 3.0, 1e-13);
}

TEST(PressureLaw, DensityAtInvertsPressure) {
    for (const auto& law : sample_laws()) {
        for (double r : {0.05, 0.9, 7.0}) {
            EXPECT_NEAR(law.density_at(law.pressure(r)), r, 1e-10 * r) << law.label();
        }
    }
    EXPECT_NEAR(isothermal_law(340.0).density_at(60e5), 51.90311418685121, 1e-12);
}

TEST(PressureLaw, NonPositiveDensityIsDomainError) {
    const auto law = gamma_law(1.0, 1.4);
    for (double r : {0.0, -1.0}) {
        try {
            (void)law.pressure(r);
            FAIL() << "no error for rho=" << r;
        } catch (const Error& e) {
            EXPECT_EQ(e.category(), ErrorCategory::domain);
        }
    }
    EXPECT_THROW((void)law.density_at(-1.0), Error);
}

TEST(PressureLaw, NonFiniteEvaluationCarriesDensity) {
    const auto law = custom_law("bad", {[](double r) { return r > 2 ? std::numeric_limits<double>::quiet_NaN() : r; },
                                        [](double) { return 1.0; }, [](double) { return 0.0; }, {}});
    try {
        (void)law.pressure(3.0);
        FAIL();
    } catch (const LawEvaluationError& e) {
        EXPECT_DOUBLE_EQ(e.rho(), 3.0);
    }
}

TEST(PressureLaw, CombinationIsWeightedSum) {
    const std::array laws{gamma_law(1.0, 1.4), log_law()};
    const std::array w{0.25, 2.0};
    const auto mix = combine(laws, w);
    for (double r : {0.4, 3.0}) {
        EXPECT_NEAR(mix.pressure(r), 0.25 * std::pow(r, 1.4) + 2.0 * std::log(r), 1e-13);
        EXPECT_NEAR(mix.dp(r), 0.25 * 1.4 * std::pow(r, 0.4) + 2.0 / r, 1e-13);
    }
    const std::array bad{-1.0, 1.0};
    EXPECT_THROW((void)combine(laws, bad), Error);
}

TEST(GeneralizedGamma, ValidityRange) {
    EXPECT_EQ(classify_generalized_gamma(1.0, 0.0), GammaClass::valid);
    EXPECT_EQ(classify_generalized_gamma(1.0, 2.0), GammaClass::valid);
    EXPECT_EQ(classify_generalized_gamma(1.0, -2.0), GammaClass::valid);
    EXPECT_EQ(classify_generalized_gamma(1.0, 2.2), GammaClass::invalid);
    EXPECT_EQ(classify_generalized_gamma(1.0, -2.2), GammaClass::invalid);
    EXPECT_EQ(classify_generalized_gamma(0.0, 1.0), GammaClass::invalid);
    // gamma law: delta = gamma - 1
    EXPECT_NEAR(gamma_law(1.0, 1.4).generalized_gamma()->delta, 0.4, 1e-15);
}

TEST(SufficientConditions, PaperLawsPass) {
    for (const auto& law : {gamma_law(1.0 / 1.4, 1.4), inverse_law(), log_law(), sum_gamma_law(),
                            isothermal_law(1.0), integral_gamma_law()}) {
        const auto report = check_sufficient_conditions(law);
        EXPECT_TRUE(report.valid()) << format_report(report);
    }
}

TEST(SufficientConditions, SteepGammaFailsAtLowDensity) {
    const auto report = check_sufficient_conditions(gamma_law(1.0, 3.5));
    EXPECT_FALSE(report.valid());
    EXPECT_TRUE(report.c1());
    EXPECT_FALSE(report.c3());
    EXPECT_EQ(report.c3b_i.verdict, Verdict::fails);
}

TEST(SufficientConditions, SaturatingLawFailsFirstCondition) {
    // p' = (1+rho)^-3 > 0, but 2p' + rho p'' = (2 - rho)(1+rho)^-4 < 0 beyond rho = 2
    const auto law = custom_law("saturating", {[](double r) { return -0.5 * std::pow(1 + r, -2.0); },
                                               [](double r) { return std::pow(1 + r, -3.0); },
                                               [](double r) { return -3.0 * std::pow(1 + r, -4.0); },
                                               [](double r) { return 12.0 * std::pow(1 + r, -5.0); }});
    const auto report = check_sufficient_conditions(law);
    EXPECT_EQ(report.c1_rarefaction.verdict, Verdict::fails);
    EXPECT_GT(report.c1_rarefaction.at_rho, 2.0);
    EXPECT_FALSE(report.valid());
}

TEST(SufficientConditions, NonMonotoneLawIsEvaluationError) {
    const auto law = custom_law("concave", {[](double r) { return std::sqrt(r) - 2 * r; },
                                            [](double r) { return 0.5 / std::sqrt(r) - 2; },
                                            [](double r) { return -0.25 * std::pow(r, -1.5); },
                                            [](double r) { return 0.375 * std::pow(r, -2.5); }});
    try {
        (void)check_sufficient_conditions(law);
        FAIL();
    } catch (const LawEvaluationError& e) {
        EXPECT_GE(e.rho(), 0.0625 * (1 - 1e-3));
    }
}

TEST(SufficientConditions, GridIsLogarithmic) {
    const auto g = log_grid(1e-2, 1e2, 5);
    ASSERT_EQ(g.size(), 5u);
    EXPECT_NEAR(g[1], 1e-1, 1e-15);
    EXPECT_NEAR(g[4], 1e2, 1e-12);
    EXPECT_EQ(default_check_grid().size(), 10000u);
}

TEST(LawParser, ParsesNamedLaws) {
    const auto law = parse_law("gamma(1/1.4, 1.4)");
    EXPECT_NEAR(law.pressure(2.0), std::pow(2.0, 1.4) / 1.4, 1e-14);
    EXPECT_NEAR(parse_law("isothermal(340)").pressure(1.0), 340.0 * 340.0, 1e-9);
    EXPECT_NEAR(parse_law("inverse").pressure(2.0), -0.5, 1e-15);
    EXPECT_NEAR(parse_law("sum_gamma").pressure(1.7), sum_gamma_law().pressure(1.7), 1e-15);
    EXPECT_NEAR(parse_law("generalized(2, -1)").pressure(std::exp(1.0)), 2.0, 1e-14);
    EXPECT_NEAR(parse_law("integral_gamma(1, 3)").pressure(2.0), integral_gamma_law().pressure(2.0), 1e-14);
}

TEST(LawParser, WeightedSums) {
    const auto a = parse_law("0.5*log + 0.5*inverse");
    const auto b = parse_law("linear_combination([log, inverse], [0.5, 0.5])");
    for (double r : {0.3, 2.0}) {
        const double want = 0.5 * std::log(r) - 0.5 / r;
        EXPECT_NEAR(a.pressure(r), want, 1e-15);
        EXPECT_NEAR(b.pressure(r), want, 1e-15);
    }
}

TEST(LawParser, RejectsMalformedInput) {
    for (const char* text : {"", "gamma(1)", "gamma(1,1.4", "foo", "gamma(1,1.4) +", "isothermal(x)", "1/0*log"}) {
        try {
            (void)parse_law(text);
            FAIL() << "accepted '" << text << "'";
        } catch (const Error& e) {
            EXPECT_EQ(e.category(), ErrorCategory::config) << text;
        }
    }
}
