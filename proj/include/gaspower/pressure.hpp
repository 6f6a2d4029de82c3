#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gaspower {

// Pressure law with p'(rho) = alpha * rho^delta.
struct GeneralizedGammaLaw {
    double alpha = 1.0;
    double delta = 0.0;

    // Lax curves intersect for all sub-sonic data iff alpha > 0 and |delta| <= 2.
    bool valid() const noexcept;
};

enum class GammaClass { valid, invalid };

GammaClass classify_generalized_gamma(double alpha, double delta) noexcept;

// Interface of a concrete pressure function. Optional members return nullopt when
// no closed form exists; PressureLaw then falls back to numerics.
class PressureModel {
public:
    virtual ~PressureModel() = default;

    virtual double p(double rho) const = 0;
    virtual double dp(double rho) const = 0;
    virtual double d2p(double rho) const = 0;
    virtual std::optional<double> d3p(double /*rho*/) const { return std::nullopt; }

    // \int_a^b c(s)/s ds
    virtual std::optional<double> rarefaction_integral(double /*a*/, double /*b*/) const {
        return std::nullopt;
    }
    virtual std::optional<double> inverse(double /*pressure*/) const { return std::nullopt; }
    virtual std::optional<GeneralizedGammaLaw> generalized_gamma() const { return std::nullopt; }
};

// Immutable, cheaply copyable handle to a pressure function. Every evaluation
// rejects rho <= 0 with a domain error and non-finite results with a
// LawEvaluationError carrying the offending density.
class PressureLaw {
public:
    PressureLaw(std::shared_ptr<const PressureModel> model, std::string label);

    double pressure(double rho) const;
    double dp(double rho) const;
    double d2p(double rho) const;
    // Central difference of d2p with step 1e-4*rho when the model has no closed form.
    double d3p(double rho) const;
    bool has_analytic_d3p() const;

    double sound_speed(double rho) const;

    // \int_a^b c(s)/s ds, closed form where available, adaptive Gauss-Kronrod otherwise.
    double rarefaction_integral(double a, double b) const;

    // Density with p(rho) = pressure; domain error outside the range of p.
    double density_at(double pressure) const;

    std::optional<GeneralizedGammaLaw> generalized_gamma() const { return model_->generalized_gamma(); }

    const std::string& label() const noexcept { return label_; }
    const PressureModel& model() const noexcept { return *model_; }

private:
    std::shared_ptr<const PressureModel> model_;
    std::string label_;
};

double sound_speed(const PressureLaw& law, double rho);

// p'(rho) = alpha rho^delta; p = alpha/(delta+1) rho^(delta+1), or alpha ln(rho) at delta = -1.
PressureLaw generalized_gamma_law(double alpha, double delta);
// p = kappa rho^gamma. Valid for kappa > 0, 0 < gamma < 3 and for kappa < 0, -1 < gamma < 0.
PressureLaw gamma_law(double kappa, double gamma);
PressureLaw isothermal_law(double c);
PressureLaw inverse_law();  // p = -1/rho
PressureLaw log_law();      // p = ln(rho)
// p = 1/10 sum_{i=1..10} rho^(1+i/5) / (1+i/5), scaled so that p'(1) = 1.
PressureLaw sum_gamma_law();
// p = \int_g0^g1 rho^g dg, i.e. (rho^3 - rho)/ln(rho) for (1, 3).
PressureLaw integral_gamma_law(double g0 = 1.0, double g1 = 3.0);

// Positive linear combination sum_i w_i p_i.
PressureLaw combine(std::span<const PressureLaw> laws, std::span<const double> weights);

struct CustomLawFunctions {
    std::function<double(double)> p;
    std::function<double(double)> dp;
    std::function<double(double)> d2p;
    std::function<double(double)> d3p;  // may be empty
};

PressureLaw custom_law(std::string label, CustomLawFunctions functions);

// ---------------------------------------------------------------------------
// Numeric verification of the sufficient well-posedness conditions.

enum class Verdict { holds, fails, inconclusive };

struct ConditionResult {
    Verdict verdict = Verdict::inconclusive;
    // Largest relative violation seen on the grid (0 if none); at_rho is where.
    double worst_violation = 0.0;
    double at_rho = 0.0;

    bool holds() const noexcept { return verdict == Verdict::holds; }
};

struct ValidityReport {
    std::string law;
    ConditionResult c1_rarefaction;  // 2p' + rho p'' >= 0
    ConditionResult c1_shock;        // 6p' + 6 rho p'' + rho^2 p''' >= 0
    ConditionResult c2a;             // p -> inf as rho -> inf
    ConditionResult c2b;             // rho p' <= p_inf - p
    ConditionResult c3a;             // rho p(rho) -> -p0 < 0 as rho -> 0
    ConditionResult c3b_i;           // c -> 0 and 2p' - rho p'' >= 0
    ConditionResult c3b_ii;          // 0 < lim c < inf
    ConditionResult c3b_iii;         // rho^eta c -> finite positive, eta in (0,1)
    double grid_min = 0.0;
    double grid_max = 0.0;
    std::size_t grid_points = 0;
    double worst_violation = 0.0;

    bool c1() const noexcept { return c1_rarefaction.holds() && c1_shock.holds(); }
    bool c2() const noexcept { return c2a.holds() || c2b.holds(); }
    bool c3() const noexcept {
        return c3a.holds() || c3b_i.holds() || c3b_ii.holds() || c3b_iii.holds();
    }
    bool valid() const noexcept { return c1() && c2() && c3(); }
    // True when validity could not be established because some limit test was
    // inconclusive rather than failing outright.
    bool inconclusive() const noexcept;
};

std::vector<double> log_grid(double lo, double hi, std::size_t points);
std::vector<double> default_check_grid();  // [1e-6, 1e6], 10^4 points

ValidityReport check_sufficient_conditions(const PressureLaw& law, std::span<const double> grid);
ValidityReport check_sufficient_conditions(const PressureLaw& law);

std::string format_report(const ValidityReport& report);

}  // namespace gaspower
