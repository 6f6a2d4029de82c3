#include "gaspower/pressure.hpp"

#include "gaspower/error.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <sstream>

namespace gaspower {

bool GeneralizedGammaLaw::valid() const noexcept {
    return classify_generalized_gamma(alpha, delta) == GammaClass::valid;
}

GammaClass classify_generalized_gamma(double alpha, double delta) noexcept {
    return (alpha > 0.0 && std::abs(delta) <= 2.0) ? GammaClass::valid : GammaClass::invalid;
}

namespace {

std::string num(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

class GeneralizedGammaModel final : public PressureModel {
public:
    GeneralizedGammaModel(double alpha, double delta) : alpha_(alpha), delta_(delta) {}

    double p(double rho) const override {
        if (is_log()) return alpha_ * std::log(rho);
        const double g = delta_ + 1.0;
        return alpha_ / g * std::pow(rho, g);
    }
    double dp(double rho) const override { return alpha_ * std::pow(rho, delta_); }
    double d2p(double rho) const override {
        if (delta_ == 0.0) return 0.0;
        return alpha_ * delta_ * std::pow(rho, delta_ - 1.0);
    }
    std::optional<double> d3p(double rho) const override {
        if (delta_ == 0.0 || delta_ == 1.0) return 0.0;
        return alpha_ * delta_ * (delta_ - 1.0) * std::pow(rho, delta_ - 2.0);
    }

    // c(s)/s = sqrt(alpha) s^(delta/2 - 1)
    std::optional<double> rarefaction_integral(double a, double b) const override {
        const double h = 0.5 * delta_;
        const double log_ratio = std::log(b / a);
        if (h == 0.0) return std::sqrt(alpha_) * log_ratio;
        return std::sqrt(alpha_) * std::pow(a, h) * std::expm1(h * log_ratio) / h;
    }

    std::optional<double> inverse(double pressure) const override {
        if (is_log()) return std::exp(pressure / alpha_);
        const double g = delta_ + 1.0;
        const double base = g * pressure / alpha_;
        if (!(base > 0.0)) {
            throw Error(ErrorCategory::domain, "pressure " + num(pressure) + " outside the range of the law");
        }
        return std::pow(base, 1.0 / g);
    }

    std::optional<GeneralizedGammaLaw> generalized_gamma() const override {
        return GeneralizedGammaLaw{alpha_, delta_};
    }

private:
    bool is_log() const noexcept { return delta_ == -1.0; }

    double alpha_;
    double delta_;
};

class CombinationModel final : public PressureModel {
public:
    CombinationModel(std::vector<PressureLaw> laws, std::vector<double> weights)
        : laws_(std::move(laws)), weights_(std::move(weights)) {}

    double p(double rho) const override {
        return sum([rho](const PressureLaw& l) { return l.pressure(rho); });
    }
    double dp(double rho) const override {
        return sum([rho](const PressureLaw& l) { return l.dp(rho); });
    }
    double d2p(double rho) const override {
        return sum([rho](const PressureLaw& l) { return l.d2p(rho); });
    }
    std::optional<double> d3p(double rho) const override {
        double s = 0.0;
        for (std::size_t i = 0; i < laws_.size(); ++i) {
            auto v = laws_[i].model().d3p(rho);
            if (!v) return std::nullopt;
            s += weights_[i] * *v;
        }
        return s;
    }

    std::optional<GeneralizedGammaLaw> generalized_gamma() const override {
        // Only a sum of terms with one common exponent stays in the family.
        std::optional<GeneralizedGammaLaw> acc;
        for (std::size_t i = 0; i < laws_.size(); ++i) {
            auto g = laws_[i].generalized_gamma();
            if (!g) return std::nullopt;
            if (!acc) {
                acc = GeneralizedGammaLaw{weights_[i] * g->alpha, g->delta};
            } else if (acc->delta == g->delta) {
                acc->alpha += weights_[i] * g->alpha;
            } else {
                return std::nullopt;
            }
        }
        return acc;
    }

    std::optional<double> rarefaction_integral(double a, double b) const override {
        if (auto g = generalized_gamma()) return GeneralizedGammaModel(g->alpha, g->delta).rarefaction_integral(a, b);
        return std::nullopt;
    }

private:
    template <class F>
    double sum(F&& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < laws_.size(); ++i) s += weights_[i] * f(laws_[i]);
        return s;
    }

    std::vector<PressureLaw> laws_;
    std::vector<double> weights_;
};

class CustomModel final : public PressureModel {
public:
    explicit CustomModel(CustomLawFunctions f) : f_(std::move(f)) {}

    double p(double rho) const override { return f_.p(rho); }
    double dp(double rho) const override { return f_.dp(rho); }
    double d2p(double rho) const override { return f_.d2p(rho); }
    std::optional<double> d3p(double rho) const override {
        if (!f_.d3p) return std::nullopt;
        return f_.d3p(rho);
    }

private:
    CustomLawFunctions f_;
};

std::shared_ptr<const PressureModel> make_combination(std::span<const PressureLaw> laws,
                                                     std::span<const double> weights) {
    return std::make_shared<CombinationModel>(std::vector<PressureLaw>(laws.begin(), laws.end()),
                                              std::vector<double>(weights.begin(), weights.end()));
}

void require_positive_density(double rho) {
    if (!(rho > 0.0)) {
        throw Error(ErrorCategory::domain, "density must be positive, got " + num(rho));
    }
}

double checked(double value, const char* what, double rho) {
    if (!std::isfinite(value)) throw LawEvaluationError(std::string("non-finite ") + what, rho);
    return value;
}

}  // namespace

PressureLaw::PressureLaw(std::shared_ptr<const PressureModel> model, std::string label)
    : model_(std::move(model)), label_(std::move(label)) {
    if (!model_) throw Error(ErrorCategory::config, "pressure law without model");
}

double PressureLaw::pressure(double rho) const {
    require_positive_density(rho);
    return checked(model_->p(rho), "p", rho);
}

double PressureLaw::dp(double rho) const {
    require_positive_density(rho);
    return checked(model_->dp(rho), "p'", rho);
}

double PressureLaw::d2p(double rho) const {
    require_positive_density(rho);
    return checked(model_->d2p(rho), "p''", rho);
}

double PressureLaw::d3p(double rho) const {
    require_positive_density(rho);
    if (auto v = model_->d3p(rho)) return checked(*v, "p'''", rho);
    const double h = 1e-4 * rho;
    return checked((model_->d2p(rho + h) - model_->d2p(rho - h)) / (2.0 * h), "p'''", rho);
}

bool PressureLaw::has_analytic_d3p() const { return model_->d3p(1.0).has_value(); }

double PressureLaw::sound_speed(double rho) const {
    const double d = dp(rho);
    if (!(d > 0.0)) throw LawEvaluationError("p' not positive", rho);
    return std::sqrt(d);
}

double PressureLaw::rarefaction_integral(double a, double b) const {
    require_positive_density(a);
    require_positive_density(b);
    if (a == b) return 0.0;
    if (auto closed = model_->rarefaction_integral(a, b)) return checked(*closed, "rarefaction integral", a);

    // Substituting s = e^u turns the integrand into c(e^u), smooth on log scale.
    auto integrand = [this](double u) { return std::sqrt(model_->dp(std::exp(u))); };
    double error = 0.0;
    const double lo = std::log(a);
    const double hi = std::log(b);
    // The integrand is analytic in ln(rho); on short intervals one panel is exact to
    // rounding, and adaptive refinement would only chase rounding noise.
    const unsigned depth = std::abs(hi - lo) < 0.05 ? 0 : 15;
    const double value =
        boost::math::quadrature::gauss_kronrod<double, 15>::integrate(integrand, lo, hi, depth, 1e-12, &error);
    if (!std::isfinite(value) || error > 1e-9 * (1.0 + std::abs(value))) {
        throw Error(ErrorCategory::numeric,
                    "rarefaction quadrature failed on [" + num(a) + ", " + num(b) + "]");
    }
    return value;
}

double PressureLaw::density_at(double target) const {
    if (!std::isfinite(target)) throw Error(ErrorCategory::domain, "pressure must be finite");
    if (auto closed = model_->inverse(target)) return *closed;

    auto residual = [&](double log_rho) { return model_->p(std::exp(log_rho)) - target; };
    double lo = 0.0;
    double hi = 0.0;
    double f_lo = residual(lo);
    double f_hi = f_lo;
    // Expand geometrically in log(rho) until p(rho) brackets the target.
    for (double step = 1.0; step < 700.0; step *= 1.5) {
        if (f_lo > 0.0) {
            hi = lo;
            f_hi = f_lo;
            lo -= step;
            f_lo = residual(lo);
        } else if (f_hi < 0.0) {
            lo = hi;
            f_lo = f_hi;
            hi += step;
            f_hi = residual(hi);
        }
        if (f_lo <= 0.0 && f_hi >= 0.0) break;
    }
    if (!(f_lo <= 0.0 && f_hi >= 0.0)) {
        throw Error(ErrorCategory::domain, "pressure " + num(target) + " outside the range of law " + label_);
    }
    if (f_lo == 0.0) return std::exp(lo);
    if (f_hi == 0.0) return std::exp(hi);
    std::uintmax_t max_iter = 200;
    auto r = boost::math::tools::toms748_solve(residual, lo, hi, f_lo, f_hi,
                                               boost::math::tools::eps_tolerance<double>(52), max_iter);
    return std::exp(0.5 * (r.first + r.second));
}

double sound_speed(const PressureLaw& law, double rho) { return law.sound_speed(rho); }

PressureLaw generalized_gamma_law(double alpha, double delta) {
    if (!(alpha > 0.0) || !std::isfinite(delta)) {
        throw Error(ErrorCategory::domain, "generalized gamma law requires alpha > 0");
    }
    return PressureLaw(std::make_shared<GeneralizedGammaModel>(alpha, delta),
                       "generalized(" + num(alpha) + "," + num(delta) + ")");
}

PressureLaw gamma_law(double kappa, double gamma) {
    const double alpha = kappa * gamma;
    if (gamma == 0.0 || !(alpha > 0.0)) {
        throw Error(ErrorCategory::domain, "gamma law needs kappa*gamma > 0 for p' > 0");
    }
    return PressureLaw(std::make_shared<GeneralizedGammaModel>(alpha, gamma - 1.0),
                       "gamma(" + num(kappa) + "," + num(gamma) + ")");
}

PressureLaw isothermal_law(double c) {
    if (!(c > 0.0)) throw Error(ErrorCategory::domain, "isothermal law needs c > 0");
    return PressureLaw(std::make_shared<GeneralizedGammaModel>(c * c, 0.0), "isothermal(" + num(c) + ")");
}

PressureLaw inverse_law() { return PressureLaw(std::make_shared<GeneralizedGammaModel>(1.0, -2.0), "inverse"); }

PressureLaw log_law() { return PressureLaw(std::make_shared<GeneralizedGammaModel>(1.0, -1.0), "log"); }

PressureLaw sum_gamma_law() {
    std::vector<PressureLaw> terms;
    std::vector<double> weights;
    for (int i = 1; i <= 10; ++i) {
        // rho^g / g has p' = rho^(g-1).
        terms.push_back(generalized_gamma_law(1.0, i / 5.0));
        weights.push_back(0.1);
    }
    return PressureLaw(make_combination(terms, weights), "sum_gamma");
}

PressureLaw integral_gamma_law(double g0, double g1) {
    if (!(g0 > 0.0) || !(g1 > g0)) throw Error(ErrorCategory::domain, "integral_gamma needs 0 < g0 < g1");
    // Gauss-Legendre nodes in g turn the integral into a positive combination
    // of gamma laws with kappa = 1.
    using Rule = boost::math::quadrature::gauss<double, 30>;
    std::vector<PressureLaw> terms;
    std::vector<double> weights;
    const double half = 0.5 * (g1 - g0);
    const double mid = 0.5 * (g1 + g0);
    auto add = [&](double x, double w) {
        const double g = mid + half * x;
        terms.push_back(gamma_law(1.0, g));
        weights.push_back(half * w);
    };
    const auto& abscissa = Rule::abscissa();
    const auto& weight = Rule::weights();
    for (std::size_t k = 0; k < abscissa.size(); ++k) {
        add(abscissa[k], weight[k]);
        if (abscissa[k] != 0.0) add(-abscissa[k], weight[k]);
    }
    return PressureLaw(make_combination(terms, weights), "integral_gamma(" + num(g0) + "," + num(g1) + ")");
}

PressureLaw combine(std::span<const PressureLaw> laws, std::span<const double> weights) {
    if (laws.empty()) throw Error(ErrorCategory::domain, "combine needs at least one law");
    if (laws.size() != weights.size()) throw Error(ErrorCategory::domain, "combine: one weight per law");
    std::string label = "linear_combination([";
    std::string wlabel = "[";
    for (std::size_t i = 0; i < laws.size(); ++i) {
        if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
            throw Error(ErrorCategory::domain, "combine: weights must be positive");
        }
        label += (i ? "," : "") + laws[i].label();
        wlabel += (i ? "," : "") + num(weights[i]);
    }
    label += "]," + wlabel + "])";
    return PressureLaw(make_combination(laws, weights), label);
}

PressureLaw custom_law(std::string label, CustomLawFunctions functions) {
    if (!functions.p || !functions.dp || !functions.d2p) {
        throw Error(ErrorCategory::config, "custom law needs p, p' and p''");
    }
    return PressureLaw(std::make_shared<CustomModel>(std::move(functions)), std::move(label));
}

}  // namespace gaspower
