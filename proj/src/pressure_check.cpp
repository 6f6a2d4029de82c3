#include "gaspower/error.hpp"
#include "gaspower/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace gaspower {

namespace {

// Relative tolerance under which an inequality violation counts as rounding noise.
constexpr double kTolerance = 1e-12;
// p''' from central differences carries truncation error of order 1e-8.
constexpr double kFiniteDifferenceTolerance = 1e-6;
// Trend exponents |e| below this are treated as a flat limit.
constexpr double kTrendTolerance = 1e-3;
constexpr double kEtaConsistency = 1e-2;

// Accumulates sign checks of sum_k terms_k >= 0 over the grid.
class InequalityCheck {
public:
    explicit InequalityCheck(double tolerance) : tolerance_(tolerance) {}

    void add(double rho, std::initializer_list<double> terms) {
        double value = 0.0;
        double scale = 0.0;
        for (double t : terms) {
            value += t;
            scale += std::abs(t);
        }
        if (value >= 0.0 || scale == 0.0) return;
        const double violation = -value / scale;
        if (violation > result_.worst_violation) {
            result_.worst_violation = violation;
            result_.at_rho = rho;
        }
    }

    ConditionResult finish() {
        result_.verdict = result_.worst_violation > tolerance_ ? Verdict::fails : Verdict::holds;
        return result_;
    }

private:
    double tolerance_;
    ConditionResult result_;
};

ConditionResult verdict_only(Verdict v, double rho) {
    ConditionResult r;
    r.verdict = v;
    r.at_rho = rho;
    return r;
}

// log10 slope of |g| over one decade ending at rho.
double decade_exponent(double g_hi, double g_lo) { return std::log10(std::abs(g_hi) / std::abs(g_lo)); }

enum class Trend { vanishing, finite, power_blowup, other };

Trend classify_trend(double e) {
    if (!std::isfinite(e)) return Trend::other;
    if (e > kTrendTolerance) return Trend::vanishing;
    if (std::abs(e) <= kTrendTolerance) return Trend::finite;
    if (e < -kTrendTolerance && e > -1.0 + kTrendTolerance) return Trend::power_blowup;
    return Trend::other;
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::holds: return "holds";
        case Verdict::fails: return "fails";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

}  // namespace

bool ValidityReport::inconclusive() const noexcept {
    if (valid()) return false;
    for (const auto* c : {&c2a, &c2b, &c3a, &c3b_i, &c3b_ii, &c3b_iii}) {
        if (c->verdict == Verdict::inconclusive) return true;
    }
    return false;
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
    if (!(lo > 0.0) || !(hi > lo) || points < 2) {
        throw Error(ErrorCategory::domain, "log grid needs 0 < lo < hi and at least two points");
    }
    std::vector<double> grid(points);
    const double a = std::log(lo);
    const double step = (std::log(hi) - a) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) grid[i] = std::exp(a + step * static_cast<double>(i));
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

std::vector<double> default_check_grid() { return log_grid(1e-6, 1e6, 10000); }

ValidityReport check_sufficient_conditions(const PressureLaw& law) {
    const auto grid = default_check_grid();
    return check_sufficient_conditions(law, grid);
}

ValidityReport check_sufficient_conditions(const PressureLaw& law, std::span<const double> grid) {
    if (grid.size() < 2) throw Error(ErrorCategory::domain, "check grid needs at least two points");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
            throw Error(ErrorCategory::domain, "check grid must be positive and strictly increasing");
        }
    }

    ValidityReport report;
    report.law = law.label();
    report.grid_min = grid.front();
    report.grid_max = grid.back();
    report.grid_points = grid.size();

    const double head = grid.front();
    const double tail = grid.back();

    // C2(a) via increments over consecutive decades at the tail.
    const double p_t0 = law.pressure(tail / 10.0);
    const double p_t1 = law.pressure(tail);
    const double p_t2 = law.pressure(tail * 10.0);
    const double p_tm = law.pressure(tail / 100.0);
    const double d0 = p_t0 - p_tm;
    const double d1 = p_t1 - p_t0;
    const double d2 = p_t2 - p_t1;
    const double r1 = d1 / d0;
    const double r2 = d2 / d1;
    const bool grows1 = r1 >= 1.0 - 1e-9;
    const bool grows2 = r2 >= 1.0 - 1e-9;
    bool bounded = false;
    if (grows1 && grows2) {
        report.c2a = verdict_only(Verdict::holds, tail);
    } else if (!grows1 && !grows2) {
        report.c2a = verdict_only(Verdict::fails, tail);
        bounded = true;
    } else {
        report.c2a = verdict_only(Verdict::inconclusive, tail);
    }

    // C3 limit trends at the head.
    const double h0 = head / 100.0;
    const double h1 = head / 10.0;
    const double h2 = head;
    const double c0 = law.sound_speed(h0);
    const double c1 = law.sound_speed(h1);
    const double c2 = law.sound_speed(h2);
    const double ec1 = decade_exponent(c1, c0);
    const double ec2 = decade_exponent(c2, c1);
    const Trend t1 = classify_trend(ec1);
    const Trend t2 = classify_trend(ec2);

    const double rp0 = h0 * law.pressure(h0);
    const double rp1 = h1 * law.pressure(h1);
    const double rp2 = h2 * law.pressure(h2);
    if (rp0 < 0.0 && rp1 < 0.0 && rp2 < 0.0) {
        const double e1 = decade_exponent(rp1, rp0);
        const double e2 = decade_exponent(rp2, rp1);
        const bool flat1 = std::abs(e1) <= kTrendTolerance;
        const bool flat2 = std::abs(e2) <= kTrendTolerance;
        report.c3a = verdict_only(flat1 && flat2 ? Verdict::holds
                                  : flat1 == flat2 ? Verdict::fails
                                                   : Verdict::inconclusive,
                                  head);
    } else {
        report.c3a = verdict_only(Verdict::fails, head);
    }

    const double p_inf = bounded ? p_t2 + d2 * r2 / (1.0 - r2) : 0.0;
    const double fd_tol = law.has_analytic_d3p() ? kTolerance : kFiniteDifferenceTolerance;
    InequalityCheck rarefaction(kTolerance);
    InequalityCheck shock(fd_tol);
    InequalityCheck negative(kTolerance);
    InequalityCheck concave_c(kTolerance);
    for (double rho : grid) {
        const double p = law.pressure(rho);
        const double dp = law.dp(rho);
        const double d2p = law.d2p(rho);
        const double d3p = law.d3p(rho);
        if (!(dp > 0.0)) throw LawEvaluationError("p' not positive", rho);
        rarefaction.add(rho, {2.0 * dp, rho * d2p});
        shock.add(rho, {6.0 * dp, 6.0 * rho * d2p, rho * rho * d3p});
        if (bounded) negative.add(rho, {p_inf, -p, -rho * dp});
        concave_c.add(rho, {2.0 * dp, -rho * d2p});
    }
    report.c1_rarefaction = rarefaction.finish();
    report.c1_shock = shock.finish();

    if (bounded) {
        report.c2b = negative.finish();
    } else {
        // p unbounded or undecided: (b) is not the relevant branch.
        report.c2b = verdict_only(report.c2a.verdict == Verdict::inconclusive ? Verdict::inconclusive
                                                                                 : Verdict::fails,
                                  tail);
    }

    const ConditionResult concave = concave_c.finish();
    if (t1 != t2) {
        report.c3b_i = verdict_only(Verdict::inconclusive, head);
        report.c3b_ii = verdict_only(Verdict::inconclusive, head);
        report.c3b_iii = verdict_only(Verdict::inconclusive, head);
    } else {
        report.c3b_i = t1 == Trend::vanishing ? concave : verdict_only(Verdict::fails, head);
        report.c3b_ii = verdict_only(t1 == Trend::finite ? Verdict::holds : Verdict::fails, head);
        const bool consistent = std::abs(ec1 - ec2) <= kEtaConsistency;
        report.c3b_iii = verdict_only(t1 == Trend::power_blowup
                                          ? (consistent ? Verdict::holds : Verdict::inconclusive)
                                          : Verdict::fails,
                                      head);
    }

    for (const auto* c : {&report.c1_rarefaction, &report.c1_shock, &report.c2b, &report.c3b_i}) {
        report.worst_violation = std::max(report.worst_violation, c->worst_violation);
    }
    return report;
}

std::string format_report(const ValidityReport& r) {
    std::ostringstream os;
    os << "law " << r.law << "\n";
    os << "grid [" << r.grid_min << ", " << r.grid_max << "] with " << r.grid_points << " points\n";
    auto line = [&os](const char* name, const ConditionResult& c) {
        os << "  " << std::left << std::setw(16) << name << verdict_name(c.verdict);
        if (c.worst_violation > 0.0) {
            os << "  worst " << std::setprecision(3) << std::scientific << c.worst_violation << " at rho="
               << c.at_rho << std::defaultfloat;
        }
        os << "\n";
    };
    line("C1 rarefaction", r.c1_rarefaction);
    line("C1 shock", r.c1_shock);
    line("C2(a)", r.c2a);
    line("C2(b)", r.c2b);
    line("C3(a)", r.c3a);
    line("C3(b)(i)", r.c3b_i);
    line("C3(b)(ii)", r.c3b_ii);
    line("C3(b)(iii)", r.c3b_iii);
    os << "worst violation " << std::setprecision(3) << std::scientific << r.worst_violation << std::defaultfloat
       << "\n";
    os << (r.valid() ? "valid" : (r.inconclusive() ? "inconclusive" : "invalid")) << "\n";
    return os.str();
}

}  // namespace gaspower
