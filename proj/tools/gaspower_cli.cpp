#include "gaspower/coupling.hpp"
#include "gaspower/error.hpp"
#include "gaspower/law_parser.hpp"
#include "gaspower/riemann.hpp"
#include "gaspower/runner.hpp"
#include "gaspower/scenario.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iomanip>
#include <iostream>
#include <numbers>

using namespace gaspower;

namespace {

GasState parse_state(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw Error(ErrorCategory::config, "state '" + text + "' must be rho,q");
    try {
        std::size_t used = 0;
        const double rho = std::stod(text.substr(0, comma), &used);
        const std::string rest = text.substr(comma + 1);
        const double q = std::stod(rest, &used);
        if (used != rest.size()) throw std::invalid_argument("trailing");
        return {rho, q};
    } catch (const std::logic_error&) {
        throw Error(ErrorCategory::config, "state '" + text + "' must be two numbers rho,q");
    }
}

int pressure_check(const std::string& text) {
    const PressureLaw law = parse_law(text);
    const ValidityReport report = check_sufficient_conditions(law);
    std::cout << format_report(report);
    return report.valid() ? 0 : 1;
}

int riemann(const std::string& law_text, const std::string& left, const std::string& right, double epsilon) {
    const PressureLaw law = parse_law(law_text);
    const GasState ul = parse_state(left);
    const GasState ur = parse_state(right);
    std::cout << std::setprecision(10);
    std::cout << "law        " << law.label() << "\n";
    std::cout << "rho_min    in " << rho_min(ul, Side::incoming, law) << "  out " << rho_min(ur, Side::outgoing, law)
              << "\n";
    const WaveThresholds th = wave_thresholds(ul, ur, law);
    std::cout << "thresholds s-s <= " << th.shock_shock_upper << " < r-s <= " << th.mixed_upper
              << " < r-r < " << th.max_extraction << "\n";
    const JunctionSolution sol = solve_gas_power_junction(ul, ur, epsilon, law);
    std::cout << "epsilon    " << epsilon << "\n";
    std::cout << "rho*       " << sol.rho_star << "\n";
    std::cout << "trace in   (" << sol.traces[0].rho << ", " << sol.traces[0].q << ")\n";
    std::cout << "trace out  (" << sol.traces[1].rho << ", " << sol.traces[1].q << ")\n";
    std::cout << "waves      " << to_string(sol.waves[0]) << "-" << to_string(sol.waves[1]) << "\n";
    return 0;
}

int simulate(const std::string& path, RunMode mode) {
    const Scenario s = load_scenario(path);
    const auto variants = expand_variants(s);
    const auto base = output_directory(s);
    for (const auto& v : variants) {
        const RunResult r = simulate(s, v, mode);
        const auto files = write_result(s, r, base, variants.size() > 1);
        std::cout << v.label << ": " << r.stats.steps << " steps in " << std::setprecision(3) << r.stats.wall_seconds
                  << " s, mass defect " << r.stats.max_mass_defect << ", " << files.size() << " file(s) in "
                  << (variants.size() > 1 ? base / file_stem(v.label) : base).string() << "\n";
        if (r.stats.inverse_cfl_warnings > 0) {
            std::cerr << "warning: time step below the inverse CFL bound in " << r.stats.inverse_cfl_warnings
                      << " step(s)\n";
        }
    }
    return 0;
}

int powerflow(const std::string& path, bool warm) {
    const Scenario s = load_scenario(path);
    const auto sol = run_powerflow(s, 0.0, warm ? power::InitialGuess::warm : power::InitialGuess::flat);
    std::cout << "converged in " << sol.iterations << " iterations, mismatch " << std::scientific
              << std::setprecision(3) << sol.mismatch << " p.u.\n"
              << std::defaultfloat;
    std::cout << std::left << std::setw(6) << "bus" << std::setw(7) << "type" << std::right << std::setw(12) << "P"
              << std::setw(12) << "Q" << std::setw(12) << "|V|" << std::setw(12) << "angle[deg]" << "\n";
    std::cout << std::fixed << std::setprecision(6);
    for (std::size_t i = 0; i < s.grid.buses.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        std::cout << std::left << std::setw(6) << s.grid.buses[i].id << std::setw(7)
                  << power::to_string(s.grid.buses[i].kind) << std::right << std::setw(12) << sol.P[k] << std::setw(12)
                  << sol.Q[k] << std::setw(12) << sol.vm[k] << std::setw(12) << sol.va[k] * 180.0 / std::numbers::pi
                  << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coupled gas network and power grid simulator"};
    app.require_subcommand(1);

    std::string law_text;
    auto* pc = app.add_subcommand("pressure-check", "Check the sufficient well-posedness conditions of a pressure law");
    pc->add_option("law", law_text, "Law expression, e.g. \"gamma(1,1.4)\"")->required();

    std::string rlaw = "gamma(1,1.4)";
    std::string left;
    std::string right;
    double epsilon = 0.0;
    auto* rm = app.add_subcommand("riemann", "Solve the gas-to-power junction Riemann problem");
    rm->add_option("--law", rlaw, "Pressure law")->capture_default_str();
    rm->add_option("--left", left, "Incoming state rho,q")->required();
    rm->add_option("--right", right, "Outgoing state rho,q")->required();
    rm->add_option("--epsilon", epsilon, "Extraction at the junction")->capture_default_str();

    std::string scenario;
    auto* sg = app.add_subcommand("simulate-gas", "Run the gas network of a scenario");
    sg->add_option("scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
    bool warm = false;
    auto* pf = app.add_subcommand("powerflow", "Solve the power flow of a scenario");
    pf->add_option("scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
    pf->add_flag("--warm", warm, "Start from the bus voltages in the file instead of a flat start");
    auto* cs = app.add_subcommand("cosim", "Run the coupled gas and power simulation");
    cs->add_option("scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*pc) return pressure_check(law_text);
        if (*rm) return riemann(rlaw, left, right, epsilon);
        if (*sg) return simulate(scenario, RunMode::gas);
        if (*pf) return powerflow(scenario, warm);
        if (*cs) return simulate(scenario, RunMode::cosim);
    } catch (const Error& e) {
        std::cerr << "error[" << to_string(e.category()) << "]: " << e.what() << "\n";
        return exit_code(e.category());
    } catch (const std::exception& e) {
        std::cerr << "error[internal]: " << e.what() << "\n";
        return 70;
    }
    return 0;
}
