#include "gaspower/runner.hpp"

#include "gaspower/error.hpp"
#include "gaspower/law_parser.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace gaspower {

std::vector<RunVariant> expand_variants(const Scenario& s) {
    if (s.numerics.empty()) throw Error(ErrorCategory::config, "scenario '" + s.name + "' has no numerics section");
    std::vector<LawVariant> laws = s.law_sweep;
    if (laws.empty()) laws.push_back({"", s.law});
    std::vector<std::optional<double>> extractions;
    if (s.extraction_sweep) {
        for (double v : s.extraction_sweep->values) extractions.emplace_back(v);
    } else {
        extractions.emplace_back(std::nullopt);
    }
    std::vector<RunVariant> out;
    for (const auto& num : s.numerics) {
        for (const auto& law : laws) {
            for (const auto& e : extractions) {
                RunVariant v;
                v.label = std::string(to_string(num.scheme));
                if (!law.label.empty()) v.label += "_" + law.label;
                if (e) {
                    char buf[32];
                    std::snprintf(buf, sizeof buf, "_eps%g", *e);
                    v.label += buf;
                }
                v.law = law.law;
                v.extraction = e;
                v.numerics = num;
                out.push_back(std::move(v));
            }
        }
    }
    return out;
}

GasNetwork build_network(const Scenario& s, const RunVariant& v) {
    GasNetwork net(parse_law(v.law), s.source);
    const PressureLaw& law = net.law();
    for (const auto& spec : s.gas_nodes) {
        GasNode g;
        g.id = spec.id;
        g.kind = spec.kind;
        g.pressure = spec.pressure;
        if (!spec.density.empty()) {
            std::vector<double> p;
            for (double rho : spec.density.values()) p.push_back(law.pressure(rho));
            g.pressure = TimeSeries(spec.density.times(), p);
        }
        g.extraction = spec.extraction;
        if (v.extraction && s.extraction_sweep && s.extraction_sweep->node == spec.id) {
            g.extraction = TimeSeries::constant(*v.extraction);
        }
        g.compressor = spec.compressor;
        net.add_node(std::move(g));
    }
    for (const auto& p : s.pipes) {
        const double cells = std::max(1.0, std::round(p.geometry.length / v.numerics.dx));
        net.add_pipe(p.id, p.from, p.to, p.geometry, static_cast<std::size_t>(cells));
    }
    net.finalize(layout_for(v.numerics.scheme));

    switch (s.initial.kind) {
        case InitialSpec::Kind::uniform: net.fill(s.initial.state); break;
        case InitialSpec::Kind::per_pipe:
            for (const auto& [id, u] : s.initial.pipes) net.fill_pipe(net.pipe_index(id), u);
            break;
        case InitialSpec::Kind::stationary: {
            // Start the pseudo-time march from rest at the first prescribed pressure.
            double rho = 1.0;
            for (const auto& n : net.nodes()) {
                if (n.kind == NodeKind::pressure) {
                    rho = law.density_at(n.pressure(0.0));
                    break;
                }
            }
            net.fill({rho, 0.0});
            break;
        }
    }
    return net;
}

std::vector<JunctionSolution> node_states(const GasNetwork& net, double t) {
    std::vector<JunctionSolution> out(net.nodes().size());
    const auto& law = net.law();
    std::vector<GasState> adjacent;
    for (std::size_t n = 0; n < net.nodes().size(); ++n) {
        const auto& node = net.nodes()[n];
        if (node.kind == NodeKind::periodic) continue;
        const auto& ends = net.incident(n);
        adjacent.clear();
        for (const auto& e : ends) adjacent.push_back(net.end_state(e));
        if (net.layout() == GridLayout::cell_averages) {
            out[n] = apply_boundary(net, n, adjacent, t);
            continue;
        }
        JunctionSolution& sol = out[n];
        sol.epsilon = node.kind == NodeKind::junction ? net.extraction(n, t) : 0.0;
        for (std::size_t i = 0; i < ends.size(); ++i) {
            sol.initial.push_back(adjacent[i]);
            sol.sides.push_back(ends[i].side);
            sol.ratios.push_back(net.pressure_ratio(n, ends[i]));
            sol.traces.push_back(adjacent[i]);
            sol.waves.push_back(WaveType::rarefaction);
            if (node.kind == NodeKind::pressure) sol.epsilon += ends[i].side == Side::incoming ? adjacent[i].q : -adjacent[i].q;
        }
        sol.rho_star = sol.ratios[0] == 1.0 ? adjacent[0].rho
                                            : law.density_at(law.pressure(adjacent[0].rho) / sol.ratios[0]);
        sol.admissible = true;
        sol.subsonic_traces = true;
    }
    return out;
}

power::PowerFlowSolution run_powerflow(const Scenario& s, double t, power::InitialGuess initial) {
    if (!s.has_power()) throw Error(ErrorCategory::config, "scenario '" + s.name + "' has no power grid");
    power::PowerGrid grid = s.grid;
    apply_schedules(grid, s.schedules, t);
    return power::solve_newton(grid, initial);
}

namespace {

// Net flux entering the network through the node.
double inflow(const JunctionSolution& sol) {
    double f = 0.0;
    for (std::size_t i = 0; i < sol.traces.size(); ++i) {
        f += sol.sides[i] == Side::outgoing ? sol.traces[i].q : -sol.traces[i].q;
    }
    return f;
}

class Recorder {
public:
    Recorder(const Scenario& s, const GasNetwork& net) : s_(s), net_(net) {
        for (const auto& id : s.outputs.series) series_.push_back({id, {}, {}});
    }

    void sample(double t, const std::optional<CosimReport>& power) {
        if (series_.empty()) return;
        const auto nodes = node_states(net_, t);
        for (auto& o : series_) {
            o.times.push_back(t);
            o.values.push_back(value(o.id, nodes, power));
        }
    }

    std::vector<TimeSeriesOutput> take() { return std::move(series_); }

private:
    double value(const std::string& id, const std::vector<JunctionSolution>& nodes,
                 const std::optional<CosimReport>& power) const {
        if (id == "mass") return net_.total_mass();
        if (id == "epsilon") return power ? power->consumption : 0.0;
        const auto at = id.find('@');
        const std::string what = id.substr(0, at);
        const std::string where = id.substr(at + 1);
        if (what == "pressure" || what == "density" || what == "inflow") {
            const auto& sol = nodes.at(net_.node_index(where));
            if (sol.traces.empty()) throw Error(ErrorCategory::config, "node '" + where + "' has no coupling state");
            if (what == "pressure") return net_.law().pressure(sol.rho_star);
            if (what == "density") return sol.rho_star;
            return inflow(sol);
        }
        if (!power) throw Error(ErrorCategory::config, "'" + id + "' needs a coupled power grid");
        const auto k = static_cast<Eigen::Index>(s_.grid.bus_index(where));
        if (what == "P") return power->power.P[k];
        if (what == "Q") return power->power.Q[k];
        if (what == "Vm") return power->power.vm[k];
        return power->power.va[k];
    }

    const Scenario& s_;
    const GasNetwork& net_;
    std::vector<TimeSeriesOutput> series_;
};

}  // namespace

RunResult simulate(const Scenario& s, const RunVariant& variant, RunMode mode, const RunOptions& options) {
    const auto clock0 = std::chrono::steady_clock::now();
    RunResult result;
    result.variant = variant;
    auto& stats = result.stats;

    GasNetwork net = build_network(s, variant);
    power::PowerGrid grid = s.grid;
    std::optional<CosimReport> power;
    const bool coupled = s.link && s.has_power();
    if (mode == RunMode::cosim && !coupled) {
        throw Error(ErrorCategory::config, "co-simulation needs buses and a coupling section");
    }
    auto couple = [&](double t) {
        if (coupled) {
            power = couple_power(net, grid, *s.link, s.schedules, t);
        } else if (s.has_power()) {
            CosimReport r;
            apply_schedules(grid, s.schedules, t);
            r.power = power::solve_newton(grid);
            power = std::move(r);
        }
    };
    couple(0.0);

    if (s.initial.kind == InitialSpec::Kind::stationary) {
        const StationaryResult st = find_stationary_state(net, 0.0);
        stats.stationary_steps = st.steps;
        stats.stationary_rate = st.rate;
    }

    GasStepper stepper(net, variant.numerics.scheme);
    Recorder recorder(s, net);
    const double dt = variant.numerics.dt;
    const auto steps = static_cast<std::size_t>(std::llround(variant.numerics.end_time / dt));
    const double interval = s.outputs.sample_interval;
    double next_sample = 0.0;
    const std::size_t link_node = coupled ? net.node_index(s.link->gas_node) : 0;

    for (std::size_t n = 0;; ++n) {
        const double t = static_cast<double>(n) * dt;
        if (mode == RunMode::cosim && n > 0) couple(t);
        if (interval <= 0.0 || t >= next_sample - 1e-9 * dt || n == steps) {
            recorder.sample(t, power);
            if (interval > 0.0) {
                while (next_sample <= t + 1e-9 * dt) next_sample += interval;
            }
        }
        if (n == steps) break;

        const double m0 = net.total_mass();
        const StepReport r = stepper.step(t, dt);
        const double m1 = net.total_mass();
        ++stats.steps;
        stats.max_mass_defect = std::max(stats.max_mass_defect, std::abs(m1 - m0 + r.boundary_outflow) / m0);
        stats.max_flux_residual = std::max(stats.max_flux_residual, r.max_flux_residual);
        stats.max_pressure_mismatch = std::max(stats.max_pressure_mismatch, r.max_pressure_mismatch);
        stats.junction_solves += r.junction_solves;
        stats.newton_iterations += r.newton_iterations;
        if (r.inverse_cfl_violated) ++stats.inverse_cfl_warnings;
        if (coupled && link_node < r.node_solutions.size() && !r.node_solutions[link_node].traces.empty()) {
            const auto& sol = r.node_solutions[link_node];
            const double want = net.extraction(link_node, t + dt);
            double scale = std::abs(want);
            for (const auto& v : sol.traces) scale += std::abs(v.q);
            const double jump = -inflow(sol);
            if (scale > 0.0) {
                stats.max_coupling_residual = std::max(stats.max_coupling_residual, std::abs(jump - want) / scale);
            }
        }
        if (options.on_step) options.on_step(t + dt, net, r);
    }

    result.series = recorder.take();
    for (const auto& spec : s.outputs.profiles) {
        ProfileOutput prof;
        prof.id = spec.id;
        prof.time = static_cast<double>(steps) * dt;
        double origin = spec.offset;
        for (const auto& id : spec.pipes) {
            const auto& p = net.pipes()[net.pipe_index(id)];
            for (std::size_t j = 0; j < p.size(); ++j) {
                prof.x.push_back(origin + p.x(j));
                prof.rho.push_back(p.rho[static_cast<Eigen::Index>(j)]);
            }
            origin += p.geometry.length;
        }
        result.profiles.push_back(std::move(prof));
    }
    stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - clock0).count();
    return result;
}

std::filesystem::path output_directory(const Scenario& s) {
    if (const char* env = std::getenv("GASPOWER_OUTPUT_DIR"); env && *env) return env;
    return s.outputs.directory;
}

std::vector<std::filesystem::path> write_result(const Scenario& s, const RunResult& result,
                                                const std::filesystem::path& base, bool per_variant_directory) {
    const auto dir = per_variant_directory ? base / file_stem(result.variant.label) : base;
    std::vector<std::filesystem::path> files;
    if (!result.series.empty()) files = write_timeseries(result.series, dir, s.outputs.svg);
    if (!result.profiles.empty()) {
        const auto more = write_profiles(result.profiles, dir, s.outputs.svg);
        files.insert(files.end(), more.begin(), more.end());
    }
    return files;
}

}  // namespace gaspower
