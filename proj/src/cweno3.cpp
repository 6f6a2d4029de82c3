#include "gaspower/error.hpp"
#include "gaspower/friction.hpp"
#include "gaspower/gasdyn.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gaspower {

namespace {

constexpr double kWeightLeft = 0.25;
constexpr double kWeightRight = 0.25;
constexpr double kWeightCentre = 0.5;

struct PipeWork {
    Eigen::ArrayXd rho_l, rho_r, q_l, q_r;  // face values per cell
    Eigen::ArrayXd flux_rho, flux_q;        // N + 1 interface fluxes
    Eigen::ArrayXd d_rho, d_q;              // time derivative per cell
};

double max_speed(const PipeGrid& p, const PressureLaw& law) {
    double m = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        const GasState u = p.state(j);
        m = std::max(m, std::abs(u.q / u.rho) + law.sound_speed(u.rho));
    }
    return m;
}

class Cweno3Operator {
public:
    Cweno3Operator(GasNetwork& net, const Cweno3Options& options) : net_(net), options_(options) {
        work_.resize(net.pipes().size());
        for (std::size_t p = 0; p < net.pipes().size(); ++p) {
            const auto n = static_cast<Eigen::Index>(net.pipes()[p].cells);
            auto& w = work_[p];
            w.rho_l.resize(n);
            w.rho_r.resize(n);
            w.q_l.resize(n);
            w.q_r.resize(n);
            w.flux_rho.resize(n + 1);
            w.flux_q.resize(n + 1);
            w.d_rho.resize(n);
            w.d_q.resize(n);
        }
    }

    // Evaluates dU/dt into the work arrays; returns the mass outflow rate.
    double evaluate(double t, StepReport& report, bool keep_solutions) {
        const auto& law = net_.law();
        for (std::size_t p = 0; p < net_.pipes().size(); ++p) reconstruct(p);

        for (std::size_t p = 0; p < net_.pipes().size(); ++p) {
            const auto& pipe = net_.pipes()[p];
            auto& w = work_[p];
            const Eigen::Index n = static_cast<Eigen::Index>(pipe.cells);
            for (Eigen::Index j = 0; j + 1 < n; ++j) {
                lax_friedrichs({w.rho_r[j], w.q_r[j]}, {w.rho_l[j + 1], w.q_l[j + 1]}, w.flux_rho[j + 1],
                               w.flux_q[j + 1]);
            }
        }

        for (std::size_t node = 0; node < net_.nodes().size(); ++node) {
            const auto& ends = net_.incident(node);
            if (net_.nodes()[node].kind == NodeKind::periodic) {
                const std::size_t p = ends[0].pipe;
                auto& w = work_[p];
                const Eigen::Index n = w.d_rho.size();
                double fr = 0.0;
                double fq = 0.0;
                lax_friedrichs({w.rho_r[n - 1], w.q_r[n - 1]}, {w.rho_l[0], w.q_l[0]}, fr, fq);
                w.flux_rho[0] = w.flux_rho[n] = fr;
                w.flux_q[0] = w.flux_q[n] = fq;
                if (keep_solutions) report.node_solutions[node] = JunctionSolution{};
                continue;
            }
            adjacent_.clear();
            for (const auto& e : ends) adjacent_.push_back(net_.end_state(e));
            JunctionSolution sol = apply_boundary(net_, node, adjacent_, t);
            report.record(sol, law);
            for (std::size_t i = 0; i < ends.size(); ++i) {
                const GasState f = physical_flux(sol.traces[i], law);
                auto& w = work_[ends[i].pipe];
                const Eigen::Index k = ends[i].side == Side::incoming ? w.d_rho.size() : 0;
                w.flux_rho[k] = f.rho;
                w.flux_q[k] = f.q;
            }
            if (keep_solutions) report.node_solutions[node] = std::move(sol);
        }

        double outflow = 0.0;
        for (std::size_t p = 0; p < net_.pipes().size(); ++p) {
            const auto& pipe = net_.pipes()[p];
            auto& w = work_[p];
            const Eigen::Index n = static_cast<Eigen::Index>(pipe.cells);
            const double inv_dx = 1.0 / pipe.dx();
            w.d_rho = -(w.flux_rho.tail(n) - w.flux_rho.head(n)) * inv_dx;
            w.d_q = -(w.flux_q.tail(n) - w.flux_q.head(n)) * inv_dx;
            if (net_.source().friction) {
                for (Eigen::Index j = 0; j < n; ++j) {
                    w.d_q[j] += friction_source(pipe.rho[j], pipe.q[j], pipe.geometry, net_.source().viscosity);
                }
            }
            if (options_.forcing) add_forcing(p, t);
            outflow += pipe.geometry.area() * (w.flux_rho[n] - w.flux_rho[0]);
        }
        return outflow;
    }

    const PipeWork& work(std::size_t p) const { return work_[p]; }

private:
    void lax_friedrichs(const GasState& a, const GasState& b, double& fr, double& fq) const {
        const auto& law = net_.law();
        const GasState fa = physical_flux(a, law);
        const GasState fb = physical_flux(b, law);
        const double s = std::max(std::abs(a.q / a.rho) + law.sound_speed(a.rho),
                                  std::abs(b.q / b.rho) + law.sound_speed(b.rho));
        fr = 0.5 * (fa.rho + fb.rho) - 0.5 * s * (b.rho - a.rho);
        fq = 0.5 * (fa.q + fb.q) - 0.5 * s * (b.q - a.q);
    }

    void reconstruct(std::size_t p) {
        const auto& pipe = net_.pipes()[p];
        auto& w = work_[p];
        const Eigen::Index n = static_cast<Eigen::Index>(pipe.cells);
        const bool periodic = pipe.from == pipe.to;
        const double h = pipe.dx() / pipe.geometry.length;
        const double rho_bar = pipe.rho.mean();
        const double eps_rho = h * h * pipe.rho.square().mean();
        const double momentum_scale = rho_bar * net_.law().sound_speed(rho_bar);
        const double eps_q = h * h * (pipe.q.square().mean() + momentum_scale * momentum_scale);

        auto cell = [&](const Eigen::ArrayXd& u, Eigen::ArrayXd& left, Eigen::ArrayXd& right, double eps) {
            for (Eigen::Index j = 0; j < n; ++j) {
                const bool edge = j == 0 || j == n - 1;
                if (n < 3 || (edge && !periodic)) {
                    left[j] = right[j] = u[j];
                    continue;
                }
                const double um = u[j == 0 ? n - 1 : j - 1];
                const double up = u[j == n - 1 ? 0 : j + 1];
                const auto [l, r] = cweno3_faces(um, u[j], up, eps);
                left[j] = l;
                right[j] = r;
            }
        };
        cell(pipe.rho, w.rho_l, w.rho_r, eps_rho);
        cell(pipe.q, w.q_l, w.q_r, eps_q);
        if ((w.rho_l <= 0.0).any() || (w.rho_r <= 0.0).any()) {
            // Positivity fallback: first order in cells with a negative face density.
            for (Eigen::Index j = 0; j < n; ++j) {
                if (w.rho_l[j] <= 0.0 || w.rho_r[j] <= 0.0) {
                    w.rho_l[j] = w.rho_r[j] = pipe.rho[j];
                    w.q_l[j] = w.q_r[j] = pipe.q[j];
                }
            }
        }
    }

    void add_forcing(std::size_t p, double t) {
        // Three-point Gauss average over each cell.
        static constexpr double nodes[3] = {-0.3872983346207417, 0.0, 0.3872983346207417};
        static constexpr double weights[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
        const auto& pipe = net_.pipes()[p];
        auto& w = work_[p];
        const double h = pipe.dx();
        for (std::size_t j = 0; j < pipe.cells; ++j) {
            const double xc = pipe.x(j);
            double gr = 0.0;
            double gq = 0.0;
            for (int k = 0; k < 3; ++k) {
                const GasState g = options_.forcing(xc + nodes[k] * h, t, p);
                gr += weights[k] * g.rho;
                gq += weights[k] * g.q;
            }
            w.d_rho[static_cast<Eigen::Index>(j)] += gr;
            w.d_q[static_cast<Eigen::Index>(j)] += gq;
        }
    }

    GasNetwork& net_;
    const Cweno3Options& options_;
    std::vector<PipeWork> work_;
    std::vector<GasState> adjacent_;
};

}  // namespace

std::pair<double, double> cweno3_faces(double um, double u0, double up, double eps) {
    const double dl = u0 - um;
    const double dr = up - u0;
    const double d2 = up - 2.0 * u0 + um;
    const double s = up - um;

    const double is_l = dl * dl;
    const double is_r = dr * dr;
    const double is_c = 13.0 / 3.0 * d2 * d2 + 0.25 * s * s;
    double a_l = kWeightLeft / ((eps + is_l) * (eps + is_l));
    double a_r = kWeightRight / ((eps + is_r) * (eps + is_r));
    double a_c = kWeightCentre / ((eps + is_c) * (eps + is_c));
    if (std::isinf(a_l) || std::isinf(a_r) || std::isinf(a_c)) {
        // eps = 0 with a flat stencil: keep only the flat ones, at their linear weights
        a_l = std::isinf(a_l) ? kWeightLeft : 0.0;
        a_r = std::isinf(a_r) ? kWeightRight : 0.0;
        a_c = std::isinf(a_c) ? kWeightCentre : 0.0;
    }
    const double sum = a_l + a_r + a_c;
    const double w_l = a_l / sum;
    const double w_r = a_r / sum;
    const double w_c = a_c / sum;

    // Polynomials in xi = (x - x_j) / dx evaluated at xi = -1/2 and +1/2.
    // P_L = u0 + dl xi, P_R = u0 + dr xi, P_C = u0 - d2/12 + s/2 xi + d2 xi^2.
    const double pl_m = u0 - 0.5 * dl;
    const double pl_p = u0 + 0.5 * dl;
    const double pr_m = u0 - 0.5 * dr;
    const double pr_p = u0 + 0.5 * dr;
    const double pc_m = u0 + d2 / 6.0 - 0.25 * s;
    const double pc_p = u0 + d2 / 6.0 + 0.25 * s;
    return {w_l * pl_m + w_r * pr_m + w_c * pc_m, w_l * pl_p + w_r * pr_p + w_c * pc_p};
}

double cweno3_max_dt(const GasNetwork& net, double cfl) {
    double dt = std::numeric_limits<double>::infinity();
    for (const auto& p : net.pipes()) {
        const double s = max_speed(p, net.law());
        if (s > 0.0) dt = std::min(dt, cfl * p.dx() / s);
    }
    return dt;
}

StepReport cweno3_step(GasNetwork& net, double t, double dt, const Cweno3Options& options) {
    if (!net.finalized() || net.layout() != GridLayout::cell_averages) {
        throw Error(ErrorCategory::config, "CWENO3 needs a finalized network with cell averages");
    }
    if (!(dt > 0.0)) throw Error(ErrorCategory::domain, "time step must be positive");

    StepReport report;
    report.node_solutions.resize(net.nodes().size());
    for (const auto& p : net.pipes()) {
        report.courant = std::max(report.courant, dt * max_speed(p, net.law()) / p.dx());
    }
    if (report.courant > options.cfl * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "time step " << dt << " gives Courant number " << report.courant << " above the limit "
           << options.cfl;
        throw Error(ErrorCategory::cfl, os.str());
    }

    Cweno3Operator op(net, options);
    auto& pipes = net.pipes();
    std::vector<Eigen::ArrayXd> rho0(pipes.size());
    std::vector<Eigen::ArrayXd> q0(pipes.size());
    for (std::size_t p = 0; p < pipes.size(); ++p) {
        rho0[p] = pipes[p].rho;
        q0[p] = pipes[p].q;
    }

    // Shu-Osher form: U1 = U + dt L(U); U2 = 3/4 U + 1/4 (U1 + dt L(U1));
    // U = 1/3 U + 2/3 (U2 + dt L(U2)).
    struct Stage {
        double time;
        double keep;  // weight of U^n
        double outflow_weight;
    };
    const Stage stages[3] = {{t, 0.0, 1.0 / 6.0}, {t + dt, 0.75, 1.0 / 6.0}, {t + 0.5 * dt, 1.0 / 3.0, 2.0 / 3.0}};
    auto restore = [&] {
        for (std::size_t p = 0; p < pipes.size(); ++p) {
            pipes[p].rho = rho0[p];
            pipes[p].q = q0[p];
        }
    };
    try {
        for (int s = 0; s < 3; ++s) {
            const double outflow = op.evaluate(stages[s].time, report, s == 2);
            report.boundary_outflow += dt * stages[s].outflow_weight * outflow;
            const double a = stages[s].keep;
            for (std::size_t p = 0; p < pipes.size(); ++p) {
                const auto& w = op.work(p);
                pipes[p].rho = a * rho0[p] + (1.0 - a) * (pipes[p].rho + dt * w.d_rho);
                pipes[p].q = a * q0[p] + (1.0 - a) * (pipes[p].q + dt * w.d_q);
            }
        }
    } catch (...) {
        restore();
        throw;
    }

    for (const auto& p : pipes) {
        for (std::size_t j = 0; j < p.size(); ++j) {
            if (!is_subsonic(p.state(j), net.law())) {
                std::ostringstream os;
                os << "state in pipe '" << p.id << "' cell " << j << " is not sub-sonic after the step at t=" << t;
                restore();
                throw Error(ErrorCategory::inadmissible, os.str());
            }
        }
    }
    return report;
}

}  // namespace gaspower
