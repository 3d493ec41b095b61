#include "commands.hpp"

#include "limcyc/continuation.hpp"
#include "limcyc/errors.hpp"
#include "limcyc/warmstart.hpp"

#include <cmath>
#include <functional>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace limcyc::cli {

namespace {

constexpr double kPi = std::numbers::pi;

int guarded(std::ostream& log, const std::function<int()>& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const std::invalid_argument& e) {
        // InvalidArgument, ShapeError and DegenerateGridError derive from this.
        log << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kNotConverged;
    }
}

int nodes_for(const RunConfig& cfg, const ModelInstance& model) {
    return cfg.n_nodes > 0 ? cfg.n_nodes : model.default_nodes;
}

std::string default_guess(const ModelInstance& model) {
    if (model.name == "pendulum") {
        return "pi";
    }
    if (model.name == "circuit") {
        return "rk4:" + std::to_string(model.default_cycles);
    }
    return "constant:0";
}

NewtonConfig newton_config(const RunConfig& cfg) {
    NewtonConfig nc;
    nc.tol_residual = cfg.tol;
    nc.max_iterations = cfg.max_iterations;
    return nc;
}

void write_model_header(std::ostream& out, const ModelInstance& model, int n_nodes) {
    out << "# model=" << model.name << '\n';
    out << "# N=" << n_nodes << '\n';
    out << "# omega=" << format_number(model.system.omega) << '\n';
    out << "# subharmonic=" << model.system.subharmonic << '\n';
    for (const auto& [k, v] : model.params) {
        out << "# param." << k << '=' << format_number(v) << '\n';
    }
}

struct SweepSpec {
    std::string name;
    double start = 0.0;
    double end = 0.0;
    double step = 0.0;
};

SweepSpec parse_sweep(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("sweep must be name=start:end:step, got '" + spec + "'");
    }
    SweepSpec s;
    s.name = spec.substr(0, eq);
    std::vector<double> parts;
    std::stringstream ss(spec.substr(eq + 1));
    std::string item;
    while (std::getline(ss, item, ':')) {
        parts.push_back(parse_assignment("v=" + item).second);
    }
    if (parts.size() != 3) {
        throw ConfigError("sweep must be name=start:end:step, got '" + spec + "'");
    }
    s.start = parts[0];
    s.end = parts[1];
    s.step = parts[2];
    if (s.start == s.end) {
        throw ConfigError("empty sweep range");
    }
    if (!(s.step > 0.0)) {
        throw ConfigError("sweep step must be positive");
    }
    return s;
}

}  // namespace

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
    return guarded(log, [&] {
        const ModelInstance model = make_model(cfg.model, cfg.params, cfg.subharmonic);
        const int n = nodes_for(cfg, model);
        const CollocationProblem problem(model.system, n);
        const std::string guess = cfg.guess.empty() ? default_guess(model) : cfg.guess;
        const FlatState x0 = make_guess(guess, model, problem, cfg);
        const SolveResult result = newton_solve(problem, x0, newton_config(cfg));

        out << "# limcyc solution\n";
        write_model_header(out, model, n);
        out << "# guess=" << guess << '\n';
        out << "# residual_norm=" << format_number(result.residual_norm) << '\n';
        out << "# tol_residual=" << format_number(result.tol_residual) << '\n';
        out << "# iterations=" << result.iterations << '\n';
        out << "# converged=" << (result.converged ? "true" : "false") << '\n';
        if (!result.converged) {
            out << "# WARNING: Newton did not converge; best iterate written\n";
        }

        const int m = problem.dim();
        out << "t,tau";
        for (int k = 1; k <= m; ++k) {
            out << ",x" << k;
        }
        if (model.circuit) {
            out << ",i_d,V0";
        }
        out << '\n';
        const FlatState dx = time_derivative(problem, result.x);
        for (int j = 0; j < n; ++j) {
            out << format_number(problem.grid()[j]) << ',' << format_number(problem.original_time(j));
            for (int k = 0; k < m; ++k) {
                out << ',' << format_number(result.x(k, j));
            }
            if (model.circuit) {
                const CircuitOutputs o =
                    circuit_outputs(result.x.at_node(j), dx.at_node(j), *model.circuit);
                out << ',' << format_number(o.i_d) << ',' << format_number(o.v_0);
            }
            out << '\n';
        }

        log << "residual_norm=" << format_number(result.residual_norm)
            << " iterations=" << result.iterations
            << " converged=" << (result.converged ? "true" : "false") << '\n';
        return result.converged ? kConverged : kNotConverged;
    });
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
    return guarded(log, [&]() -> int {
        const SweepSpec spec = parse_sweep(cfg.sweep);
        std::map<std::string, double> params = cfg.params;
        params[spec.name] = spec.start;
        const ModelInstance seed_model = make_model(cfg.model, params, cfg.subharmonic);
        if (!seed_model.params.contains(spec.name)) {
            throw ConfigError("model has no parameter '" + spec.name + "'");
        }
        if (cfg.component < 1 || cfg.component > seed_model.system.dim) {
            throw ConfigError("component must lie in 1.." + std::to_string(seed_model.system.dim));
        }
        const int n = nodes_for(cfg, seed_model);
        const CollocationProblem seed_problem(seed_model.system, n);
        const std::string guess = cfg.guess.empty() ? default_guess(seed_model) : cfg.guess;
        const FlatState x0 = make_guess(guess, seed_model, seed_problem, cfg);

        const ProblemFamily family = [&](double value) {
            std::map<std::string, double> p = cfg.params;
            p[spec.name] = value;
            return CollocationProblem(make_model(cfg.model, p, cfg.subharmonic).system, n);
        };
        SweepConfig sc;
        sc.parameter_name = spec.name;
        sc.start = spec.start;
        sc.end = spec.end;
        sc.step = spec.step;
        sc.adaptive = cfg.adaptive;

        Branch branch;
        try {
            branch = sweep(family, x0, sc, newton_config(cfg), guess);
        } catch (const BranchSeedError& e) {
            log << "error: " << e.what() << '\n';
            return kNotConverged;
        }

        out << "# limcyc sweep\n";
        write_model_header(out, seed_model, n);
        out << "# sweep=" << cfg.sweep << '\n';
        out << "# guess=" << guess << '\n';
        out << "# status=" << (branch.status == BranchStatus::Completed ? "completed" : "truncated")
            << '\n';
        if (branch.failed_parameter) {
            out << "# failed_at=" << format_number(*branch.failed_parameter) << '\n';
        }
        out << "p,component,max,min,iterations,converged\n";
        for (const BranchPoint& pt : branch.points) {
            const Extrema e = extract_extrema(seed_problem.grid(), pt.result.x, cfg.component - 1,
                                              cfg.oversample);
            out << format_number(pt.parameter) << ',' << cfg.component << ','
                << format_number(e.max_value) << ',' << format_number(e.min_value) << ','
                << pt.result.iterations << ',' << (pt.result.converged ? 1 : 0) << '\n';
        }
        log << "points=" << branch.points.size() << " status="
            << (branch.status == BranchStatus::Completed ? "completed" : "truncated") << '\n';
        return branch.points.empty() ? kNotConverged : kConverged;
    });
}

int cmd_interp(std::istream& solution, const RunConfig& cfg, std::ostream& out, std::ostream& log) {
    return guarded(log, [&] {
        if (cfg.points < 1) {
            throw ConfigError("points must be >= 1");
        }
        const Table table = read_table(solution);
        const FlatState state = solution_state(table);
        const NodeGrid grid = NodeGrid::equispaced(state.nodes());
        const double s = table.meta.contains("subharmonic") ? std::stod(table.meta.at("subharmonic")) : 1.0;
        const double omega = table.meta.contains("omega") ? std::stod(table.meta.at("omega")) : 1.0;

        std::vector<int> cols;
        for (int c = 0; c < static_cast<int>(table.columns.size()); ++c) {
            if (table.columns[static_cast<std::size_t>(c)] != "t" &&
                table.columns[static_cast<std::size_t>(c)] != "tau") {
                cols.push_back(c);
            }
        }
        std::vector<Vector> data;
        for (int c : cols) {
            Vector v(state.nodes());
            for (int j = 0; j < state.nodes(); ++j) {
                v(j) = table.rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)];
            }
            data.push_back(std::move(v));
        }

        out << "# limcyc interpolation\n";
        for (const auto& [k, v] : table.meta) {
            out << "# " << k << '=' << v << '\n';
        }
        out << "# points=" << cfg.points << '\n';
        out << "t,tau";
        for (int c : cols) {
            out << ',' << table.columns[static_cast<std::size_t>(c)];
        }
        out << '\n';
        for (int i = 1; i <= cfg.points; ++i) {
            const double t = -kPi + 2.0 * kPi * static_cast<double>(i) / static_cast<double>(cfg.points);
            out << format_number(t) << ',' << format_number(s * t / omega);
            for (const Vector& v : data) {
                out << ',' << format_number(trig_interpolate(grid, v, t));
            }
            out << '\n';
        }
        return kConverged;
    });
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
    return guarded(log, [&] {
        const ModelInstance model = make_model(cfg.model, cfg.params, cfg.subharmonic);
        const int m = model.system.dim;
        TransientConfig tc;
        tc.cycles = cfg.cycles > 0 ? cfg.cycles : model.default_cycles;
        tc.steps_per_cycle = cfg.steps;
        if (!cfg.initial_state.empty()) {
            if (static_cast<int>(cfg.initial_state.size()) != m) {
                throw ConfigError("initial state needs " + std::to_string(m) + " values");
            }
            tc.initial_state = Eigen::Map<const Vector>(cfg.initial_state.data(), m);
        } else {
            tc.initial_state = model.default_initial;
        }
        if (cfg.stride < 1) {
            throw ConfigError("stride must be >= 1");
        }
        const NodeGrid grid = NodeGrid::equispaced(nodes_for(cfg, model));
        const TransientResult tr = rk4_transient(model.system, grid, tc);

        out << "# limcyc transient\n";
        write_model_header(out, model, grid.size());
        out << "# cycles=" << tc.cycles << '\n';
        out << "# steps_per_cycle=" << tc.steps_per_cycle << '\n';
        out << "tau,phase";
        for (int k = 1; k <= m; ++k) {
            out << ",x" << k;
        }
        if (model.circuit) {
            out << ",i_d,V0";
        }
        out << '\n';
        for (std::size_t i = 0; i < tr.times.size(); i += static_cast<std::size_t>(cfg.stride)) {
            const double tau = tr.times[i];
            const double phase = wrap_phase(model.system.omega * tau);
            const Vector x = tr.states.col(static_cast<Eigen::Index>(i));
            out << format_number(tau) << ',' << format_number(phase);
            for (int k = 0; k < m; ++k) {
                out << ',' << format_number(x(k));
            }
            if (model.circuit) {
                const CircuitOutputs o = circuit_outputs(x, model.system.rhs(x, phase), *model.circuit);
                out << ',' << format_number(o.i_d) << ',' << format_number(o.v_0);
            }
            out << '\n';
        }
        log << "steps=" << tr.times.size() - 1 << '\n';
        return kConverged;
    });
}

int cmd_matrix(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
    return guarded(log, [&] {
        const bool general = cfg.general_matrix || !cfg.nodes.empty();
        DiffMatrix d = [&] {
            if (!cfg.nodes.empty()) {
                return diff_matrix_general(NodeGrid::from_nodes(cfg.nodes));
            }
            if (cfg.n_nodes <= 0) {
                throw ConfigError("matrix needs --N or --nodes");
            }
            return general ? diff_matrix_general(NodeGrid::equispaced(cfg.n_nodes))
                           : diff_matrix_equispaced(cfg.n_nodes);
        }();
        const int n = d.order();
        out << "# limcyc differentiation matrix\n";
        out << "# kind=" << (general ? "general" : "equispaced") << '\n';
        out << "# N=" << n << '\n';
        out << 't';
        for (int k = 1; k <= n; ++k) {
            out << ",D" << k;
        }
        out << '\n';
        for (int j = 0; j < n; ++j) {
            out << format_number(d.grid()[j]);
            for (int k = 0; k < n; ++k) {
                out << ',' << format_number(d(j, k));
            }
            out << '\n';
        }
        return kConverged;
    });
}

}  // namespace limcyc::cli
