// limcyc: periodic steady states of driven systems by trigonometric collocation.

#include "commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>

using namespace limcyc::cli;

namespace {

struct Flags {
    std::string config;
    std::string model;
    int n_nodes = 0;
    std::vector<std::string> params;
    int subharmonic = 1;
    std::string guess;
    std::vector<double> initial;
    double tol = 0.0;
    int max_iterations = 50;
    std::string out;

    std::string sweep;
    int component = 1;
    int oversample = 8;
    bool fixed_step = false;

    int cycles = 0;
    int steps = 256;
    int stride = 1;

    std::string solution;
    int points = 512;
    bool general = false;
    std::vector<double> nodes;
};

struct Options {
    CLI::Option* model = nullptr;
    CLI::Option* n_nodes = nullptr;
    CLI::Option* subharmonic = nullptr;
    CLI::Option* guess = nullptr;
    CLI::Option* initial = nullptr;
    CLI::Option* tol = nullptr;
    CLI::Option* max_iterations = nullptr;
    CLI::Option* sweep = nullptr;
    CLI::Option* component = nullptr;
    CLI::Option* oversample = nullptr;
    CLI::Option* cycles = nullptr;
    CLI::Option* steps = nullptr;
    CLI::Option* points = nullptr;
};

void add_model_options(CLI::App* cmd, Flags& f, Options& o) {
    cmd->add_option("--config", f.config, "INI config file; flags override its values");
    o.model = cmd->add_option("--model", f.model, "linear | pendulum | circuit");
    o.n_nodes = cmd->add_option("--N", f.n_nodes, "odd number of collocation nodes");
    cmd->add_option("--param", f.params, "parameter overrides name=value ...");
    o.subharmonic = cmd->add_option("--subharmonic", f.subharmonic, "response period / forcing period");
    cmd->add_option("--out", f.out, "output file (default: stdout)");
}

void add_solver_options(CLI::App* cmd, Flags& f, Options& o) {
    o.guess = cmd->add_option("--guess", f.guess,
                              "constant:v[,..] | pi | sin:eps[,h] | rk4:cycles | file:path");
    o.initial = cmd->add_option("--initial", f.initial, "initial state for rk4 guesses")->delimiter(',');
    o.tol = cmd->add_option("--tol", f.tol, "residual infinity-norm tolerance");
    o.max_iterations = cmd->add_option("--max-iter", f.max_iterations, "Newton iteration limit");
}

RunConfig build_config(const Flags& f, const Options& o) {
    RunConfig cfg;
    if (!f.config.empty()) {
        if (o.model && o.model->count() > 0) {
            cfg.model = f.model;  // selects which model section the file contributes
        }
        load_config_file(f.config, cfg);
    }
    auto given = [](const CLI::Option* opt) { return opt != nullptr && opt->count() > 0; };
    if (given(o.model)) cfg.model = f.model;
    if (given(o.n_nodes)) cfg.n_nodes = f.n_nodes;
    if (given(o.subharmonic)) cfg.subharmonic = f.subharmonic;
    if (given(o.guess)) cfg.guess = f.guess;
    if (given(o.initial)) cfg.initial_state = f.initial;
    if (given(o.tol)) cfg.tol = f.tol;
    if (given(o.max_iterations)) cfg.max_iterations = f.max_iterations;
    if (given(o.sweep)) cfg.sweep = f.sweep;
    if (given(o.component)) cfg.component = f.component;
    if (given(o.oversample)) cfg.oversample = f.oversample;
    if (given(o.cycles)) cfg.cycles = f.cycles;
    if (given(o.steps)) cfg.steps = f.steps;
    if (given(o.points)) cfg.points = f.points;
    for (const auto& token : f.params) {
        const auto [name, value] = parse_assignment(token);
        cfg.params[name] = value;
    }
    cfg.adaptive = !f.fixed_step;
    cfg.stride = f.stride;
    cfg.general_matrix = f.general;
    cfg.nodes = f.nodes;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Periodic steady states of driven dynamical systems by trigonometric collocation"};
    app.require_subcommand(1);
    Flags f;
    Options solve_o;
    Options sweep_o;
    Options interp_o;
    Options simulate_o;
    Options matrix_o;

    auto* solve = app.add_subcommand("solve", "solve for the limit cycle");
    add_model_options(solve, f, solve_o);
    add_solver_options(solve, f, solve_o);

    auto* sweep = app.add_subcommand("sweep", "continuation over one parameter");
    add_model_options(sweep, f, sweep_o);
    add_solver_options(sweep, f, sweep_o);
    sweep_o.sweep = sweep->add_option("--sweep", f.sweep, "name=start:end:step");
    sweep_o.component = sweep->add_option("--component", f.component, "1-based component for extrema");
    sweep_o.oversample = sweep->add_option("--oversample", f.oversample, "interpolant oversampling factor");
    sweep->add_flag("--fixed-step", f.fixed_step, "disable step halving on failure");

    auto* interp = app.add_subcommand("interp", "dense resampling of a solution file");
    interp->add_option("--solution", f.solution, "solution CSV written by solve")->required();
    interp_o.points = interp->add_option("--points", f.points, "number of dense phases");
    interp->add_option("--out", f.out, "output file (default: stdout)");

    auto* simulate = app.add_subcommand("simulate", "RK4 transient");
    add_model_options(simulate, f, simulate_o);
    simulate_o.initial = simulate->add_option("--initial", f.initial, "initial state")->delimiter(',');
    simulate_o.cycles = simulate->add_option("--cycles", f.cycles, "forcing cycles (times subharmonic)");
    simulate_o.steps = simulate->add_option("--steps", f.steps, "RK4 steps per cycle");
    simulate->add_option("--stride", f.stride, "write every k-th step");

    auto* matrix = app.add_subcommand("matrix", "dump the differentiation matrix");
    matrix_o.n_nodes = matrix->add_option("--N", f.n_nodes, "odd number of nodes");
    matrix->add_flag("--general", f.general, "use the general-node formula");
    matrix->add_option("--nodes", f.nodes, "explicit nodes in (-pi, pi]")->delimiter(',');
    matrix->add_option("--out", f.out, "output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInvalidInput;
    }

    const Options& o = solve->parsed()      ? solve_o
                       : sweep->parsed()    ? sweep_o
                       : simulate->parsed() ? simulate_o
                       : matrix->parsed()   ? matrix_o
                                            : interp_o;
    RunConfig cfg;
    try {
        cfg = build_config(f, o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalidInput;
    }

    std::unique_ptr<std::ofstream> file;
    if (!f.out.empty()) {
        file = std::make_unique<std::ofstream>(f.out);
        if (!*file) {
            std::cerr << "error: cannot open output file " << f.out << '\n';
            return kInvalidInput;
        }
    }
    std::ostream& out = file ? static_cast<std::ostream&>(*file) : std::cout;

    if (solve->parsed()) {
        return cmd_solve(cfg, out, std::cerr);
    }
    if (sweep->parsed()) {
        return cmd_sweep(cfg, out, std::cerr);
    }
    if (simulate->parsed()) {
        return cmd_simulate(cfg, out, std::cerr);
    }
    if (matrix->parsed()) {
        return cmd_matrix(cfg, out, std::cerr);
    }
    std::ifstream in(f.solution);
    if (!in) {
        std::cerr << "error: cannot open solution file " << f.solution << '\n';
        return kInvalidInput;
    }
    return cmd_interp(in, cfg, out, std::cerr);
}
