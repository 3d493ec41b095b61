#include "run_config.hpp"

#include "limcyc/warmstart.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace limcyc::cli {

namespace {

double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) {
            throw ConfigError("");
        }
        return v;
    } catch (const std::exception&) {
        throw ConfigError("cannot parse " + what + " '" + s + "' as a number");
    }
}

int parse_int(const std::string& s, const std::string& what) {
    const double v = parse_double(s, what);
    if (v != std::floor(v) || std::abs(v) > 1e9) {
        throw ConfigError(what + " must be an integer, got '" + s + "'");
    }
    return static_cast<int>(v);
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_double(item, what));
    }
    if (out.empty()) {
        throw ConfigError("empty " + what);
    }
    return out;
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::map<std::string, double> defaults_for(const std::string& model) {
    if (model == "linear") {
        return {{"p", 1.0}};
    }
    if (model == "pendulum") {
        const PendulumParams p;
        return {{"a", p.a}, {"b", p.b}, {"omega", p.omega}};
    }
    if (model == "circuit") {
        const CircuitParams c;
        return {{"R1", c.R1},   {"R2", c.R2},       {"R3", c.R3},      {"R4", c.R4},
                {"C1", c.C1},   {"C2", c.C2},       {"L", c.L},        {"i_s", c.i_s},
                {"eta", c.eta}, {"T_abs", c.T_abs}, {"A_m", c.A_m},    {"T_period", c.T_period}};
    }
    throw ConfigError("unknown model '" + model + "' (expected linear, pendulum or circuit)");
}

}  // namespace

std::pair<std::string, double> parse_assignment(const std::string& token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("expected name=value, got '" + token + "'");
    }
    const std::string name = trim(token.substr(0, eq));
    return {name, parse_double(trim(token.substr(eq + 1)), "value of " + name)};
}

void load_config_file(const std::string& path, RunConfig& cfg) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(path, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError("cannot read config file: " + std::string(e.what()));
    }
    // Flat keys first so that the model is known before its section is read.
    for (const auto& [key, node] : tree) {
        if (!node.empty()) {
            continue;
        }
        const std::string value = trim(node.data());
        if (key == "model") {
            cfg.model = value;
        } else if (key == "N") {
            cfg.n_nodes = parse_int(value, key);
        } else if (key == "subharmonic") {
            cfg.subharmonic = parse_int(value, key);
        } else if (key == "guess") {
            cfg.guess = value;
        } else if (key == "initial") {
            cfg.initial_state = parse_list(value, key);
        } else if (key == "tol") {
            cfg.tol = parse_double(value, key);
        } else if (key == "max_iterations") {
            cfg.max_iterations = parse_int(value, key);
        } else if (key == "sweep") {
            cfg.sweep = value;
        } else if (key == "component") {
            cfg.component = parse_int(value, key);
        } else if (key == "oversample") {
            cfg.oversample = parse_int(value, key);
        } else if (key == "cycles") {
            cfg.cycles = parse_int(value, key);
        } else if (key == "steps") {
            cfg.steps = parse_int(value, key);
        } else if (key == "points") {
            cfg.points = parse_int(value, key);
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    const auto section = tree.get_child_optional(cfg.model);
    if (section) {
        for (const auto& [key, node] : *section) {
            cfg.params[key] = parse_double(trim(node.data()), "parameter " + key);
        }
    }
}

std::vector<std::string> parameter_names(const std::string& model) {
    std::vector<std::string> names;
    for (const auto& [k, v] : defaults_for(model)) {
        names.push_back(k);
    }
    return names;
}

ModelInstance make_model(const std::string& name, const std::map<std::string, double>& overrides,
                         int subharmonic) {
    ModelInstance m;
    m.name = name;
    m.params = defaults_for(name);
    for (const auto& [k, v] : overrides) {
        if (!m.params.contains(k)) {
            throw ConfigError("model '" + name + "' has no parameter '" + k + "'");
        }
        m.params[k] = v;
    }
    if (subharmonic < 1) {
        throw ConfigError("subharmonic must be >= 1");
    }
    const auto& p = m.params;
    if (name == "linear") {
        m.system = linear_system(p.at("p"));
        m.default_initial = Vector::Zero(1);
        m.default_nodes = 15;
        m.default_cycles = 20;
    } else if (name == "pendulum") {
        m.system = pendulum_system({p.at("a"), p.at("b"), p.at("omega")}, subharmonic);
        m.default_initial = Vector(2);
        m.default_initial << std::numbers::pi + 0.1, 0.0;
        m.default_nodes = 101;
        m.default_cycles = 20;
    } else {
        CircuitParams c;
        c.R1 = p.at("R1");
        c.R2 = p.at("R2");
        c.R3 = p.at("R3");
        c.R4 = p.at("R4");
        c.C1 = p.at("C1");
        c.C2 = p.at("C2");
        c.L = p.at("L");
        c.i_s = p.at("i_s");
        c.eta = p.at("eta");
        c.T_abs = p.at("T_abs");
        c.A_m = p.at("A_m");
        c.T_period = p.at("T_period");
        m.system = circuit_system(c);
        m.circuit = c;
        m.default_initial = circuit_operating_point(c, c.A_m);
        m.default_nodes = 251;
        m.default_cycles = 150;
    }
    m.system.subharmonic = subharmonic;
    return m;
}

FlatState make_guess(const std::string& descriptor, const ModelInstance& model,
                     const CollocationProblem& problem, const RunConfig& cfg) {
    const int m = model.system.dim;
    const int n = problem.nodes();
    const auto colon = descriptor.find(':');
    const std::string kind = descriptor.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : descriptor.substr(colon + 1);

    if (kind == "constant") {
        const std::vector<double> v = parse_list(arg, "constant guess");
        Vector value = Vector::Zero(m);
        if (v.size() == 1) {
            value(0) = v[0];
        } else if (static_cast<int>(v.size()) == m) {
            value = Eigen::Map<const Vector>(v.data(), m);
        } else {
            throw ConfigError("constant guess needs 1 or " + std::to_string(m) + " values");
        }
        return constant_guess(value, n);
    }
    if (kind == "pi" || kind == "sin") {
        if (model.name != "pendulum") {
            throw ConfigError("guess '" + kind + "' applies to the pendulum model only");
        }
        double eps = 0.0;
        int harmonic = 1;
        if (kind == "sin") {
            const std::vector<double> v = parse_list(arg, "sin guess");
            eps = v[0];
            if (v.size() > 1) {
                harmonic = static_cast<int>(v[1]);
            }
            if (v.size() > 2 || harmonic < 1) {
                throw ConfigError("sin guess is sin:eps[,harmonic>=1]");
            }
        }
        return guess_near_pi(problem.grid(), eps, harmonic, model.system.omega,
                             model.system.subharmonic);
    }
    if (kind == "rk4") {
        TransientConfig tc;
        tc.cycles = parse_int(arg, "rk4 cycles");
        tc.steps_per_cycle = std::max(8 * n, 256);
        tc.record_trajectory = false;
        if (!cfg.initial_state.empty()) {
            if (static_cast<int>(cfg.initial_state.size()) != m) {
                throw ConfigError("initial state needs " + std::to_string(m) + " values");
            }
            tc.initial_state = Eigen::Map<const Vector>(cfg.initial_state.data(), m);
        } else {
            tc.initial_state = model.default_initial;
        }
        if (tc.cycles < 1) {
            throw ConfigError("rk4 guess needs at least one cycle");
        }
        return rk4_transient(model.system, problem.grid(), tc).samples;
    }
    if (kind == "file") {
        std::ifstream in(arg);
        if (!in) {
            throw ConfigError("cannot open guess file '" + arg + "'");
        }
        const FlatState stored = solution_state(read_table(in));
        if (stored.dim() != m) {
            throw ConfigError("guess file has " + std::to_string(stored.dim()) +
                              " components, model has " + std::to_string(m));
        }
        if (stored.nodes() == n) {
            return stored;
        }
        const NodeGrid from = NodeGrid::equispaced(stored.nodes());
        FlatState x(m, n);
        for (int k = 0; k < m; ++k) {
            const Vector data = stored.component(k);
            for (int j = 0; j < n; ++j) {
                x(k, j) = trig_interpolate(from, data, problem.grid()[j]);
            }
        }
        return x;
    }
    throw ConfigError("unknown guess '" + descriptor + "'");
}

int Table::column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    return it == columns.end() ? -1 : static_cast<int>(it - columns.begin());
}

Table read_table(std::istream& in) {
    Table t;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            const std::string body = trim(line.substr(1));
            const auto eq = body.find('=');
            if (eq != std::string::npos) {
                t.meta[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
            }
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(trim(cell));
        }
        if (t.columns.empty()) {
            t.columns = std::move(cells);
            continue;
        }
        if (cells.size() != t.columns.size()) {
            throw ConfigError("table row has " + std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(t.columns.size()));
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) {
            row.push_back(parse_double(c, "table cell"));
        }
        t.rows.push_back(std::move(row));
    }
    if (t.columns.empty()) {
        throw ConfigError("table has no header row");
    }
    return t;
}

std::string format_number(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << (v == 0.0 ? 0.0 : v);
    return os.str();
}

FlatState solution_state(const Table& table) {
    std::vector<int> cols;
    for (int k = 1;; ++k) {
        const int c = table.column("x" + std::to_string(k));
        if (c < 0) {
            break;
        }
        cols.push_back(c);
    }
    if (cols.empty()) {
        throw ConfigError("solution table has no x1 column");
    }
    const int n = static_cast<int>(table.rows.size());
    if (n < 3 || n % 2 == 0) {
        throw ConfigError("solution table needs an odd number (>= 3) of node rows, has " +
                          std::to_string(n));
    }
    FlatState x(static_cast<int>(cols.size()), n);
    for (int k = 0; k < x.dim(); ++k) {
        for (int j = 0; j < n; ++j) {
            x(k, j) = table.rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(cols[k])];
        }
    }
    return x;
}

}  // namespace limcyc::cli
