#pragma once

// Run configuration, model registry and plot-ready file formats for the
// command-line front end.

#include "limcyc/models.hpp"
#include "limcyc/solver.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace limcyc::cli {

/// Invalid user input (unknown model/parameter, malformed descriptor). Exit code 2.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    std::string model = "linear";
    int n_nodes = 0;  // 0: model default
    std::map<std::string, double> params;
    int subharmonic = 1;
    std::string guess;  // empty: model default
    std::vector<double> initial_state;
    std::optional<double> tol;
    int max_iterations = 50;

    std::string sweep;  // "name=start:end:step"
    int component = 1;  // 1-based
    int oversample = 8;
    bool adaptive = true;

    int cycles = 0;  // 0: model default
    int steps = 256;
    int stride = 1;

    int points = 512;
    bool general_matrix = false;
    std::vector<double> nodes;
};

/// Reads an INI-style file: flat key=value pairs plus one section per model
/// holding its parameters. Only the section of the selected model is applied.
void load_config_file(const std::string& path, RunConfig& cfg);

/// "name=value" -> (name, value).
std::pair<std::string, double> parse_assignment(const std::string& token);

struct ModelInstance {
    std::string name;
    PeriodicSystem system;
    std::map<std::string, double> params;  // every parameter, defaults filled in
    std::optional<CircuitParams> circuit;
    Vector default_initial;
    int default_nodes = 0;
    int default_cycles = 0;
};

/// Throws ConfigError for an unknown model or parameter name.
[[nodiscard]] ModelInstance make_model(const std::string& name,
                                       const std::map<std::string, double>& overrides,
                                       int subharmonic);

[[nodiscard]] std::vector<std::string> parameter_names(const std::string& model);

/// Guess descriptors: constant:v[,v...] | pi | sin:eps[,harmonic] | rk4:cycles | file:path.
[[nodiscard]] FlatState make_guess(const std::string& descriptor, const ModelInstance& model,
                                   const CollocationProblem& problem, const RunConfig& cfg);

/// Comment-headed CSV as written by the solve command.
struct Table {
    std::map<std::string, std::string> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    [[nodiscard]] int column(const std::string& name) const;  // -1 if absent
};

[[nodiscard]] Table read_table(std::istream& in);

/// 17 significant digits.
std::string format_number(double v);

/// State of a stored solution (columns x1..xm) on its own equispaced grid.
[[nodiscard]] FlatState solution_state(const Table& table);

}  // namespace limcyc::cli
