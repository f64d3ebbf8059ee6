#pragma once

#include "ddch/analysis.hpp"
#include "ddch/ddch_solver.hpp"
#include "ddch/field_ops.hpp"
#include "ddch/sharp_interface.hpp"

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ddch {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OutputConfig {
    std::string directory = "out";
    int snapshot_every = 50;
    int diagnostics_every = 1;
    bool operator==(const OutputConfig&) const = default;
};

// Settings for the sharp-interface run driven from the same config file.
struct SharpParams {
    int points = 256;
    double dt = 0.0; // 0 -> stability-limited
    int resample_every = 10;
    int frames = 100;
    bool operator==(const SharpParams&) const = default;
};

struct RunConfig {
    GridSpec grid;
    ModelConfig model;
    Shape initial_shape = EllipseShape{};
    OutputConfig output;
    SharpParams sharp;
    bool operator==(const RunConfig&) const = default;
};

struct SweepModel {
    ModelKind kind = ModelKind::NV;
    double p = 1.0;
    bool operator==(const SweepModel&) const = default;
};

struct SweepConfig {
    std::vector<double> epsilons; // sorted descending
    std::vector<SweepModel> models;
    double t_bar = 3e-4;
    GridSpec grid;
    Shape initial_shape = EllipseShape{};
    OutputConfig output;
    SharpParams sharp;
    bool operator==(const SweepConfig&) const = default;
};

using AnyConfig = std::variant<RunConfig, SweepConfig>;

// Parse + validate, defaults applied; unknown sections/keys rejected. The
// file is a sweep config iff it has a [sweep] section.
AnyConfig load_config(const std::string& path);
RunConfig load_run_config(const std::string& path);
SweepConfig load_sweep_config(const std::string& path);

void write_config(const RunConfig& config, const std::string& path);
void write_config(const SweepConfig& config, const std::string& path);

// Default grid: [-2,2]^2 with nx so that hx <= epsilon/10.
GridSpec default_grid(double min_epsilon);

// ---------------------------------------------------------------------------
// orchestration
// ---------------------------------------------------------------------------

// tanh profile of the signed distance to the shape.
ScalarField initial_field(const GridSpec& grid, const Shape& shape, double epsilon);

// Full DDCH run with diagnostics CSV, VTK snapshots and level-set CSVs.
// Solver failures flush partial output and rethrow.
void run_simulation(const RunConfig& config);

// Sharp-interface run of the config's initial shape; writes trajectory CSV.
void run_sharp(const RunConfig& config);

struct SweepCell {
    ModelKind kind = ModelKind::NV;
    double p = 0.0;
    double epsilon = 0.0;
    double ax_ddch = 0.0;
    double ax_si = 0.0;
    double delta = 0.0;
    std::string error; // non-empty when the cell failed
};

struct OrderRow {
    ModelKind kind = ModelKind::NV;
    double p = 0.0;
    double eps_coarse = 0.0;
    double eps_fine = 0.0;
    double order = 0.0;
};

struct SweepTable {
    std::vector<SweepCell> cells;
    std::vector<OrderRow> orders;
    double ax_si = 0.0;
};

// Runs every (model, epsilon) cell to t_bar plus one shared SI reference;
// cells run in parallel across `workers`. Per-cell failures are recorded and
// the sweep continues.
SweepTable run_convergence_sweep(const SweepConfig& config, int workers = 1);

void write_sweep_outputs(const SweepTable& table, const std::string& directory);

// Output helpers (CSV schema headers are versioned and pinned by tests).
extern const char* kDiagnosticsHeader;
extern const char* kLevelsetHeader;
extern const char* kSweepHeader;
extern const char* kOrdersHeader;
extern const char* kSharpHeader;

std::string format_g17(double v);
void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRecord>& records);
void write_levelset_csv(const std::string& path, const Curve& curve);
void write_vtk_snapshot(const std::string& path, const ScalarField& u, const ScalarField& w);

// Resolves the effective output directory: explicit override > config value;
// relative paths are rooted at DDCH_OUTPUT_ROOT when that is set.
std::string resolve_output_dir(const std::string& configured, const std::string& override_dir);

} // namespace ddch
