#include "ddch/analysis.hpp"
#include "ddch/config_io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

namespace ddch {

const char* kDiagnosticsHeader = "# ddch diagnostics schema v1\nt,mass,energy,dissipation,u_min,u_max,a_x\n";
const char* kLevelsetHeader = "# ddch levelset schema v1\nx,y\n";
const char* kSweepHeader = "# ddch sweep schema v1\nmodel,p,epsilon,ax_ddch,ax_si,delta,status\n";
const char* kOrdersHeader = "# ddch sweep-orders schema v1\nmodel,p,eps_coarse,eps_fine,order\n";
const char* kSharpHeader = "# ddch sharp-trajectory schema v1\nt,i,x,y\n";

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

ScalarField initial_field(const GridSpec& grid, const Shape& shape, double epsilon) {
    return make_field(grid, [&](double x, double y) {
        return tanh_profile(signed_distance(shape, x, y), epsilon);
    });
}

namespace {

void write_records(std::ofstream& out, const std::vector<DiagnosticsRecord>& records,
                   size_t& written) {
    for (; written < records.size(); ++written) {
        const DiagnosticsRecord& r = records[written];
        out << format_g17(r.t) << ',' << format_g17(r.mass) << ',' << format_g17(r.energy) << ','
            << format_g17(r.dissipation) << ',' << format_g17(r.u_min) << ','
            << format_g17(r.u_max) << ',' << (r.a_x ? format_g17(*r.a_x) : std::string()) << '\n';
    }
    out.flush();
}

std::string snapshot_name(const std::string& dir, const char* stem, int step, const char* ext) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s_%06d.%s", stem, step, ext);
    return dir + "/" + buf;
}

} // namespace

void write_diagnostics_csv(const std::string& path,
                           const std::vector<DiagnosticsRecord>& records) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path);
    out << kDiagnosticsHeader;
    size_t written = 0;
    write_records(out, records, written);
}

void write_levelset_csv(const std::string& path, const Curve& curve) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path);
    out << kLevelsetHeader;
    for (const Vec2& p : curve.points)
        out << format_g17(p.x) << ',' << format_g17(p.y) << '\n';
}

void write_vtk_snapshot(const std::string& path, const ScalarField& u, const ScalarField& w) {
    const GridSpec& g = u.grid;
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path);
    out << "# vtk DataFile Version 3.0\n";
    out << "ddch snapshot\n";
    out << "ASCII\n";
    out << "DATASET STRUCTURED_POINTS\n";
    out << "DIMENSIONS " << g.nx << " " << g.ny << " 1\n";
    out << "ORIGIN " << format_g17(g.cell_x(0)) << " " << format_g17(g.cell_y(0)) << " 0\n";
    out << "SPACING " << format_g17(g.hx()) << " " << format_g17(g.hy()) << " 1\n";
    out << "POINT_DATA " << g.cells() << "\n";
    out << "SCALARS u double 1\nLOOKUP_TABLE default\n";
    for (double v : u.values)
        out << format_g17(v) << '\n';
    out << "SCALARS w double 1\nLOOKUP_TABLE default\n";
    for (double v : w.values)
        out << format_g17(v) << '\n';
}

std::string resolve_output_dir(const std::string& configured, const std::string& override_dir) {
    std::string dir = override_dir.empty() ? configured : override_dir;
    if (!dir.empty() && dir.front() != '/') {
        if (const char* root = std::getenv("DDCH_OUTPUT_ROOT"))
            dir = std::string(root) + "/" + dir;
    }
    return dir;
}

void run_simulation(const RunConfig& config) {
    const std::string dir = config.output.directory;
    std::filesystem::create_directories(dir);

    const ScalarField u0 = initial_field(config.grid, config.initial_shape, config.model.epsilon);
    const ScalarField w0(config.grid);

    std::ofstream diag(dir + "/diagnostics.csv");
    if (!diag)
        throw std::runtime_error("cannot open " + dir + "/diagnostics.csv");
    diag << kDiagnosticsHeader;

    std::vector<DiagnosticsRecord> records;
    size_t written = 0;
    records.push_back(diagnostics(0.0, u0, w0, config.model, true));
    write_records(diag, records, written);

    write_vtk_snapshot(snapshot_name(dir, "snapshot", 0, "vtk"), u0, w0);
    write_levelset_csv(snapshot_name(dir, "levelset", 0, "csv"), extract_level_set(u0));

    const int diag_every = config.output.diagnostics_every;
    const int snap_every = config.output.snapshot_every;

    try {
        run(u0, config.model, [&](int step_index, double t, const StepResult& r) {
            const int n = step_index + 1;
            if (n % diag_every == 0) {
                records.push_back(diagnostics(t, r.u_next, r.w_next, config.model, true));
                write_records(diag, records, written);
            }
            if (n % snap_every == 0) {
                write_vtk_snapshot(snapshot_name(dir, "snapshot", n, "vtk"), r.u_next, r.w_next);
                write_levelset_csv(snapshot_name(dir, "levelset", n, "csv"),
                                   extract_level_set(r.u_next));
            }
        });
    } catch (...) {
        write_records(diag, records, written); // flush what we have
        throw;
    }
}

void run_sharp(const RunConfig& config) {
    const std::string dir = config.output.directory;
    std::filesystem::create_directories(dir);

    Curve curve = sample_shape(config.initial_shape, config.sharp.points);
    std::ofstream out(dir + "/si_trajectory.csv");
    if (!out)
        throw std::runtime_error("cannot open " + dir + "/si_trajectory.csv");
    out << kSharpHeader;

    auto dump = [&out](double t, const Curve& c) {
        for (int i = 0; i < c.size(); ++i)
            out << format_g17(t) << ',' << i << ',' << format_g17(c.points[i].x) << ','
                << format_g17(c.points[i].y) << '\n';
        out.flush();
    };
    dump(0.0, curve);

    const double t_end = config.model.t_end;
    const double frame_dt = t_end / config.sharp.frames;
    double next_frame = frame_dt;

    SiRunParams params;
    params.t_end = t_end;
    params.dt = config.sharp.dt;
    params.resample_every = config.sharp.resample_every;
    params.observer = [&](double t, const Curve& c) {
        if (t >= next_frame) {
            dump(t, c);
            while (next_frame <= t)
                next_frame += frame_dt;
        }
        return false;
    };
    SiRunResult result = si_run(curve, params);
    dump(result.t, result.curve);
}

SweepTable run_convergence_sweep(const SweepConfig& config, int workers) {
    SweepTable table;

    // Shared sharp-interface reference: the initial 0.5 level set is the
    // analytic shape itself, independent of model and epsilon.
    {
        Curve c0 = sample_shape(config.initial_shape, config.sharp.points);
        SiRunParams params;
        params.t_end = config.t_bar;
        params.dt = config.sharp.dt;
        params.resample_every = config.sharp.resample_every;
        SiRunResult si = si_run(c0, params);
        table.ax_si = measure_ax(si.curve);
    }

    for (const SweepModel& m : config.models)
        for (double eps : config.epsilons) {
            SweepCell cell;
            cell.kind = m.kind;
            cell.p = m.p;
            cell.epsilon = eps;
            cell.ax_si = table.ax_si;
            table.cells.push_back(cell);
        }

    std::atomic<size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const size_t i = next.fetch_add(1);
            if (i >= table.cells.size())
                return;
            SweepCell& cell = table.cells[i];
            try {
                ModelConfig model = ModelConfig::make(cell.kind, cell.epsilon, cell.p);
                model.t_end = config.t_bar;
                const ScalarField u0 =
                    initial_field(config.grid, config.initial_shape, cell.epsilon);
                RunResult result = run(u0, model);
                cell.ax_ddch = measure_ax(extract_level_set(result.u));
                cell.delta = delta_metric(cell.ax_ddch, cell.ax_si);
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
        }
    };

    const int nthreads = std::max(1, workers);
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < nthreads; ++i)
            pool.emplace_back(worker);
        for (std::thread& t : pool)
            t.join();
    }

    // log2 convergence order between consecutive epsilon pairs, per model.
    for (const SweepModel& m : config.models) {
        std::vector<const SweepCell*> row;
        for (const SweepCell& c : table.cells)
            if (c.kind == m.kind && c.p == m.p && c.error.empty())
                row.push_back(&c);
        for (size_t i = 0; i + 1 < row.size(); ++i) {
            if (row[i]->delta <= 0.0 || row[i + 1]->delta <= 0.0)
                continue;
            OrderRow o;
            o.kind = m.kind;
            o.p = m.p;
            o.eps_coarse = row[i]->epsilon;
            o.eps_fine = row[i + 1]->epsilon;
            o.order = std::log(row[i]->delta / row[i + 1]->delta) /
                      std::log(row[i]->epsilon / row[i + 1]->epsilon);
            table.orders.push_back(o);
        }
    }
    return table;
}

void write_sweep_outputs(const SweepTable& table, const std::string& directory) {
    std::filesystem::create_directories(directory);
    {
        std::ofstream out(directory + "/sweep_results.csv");
        if (!out)
            throw std::runtime_error("cannot open " + directory + "/sweep_results.csv");
        out << kSweepHeader;
        for (const SweepCell& c : table.cells) {
            out << to_string(c.kind) << ',' << format_g17(c.p) << ',' << format_g17(c.epsilon)
                << ',';
            if (c.error.empty()) {
                out << format_g17(c.ax_ddch) << ',' << format_g17(c.ax_si) << ','
                    << format_g17(c.delta) << ",ok\n";
            } else {
                std::string msg = "failed: " + c.error;
                std::replace(msg.begin(), msg.end(), ',', ';');
                out << ",,," << msg << '\n';
            }
        }
    }
    {
        std::ofstream out(directory + "/convergence_orders.csv");
        if (!out)
            throw std::runtime_error("cannot open " + directory + "/convergence_orders.csv");
        out << kOrdersHeader;
        for (const OrderRow& o : table.orders)
            out << to_string(o.kind) << ',' << format_g17(o.p) << ',' << format_g17(o.eps_coarse)
                << ',' << format_g17(o.eps_fine) << ',' << format_g17(o.order) << '\n';
    }
}

} // namespace ddch
