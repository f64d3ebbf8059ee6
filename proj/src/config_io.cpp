#include "ddch/config_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace ddch {

namespace {

struct Entry {
    std::string value;
    int line = 0;
    int col = 0;
    mutable bool consumed = false;
};

struct RawConfig {
    std::string path;
    std::map<std::string, std::map<std::string, Entry>> sections;

    bool has_section(const std::string& s) const { return sections.count(s) > 0; }

    const Entry* find(const std::string& sec, const std::string& key) const {
        auto s = sections.find(sec);
        if (s == sections.end())
            return nullptr;
        auto k = s->second.find(key);
        if (k == s->second.end())
            return nullptr;
        k->second.consumed = true;
        return &k->second;
    }

    [[noreturn]] void fail(const std::string& sec, const std::string& key,
                           const std::string& msg) const {
        throw ConfigError(path + ": " + sec + "." + key + ": " + msg);
    }

    double get_double(const std::string& sec, const std::string& key, double fallback) const {
        const Entry* e = find(sec, key);
        if (!e)
            return fallback;
        char* end = nullptr;
        const double v = std::strtod(e->value.c_str(), &end);
        if (end == e->value.c_str() || *end != '\0')
            fail(sec, key, "expected a number, got '" + e->value + "'");
        return v;
    }

    double require_double(const std::string& sec, const std::string& key) const {
        if (!find(sec, key))
            fail(sec, key, "missing required key");
        return get_double(sec, key, 0.0);
    }

    int get_int(const std::string& sec, const std::string& key, int fallback) const {
        const double v = get_double(sec, key, fallback);
        if (v != std::floor(v))
            fail(sec, key, "expected an integer");
        return static_cast<int>(v);
    }

    std::string get_string(const std::string& sec, const std::string& key,
                           const std::string& fallback) const {
        const Entry* e = find(sec, key);
        return e ? e->value : fallback;
    }

    void finish() const {
        for (const auto& [sec, keys] : sections)
            for (const auto& [key, e] : keys)
                if (!e.consumed)
                    throw ConfigError(path + ":" + std::to_string(e.line) + ":" +
                                      std::to_string(e.col) + ": unknown key " + sec + "." + key);
    }
};

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
        ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
        --b;
    return s.substr(a, b - a);
}

RawConfig parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError(path + ": cannot open file");
    RawConfig raw;
    raw.path = path;
    const std::vector<std::string> known_sections = {"grid",   "model", "initial",
                                                     "output", "sharp", "sweep"};
    std::string section;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        const std::string t = trim(line);
        if (t.empty())
            continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError(path + ":" + std::to_string(lineno) + ":1: unterminated section header");
            section = trim(t.substr(1, t.size() - 2));
            if (std::find(known_sections.begin(), known_sections.end(), section) ==
                known_sections.end())
                throw ConfigError(path + ":" + std::to_string(lineno) + ":1: unknown section [" +
                                  section + "]");
            raw.sections[section];
            continue;
        }
        const size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ":1: expected 'key = value'");
        if (section.empty())
            throw ConfigError(path + ":" + std::to_string(lineno) + ":1: key outside any [section]");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(path + ":" + std::to_string(lineno) + ":1: empty key or value");
        Entry e;
        e.value = value;
        e.line = lineno;
        e.col = static_cast<int>(line.find(key)) + 1;
        if (!raw.sections[section].emplace(key, e).second)
            throw ConfigError(path + ":" + std::to_string(lineno) + ":1: duplicate key " + section +
                              "." + key);
    }
    return raw;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok)
        out.push_back(tok);
    return out;
}

ModelKind parse_kind(const RawConfig& raw, const std::string& sec, const std::string& key,
                     const std::string& text) {
    if (text == "v")
        return ModelKind::V;
    if (text == "nv")
        return ModelKind::NV;
    if (text == "dch")
        return ModelKind::DCH;
    raw.fail(sec, key, "expected one of v, nv, dch; got '" + text + "'");
}

Shape parse_shape(const RawConfig& raw) {
    const std::string kind = raw.get_string("initial", "shape", "ellipse");
    if (kind == "circle") {
        CircleShape c;
        c.cx = raw.get_double("initial", "center_x", 0.0);
        c.cy = raw.get_double("initial", "center_y", 0.0);
        c.radius = raw.get_double("initial", "radius", 1.0);
        if (!(c.radius > 0.0))
            raw.fail("initial", "radius", "must be positive");
        return c;
    }
    if (kind == "ellipse") {
        EllipseShape e;
        e.ax = raw.get_double("initial", "ax", 1.0);
        e.ay = raw.get_double("initial", "ay", 0.5);
        if (!(e.ax > 0.0) || !(e.ay > 0.0))
            raw.fail("initial", "ax", "semi-axes must be positive");
        return e;
    }
    if (kind == "four_fold") {
        FourFoldShape f;
        f.r0 = raw.get_double("initial", "r0", 1.0);
        f.amp = raw.get_double("initial", "amp", 0.25);
        if (!(f.r0 > 0.0) || f.amp < 0.0 || f.amp >= 1.0)
            raw.fail("initial", "r0", "need r0 > 0 and 0 <= amp < 1");
        return f;
    }
    raw.fail("initial", "shape", "expected circle, ellipse or four_fold; got '" + kind + "'");
}

GridSpec parse_grid(const RawConfig& raw, double min_epsilon) {
    GridSpec def = default_grid(min_epsilon);
    GridSpec g;
    g.lx = raw.get_double("grid", "lx", def.lx);
    g.ly = raw.get_double("grid", "ly", def.ly);
    g.x0 = raw.get_double("grid", "origin_x", -0.5 * g.lx);
    g.y0 = raw.get_double("grid", "origin_y", -0.5 * g.ly);
    const int def_nx = static_cast<int>(std::ceil(g.lx / (min_epsilon / 10.0)));
    const int def_ny = static_cast<int>(std::ceil(g.ly / (min_epsilon / 10.0)));
    g.nx = raw.get_int("grid", "nx", def_nx);
    g.ny = raw.get_int("grid", "ny", def_ny);
    try {
        g.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(raw.path + ": grid: " + e.what());
    }
    if (g.hx() > min_epsilon / 10.0 || g.hy() > min_epsilon / 10.0)
        std::cerr << "warning: grid spacing (" << g.hx() << ", " << g.hy()
                  << ") is coarser than epsilon/10 = " << min_epsilon / 10.0 << "\n";
    return g;
}

ModelConfig parse_model(const RawConfig& raw) {
    const std::string kind_text = raw.get_string("model", "kind", "nv");
    const ModelKind kind = parse_kind(raw, "model", "kind", kind_text);
    const double eps = raw.require_double("model", "epsilon");
    if (!(eps > 0.0))
        raw.fail("model", "epsilon", "must be positive");

    ModelConfig m;
    try {
        m = ModelConfig::make(kind, eps, raw.get_double("model", "p", kind == ModelKind::DCH ? 0.0 : 1.0));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(raw.path + ": model: " + std::string(e.what()));
    }
    m.alpha = raw.get_double("model", "alpha", 1e-4);
    m.tau = raw.get_double("model", "tau", 0.0);
    m.t_end = raw.get_double("model", "t_end", 3e-4);
    m.solver_tol = raw.get_double("model", "solver_tol", 1e-9);
    m.solver_max_iter = raw.get_int("model", "solver_max_iter", 4000);

    const std::string norm = raw.get_string("model", "normalization", "");
    if (!norm.empty()) {
        if (norm == "energy")
            m.normalization = Normalization::Energy;
        else if (norm == "diffusion")
            m.normalization = Normalization::Diffusion;
        else if (norm == "custom")
            m.normalization = Normalization::Custom;
        else
            raw.fail("model", "normalization", "expected energy, diffusion or custom");
    }
    if (m.normalization == Normalization::Custom && kind != ModelKind::DCH)
        m.custom_coefficient = raw.require_double("model", "coefficient");
    else
        m.custom_coefficient = raw.get_double("model", "coefficient", m.custom_coefficient);

    try {
        m.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(raw.path + ": model: " + std::string(e.what()));
    }
    return m;
}

OutputConfig parse_output(const RawConfig& raw) {
    OutputConfig o;
    o.directory = raw.get_string("output", "directory", o.directory);
    o.snapshot_every = raw.get_int("output", "snapshot_every", o.snapshot_every);
    o.diagnostics_every = raw.get_int("output", "diagnostics_every", o.diagnostics_every);
    if (o.snapshot_every < 1 || o.diagnostics_every < 1)
        raw.fail("output", "snapshot_every", "intervals must be >= 1");
    return o;
}

SharpParams parse_sharp(const RawConfig& raw) {
    SharpParams s;
    s.points = raw.get_int("sharp", "points", s.points);
    s.dt = raw.get_double("sharp", "dt", s.dt);
    s.resample_every = raw.get_int("sharp", "resample_every", s.resample_every);
    s.frames = raw.get_int("sharp", "frames", s.frames);
    if (s.points < 8)
        raw.fail("sharp", "points", "need at least 8 points");
    if (s.frames < 1 || s.resample_every < 1)
        raw.fail("sharp", "frames", "must be >= 1");
    return s;
}

} // namespace

GridSpec default_grid(double min_epsilon) {
    GridSpec g;
    g.lx = g.ly = 4.0;
    g.x0 = g.y0 = -2.0;
    g.nx = g.ny = static_cast<int>(std::ceil(4.0 / (min_epsilon / 10.0)));
    return g;
}

AnyConfig load_config(const std::string& path) {
    RawConfig raw = parse_file(path);
    if (raw.has_section("sweep")) {
        SweepConfig c;
        const std::vector<std::string> eps_tokens =
            split_ws(raw.get_string("sweep", "epsilons", ""));
        if (eps_tokens.empty())
            raw.fail("sweep", "epsilons", "missing or empty");
        for (const std::string& t : eps_tokens) {
            char* end = nullptr;
            const double v = std::strtod(t.c_str(), &end);
            if (end == t.c_str() || *end != '\0' || !(v > 0.0))
                raw.fail("sweep", "epsilons", "bad epsilon '" + t + "'");
            c.epsilons.push_back(v);
        }
        if (!std::is_sorted(c.epsilons.rbegin(), c.epsilons.rend()))
            raw.fail("sweep", "epsilons", "must be sorted descending");

        const std::vector<std::string> model_tokens =
            split_ws(raw.get_string("sweep", "models", ""));
        if (model_tokens.empty())
            raw.fail("sweep", "models", "missing or empty");
        for (const std::string& t : model_tokens) {
            const size_t colon = t.find(':');
            if (colon == std::string::npos)
                raw.fail("sweep", "models", "expected kind:p, got '" + t + "'");
            SweepModel m;
            m.kind = parse_kind(raw, "sweep", "models", t.substr(0, colon));
            char* end = nullptr;
            const std::string ptext = t.substr(colon + 1);
            m.p = std::strtod(ptext.c_str(), &end);
            if (end == ptext.c_str() || *end != '\0' || m.p < 0.0)
                raw.fail("sweep", "models", "bad p in '" + t + "'");
            c.models.push_back(m);
        }
        c.t_bar = raw.get_double("sweep", "t_bar", 3e-4);
        if (!(c.t_bar > 0.0))
            raw.fail("sweep", "t_bar", "must be positive");

        const double min_eps = *std::min_element(c.epsilons.begin(), c.epsilons.end());
        c.grid = parse_grid(raw, min_eps);
        c.initial_shape = raw.has_section("initial") ? parse_shape(raw) : Shape(EllipseShape{});
        c.output = parse_output(raw);
        c.sharp = parse_sharp(raw);
        raw.finish();
        // Model settings are per-cell; validate each against its constraints.
        for (const SweepModel& m : c.models) {
            try {
                ModelConfig::make(m.kind, min_eps, m.p);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(path + ": sweep.models: " + std::string(e.what()));
            }
        }
        return c;
    }

    RunConfig c;
    c.model = parse_model(raw);
    c.grid = parse_grid(raw, c.model.epsilon);
    c.initial_shape = raw.has_section("initial") ? parse_shape(raw) : Shape(EllipseShape{});
    c.output = parse_output(raw);
    c.sharp = parse_sharp(raw);
    raw.finish();
    return c;
}

RunConfig load_run_config(const std::string& path) {
    AnyConfig any = load_config(path);
    if (const auto* run = std::get_if<RunConfig>(&any))
        return *run;
    throw ConfigError(path + ": expected a run config, found a sweep config");
}

SweepConfig load_sweep_config(const std::string& path) {
    AnyConfig any = load_config(path);
    if (const auto* sweep = std::get_if<SweepConfig>(&any))
        return *sweep;
    throw ConfigError(path + ": expected a sweep config (missing [sweep] section)");
}

namespace {

const char* norm_name(Normalization n) {
    switch (n) {
    case Normalization::Energy: return "energy";
    case Normalization::Diffusion: return "diffusion";
    case Normalization::Custom: return "custom";
    }
    return "?";
}

void write_shape(std::ostream& out, const Shape& shape) {
    out << "[initial]\n";
    if (const auto* c = std::get_if<CircleShape>(&shape)) {
        out << "shape = circle\n";
        out << "center_x = " << format_g17(c->cx) << "\n";
        out << "center_y = " << format_g17(c->cy) << "\n";
        out << "radius = " << format_g17(c->radius) << "\n";
    } else if (const auto* e = std::get_if<EllipseShape>(&shape)) {
        out << "shape = ellipse\n";
        out << "ax = " << format_g17(e->ax) << "\n";
        out << "ay = " << format_g17(e->ay) << "\n";
    } else {
        const auto& f = std::get<FourFoldShape>(shape);
        out << "shape = four_fold\n";
        out << "r0 = " << format_g17(f.r0) << "\n";
        out << "amp = " << format_g17(f.amp) << "\n";
    }
}

void write_grid_output_sharp(std::ostream& out, const GridSpec& g, const OutputConfig& o,
                             const SharpParams& s) {
    out << "[grid]\n";
    out << "nx = " << g.nx << "\n";
    out << "ny = " << g.ny << "\n";
    out << "lx = " << format_g17(g.lx) << "\n";
    out << "ly = " << format_g17(g.ly) << "\n";
    out << "origin_x = " << format_g17(g.x0) << "\n";
    out << "origin_y = " << format_g17(g.y0) << "\n\n";
    out << "[output]\n";
    out << "directory = " << o.directory << "\n";
    out << "snapshot_every = " << o.snapshot_every << "\n";
    out << "diagnostics_every = " << o.diagnostics_every << "\n\n";
    out << "[sharp]\n";
    out << "points = " << s.points << "\n";
    out << "dt = " << format_g17(s.dt) << "\n";
    out << "resample_every = " << s.resample_every << "\n";
    out << "frames = " << s.frames << "\n";
}

} // namespace

void write_config(const RunConfig& config, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw ConfigError(path + ": cannot open for writing");
    const ModelConfig& m = config.model;
    out << "[model]\n";
    out << "kind = " << to_string(m.model_kind) << "\n";
    out << "epsilon = " << format_g17(m.epsilon) << "\n";
    out << "p = " << format_g17(m.p) << "\n";
    out << "alpha = " << format_g17(m.alpha) << "\n";
    out << "normalization = " << norm_name(m.normalization) << "\n";
    out << "coefficient = " << format_g17(m.custom_coefficient) << "\n";
    out << "tau = " << format_g17(m.tau) << "\n";
    out << "t_end = " << format_g17(m.t_end) << "\n";
    out << "solver_tol = " << format_g17(m.solver_tol) << "\n";
    out << "solver_max_iter = " << m.solver_max_iter << "\n\n";
    write_shape(out, config.initial_shape);
    out << "\n";
    write_grid_output_sharp(out, config.grid, config.output, config.sharp);
}

void write_config(const SweepConfig& config, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw ConfigError(path + ": cannot open for writing");
    out << "[sweep]\n";
    out << "epsilons =";
    for (double e : config.epsilons)
        out << " " << format_g17(e);
    out << "\n";
    out << "models =";
    for (const SweepModel& m : config.models)
        out << " " << to_string(m.kind) << ":" << format_g17(m.p);
    out << "\n";
    out << "t_bar = " << format_g17(config.t_bar) << "\n\n";
    write_shape(out, config.initial_shape);
    out << "\n";
    write_grid_output_sharp(out, config.grid, config.output, config.sharp);
}

} // namespace ddch
