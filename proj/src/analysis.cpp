#include "ddch/analysis.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace ddch {

double energy(const ScalarField& u, const ModelConfig& config) {
    const GridSpec& g = u.grid;
    const double eps = config.epsilon;
    const ScalarField grad2 = grad_dot_grad(u, u);
    const RestrictionParams rp = config.restriction();
    const bool variational = config.model_kind == ModelKind::V;

    ScalarField density(g);
    for (int k = 0; k < g.cells(); ++k) {
        const double uv = u.values[k];
        const double core = double_well(uv) / eps + 0.5 * eps * grad2.values[k];
        density.values[k] = variational ? restriction_g(uv, rp) * core : core;
    }
    return integrate(density);
}

double dissipation(const ScalarField& u, const ScalarField& w, const ModelConfig& config) {
    const ScalarField grad2 = grad_dot_grad(w, w);
    const RestrictionParams rp = config.restriction();
    ScalarField density(u.grid);
    for (int k = 0; k < u.grid.cells(); ++k)
        density.values[k] = mobility(u.values[k], rp) * grad2.values[k];
    return -integrate(density) / config.epsilon;
}

namespace {

// Marching squares on the cell-center lattice. Edge ids: horizontal edge from
// node (i,j) to (i+1,j) is 2*(j*nx+i), vertical edge from (i,j) to (i,j+1) is
// 2*(j*nx+i)+1.
struct ContourGraph {
    std::unordered_map<long, Vec2> point;                  // edge id -> crossing
    std::unordered_map<long, std::array<long, 2>> link;    // edge id -> up to 2 neighbors
    std::unordered_map<long, int> degree;

    void add_segment(long a, long b) {
        auto& la = link[a];
        auto& lb = link[b];
        la[degree[a]++ % 2] = b;
        lb[degree[b]++ % 2] = a;
    }
};

// Edge pairs per marching-squares case; ambiguous cases resolved separately.
const std::array<std::vector<std::array<int, 2>>, 16> kCaseSegments = {{
    {},                     // 0000
    {{{3, 0}}},             // bl
    {{{0, 1}}},             // br
    {{{3, 1}}},             // bl br
    {{{1, 2}}},             // tr
    {},                     // bl tr (ambiguous)
    {{{0, 2}}},             // br tr
    {{{3, 2}}},             // bl br tr
    {{{2, 3}}},             // tl
    {{{0, 2}}},             // bl tl
    {},                     // br tl (ambiguous)
    {{{1, 2}}},             // bl br tl
    {{{1, 3}}},             // tr tl
    {{{0, 1}}},             // bl tr tl
    {{{0, 3}}},             // br tr tl
    {},                     // 1111
}};

} // namespace

Curve extract_level_set(const ScalarField& u, double level, int* component_count) {
    const GridSpec& g = u.grid;
    const int nx = g.nx, ny = g.ny;

    auto interp = [level](double a, double b) { return (level - a) / (b - a); };

    ContourGraph graph;

    auto h_edge = [nx](int i, int j) { return 2L * (static_cast<long>(j) * nx + i); };
    auto v_edge = [nx](int i, int j) { return 2L * (static_cast<long>(j) * nx + i) + 1; };

    for (int j = 0; j + 1 < ny; ++j) {
        for (int i = 0; i + 1 < nx; ++i) {
            const double bl = u(i, j), br = u(i + 1, j);
            const double tr = u(i + 1, j + 1), tl = u(i, j + 1);
            int c = 0;
            if (bl > level) c |= 1;
            if (br > level) c |= 2;
            if (tr > level) c |= 4;
            if (tl > level) c |= 8;
            if (c == 0 || c == 15)
                continue;

            // local edges: 0 bottom, 1 right, 2 top, 3 left
            const long eid[4] = {h_edge(i, j), v_edge(i + 1, j), h_edge(i, j + 1), v_edge(i, j)};
            auto edge_point = [&](int e) -> Vec2 {
                switch (e) {
                case 0: return {g.cell_x(i) + interp(bl, br) * g.hx(), g.cell_y(j)};
                case 1: return {g.cell_x(i + 1), g.cell_y(j) + interp(br, tr) * g.hy()};
                case 2: return {g.cell_x(i) + interp(tl, tr) * g.hx(), g.cell_y(j + 1)};
                default: return {g.cell_x(i), g.cell_y(j) + interp(bl, tl) * g.hy()};
                }
            };

            std::vector<std::array<int, 2>> segs;
            if (c == 5 || c == 10) {
                const double center = 0.25 * (bl + br + tr + tl);
                const bool center_in = center > level;
                if (c == 5)
                    segs = center_in ? std::vector<std::array<int, 2>>{{{0, 1}}, {{2, 3}}}
                                     : std::vector<std::array<int, 2>>{{{3, 0}}, {{1, 2}}};
                else
                    segs = center_in ? std::vector<std::array<int, 2>>{{{3, 0}}, {{1, 2}}}
                                     : std::vector<std::array<int, 2>>{{{0, 1}}, {{2, 3}}};
            } else {
                segs = kCaseSegments[c];
            }

            for (const auto& s : segs) {
                const long a = eid[s[0]], b = eid[s[1]];
                if (!graph.point.count(a))
                    graph.point[a] = edge_point(s[0]);
                if (!graph.point.count(b))
                    graph.point[b] = edge_point(s[1]);
                graph.add_segment(a, b);
            }
        }
    }

    if (graph.point.empty())
        throw std::runtime_error("extract_level_set: field does not cross the level");

    // Walk closed loops through the edge graph.
    std::unordered_map<long, bool> visited;
    std::vector<Curve> loops;
    for (const auto& [start, pt] : graph.point) {
        if (visited[start])
            continue;
        Curve loop;
        long prev = -1;
        long cur = start;
        while (true) {
            visited[cur] = true;
            loop.points.push_back(graph.point[cur]);
            const auto& lk = graph.link[cur];
            const int deg = std::min(graph.degree[cur], 2);
            long next = -1;
            for (int d = 0; d < deg; ++d)
                if (lk[d] != prev) {
                    next = lk[d];
                    break;
                }
            if (next == -1 || next == start)
                break;
            prev = cur;
            cur = next;
        }
        if (loop.size() >= 3)
            loops.push_back(std::move(loop));
    }

    if (component_count)
        *component_count = static_cast<int>(loops.size());
    if (loops.empty())
        throw std::runtime_error("extract_level_set: no closed component found");

    int best = 0;
    double best_area = -1.0;
    for (int i = 0; i < static_cast<int>(loops.size()); ++i) {
        const double a = std::abs(polygon_area(loops[i]));
        if (a > best_area) {
            best_area = a;
            best = i;
        }
    }
    Curve out = std::move(loops[best]);
    ensure_ccw(out);
    return out;
}

double measure_ax(const Curve& curve) {
    const Vec2 c = polygon_centroid(curve);
    double ax = 0.0;
    for (const Vec2& p : curve.points)
        ax = std::max(ax, std::abs(p.x - c.x));
    return ax;
}

double delta_metric(double ax_ddch, double ax_si) {
    if (ax_si == 0.0)
        throw std::domain_error("delta_metric: reference semi-axis is zero");
    return std::abs(ax_ddch - ax_si) / ax_si;
}

Overshoot positivity_overshoot(const ScalarField& u) {
    return {std::max(0.0, -min_value(u)), std::max(0.0, max_value(u) - 1.0)};
}

DiagnosticsRecord diagnostics(double t, const ScalarField& u, const ScalarField& w,
                              const ModelConfig& config, bool with_ax) {
    DiagnosticsRecord rec;
    rec.t = t;
    rec.mass = integrate(u);
    rec.energy = energy(u, config);
    rec.dissipation = dissipation(u, w, config);
    rec.u_min = min_value(u);
    rec.u_max = max_value(u);
    if (with_ax) {
        try {
            rec.a_x = measure_ax(extract_level_set(u));
        } catch (const std::runtime_error&) {
            rec.a_x.reset();
        }
    }
    return rec;
}

} // namespace ddch
