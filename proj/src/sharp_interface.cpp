#include "ddch/sharp_interface.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ddch {

namespace {

inline double dist(const Vec2& a, const Vec2& b) {
    return std::hypot(b.x - a.x, b.y - a.y);
}

inline int wrap(int i, int n) { return (i % n + n) % n; }

// Cyclic tridiagonal solve (Thomas + Sherman-Morrison). Diagonals a (sub),
// b (main), c (super); corner entries a[0] (row 0, col n-1) and c[n-1]
// (row n-1, col 0).
std::vector<double> solve_cyclic_tridiag(std::vector<double> a, std::vector<double> b,
                                         std::vector<double> c, std::vector<double> rhs) {
    const int n = static_cast<int>(b.size());
    if (n < 3)
        throw std::invalid_argument("cyclic tridiagonal system needs n >= 3");

    auto tridiag = [n](const std::vector<double>& sub, std::vector<double> diag,
                       const std::vector<double>& sup, std::vector<double> r) {
        for (int i = 1; i < n; ++i) {
            const double m = sub[i] / diag[i - 1];
            diag[i] -= m * sup[i - 1];
            r[i] -= m * r[i - 1];
        }
        std::vector<double> x(n);
        x[n - 1] = r[n - 1] / diag[n - 1];
        for (int i = n - 2; i >= 0; --i)
            x[i] = (r[i] - sup[i] * x[i + 1]) / diag[i];
        return x;
    };

    const double alpha = a[0];   // corner (0, n-1)
    const double beta = c[n - 1]; // corner (n-1, 0)
    const double gamma = -b[0];

    std::vector<double> bmod = b;
    bmod[0] -= gamma;
    bmod[n - 1] -= alpha * beta / gamma;

    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = alpha;

    std::vector<double> x = tridiag(a, bmod, c, rhs);
    std::vector<double> z = tridiag(a, bmod, c, u);

    const double fact = (x[0] + beta * x[n - 1] / gamma) /
                        (1.0 + z[0] + beta * z[n - 1] / gamma);
    for (int i = 0; i < n; ++i)
        x[i] -= fact * z[i];
    return x;
}

// Periodic cubic spline through (t_i, y_i), t strictly increasing with period
// `period`. Returns second derivatives at the knots.
std::vector<double> periodic_spline_m(const std::vector<double>& t, const std::vector<double>& y,
                                      double period) {
    const int n = static_cast<int>(t.size());
    std::vector<double> h(n);
    for (int i = 0; i < n; ++i)
        h[i] = (i + 1 < n ? t[i + 1] : t[0] + period) - t[i];

    std::vector<double> sub(n), diag(n), sup(n), rhs(n);
    for (int i = 0; i < n; ++i) {
        const int im = wrap(i - 1, n);
        sub[i] = h[im] / 6.0;
        diag[i] = (h[im] + h[i]) / 3.0;
        sup[i] = h[i] / 6.0;
        const double dyp = (y[wrap(i + 1, n)] - y[i]) / h[i];
        const double dym = (y[i] - y[im]) / h[im];
        rhs[i] = dyp - dym;
    }
    return solve_cyclic_tridiag(sub, diag, sup, rhs);
}

double spline_eval(const std::vector<double>& t, const std::vector<double>& y,
                   const std::vector<double>& m, double period, int seg, double s) {
    const int n = static_cast<int>(t.size());
    const int j = wrap(seg + 1, n);
    const double h = (seg + 1 < n ? t[seg + 1] : t[0] + period) - t[seg];
    const double A = (t[seg] + h - s) / h;
    const double B = (s - t[seg]) / h;
    return A * y[seg] + B * y[j] +
           ((A * A * A - A) * m[seg] + (B * B * B - B) * m[j]) * h * h / 6.0;
}

// Segment intersection with bounding-box reject; shared endpoints excluded by
// the caller.
bool segments_cross(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
    auto orient = [](const Vec2& a, const Vec2& b, const Vec2& c) {
        return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    };
    const double o1 = orient(p1, p2, q1);
    const double o2 = orient(p1, p2, q2);
    const double o3 = orient(q1, q2, p1);
    const double o4 = orient(q1, q2, p2);
    return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0));
}

} // namespace

void Curve::validate() const {
    if (size() < 8)
        throw std::invalid_argument("Curve: needs at least 8 points");
    const int n = size();
    for (int i = 0; i < n; ++i)
        if (dist(points[i], points[wrap(i + 1, n)]) == 0.0)
            throw std::invalid_argument("Curve: repeated consecutive points");
}

double polygon_area(const Curve& c) {
    const int n = c.size();
    double a = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec2& p = c.points[i];
        const Vec2& q = c.points[wrap(i + 1, n)];
        a += p.x * q.y - q.x * p.y;
    }
    return 0.5 * a;
}

double polygon_perimeter(const Curve& c) {
    const int n = c.size();
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        s += dist(c.points[i], c.points[wrap(i + 1, n)]);
    return s;
}

Vec2 polygon_centroid(const Curve& c) {
    const int n = c.size();
    double a = 0.0, cx = 0.0, cy = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec2& p = c.points[i];
        const Vec2& q = c.points[wrap(i + 1, n)];
        const double w = p.x * q.y - q.x * p.y;
        a += w;
        cx += (p.x + q.x) * w;
        cy += (p.y + q.y) * w;
    }
    a *= 0.5;
    if (a == 0.0)
        throw std::invalid_argument("polygon_centroid: degenerate polygon");
    return {cx / (6.0 * a), cy / (6.0 * a)};
}

void ensure_ccw(Curve& c) {
    if (polygon_area(c) < 0.0)
        std::reverse(c.points.begin(), c.points.end());
}

bool self_intersects(const Curve& c) {
    const int n = c.size();
    for (int i = 0; i < n; ++i) {
        const Vec2& p1 = c.points[i];
        const Vec2& p2 = c.points[wrap(i + 1, n)];
        const double xlo = std::min(p1.x, p2.x), xhi = std::max(p1.x, p2.x);
        const double ylo = std::min(p1.y, p2.y), yhi = std::max(p1.y, p2.y);
        for (int j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1)
                continue; // adjacent through the wrap
            const Vec2& q1 = c.points[j];
            const Vec2& q2 = c.points[wrap(j + 1, n)];
            if (std::max(q1.x, q2.x) < xlo || std::min(q1.x, q2.x) > xhi ||
                std::max(q1.y, q2.y) < ylo || std::min(q1.y, q2.y) > yhi)
                continue;
            if (segments_cross(p1, p2, q1, q2))
                return true;
        }
    }
    return false;
}

std::vector<double> curvature(const Curve& c) {
    const int n = c.size();
    std::vector<double> k(n);
    for (int i = 0; i < n; ++i) {
        const Vec2& a = c.points[wrap(i - 1, n)];
        const Vec2& b = c.points[i];
        const Vec2& d = c.points[wrap(i + 1, n)];
        const double lab = dist(a, b);
        const double lbd = dist(b, d);
        const double lad = dist(a, d);
        if (lab == 0.0 || lbd == 0.0 || lad == 0.0)
            throw std::invalid_argument("curvature: degenerate point triple");
        const double cross = (b.x - a.x) * (d.y - b.y) - (b.y - a.y) * (d.x - b.x);
        k[i] = 2.0 * cross / (lab * lbd * lad);
    }
    return k;
}

std::vector<double> surface_laplacian(const std::vector<double>& values, const Curve& c) {
    const int n = c.size();
    if (static_cast<int>(values.size()) != n)
        throw std::invalid_argument("surface_laplacian: value count mismatch");
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        const double dsm = dist(c.points[wrap(i - 1, n)], c.points[i]);
        const double dsp = dist(c.points[i], c.points[wrap(i + 1, n)]);
        if (dsm == 0.0 || dsp == 0.0)
            throw std::invalid_argument("surface_laplacian: zero chord");
        const double vp = values[wrap(i + 1, n)];
        const double vm = values[wrap(i - 1, n)];
        out[i] = 2.0 / (dsm + dsp) * ((vp - values[i]) / dsp - (values[i] - vm) / dsm);
    }
    return out;
}

Curve si_step(const Curve& c, double dt) {
    const int n = c.size();
    const std::vector<double> k = curvature(c);
    const std::vector<double> v = surface_laplacian(k, c);
    Curve out = c;
    for (int i = 0; i < n; ++i) {
        const Vec2& a = c.points[wrap(i - 1, n)];
        const Vec2& d = c.points[wrap(i + 1, n)];
        const double tx = d.x - a.x;
        const double ty = d.y - a.y;
        const double len = std::hypot(tx, ty);
        if (len == 0.0)
            throw std::invalid_argument("si_step: degenerate normal");
        // outward normal of a CCW curve: tangent rotated by -90 degrees
        const double nxh = ty / len;
        const double nyh = -tx / len;
        out.points[i].x += dt * v[i] * nxh;
        out.points[i].y += dt * v[i] * nyh;
    }
    return out;
}

Curve resample_uniform(const Curve& c, int n) {
    const int m = c.size();
    if (n < 8)
        throw std::invalid_argument("resample_uniform: n must be >= 8");
    std::vector<double> t(m), xs(m), ys(m);
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
        t[i] = acc;
        xs[i] = c.points[i].x;
        ys[i] = c.points[i].y;
        acc += dist(c.points[i], c.points[wrap(i + 1, m)]);
    }
    const double total = acc;
    if (total <= 0.0)
        throw std::invalid_argument("resample_uniform: zero-length curve");

    const std::vector<double> mx = periodic_spline_m(t, xs, total);
    const std::vector<double> my = periodic_spline_m(t, ys, total);

    Curve out;
    out.points.resize(n);
    int seg = 0;
    for (int k = 0; k < n; ++k) {
        const double s = total * k / n;
        while (seg + 1 < m && t[seg + 1] <= s)
            ++seg;
        out.points[k].x = spline_eval(t, xs, mx, total, seg, s);
        out.points[k].y = spline_eval(t, ys, my, total, seg, s);
    }
    return out;
}

SiRunResult si_run(const Curve& c0, const SiRunParams& params) {
    if (params.t_end <= 0.0)
        throw std::invalid_argument("si_run: t_end must be positive");
    Curve c = c0;
    c.validate();
    ensure_ccw(c);
    if (self_intersects(c))
        throw std::runtime_error("si_run: initial curve self-intersects");

    const int n = c.size();
    const int resample_every = std::max(1, params.resample_every);

    auto auto_dt = [&](const Curve& cur) {
        const double ds = polygon_perimeter(cur) / cur.size();
        return params.dt_safety * ds * ds * ds * ds;
    };

    double dt = params.dt > 0.0 ? params.dt : auto_dt(c);
    double t = 0.0;
    long steps = 0;
    long steps_since_check = 0;
    while (t < params.t_end) {
        if (steps > 0 && steps % resample_every == 0) {
            c = resample_uniform(c, n);
            if (params.dt <= 0.0)
                dt = auto_dt(c);
            if (params.intersection_check_every > 0 &&
                steps_since_check >= params.intersection_check_every) {
                steps_since_check = 0;
                if (self_intersects(c))
                    throw std::runtime_error("si_run: curve self-intersected at t = " +
                                             std::to_string(t));
            }
            if (params.observer && params.observer(t, c))
                break;
        }
        const double step_dt = std::min(dt, params.t_end - t);
        c = si_step(c, step_dt);
        t += step_dt;
        ++steps;
        ++steps_since_check;
    }
    return {std::move(c), t, steps};
}

// ---------------------------------------------------------------------------
// shapes and signed distances
// ---------------------------------------------------------------------------

namespace {

// Golden-section refinement of a bracketed minimum of f over [lo, hi].
double golden_min(const std::function<double(double)>& f, double lo, double hi, int iters) {
    const double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < iters; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

// Nearest-boundary distance by dense parameter sampling plus golden-section
// refinement of the bracketed minimum.
double boundary_distance(const std::function<Vec2(double)>& boundary, double per_lo,
                         double per_hi, int samples, double px, double py) {
    auto d2 = [&](double th) {
        const Vec2 q = boundary(th);
        const double dx = q.x - px, dy = q.y - py;
        return dx * dx + dy * dy;
    };
    const double w = (per_hi - per_lo) / samples;
    int best = 0;
    double best_val = d2(per_lo);
    for (int k = 1; k < samples; ++k) {
        const double v = d2(per_lo + k * w);
        if (v < best_val) {
            best_val = v;
            best = k;
        }
    }
    const double lo = per_lo + (best - 1) * w;
    const double hi = per_lo + (best + 1) * w;
    const double th = golden_min(d2, lo, hi, 60);
    return std::sqrt(d2(th));
}

} // namespace

double signed_distance(const Shape& shape, double px, double py) {
    if (const auto* c = std::get_if<CircleShape>(&shape)) {
        return std::hypot(px - c->cx, py - c->cy) - c->radius;
    }
    if (const auto* e = std::get_if<EllipseShape>(&shape)) {
        const double a = e->ax, b = e->ay;
        const double qx = std::abs(px), qy = std::abs(py);
        const double d = boundary_distance(
            [a, b](double th) {
                return Vec2{a * std::cos(th), b * std::sin(th)};
            },
            0.0, 1.5707963267948966, 512, qx, qy);
        const double inside = (px / a) * (px / a) + (py / b) * (py / b);
        return inside < 1.0 ? -d : d;
    }
    const auto& f = std::get<FourFoldShape>(shape);
    const double d = boundary_distance(
        [&f](double th) {
            const double r = f.r0 * (1.0 + f.amp * std::cos(4.0 * th));
            return Vec2{r * std::cos(th), r * std::sin(th)};
        },
        0.0, 6.283185307179586, 2048, px, py);
    const double rr = std::hypot(px, py);
    const double rb = f.r0 * (1.0 + f.amp * std::cos(4.0 * std::atan2(py, px)));
    return rr < rb ? -d : d;
}

Curve sample_shape(const Shape& shape, int n) {
    if (n < 8)
        throw std::invalid_argument("sample_shape: n must be >= 8");
    Curve out;
    out.points.resize(n);

    if (const auto* c = std::get_if<CircleShape>(&shape)) {
        for (int k = 0; k < n; ++k) {
            const double th = 2.0 * M_PI * k / n;
            out.points[k] = {c->cx + c->radius * std::cos(th), c->cy + c->radius * std::sin(th)};
        }
        return out;
    }

    std::function<Vec2(double)> boundary;
    if (const auto* e = std::get_if<EllipseShape>(&shape)) {
        const double a = e->ax, b = e->ay;
        boundary = [a, b](double th) { return Vec2{a * std::cos(th), b * std::sin(th)}; };
    } else {
        const auto& f = std::get<FourFoldShape>(shape);
        boundary = [&f](double th) {
            const double r = f.r0 * (1.0 + f.amp * std::cos(4.0 * th));
            return Vec2{r * std::cos(th), r * std::sin(th)};
        };
    }

    // Uniform arc length: accumulate a fine chord-length table and invert it.
    const int fine = 1 << 14;
    std::vector<double> s(fine + 1, 0.0);
    Vec2 prev = boundary(0.0);
    for (int k = 1; k <= fine; ++k) {
        const Vec2 q = boundary(2.0 * M_PI * k / fine);
        s[k] = s[k - 1] + dist(prev, q);
        prev = q;
    }
    const double total = s[fine];
    int seg = 0;
    for (int k = 0; k < n; ++k) {
        const double target = total * k / n;
        while (seg + 1 <= fine && s[seg + 1] < target)
            ++seg;
        const double frac = (target - s[seg]) / (s[seg + 1] - s[seg]);
        const double th = 2.0 * M_PI * (seg + frac) / fine;
        out.points[k] = boundary(th);
    }
    return out;
}

} // namespace ddch
