#pragma once

#include <functional>
#include <variant>
#include <vector>

namespace ddch {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

// Closed polygon {x_i} (x_{n-1} connects back to x_0), counterclockwise.
struct Curve {
    std::vector<Vec2> points;

    int size() const { return static_cast<int>(points.size()); }
    void validate() const; // >= 8 points, no repeated consecutive points
};

double polygon_area(const Curve& c);      // shoelace, signed (+ for CCW)
double polygon_perimeter(const Curve& c);
Vec2 polygon_centroid(const Curve& c);    // area centroid
void ensure_ccw(Curve& c);
bool self_intersects(const Curve& c);

// Signed curvature kappa_i = 1/r_i from the circle through x_{i-1}, x_i,
// x_{i+1}; positive for a counterclockwise convex curve, 0 for collinear
// triples. Throws on repeated points.
std::vector<double> curvature(const Curve& c);

// Arc-length-weighted three-point second difference along the closed curve,
// with chord lengths as spacings.
std::vector<double> surface_laplacian(const std::vector<double>& values, const Curve& c);

// One forward Euler step of x_i += dt * (surface_laplacian kappa)_i * n_i with
// n_i the outward unit normal (perpendicular of the centered chord).
Curve si_step(const Curve& c, double dt);

// Redistribute to n points uniformly in arc length via a periodic cubic
// spline in the chord-length parameter.
Curve resample_uniform(const Curve& c, int n);

struct SiRunParams {
    double t_end = 0.0;
    double dt = 0.0;          // 0 -> dt_safety * (mean spacing)^4, refreshed at resampling
    double dt_safety = 0.1;
    int resample_every = 10;
    int intersection_check_every = 1000;
    // Called after every resampling block; return true to stop early.
    std::function<bool(double t, const Curve&)> observer;
};

struct SiRunResult {
    Curve curve;
    double t = 0.0;
    long steps = 0;
};

SiRunResult si_run(const Curve& c0, const SiRunParams& params);

// Analytic initial shapes. Ellipse and four-fold are centered at the origin;
// the four-fold boundary is r(theta) = r0 (1 + amp cos 4 theta).
struct CircleShape {
    double cx = 0.0, cy = 0.0, radius = 1.0;
    bool operator==(const CircleShape&) const = default;
};
struct EllipseShape {
    double ax = 1.0, ay = 0.5;
    bool operator==(const EllipseShape&) const = default;
};
struct FourFoldShape {
    double r0 = 1.0, amp = 0.25;
    bool operator==(const FourFoldShape&) const = default;
};
using Shape = std::variant<CircleShape, EllipseShape, FourFoldShape>;

// Signed distance to the shape boundary: negative inside, positive outside.
double signed_distance(const Shape& shape, double px, double py);

// Boundary sampled with n points at uniform arc length, counterclockwise.
Curve sample_shape(const Shape& shape, int n);

} // namespace ddch
