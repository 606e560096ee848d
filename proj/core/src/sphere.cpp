#include "plateau/sphere.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace plateau {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b)
{
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

std::vector<double> sub(const std::vector<double>& a, const std::vector<double>& b)
{
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

} // namespace

Sphere Sphere::full_sphere(std::vector<double> center, double radius)
{
    Sphere s;
    s.k = static_cast<int>(center.size()) - 1;
    s.radius = radius;
    int n = static_cast<int>(center.size());
    s.basis.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) s.basis[i][i] = 1.0;
    s.center = std::move(center);
    return s;
}

double Sphere::distance_to(const std::vector<double>& p) const
{
    if (empty()) return std::numeric_limits<double>::infinity();
    std::vector<double> q = sub(p, center);
    double in2 = 0;
    for (const auto& b : basis) {
        double c = dot(q, b);
        in2 += c * c;
    }
    double total2 = dot(q, q);
    double out2 = std::max(0.0, total2 - in2);
    double in = std::sqrt(in2);
    double radial = in - radius;
    return std::sqrt(radial * radial + out2);
}

bool Sphere::contains(const std::vector<double>& p, double tol) const
{
    return !empty() && distance_to(p) <= tol;
}

std::vector<double> Sphere::chart_point(const std::vector<double>& unit_chart) const
{
    std::vector<double> p = center;
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < p.size(); ++j) p[j] += radius * unit_chart[i] * basis[i][j];
    return p;
}

std::vector<double> Sphere::random_point(std::mt19937_64& rng) const
{
    std::normal_distribution<double> gauss(0, 1);
    std::vector<double> u(basis.size());
    double len = 0;
    while (len < 1e-12) {
        for (auto& x : u) x = gauss(rng);
        len = norm(u);
    }
    for (auto& x : u) x /= len;
    return chart_point(u);
}

std::vector<double> excluded_radii(const Sphere& s, const std::vector<double>& x)
{
    if (s.k < 1) throw std::invalid_argument("excluded_radii requires k >= 1");
    std::vector<double> delta = sub(x, s.center);
    double d2 = dot(delta, delta);
    if (d2 == 0.0) return {s.radius};
    return {std::sqrt(s.radius * s.radius + d2)};
}

Sphere intersection_reduction(const Sphere& s, const std::vector<double>& x, double r,
                              double tol)
{
    if (s.k < 1) throw std::invalid_argument("intersection_reduction requires k >= 1");
    if (r <= 0) throw std::invalid_argument("radius must be positive");
    double bad = excluded_radii(s, x)[0];
    if (std::abs(r - bad) <= tol * (1.0 + bad))
        throw std::invalid_argument("excluded radius supplied");

    std::vector<double> delta = sub(s.center, x); // x0 - x
    double dist2 = dot(delta, delta);
    // chart coordinates of the hyperplane |y-x|^2 - |y-x0|^2 = r^2 - r0^2
    std::vector<double> w(s.basis.size());
    for (std::size_t i = 0; i < s.basis.size(); ++i) w[i] = dot(delta, s.basis[i]);
    double h = 0.5 * (r * r - s.radius * s.radius - dist2);
    double w2 = dot(w, w);

    if (w2 <= tol * tol) {
        // the center offset is orthogonal to the plane; the hyperplane is
        // parallel to it, so the trace is empty unless r is excluded
        return Sphere::empty_sphere();
    }

    double rad2 = s.radius * s.radius - h * h / w2;
    if (rad2 < -tol) return Sphere::empty_sphere();

    Sphere out;
    out.k = s.k - 1;
    out.radius = std::sqrt(std::max(0.0, rad2));
    // center: x0 + (h/|w|^2) * B w
    out.center = s.center;
    for (std::size_t i = 0; i < s.basis.size(); ++i)
        for (std::size_t j = 0; j < out.center.size(); ++j)
            out.center[j] += (h / w2) * w[i] * s.basis[i][j];
    // basis: orthonormal completion of w-perp inside the chart
    std::size_t m = s.basis.size();
    std::vector<std::vector<double>> chart_dirs;
    std::vector<double> wn = w;
    for (auto& c : wn) c /= std::sqrt(w2);
    for (std::size_t seed = 0; seed < m && chart_dirs.size() < m - 1; ++seed) {
        std::vector<double> v(m, 0.0);
        v[seed] = 1.0;
        double c = dot(v, wn);
        for (std::size_t i = 0; i < m; ++i) v[i] -= c * wn[i];
        for (const auto& prev : chart_dirs) {
            double p = dot(v, prev);
            for (std::size_t i = 0; i < m; ++i) v[i] -= p * prev[i];
        }
        double len = norm(v);
        if (len < 1e-9) continue;
        for (auto& y : v) y /= len;
        chart_dirs.push_back(v);
    }
    for (const auto& dir : chart_dirs) {
        std::vector<double> b(out.center.size(), 0.0);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < b.size(); ++j) b[j] += dir[i] * s.basis[i][j];
        out.basis.push_back(b);
    }
    return out;
}

} // namespace plateau
