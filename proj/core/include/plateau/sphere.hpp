#ifndef PLATEAU_SPHERE_HPP
#define PLATEAU_SPHERE_HPP

#include <random>
#include <vector>

namespace plateau {

/// A k-sphere relative to a (k+1)-affine plane of R^n, anchored at its
/// center; k = -1 encodes the empty set. A radius of 0 marks the degenerate
/// single-point case that can appear in intersection certificates.
struct Sphere {
    int k = -1;
    std::vector<double> center;              // x0, lies in the plane
    std::vector<std::vector<double>> basis;  // k+1 orthonormal vectors spanning the plane
    double radius = 0;

    static Sphere empty_sphere() { return Sphere{}; }
    /// Full (n-1)-sphere of R^n around `center`.
    static Sphere full_sphere(std::vector<double> center, double radius);

    bool empty() const { return k < 0; }
    int ambient_dim() const { return static_cast<int>(center.size()); }

    /// Euclidean distance from a point to the sphere (inf for empty).
    double distance_to(const std::vector<double>& p) const;
    bool contains(const std::vector<double>& p, double tol) const;

    /// A point of the sphere from chart angles (size k of them); used by
    /// samplers and tests.
    std::vector<double> chart_point(const std::vector<double>& unit_chart) const;
    std::vector<double> random_point(std::mt19937_64& rng) const;
};

/// The at-most-one radius for which the general-position reduction of
/// S cap S(x, r) to a (k-1)-sphere fails. Requires k >= 1.
std::vector<double> excluded_radii(const Sphere& s, const std::vector<double>& x);

/// A (k-1)-sphere containing S cap S(x, r) for a non-excluded radius.
/// Throws std::invalid_argument when r is (numerically) the excluded radius.
Sphere intersection_reduction(const Sphere& s, const std::vector<double>& x, double r,
                              double tol = 1e-9);

} // namespace plateau

#endif
