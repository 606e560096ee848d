#ifndef PLATEAU_ENERGY_HPP
#define PLATEAU_ENERGY_HPP

#include "plateau/expr.hpp"
#include "plateau/measured_set.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace plateau {

/// Direction-dependent density i(x, T) on rectifiable mass and j(x) on the
/// unrectifiable part, both pinned into [1/Lambda, Lambda] at evaluation.
struct Integrand {
    std::function<double(const std::vector<double>&, const TangentFrame&)> i;
    std::function<double(const std::vector<double>&)> j;
    double lambda = 1;

    double eval_i(const std::vector<double>& x, const TangentFrame& t) const;
    double eval_j(const std::vector<double>& x) const;

    static Integrand constant(double value, double lambda = 1);
    static Integrand from_expressions(const std::string& i_expr, const std::string& j_expr,
                                      double lambda);
};

struct EnergyReport {
    double total = 0;
    double rectifiable_part = 0;
    double unrectifiable_part = 0;
    double hausdorff_mass = 0;
    std::map<Cube, double> per_cell;
};

/// Quadrature of the integrand over the set: exact cell masses times
/// refined barycenter quadrature on the cell part, weighted sums on the
/// cloud part. The axiom-(i) bound is asserted on every report.
EnergyReport energy(const MeasuredSet& s, const Integrand& ig, double quad_tol = 1e-7);

struct AxiomIReport {
    bool ok = true;
    double worst_ratio = 1; // worst total/H^d against the Lambda band
};

AxiomIReport check_axiom_i(const Integrand& ig, const std::vector<MeasuredSet>& fixtures);

struct AxiomIIReport {
    std::vector<double> radii;
    std::vector<double> ratios;
    bool consistent_with_limit_one = false;
    double bilipschitz_estimate = 1; // measured (1+eps)
    bool sandwich_ok = true;
};

/// Evaluates I(f(V cap B(x,r))) / I(V cap B(x,r)) over a halving radius
/// schedule. `f` maps plane-chart coordinates u in R^d to points of R^n.
AxiomIIReport check_axiom_ii(const Integrand& ig, const std::vector<double>& x,
                             const TangentFrame& v,
                             const std::function<std::vector<double>(const std::vector<double>&)>& f,
                             double r0, int halvings = 6, double band = 0.02);

/// sup-oscillation of the integrands over B(x, r) x G(d, n), doubled
/// Grassmannian sampling until stable within 1%.
double oscillation_epsilon(const Integrand& ig, const std::vector<double>& x, double r, int d,
                           int n, std::uint64_t seed = 0, int base_samples = 10000);

/// H^d measure of the d-dimensional unit disk.
double unit_disk_measure(int d);

struct EllipticityReport {
    double lhs = 0;          // I(V cap B)
    double rhs = 0;          // I(S cap B) + 2 eps(r) omega_d r^d
    double slack = 0;        // rhs - lhs
    double epsilon_r = 0;
    bool frozen_inequality_holds = false;
};

/// Converts a frozen-coefficient ellipticity bound at x into the additive
/// David-form inequality, reporting both sides and the slack. Requires
/// eps(r) <= c and the certified projection-monotonicity flag.
EllipticityReport almgren_to_david(const Integrand& ig, double c, const std::vector<double>& x,
                                   double r, const TangentFrame& v, const MeasuredSet& s,
                                   bool projection_monotone_certified,
                                   std::uint64_t seed = 0);

/// Quadrature energy of the flat disk V cap B(x, r); when `frozen_at` is
/// set the integrand is evaluated at that base point.
double disk_energy(const Integrand& ig, const std::vector<double>& x, const TangentFrame& v,
                   double r, const std::vector<double>* frozen_at = nullptr);

} // namespace plateau

#endif
