#include "plateau/energy.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace plateau {

namespace {

void check_band(double v, double lambda, const char* what)
{
    double slack = 1e-9 * (1 + lambda);
    if (v < 1.0 / lambda - slack || v > lambda + slack) {
        std::ostringstream os;
        os << what << " = " << v << " escapes [1/Lambda, Lambda] with Lambda = " << lambda;
        throw std::invalid_argument(os.str());
    }
}

} // namespace

double Integrand::eval_i(const std::vector<double>& x, const TangentFrame& t) const
{
    double v = i(x, t);
    check_band(v, lambda, "integrand i");
    return v;
}

double Integrand::eval_j(const std::vector<double>& x) const
{
    double v = j(x);
    check_band(v, lambda, "integrand j");
    return v;
}

Integrand Integrand::constant(double value, double lambda)
{
    Integrand out;
    out.i = [value](const std::vector<double>&, const TangentFrame&) { return value; };
    out.j = [value](const std::vector<double>&) { return value; };
    out.lambda = lambda;
    return out;
}

Integrand Integrand::from_expressions(const std::string& i_expr, const std::string& j_expr,
                                      double lambda)
{
    Expression ie = Expression::parse(i_expr);
    Expression je = Expression::parse(j_expr);
    if (je.uses_frame())
        throw std::invalid_argument("integrand j may not depend on a tangent frame");
    Integrand out;
    out.i = [ie](const std::vector<double>& x, const TangentFrame& t) { return ie.eval(x, &t); };
    out.j = [je](const std::vector<double>& x) { return je.eval(x); };
    out.lambda = lambda;
    return out;
}

namespace {

/// Refining barycenter quadrature of i over a closed cell, averaged.
double cell_average(const Integrand& ig, const TangentFrame& frame,
                    const std::vector<double>& lo, const std::vector<double>& hi,
                    const std::vector<int>& spanned, double tol, int depth)
{
    std::vector<double> mid(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i) mid[i] = 0.5 * (lo[i] + hi[i]);
    double coarse = ig.eval_i(mid, frame);
    if (depth >= 10) return coarse;
    double fine = 0;
    std::size_t children = std::size_t(1) << spanned.size();
    for (std::size_t bits = 0; bits < children; ++bits) {
        std::vector<double> clo = lo, chi = hi;
        for (std::size_t j = 0; j < spanned.size(); ++j) {
            int axis = spanned[j];
            if ((bits >> j) & 1u)
                clo[axis] = mid[axis];
            else
                chi[axis] = mid[axis];
        }
        std::vector<double> cmid(lo.size());
        for (std::size_t i = 0; i < lo.size(); ++i) cmid[i] = 0.5 * (clo[i] + chi[i]);
        fine += ig.eval_i(cmid, frame);
    }
    fine /= static_cast<double>(children);
    if (std::abs(fine - coarse) <= tol) return fine;
    double refined = 0;
    for (std::size_t bits = 0; bits < children; ++bits) {
        std::vector<double> clo = lo, chi = hi;
        for (std::size_t j = 0; j < spanned.size(); ++j) {
            int axis = spanned[j];
            if ((bits >> j) & 1u)
                clo[axis] = mid[axis];
            else
                chi[axis] = mid[axis];
        }
        refined += cell_average(ig, frame, clo, chi, spanned, tol, depth + 1);
    }
    return refined / static_cast<double>(children);
}

} // namespace

EnergyReport energy(const MeasuredSet& s, const Integrand& ig, double quad_tol)
{
    EnergyReport rep;
    if (s.cell_part) {
        const CubicalComplex& k = *s.cell_part;
        int n = k.ambient_dim();
        double mass = to_double(k.cell_mass(s.d));
        for (const Cube& c : k.cells(s.d)) {
            TangentFrame frame = cell_frame(c, n);
            std::vector<int> spanned;
            for (int i = 0; i < n; ++i)
                if (c.spans(i)) spanned.push_back(i);
            auto lo_r = k.corner_lo(c);
            auto hi_r = k.corner_hi(c);
            std::vector<double> lo(n), hi(n);
            for (int i = 0; i < n; ++i) {
                lo[i] = to_double(lo_r[i]);
                hi[i] = to_double(hi_r[i]);
            }
            double avg = cell_average(ig, frame, lo, hi, spanned, quad_tol, 0);
            double e = mass * avg;
            rep.per_cell[c] += e;
            rep.rectifiable_part += e;
            rep.hausdorff_mass += mass;
        }
    }
    for (const WeightedSample& w : s.samples) {
        double e = w.tangent ? w.weight * ig.eval_i(w.point, *w.tangent)
                             : w.weight * ig.eval_j(w.point);
        (w.tangent ? rep.rectifiable_part : rep.unrectifiable_part) += e;
        rep.hausdorff_mass += w.weight;
    }
    rep.total = rep.rectifiable_part + rep.unrectifiable_part;

    double slack = 1e-7 * (1 + rep.hausdorff_mass) * ig.lambda;
    if (rep.total < rep.hausdorff_mass / ig.lambda - slack ||
        rep.total > rep.hausdorff_mass * ig.lambda + slack)
        throw std::logic_error("energy report escapes the Lambda comparability band");
    return rep;
}

AxiomIReport check_axiom_i(const Integrand& ig, const std::vector<MeasuredSet>& fixtures)
{
    AxiomIReport rep;
    for (const MeasuredSet& s : fixtures) {
        EnergyReport e;
        try {
            e = energy(s, ig);
        } catch (const std::exception&) {
            rep.ok = false;
            rep.worst_ratio = std::numeric_limits<double>::infinity();
            continue;
        }
        if (e.hausdorff_mass == 0) continue;
        double ratio = e.total / e.hausdorff_mass;
        double dev = std::max(ratio / ig.lambda, 1.0 / (ratio * ig.lambda));
        // dev > 1 flags a band escape on either side
        if (ratio > ig.lambda * (1 + 1e-9) || ratio < 1.0 / ig.lambda * (1 - 1e-9)) rep.ok = false;
        rep.worst_ratio = std::max(rep.worst_ratio, dev);
    }
    return rep;
}

double unit_disk_measure(int d)
{
    return std::pow(M_PI, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

namespace {

std::vector<double> chart_to_ambient(const std::vector<double>& x, const TangentFrame& v,
                                     const std::vector<double>& u)
{
    std::vector<double> p = x;
    for (std::size_t a = 0; a < v.rows.size(); ++a)
        for (std::size_t i = 0; i < p.size(); ++i) p[i] += u[a] * v.rows[a][i];
    return p;
}

/// Midpoint quadrature nodes (chart coordinates and weights) over the
/// d-dimensional disk of radius r.
std::vector<std::pair<std::vector<double>, double>> disk_nodes(int d, double r)
{
    std::vector<std::pair<std::vector<double>, double>> out;
    if (d == 1) {
        const int m = 512;
        double h = 2 * r / m;
        for (int i = 0; i < m; ++i) out.push_back({{-r + (i + 0.5) * h}, h});
    } else if (d == 2) {
        const int mr = 64, mt = 128;
        double hr = r / mr, ht = 2 * M_PI / mt;
        for (int a = 0; a < mr; ++a) {
            double rho = (a + 0.5) * hr;
            for (int b = 0; b < mt; ++b) {
                double th = (b + 0.5) * ht;
                out.push_back({{rho * std::cos(th), rho * std::sin(th)}, rho * hr * ht});
            }
        }
    } else {
        throw std::invalid_argument("disk quadrature implemented for d in {1,2}");
    }
    return out;
}

} // namespace

double disk_energy(const Integrand& ig, const std::vector<double>& x, const TangentFrame& v,
                   double r, const std::vector<double>* frozen_at)
{
    int d = static_cast<int>(v.rows.size());
    double total = 0;
    for (auto& [u, w] : disk_nodes(d, r)) {
        std::vector<double> p = chart_to_ambient(x, v, u);
        total += w * ig.eval_i(frozen_at ? *frozen_at : p, v);
    }
    return total;
}

AxiomIIReport check_axiom_ii(const Integrand& ig, const std::vector<double>& x,
                             const TangentFrame& v,
                             const std::function<std::vector<double>(const std::vector<double>&)>& f,
                             double r0, int halvings, double band)
{
    int d = static_cast<int>(v.rows.size());
    int n = static_cast<int>(x.size());

    // f(0) = x and Df(0) = inclusion of V
    std::vector<double> zero(d, 0.0);
    std::vector<double> fx = f(zero);
    double err0 = 0;
    for (int i = 0; i < n; ++i) err0 = std::max(err0, std::abs(fx[i] - x[i]));
    if (err0 > 1e-9 * (1 + r0)) throw std::invalid_argument("axiom ii: f(x) != x");
    double h = 1e-5 * r0;
    for (int a = 0; a < d; ++a) {
        std::vector<double> up(d, 0.0), dn(d, 0.0);
        up[a] = h;
        dn[a] = -h;
        std::vector<double> pu = f(up), pd = f(dn);
        for (int i = 0; i < n; ++i) {
            double deriv = (pu[i] - pd[i]) / (2 * h);
            if (std::abs(deriv - v.rows[a][i]) > 1e-3)
                throw std::invalid_argument("axiom ii: Df(x) is not the inclusion of V");
        }
    }

    AxiomIIReport rep;
    double min_i_img = std::numeric_limits<double>::infinity();
    double max_i_img = 0;
    double lip = 1, colip = 1;
    for (int m = 0; m <= halvings; ++m) {
        double r = r0 / std::pow(2.0, m);
        double hh = 1e-4 * r;
        double numer = 0, denom = 0, area_img = 0;
        min_i_img = std::numeric_limits<double>::infinity();
        max_i_img = 0;
        for (auto& [u, w] : disk_nodes(d, r)) {
            std::vector<double> p = f(u);
            // finite-difference tangent frame and Jacobian at u
            std::vector<std::vector<double>> cols;
            for (int a = 0; a < d; ++a) {
                std::vector<double> up = u, dn = u;
                up[a] += hh;
                dn[a] -= hh;
                std::vector<double> pu = f(up), pd = f(dn);
                std::vector<double> der(n);
                for (int i = 0; i < n; ++i) der[i] = (pu[i] - pd[i]) / (2 * hh);
                cols.push_back(std::move(der));
            }
            // Gram determinant
            double jac = 0;
            if (d == 1) {
                double s = 0;
                for (int i = 0; i < n; ++i) s += cols[0][i] * cols[0][i];
                jac = std::sqrt(s);
            } else {
                double g00 = 0, g01 = 0, g11 = 0;
                for (int i = 0; i < n; ++i) {
                    g00 += cols[0][i] * cols[0][i];
                    g01 += cols[0][i] * cols[1][i];
                    g11 += cols[1][i] * cols[1][i];
                }
                jac = std::sqrt(std::max(0.0, g00 * g11 - g01 * g01));
            }
            // orthonormal frame from the columns
            TangentFrame tf;
            for (int a = 0; a < d; ++a) {
                std::vector<double> w2 = cols[a];
                for (const auto& prev : tf.rows) {
                    double c = 0;
                    for (int i = 0; i < n; ++i) c += w2[i] * prev[i];
                    for (int i = 0; i < n; ++i) w2[i] -= c * prev[i];
                }
                double len = 0;
                for (int i = 0; i < n; ++i) len += w2[i] * w2[i];
                len = std::sqrt(len);
                for (int i = 0; i < n; ++i) w2[i] /= len;
                tf.rows.push_back(std::move(w2));
            }
            double iv = ig.eval_i(p, tf);
            min_i_img = std::min(min_i_img, iv);
            max_i_img = std::max(max_i_img, iv);
            numer += w * jac * iv;
            area_img += w * jac;
            std::vector<double> q = chart_to_ambient(x, v, u);
            denom += w * ig.eval_i(q, v);
            // bilipschitz witness against the chart origin direction
            double du = 0, dp = 0;
            for (int a = 0; a < d; ++a) du += u[a] * u[a];
            for (int i = 0; i < n; ++i) dp += (p[i] - fx[i]) * (p[i] - fx[i]);
            if (du > 0) {
                double ratio = std::sqrt(dp / du);
                lip = std::max(lip, ratio);
                colip = std::max(colip, 1.0 / ratio);
            }
        }
        rep.radii.push_back(r);
        rep.ratios.push_back(numer / denom);
        // two-sided sandwich at this radius: the ratio against the flat
        // disk is pinned by the measured bilipschitz constant and the
        // integrand range on the image
        double eps = std::max(lip, colip) - 1;
        double flat_area = unit_disk_measure(d) * std::pow(r, d);
        double q = numer / flat_area;
        double hi_bound = max_i_img * std::pow(1 + eps, d) * 1.05;
        double lo_bound = min_i_img * std::pow(1 + eps, -d) * 0.95;
        if (q > hi_bound || q < lo_bound) rep.sandwich_ok = false;
    }
    rep.bilipschitz_estimate = std::max(lip, colip);
    std::size_t m = rep.ratios.size();
    rep.consistent_with_limit_one = m >= 2 && std::abs(rep.ratios[m - 1] - 1) <= band &&
                                    std::abs(rep.ratios[m - 2] - 1) <= band;
    return rep;
}

namespace {

TangentFrame random_frame(int d, int n, std::mt19937_64& rng)
{
    std::normal_distribution<double> gauss(0, 1);
    TangentFrame f;
    while (static_cast<int>(f.rows.size()) < d) {
        std::vector<double> v(n);
        for (auto& c : v) c = gauss(rng);
        for (const auto& prev : f.rows) {
            double c = 0;
            for (int i = 0; i < n; ++i) c += v[i] * prev[i];
            for (int i = 0; i < n; ++i) v[i] -= c * prev[i];
        }
        double len = 0;
        for (double c : v) len += c * c;
        len = std::sqrt(len);
        if (len < 1e-6) continue;
        for (auto& c : v) c /= len;
        f.rows.push_back(std::move(v));
    }
    return f;
}

} // namespace

double oscillation_epsilon(const Integrand& ig, const std::vector<double>& x, double r, int d,
                           int n, std::uint64_t seed, int base_samples)
{
    double prev = -1;
    int samples = base_samples;
    for (int round = 0; round < 5; ++round) {
        std::mt19937_64 rng(seed + round);
        std::normal_distribution<double> gauss(0, 1);
        std::uniform_real_distribution<double> u01(0, 1);
        double sup_i = 0, sup_j = 0;
        for (int t = 0; t < samples; ++t) {
            std::vector<double> dir(n);
            double len = 0;
            for (auto& c : dir) c = gauss(rng);
            for (double c : dir) len += c * c;
            len = std::sqrt(len);
            if (len < 1e-9) continue;
            // half the samples sit exactly on the boundary sphere where
            // monotone integrands attain the sup
            double rho = (t % 2 == 0) ? r : r * std::pow(u01(rng), 1.0 / n);
            std::vector<double> y = x;
            for (int i = 0; i < n; ++i) y[i] += rho * dir[i] / len;
            TangentFrame w = random_frame(d, n, rng);
            sup_i = std::max(sup_i, std::abs(ig.eval_i(y, w) - ig.eval_i(x, w)));
            sup_j = std::max(sup_j, std::abs(ig.eval_j(y) - ig.eval_j(x)));
        }
        double val = sup_i + sup_j;
        if (prev >= 0 && std::abs(val - prev) <= 0.01 * std::max(val, 1e-12)) return val;
        prev = val;
        samples *= 2;
    }
    return prev;
}

EllipticityReport almgren_to_david(const Integrand& ig, double c, const std::vector<double>& x,
                                   double r, const TangentFrame& v, const MeasuredSet& s,
                                   bool projection_monotone_certified, std::uint64_t seed)
{
    int d = static_cast<int>(v.rows.size());
    int n = static_cast<int>(x.size());
    EllipticityReport rep;
    rep.epsilon_r = oscillation_epsilon(ig, x, r, d, n, seed);
    if (rep.epsilon_r > c)
        throw std::invalid_argument("almgren_to_david: eps(r) > c; take r smaller");
    if (!projection_monotone_certified)
        throw std::invalid_argument("almgren_to_david: projection monotonicity not certified");

    double mass_v = unit_disk_measure(d) * std::pow(r, d);
    double mass_s = s.total_mass();
    if (mass_v > mass_s * (1 + 1e-6) + 1e-12)
        throw std::invalid_argument(
            "almgren_to_david: certified monotonicity contradicts the masses");

    // frozen-coefficient inequality at x
    Integrand frozen;
    frozen.lambda = ig.lambda;
    const Integrand* base = &ig;
    std::vector<double> x0 = x;
    frozen.i = [base, x0](const std::vector<double>&, const TangentFrame& t) {
        return base->i(x0, t);
    };
    frozen.j = [base, x0](const std::vector<double>&) { return base->j(x0); };
    double ix_s = energy(s, frozen).total;
    double ix_v = disk_energy(ig, x, v, r, &x0);
    rep.frozen_inequality_holds = ix_s - ix_v >= c * (mass_s - mass_v) - 1e-6 * (1 + mass_s);

    rep.lhs = disk_energy(ig, x, v, r);
    rep.rhs = energy(s, ig).total + 2 * rep.epsilon_r * unit_disk_measure(d) * std::pow(r, d);
    rep.slack = rep.rhs - rep.lhs;
    return rep;
}

} // namespace plateau
