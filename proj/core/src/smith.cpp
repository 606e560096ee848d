#include "plateau/smith.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace plateau {

Rat parse_rational(const std::string& s)
{
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(Int(s));
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("rational with zero denominator: " + s);
    return Rat(num, den);
}

std::string rational_to_string(const Rat& q)
{
    std::ostringstream os;
    os << numerator(q);
    if (denominator(q) != 1) os << "/" << denominator(q);
    return os.str();
}

std::size_t rational_rank(const IntMat& m)
{
    // Bareiss fraction-free elimination.
    std::size_t rows = m.rows(), cols = m.cols();
    if (rows == 0 || cols == 0) return 0;
    IntMat a = m;
    Int prev = 1;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rank;
        while (piv < rows && a(piv, c) == 0) ++piv;
        if (piv == rows) continue;
        if (piv != rank)
            for (std::size_t j = 0; j < cols; ++j) std::swap(a(piv, j), a(rank, j));
        for (std::size_t i = rank + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j)
                a(i, j) = (a(rank, c) * a(i, j) - a(i, c) * a(rank, j)) / prev;
            a(i, c) = 0;
        }
        prev = a(rank, c);
        ++rank;
    }
    return rank;
}

bool rational_solve(const RatMat& a, const std::vector<Rat>& b, std::vector<Rat>& x)
{
    std::size_t rows = a.rows(), cols = a.cols();
    RatMat aug(rows, cols + 1);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) aug(i, j) = a(i, j);
        aug(i, cols) = b[i];
    }
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && aug(piv, c) == 0) ++piv;
        if (piv == rows) continue;
        if (piv != r)
            for (std::size_t j = 0; j <= cols; ++j) std::swap(aug(piv, j), aug(r, j));
        Rat inv = aug(r, c);
        for (std::size_t j = c; j <= cols; ++j) aug(r, j) /= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || aug(i, c) == 0) continue;
            Rat f = aug(i, c);
            for (std::size_t j = c; j <= cols; ++j) aug(i, j) -= f * aug(r, j);
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < rows; ++i)
        if (aug(i, cols) != 0) return false;
    x.assign(cols, Rat(0));
    for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = aug(i, cols);
    return true;
}

namespace {

struct Worker {
    IntMat d, u, uinv, v, vinv;
    std::size_t m, n;

    explicit Worker(const IntMat& a)
        : d(a),
          u(IntMat::identity(a.rows())),
          uinv(IntMat::identity(a.rows())),
          v(IntMat::identity(a.cols())),
          vinv(IntMat::identity(a.cols())),
          m(a.rows()),
          n(a.cols())
    {
    }

    void swap_rows(std::size_t i, std::size_t j)
    {
        if (i == j) return;
        for (std::size_t k = 0; k < n; ++k) std::swap(d(i, k), d(j, k));
        for (std::size_t k = 0; k < m; ++k) std::swap(u(i, k), u(j, k));
        for (std::size_t k = 0; k < m; ++k) std::swap(uinv(k, i), uinv(k, j));
    }

    void swap_cols(std::size_t i, std::size_t j)
    {
        if (i == j) return;
        for (std::size_t k = 0; k < m; ++k) std::swap(d(k, i), d(k, j));
        for (std::size_t k = 0; k < n; ++k) std::swap(v(k, i), v(k, j));
        for (std::size_t k = 0; k < n; ++k) std::swap(vinv(i, k), vinv(j, k));
    }

    // row i += c * row j
    void add_row(std::size_t i, std::size_t j, const Int& c)
    {
        if (c == 0) return;
        for (std::size_t k = 0; k < n; ++k)
            if (d(j, k) != 0) d(i, k) += c * d(j, k);
        for (std::size_t k = 0; k < m; ++k)
            if (u(j, k) != 0) u(i, k) += c * u(j, k);
        for (std::size_t k = 0; k < m; ++k)
            if (uinv(k, i) != 0) uinv(k, j) -= c * uinv(k, i);
    }

    // col i += c * col j
    void add_col(std::size_t i, std::size_t j, const Int& c)
    {
        if (c == 0) return;
        for (std::size_t k = 0; k < m; ++k)
            if (d(k, j) != 0) d(k, i) += c * d(k, j);
        for (std::size_t k = 0; k < n; ++k)
            if (v(k, j) != 0) v(k, i) += c * v(k, j);
        for (std::size_t k = 0; k < n; ++k)
            if (vinv(i, k) != 0) vinv(j, k) -= c * vinv(i, k);
    }

    void negate_row(std::size_t i)
    {
        for (std::size_t k = 0; k < n; ++k) d(i, k) = -d(i, k);
        for (std::size_t k = 0; k < m; ++k) u(i, k) = -u(i, k);
        for (std::size_t k = 0; k < m; ++k) uinv(k, i) = -uinv(k, i);
    }

    bool find_min_pivot(std::size_t t, std::size_t& pi, std::size_t& pj) const
    {
        bool found = false;
        Int best;
        for (std::size_t i = t; i < m; ++i)
            for (std::size_t j = t; j < n; ++j) {
                if (d(i, j) == 0) continue;
                Int a = abs(d(i, j));
                if (!found || a < best) {
                    found = true;
                    best = a;
                    pi = i;
                    pj = j;
                }
            }
        return found;
    }

    bool lone_pivot(std::size_t t) const
    {
        for (std::size_t i = t + 1; i < m; ++i)
            if (d(i, t) != 0) return false;
        for (std::size_t j = t + 1; j < n; ++j)
            if (d(t, j) != 0) return false;
        return true;
    }
};

} // namespace

SmithForm smith_normal_form(const IntMat& a)
{
    Worker w(a);
    std::size_t steps = std::min(w.m, w.n);
    for (std::size_t t = 0; t < steps; ++t) {
        std::size_t pi, pj;
        if (!w.find_min_pivot(t, pi, pj)) break;
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        while (true) {
            // Clear column and row t with quotient reductions; a remainder
            // smaller than the pivot becomes the next pivot.
            bool reduced = false;
            for (std::size_t i = t + 1; i < w.m; ++i) {
                if (w.d(i, t) == 0) continue;
                Int q = w.d(i, t) / w.d(t, t);
                w.add_row(i, t, -q);
                if (w.d(i, t) != 0) reduced = true;
            }
            for (std::size_t j = t + 1; j < w.n; ++j) {
                if (w.d(t, j) == 0) continue;
                Int q = w.d(t, j) / w.d(t, t);
                w.add_col(j, t, -q);
                if (w.d(t, j) != 0) reduced = true;
            }
            if (reduced || !w.lone_pivot(t)) {
                std::size_t pi2, pj2;
                w.find_min_pivot(t, pi2, pj2);
                w.swap_rows(t, pi2);
                w.swap_cols(t, pj2);
                continue;
            }
            // Divisibility sweep: the pivot must divide the remaining submatrix.
            bool fixed = true;
            for (std::size_t i = t + 1; i < w.m && fixed; ++i)
                for (std::size_t j = t + 1; j < w.n && fixed; ++j)
                    if (w.d(i, j) % w.d(t, t) != 0) {
                        w.add_row(t, i, 1);
                        fixed = false;
                    }
            if (fixed) break;
        }
        if (w.d(t, t) < 0) w.negate_row(t);
    }

    SmithForm out;
    out.u = std::move(w.u);
    out.uinv = std::move(w.uinv);
    out.v = std::move(w.v);
    out.vinv = std::move(w.vinv);
    out.d = std::move(w.d);
    for (std::size_t t = 0; t < steps; ++t) {
        if (out.d(t, t) == 0) break;
        out.divisors.push_back(out.d(t, t));
    }
    out.rank = out.divisors.size();
    return out;
}

IntMat integer_kernel_basis(const SmithForm& snf)
{
    std::size_t n = snf.v.rows();
    std::size_t z = n - snf.rank;
    IntMat basis(n, z);
    for (std::size_t j = 0; j < z; ++j)
        for (std::size_t i = 0; i < n; ++i) basis(i, j) = snf.v(i, snf.rank + j);
    return basis;
}

std::optional<IntVec> integer_solve(const SmithForm& snf, const IntVec& b)
{
    std::size_t m = snf.u.rows(), n = snf.v.rows();
    if (b.size() != m) throw std::invalid_argument("integer_solve: size mismatch");
    IntVec c = snf.u.apply(b);
    IntVec y(n);
    for (std::size_t i = 0; i < m; ++i) {
        if (i < snf.rank) {
            if (c[i] % snf.divisors[i] != 0) return std::nullopt;
            if (i < n) y[i] = c[i] / snf.divisors[i];
        } else if (c[i] != 0) {
            return std::nullopt;
        }
    }
    return snf.v.apply(y);
}

IntMat integer_kernel_basis(const IntMat& m) { return integer_kernel_basis(smith_normal_form(m)); }

std::optional<IntVec> integer_solve(const IntMat& m, const IntVec& b)
{
    return integer_solve(smith_normal_form(m), b);
}

} // namespace plateau
