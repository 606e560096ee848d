#include "plateau/complex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace plateau {

namespace {

Int rat_floor(const Rat& q)
{
    Int num = numerator(q), den = denominator(q);
    Int d = num / den;
    if (num % den != 0 && num < 0) d -= 1;
    return d;
}

Int rat_ceil(const Rat& q) { return -rat_floor(-q); }

std::int64_t to_i64(const Int& z) { return z.convert_to<std::int64_t>(); }

} // namespace

CubicalComplex::CubicalComplex(int n, Rat side, std::vector<Rat> origin)
    : n_(n), side_(std::move(side)), origin_(std::move(origin))
{
    if (n_ < 1) throw std::invalid_argument("ambient dimension must be >= 1");
    if (side_ <= 0) throw std::invalid_argument("cell side must be positive");
    if (static_cast<int>(origin_.size()) != n_)
        throw std::invalid_argument("origin size does not match ambient dimension");
    cells_.resize(n_ + 1);
}

CubicalComplex CubicalComplex::grid(const RatBox& bbox, const Rat& side,
                                    const std::vector<Rat>& origin)
{
    if (side <= 0) throw std::invalid_argument("grid: side must be positive");
    int n = static_cast<int>(bbox.lo.size());
    if (n < 1 || bbox.hi.size() != bbox.lo.size())
        throw std::invalid_argument("grid: malformed bbox");
    for (int i = 0; i < n; ++i)
        if (!(bbox.lo[i] < bbox.hi[i])) throw std::invalid_argument("grid: empty bbox");

    CubicalComplex out(n, side, origin);

    // Anchor ranges per axis: spanned axes need the closed interval
    // [a s + o, (a+1) s + o] to meet the open bbox; fixed axes need the
    // coordinate strictly inside. Faces of included cells are added below.
    std::vector<std::int64_t> span_min(n), span_max(n), fix_min(n), fix_max(n);
    for (int i = 0; i < n; ++i) {
        Rat lo = (bbox.lo[i] - origin[i]) / side;
        Rat hi = (bbox.hi[i] - origin[i]) / side;
        span_min[i] = to_i64(rat_floor(lo - 1) + 1);
        span_max[i] = to_i64(rat_ceil(hi) - 1);
        fix_min[i] = to_i64(rat_floor(lo) + 1);
        fix_max[i] = to_i64(rat_ceil(hi) - 1);
    }

    std::vector<Cube> found;
    for (std::uint32_t axes = 0; axes < (1u << n); ++axes) {
        std::vector<std::int64_t> lo(n), hi(n);
        bool empty = false;
        for (int i = 0; i < n; ++i) {
            bool s = (axes >> i) & 1u;
            lo[i] = s ? span_min[i] : fix_min[i];
            hi[i] = s ? span_max[i] : fix_max[i];
            if (lo[i] > hi[i]) empty = true;
        }
        if (empty) continue;
        std::vector<std::int64_t> a = lo;
        while (true) {
            found.push_back(Cube{a, axes});
            int i = 0;
            for (; i < n; ++i) {
                if (a[i] < hi[i]) {
                    ++a[i];
                    break;
                }
                a[i] = lo[i];
            }
            if (i == n) break;
        }
    }
    out.insert_all(found);
    return out;
}

double CubicalComplex::diameter_bound() const
{
    return to_double(side_) * std::sqrt(static_cast<double>(n_));
}

int CubicalComplex::dim() const
{
    for (int k = static_cast<int>(cells_.size()) - 1; k >= 0; --k)
        if (!cells_[k].empty()) return k;
    return -1;
}

std::size_t CubicalComplex::cell_count(int k) const
{
    if (k < 0 || k >= static_cast<int>(cells_.size())) return 0;
    return cells_[k].size();
}

std::size_t CubicalComplex::total_cells() const
{
    std::size_t t = 0;
    for (const auto& v : cells_) t += v.size();
    return t;
}

const std::vector<Cube>& CubicalComplex::cells(int k) const
{
    static const std::vector<Cube> empty;
    if (k < 0 || k >= static_cast<int>(cells_.size())) return empty;
    return cells_[k];
}

bool CubicalComplex::contains(const Cube& c) const
{
    int k = c.dim();
    if (k >= static_cast<int>(cells_.size())) return false;
    return std::binary_search(cells_[k].begin(), cells_[k].end(), c);
}

std::size_t CubicalComplex::index_of(const Cube& c) const
{
    int k = c.dim();
    auto it = std::lower_bound(cells_[k].begin(), cells_[k].end(), c);
    if (it == cells_[k].end() || *it != c) throw std::out_of_range("cube not in complex");
    return static_cast<std::size_t>(it - cells_[k].begin());
}

std::vector<std::pair<Cube, int>> CubicalComplex::boundary_faces(const Cube& c)
{
    std::vector<std::pair<Cube, int>> out;
    int pos = 0;
    for (int i = 0; i < 32; ++i) {
        if (!c.spans(i)) continue;
        ++pos; // 1-based position of axis i among spanned axes
        int sign = (pos % 2 == 1) ? 1 : -1;
        Cube upper = c;
        upper.axes &= ~(1u << i);
        upper.anchor[i] += 1;
        Cube lower = c;
        lower.axes &= ~(1u << i);
        out.emplace_back(upper, sign);
        out.emplace_back(lower, -sign);
    }
    return out;
}

std::vector<Cube> CubicalComplex::all_faces(const Cube& c)
{
    std::vector<Cube> out;
    std::vector<Cube> frontier{c};
    std::set<Cube> seen{c};
    while (!frontier.empty()) {
        Cube cur = frontier.back();
        frontier.pop_back();
        for (auto& [f, sign] : boundary_faces(cur)) {
            (void)sign;
            if (seen.insert(f).second) {
                out.push_back(f);
                frontier.push_back(f);
            }
        }
    }
    return out;
}

void CubicalComplex::insert_with_faces(const Cube& c)
{
    if (static_cast<int>(c.anchor.size()) != n_)
        throw std::invalid_argument("cube anchor size mismatch");
    int k = c.dim();
    if (k >= static_cast<int>(cells_.size())) cells_.resize(k + 1);
    cells_[k].push_back(c);
    for (const Cube& f : all_faces(c)) cells_[f.dim()].push_back(f);
    normalize();
}

void CubicalComplex::insert_all(const std::vector<Cube>& cs)
{
    for (const Cube& c : cs) {
        if (static_cast<int>(c.anchor.size()) != n_)
            throw std::invalid_argument("cube anchor size mismatch");
        int k = c.dim();
        if (k >= static_cast<int>(cells_.size())) cells_.resize(k + 1);
        cells_[k].push_back(c);
        for (const Cube& f : all_faces(c)) cells_[f.dim()].push_back(f);
    }
    normalize();
}

void CubicalComplex::normalize()
{
    if (cells_.size() < static_cast<std::size_t>(n_ + 1)) cells_.resize(n_ + 1);
    for (auto& v : cells_) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
}

CubicalComplex CubicalComplex::skeleton(int k) const
{
    if (k < 0 || k > std::max(dim(), 0)) throw std::out_of_range("skeleton: k out of range");
    CubicalComplex out(n_, side_, origin_);
    for (int j = 0; j <= k && j < static_cast<int>(cells_.size()); ++j) out.cells_[j] = cells_[j];
    return out;
}

bool CubicalComplex::same_grid(const CubicalComplex& other) const
{
    return n_ == other.n_ && side_ == other.side_ && origin_ == other.origin_;
}

bool CubicalComplex::is_subcomplex_of(const CubicalComplex& other) const
{
    if (!same_grid(other)) return false;
    for (int k = 0; k < static_cast<int>(cells_.size()); ++k)
        for (const Cube& c : cells_[k])
            if (!other.contains(c)) return false;
    return true;
}

CubicalComplex CubicalComplex::union_with(const CubicalComplex& other) const
{
    if (!same_grid(other)) throw std::invalid_argument("union: grids differ");
    CubicalComplex out = *this;
    for (const auto& level : other.cells_)
        for (const Cube& c : level) out.cells_[c.dim()].push_back(c);
    out.normalize();
    return out;
}

CubicalComplex CubicalComplex::intersection_with(const CubicalComplex& other) const
{
    if (!same_grid(other)) throw std::invalid_argument("intersection: grids differ");
    CubicalComplex out(n_, side_, origin_);
    for (const auto& level : cells_)
        for (const Cube& c : level)
            if (other.contains(c)) out.cells_[c.dim()].push_back(c);
    out.normalize();
    return out;
}

CubicalComplex CubicalComplex::empty_like() const { return CubicalComplex(n_, side_, origin_); }

std::vector<Cube> CubicalComplex::children_of(const Cube& c) const
{
    std::vector<int> axes;
    for (int i = 0; i < n_; ++i)
        if (c.spans(i)) axes.push_back(i);
    std::vector<Cube> out;
    for (std::uint32_t bits = 0; bits < (1u << axes.size()); ++bits) {
        Cube child = c;
        for (int i = 0; i < n_; ++i) child.anchor[i] *= 2;
        for (std::size_t j = 0; j < axes.size(); ++j)
            if ((bits >> j) & 1u) child.anchor[axes[j]] += 1;
        out.push_back(child);
    }
    return out;
}

CubicalComplex CubicalComplex::subdivided() const
{
    CubicalComplex out(n_, side_ / 2, origin_);
    std::vector<Cube> cs;
    for (const auto& level : cells_)
        for (const Cube& c : level)
            for (const Cube& ch : children_of(c)) cs.push_back(ch);
    out.insert_all(cs);
    return out;
}

CubicalComplex CubicalComplex::translated(const std::vector<Rat>& offset) const
{
    CubicalComplex out = *this;
    for (int i = 0; i < n_; ++i) out.origin_[i] += offset[i];
    return out;
}

std::vector<Rat> CubicalComplex::corner_lo(const Cube& c) const
{
    std::vector<Rat> out(n_);
    for (int i = 0; i < n_; ++i) out[i] = origin_[i] + side_ * c.anchor[i];
    return out;
}

std::vector<Rat> CubicalComplex::corner_hi(const Cube& c) const
{
    std::vector<Rat> out = corner_lo(c);
    for (int i = 0; i < n_; ++i)
        if (c.spans(i)) out[i] += side_;
    return out;
}

std::vector<double> CubicalComplex::barycenter(const Cube& c) const
{
    auto lo = corner_lo(c);
    auto hi = corner_hi(c);
    std::vector<double> out(n_);
    for (int i = 0; i < n_; ++i) out[i] = 0.5 * (to_double(lo[i]) + to_double(hi[i]));
    return out;
}

std::vector<std::vector<double>> CubicalComplex::vertex_coords(const Cube& c) const
{
    std::vector<int> axes;
    for (int i = 0; i < n_; ++i)
        if (c.spans(i)) axes.push_back(i);
    auto lo = corner_lo(c);
    std::vector<std::vector<double>> out;
    for (std::uint32_t bits = 0; bits < (1u << axes.size()); ++bits) {
        std::vector<double> p(n_);
        for (int i = 0; i < n_; ++i) p[i] = to_double(lo[i]);
        for (std::size_t j = 0; j < axes.size(); ++j)
            if ((bits >> j) & 1u) p[axes[j]] += to_double(side_);
        out.push_back(std::move(p));
    }
    return out;
}

Rat CubicalComplex::cell_mass(int k) const
{
    Rat m = 1;
    for (int i = 0; i < k; ++i) m *= side_;
    return m;
}

// ---------------------------------------------------------------------------
// SimplicialComplex

SimplicialComplex SimplicialComplex::from_simplexes(const std::vector<Simplex>& top)
{
    SimplicialComplex out;
    for (const Simplex& s : top) out.insert_with_faces(s);
    return out;
}

void SimplicialComplex::insert_with_faces(const Simplex& s_in)
{
    Simplex s = s_in;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
        throw std::invalid_argument("simplex with repeated vertex");
    if (s.empty()) return;
    // all nonempty subsets
    std::size_t n = s.size();
    for (std::uint32_t bits = 1; bits < (1u << n); ++bits) {
        Simplex f;
        for (std::size_t i = 0; i < n; ++i)
            if ((bits >> i) & 1u) f.push_back(s[i]);
        int k = static_cast<int>(f.size()) - 1;
        if (k >= static_cast<int>(cells_.size())) cells_.resize(k + 1);
        cells_[k].push_back(std::move(f));
    }
    for (auto& v : cells_) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
}

int SimplicialComplex::dim() const
{
    for (int k = static_cast<int>(cells_.size()) - 1; k >= 0; --k)
        if (!cells_[k].empty()) return k;
    return -1;
}

std::size_t SimplicialComplex::cell_count(int k) const
{
    if (k < 0 || k >= static_cast<int>(cells_.size())) return 0;
    return cells_[k].size();
}

std::size_t SimplicialComplex::total_cells() const
{
    std::size_t t = 0;
    for (const auto& v : cells_) t += v.size();
    return t;
}

const std::vector<SimplicialComplex::Simplex>& SimplicialComplex::cells(int k) const
{
    static const std::vector<Simplex> empty;
    if (k < 0 || k >= static_cast<int>(cells_.size())) return empty;
    return cells_[k];
}

std::vector<int> SimplicialComplex::vertices() const
{
    std::vector<int> out;
    for (const Simplex& s : cells(0)) out.push_back(s[0]);
    return out;
}

bool SimplicialComplex::contains(const Simplex& s) const
{
    int k = static_cast<int>(s.size()) - 1;
    if (k < 0 || k >= static_cast<int>(cells_.size())) return false;
    return std::binary_search(cells_[k].begin(), cells_[k].end(), s);
}

std::size_t SimplicialComplex::index_of(const Simplex& s) const
{
    int k = static_cast<int>(s.size()) - 1;
    auto it = std::lower_bound(cells_[k].begin(), cells_[k].end(), s);
    if (it == cells_[k].end() || *it != s) throw std::out_of_range("simplex not in complex");
    return static_cast<std::size_t>(it - cells_[k].begin());
}

SimplicialComplex SimplicialComplex::skeleton(int k) const
{
    if (k < 0 || k > std::max(dim(), 0)) throw std::out_of_range("skeleton: k out of range");
    SimplicialComplex out;
    out.cells_.assign(cells_.begin(), cells_.begin() + std::min<std::size_t>(k + 1, cells_.size()));
    return out;
}

bool SimplicialComplex::is_subcomplex_of(const SimplicialComplex& other) const
{
    for (const auto& level : cells_)
        for (const Simplex& s : level)
            if (!other.contains(s)) return false;
    return true;
}

SimplicialComplex SimplicialComplex::union_with(const SimplicialComplex& other) const
{
    SimplicialComplex out = *this;
    if (other.cells_.size() > out.cells_.size()) out.cells_.resize(other.cells_.size());
    for (std::size_t k = 0; k < other.cells_.size(); ++k) {
        auto& dst = out.cells_[k];
        dst.insert(dst.end(), other.cells_[k].begin(), other.cells_[k].end());
        std::sort(dst.begin(), dst.end());
        dst.erase(std::unique(dst.begin(), dst.end()), dst.end());
    }
    return out;
}

SimplicialComplex SimplicialComplex::intersection_with(const SimplicialComplex& other) const
{
    SimplicialComplex out;
    out.cells_.resize(cells_.size());
    for (std::size_t k = 0; k < cells_.size(); ++k)
        for (const Simplex& s : cells_[k])
            if (other.contains(s)) out.cells_[k].push_back(s);
    return out;
}

StarDecomposition SimplicialComplex::star(int p) const
{
    if (!contains({p})) throw std::out_of_range("star: unknown vertex");
    StarDecomposition out;
    out.complement.cells_.resize(cells_.size());
    for (const auto& level : cells_)
        for (const Simplex& s : level) {
            if (std::binary_search(s.begin(), s.end(), p))
                out.open_star.push_back(s);
            else
                out.complement.cells_[s.size() - 1].push_back(s);
        }
    return out;
}

SimplicialSubdivision SimplicialComplex::barycentric_subdivide() const
{
    SimplicialSubdivision out;
    // subdivision vertex ids: canonical enumeration of all simplexes
    out.vertex_of.resize(cells_.size());
    int next = 0;
    for (std::size_t k = 0; k < cells_.size(); ++k) {
        out.vertex_of[k].resize(cells_[k].size());
        for (std::size_t i = 0; i < cells_[k].size(); ++i) out.vertex_of[k][i] = next++;
    }
    auto bary_id = [&](const Simplex& s) { return out.vertex_of[s.size() - 1][index_of(s)]; };

    // maximal simplexes: not a proper face of anything
    std::vector<Simplex> flags;
    std::vector<int> cur;
    auto emit_flags = [&](auto&& self, const Simplex& s) -> void {
        cur.push_back(bary_id(s));
        if (s.size() == 1) {
            Simplex f = cur;
            std::sort(f.begin(), f.end());
            flags.push_back(f);
        } else {
            for (std::size_t drop = 0; drop < s.size(); ++drop) {
                Simplex face;
                for (std::size_t i = 0; i < s.size(); ++i)
                    if (i != drop) face.push_back(s[i]);
                self(self, face);
            }
        }
        cur.pop_back();
    };
    for (const auto& level : cells_)
        for (const Simplex& s : level) {
            bool maximal = true;
            // a simplex is maximal iff no simplex one dimension up contains it
            if (s.size() < cells_.size())
                for (const Simplex& t : cells(static_cast<int>(s.size())))
                    if (std::includes(t.begin(), t.end(), s.begin(), s.end())) {
                        maximal = false;
                        break;
                    }
            if (maximal) emit_flags(emit_flags, s);
        }
    out.complex = from_simplexes(flags);
    return out;
}

// ---------------------------------------------------------------------------
// Chain complexes

bool ChainComplexRep::boundary_squares_to_zero() const
{
    for (std::size_t k = 2; k < boundary.size(); ++k)
        if (!(boundary[k - 1] * boundary[k]).is_zero()) return false;
    return true;
}

ChainComplexRep chain_complex(const CubicalComplex& k)
{
    ChainComplexRep out;
    int top = std::max(k.dim(), 0);
    out.cells.resize(top + 1);
    for (int d = 0; d <= top; ++d) out.cells[d] = k.cell_count(d);
    out.boundary.resize(top + 1);
    out.boundary[0] = IntMat(0, out.cells[0]);
    for (int d = 1; d <= top; ++d) {
        IntMat b(out.cells[d - 1], out.cells[d]);
        const auto& cs = k.cells(d);
        for (std::size_t j = 0; j < cs.size(); ++j)
            for (const auto& [face, sign] : CubicalComplex::boundary_faces(cs[j]))
                b(k.index_of(face), j) += sign;
        out.boundary[d] = std::move(b);
    }
    return out;
}

ChainComplexRep chain_complex(const SimplicialComplex& k)
{
    ChainComplexRep out;
    int top = std::max(k.dim(), 0);
    out.cells.resize(top + 1);
    for (int d = 0; d <= top; ++d) out.cells[d] = k.cell_count(d);
    out.boundary.resize(top + 1);
    out.boundary[0] = IntMat(0, out.cells[0]);
    for (int d = 1; d <= top; ++d) {
        IntMat b(out.cells[d - 1], out.cells[d]);
        const auto& cs = k.cells(d);
        for (std::size_t j = 0; j < cs.size(); ++j) {
            const auto& s = cs[j];
            int sign = 1;
            for (std::size_t drop = 0; drop < s.size(); ++drop) {
                SimplicialComplex::Simplex face;
                for (std::size_t i = 0; i < s.size(); ++i)
                    if (i != drop) face.push_back(s[i]);
                b(k.index_of(face), j) += sign;
                sign = -sign;
            }
        }
        out.boundary[d] = std::move(b);
    }
    return out;
}

SimplexChain simplex_chain_boundary(const SimplexChain& c)
{
    SimplexChain out;
    for (const auto& [s, coeff] : c) {
        if (s.size() < 2) continue;
        int sign = 1;
        for (std::size_t drop = 0; drop < s.size(); ++drop) {
            std::vector<int> face;
            for (std::size_t i = 0; i < s.size(); ++i)
                if (i != drop) face.push_back(s[i]);
            out[face] += sign * coeff;
            sign = -sign;
        }
    }
    std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
    return out;
}

namespace {

// cone from vertex b: [b, s] re-sorted with sign
void add_cone(SimplexChain& acc, int b, const SimplexChain& c, const Int& scale)
{
    for (const auto& [s, coeff] : c) {
        std::vector<int> t;
        t.reserve(s.size() + 1);
        std::size_t pos = 0;
        while (pos < s.size() && s[pos] < b) ++pos;
        t.insert(t.end(), s.begin(), s.begin() + pos);
        t.push_back(b);
        t.insert(t.end(), s.begin() + pos, s.end());
        int sign = (pos % 2 == 0) ? 1 : -1;
        acc[t] += sign * coeff * scale;
    }
}

} // namespace

IntVec subdivide_simplicial_chain(const SimplicialComplex& k_complex, int k, const IntVec& coeffs,
                                  const SimplicialSubdivision& sd)
{
    std::map<std::vector<int>, SimplexChain> memo;
    auto bary_id = [&](const std::vector<int>& s) {
        return sd.vertex_of[s.size() - 1][k_complex.index_of(s)];
    };
    auto sd_of = [&](auto&& self, const std::vector<int>& s) -> const SimplexChain& {
        auto it = memo.find(s);
        if (it != memo.end()) return it->second;
        SimplexChain result;
        if (s.size() == 1) {
            result[{bary_id(s)}] = 1;
        } else {
            SimplexChain boundary_sd;
            int sign = 1;
            for (std::size_t drop = 0; drop < s.size(); ++drop) {
                std::vector<int> face;
                for (std::size_t i = 0; i < s.size(); ++i)
                    if (i != drop) face.push_back(s[i]);
                const SimplexChain& fsd = self(self, face);
                for (const auto& [t, c] : fsd) boundary_sd[t] += sign * c;
                sign = -sign;
            }
            add_cone(result, bary_id(s), boundary_sd, 1);
        }
        std::erase_if(result, [](const auto& kv) { return kv.second == 0; });
        return memo[s] = std::move(result);
    };

    SimplexChain total;
    const auto& cs = k_complex.cells(k);
    for (std::size_t j = 0; j < cs.size(); ++j) {
        if (coeffs[j] == 0) continue;
        for (const auto& [t, c] : sd_of(sd_of, cs[j])) total[t] += coeffs[j] * c;
    }
    IntVec out(sd.complex.cell_count(k));
    for (const auto& [t, c] : total) {
        if (c == 0) continue;
        out[sd.complex.index_of(t)] = c;
    }
    return out;
}

IntVec subdivide_cubical_chain(const CubicalComplex& before, int k, const IntVec& coeffs,
                               const CubicalComplex& after)
{
    IntVec out(after.cell_count(k));
    const auto& cs = before.cells(k);
    for (std::size_t j = 0; j < cs.size(); ++j) {
        if (coeffs[j] == 0) continue;
        for (const Cube& ch : before.children_of(cs[j])) out[after.index_of(ch)] += coeffs[j];
    }
    return out;
}

std::vector<std::pair<std::vector<std::vector<std::int64_t>>, int>> kuhn_simplices(const Cube& c)
{
    std::vector<int> axes;
    for (int i = 0; i < 32; ++i)
        if (c.spans(i)) axes.push_back(i);
    std::vector<int> perm(axes.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::pair<std::vector<std::vector<std::int64_t>>, int>> out;
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < perm.size(); ++i)
            for (std::size_t j = i + 1; j < perm.size(); ++j)
                if (perm[i] > perm[j]) ++inversions;
        std::vector<std::vector<std::int64_t>> path;
        std::vector<std::int64_t> v = c.anchor;
        path.push_back(v);
        for (std::size_t step = 0; step < perm.size(); ++step) {
            v[axes[perm[step]]] += 1;
            path.push_back(v);
        }
        out.emplace_back(std::move(path), inversions % 2 == 0 ? 1 : -1);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

} // namespace plateau
