#ifndef PLATEAU_COMPLEX_HPP
#define PLATEAU_COMPLEX_HPP

#include "plateau/numeric.hpp"

#include <bit>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace plateau {

/// An elementary cube: anchor in grid coordinates plus the set of spanned
/// axes as a bitmask. Geometry (side, origin) lives on the complex.
struct Cube {
    std::vector<std::int64_t> anchor;
    std::uint32_t axes = 0;

    int dim() const { return std::popcount(axes); }
    bool spans(int axis) const { return (axes >> axis) & 1u; }

    auto operator<=>(const Cube&) const = default;
};

struct RatBox {
    std::vector<Rat> lo, hi; // lo[i] < hi[i] required per axis
};

class CubicalComplex {
public:
    CubicalComplex() = default;
    CubicalComplex(int n, Rat side, std::vector<Rat> origin);

    /// Full grid complex: every cell whose closure meets the open interior
    /// of bbox, closed under faces.
    static CubicalComplex grid(const RatBox& bbox, const Rat& side,
                               const std::vector<Rat>& origin);

    int ambient_dim() const { return n_; }
    const Rat& side() const { return side_; }
    const std::vector<Rat>& origin() const { return origin_; }
    /// Diameter bound for cells: side * sqrt(n).
    double diameter_bound() const;

    int dim() const; // max dimension with cells, -1 when empty
    std::size_t cell_count(int k) const;
    std::size_t total_cells() const;
    const std::vector<Cube>& cells(int k) const;

    bool contains(const Cube& c) const;
    /// Index of c in the canonical (sorted) basis of its dimension.
    std::size_t index_of(const Cube& c) const;

    void insert_with_faces(const Cube& c);
    /// Inserts all cells of a list, closing under faces.
    void insert_all(const std::vector<Cube>& cs);

    /// Faces of a cube with boundary signs, ordered deterministically.
    static std::vector<std::pair<Cube, int>> boundary_faces(const Cube& c);
    /// All proper faces (every dimension).
    static std::vector<Cube> all_faces(const Cube& c);

    CubicalComplex skeleton(int k) const;
    bool is_subcomplex_of(const CubicalComplex& other) const;
    bool same_grid(const CubicalComplex& other) const;

    CubicalComplex union_with(const CubicalComplex& other) const;
    CubicalComplex intersection_with(const CubicalComplex& other) const;
    CubicalComplex empty_like() const;

    /// Halves the side; each cell maps to its 2^dim children.
    CubicalComplex subdivided() const;
    std::vector<Cube> children_of(const Cube& c) const;

    /// Translate the grid origin (cells keep their anchors).
    CubicalComplex translated(const std::vector<Rat>& offset) const;

    // Geometry.
    std::vector<Rat> corner_lo(const Cube& c) const;
    std::vector<Rat> corner_hi(const Cube& c) const;
    std::vector<double> barycenter(const Cube& c) const;
    std::vector<std::vector<double>> vertex_coords(const Cube& c) const;
    /// H^k mass of a k-cell: side^k.
    Rat cell_mass(int k) const;

    bool operator==(const CubicalComplex& other) const = default;

private:
    int n_ = 0;
    Rat side_ = 1;
    std::vector<Rat> origin_;
    std::vector<std::vector<Cube>> cells_; // by dimension, each sorted
    void normalize();
    friend struct ChainComplexBuilder;
};

struct StarDecomposition;
struct SimplicialSubdivision;

/// Abstract simplicial complex on integer vertex ids; simplexes stored as
/// sorted vertex tuples, closed under subsets.
class SimplicialComplex {
public:
    using Simplex = std::vector<int>;

    SimplicialComplex() = default;
    static SimplicialComplex from_simplexes(const std::vector<Simplex>& top);

    int dim() const;
    std::size_t cell_count(int k) const;
    std::size_t total_cells() const;
    const std::vector<Simplex>& cells(int k) const;
    std::vector<int> vertices() const;

    bool contains(const Simplex& s) const;
    std::size_t index_of(const Simplex& s) const;

    void insert_with_faces(const Simplex& s);

    SimplicialComplex skeleton(int k) const;
    bool is_subcomplex_of(const SimplicialComplex& other) const;
    SimplicialComplex union_with(const SimplicialComplex& other) const;
    SimplicialComplex intersection_with(const SimplicialComplex& other) const;

    /// Open star of p and the complement subcomplex {s : p not in s}.
    StarDecomposition star(int p) const;

    /// Barycentric subdivision with the simplex-to-barycenter vertex table.
    SimplicialSubdivision barycentric_subdivide() const;

    bool operator==(const SimplicialComplex& other) const = default;

private:
    std::vector<std::vector<Simplex>> cells_; // by dimension, sorted
};

struct StarDecomposition {
    std::vector<SimplicialComplex::Simplex> open_star;
    SimplicialComplex complement;
};

struct SimplicialSubdivision {
    SimplicialComplex complex;
    // vertex id of the barycenter of cells(k)[i]
    std::vector<std::vector<int>> vertex_of;
};

/// Chain complex of a finite cubical or simplicial complex: integer
/// boundary matrices with the canonical basis order of the complex.
struct ChainComplexRep {
    std::vector<std::size_t> cells;  // count per dimension 0..dim
    std::vector<IntMat> boundary;    // boundary[k]: cells[k-1] x cells[k]; boundary[0]: 0 x cells[0]

    int dim() const { return static_cast<int>(cells.size()) - 1; }
    /// Verifies boundary[k-1] * boundary[k] == 0 for all k.
    bool boundary_squares_to_zero() const;
};

ChainComplexRep chain_complex(const CubicalComplex& k);
ChainComplexRep chain_complex(const SimplicialComplex& k);

/// Sparse chain with canonical-tuple keys, used by subdivision chain maps.
using SimplexChain = std::map<std::vector<int>, Int>;

/// Boundary of a simplex chain (alternating-sign face sum).
SimplexChain simplex_chain_boundary(const SimplexChain& c);

/// Barycentric subdivision operator on chains of K: the image of the
/// degree-k chain `coeffs` (over cells(k) of K) in the subdivided complex.
IntVec subdivide_simplicial_chain(const SimplicialComplex& k_complex, int k,
                                  const IntVec& coeffs, const SimplicialSubdivision& sd);

/// Dyadic subdivision operator on cubical chains: each cell maps to the sum
/// of its children.
IntVec subdivide_cubical_chain(const CubicalComplex& before, int k, const IntVec& coeffs,
                               const CubicalComplex& after);

/// Kuhn triangulation of a cube: list of (ordered vertex anchors, sign)
/// whose signed sum is a chain-map image of the cube.
std::vector<std::pair<std::vector<std::vector<std::int64_t>>, int>> kuhn_simplices(const Cube& c);

} // namespace plateau

#endif
