#ifndef PLATEAU_SMITH_HPP
#define PLATEAU_SMITH_HPP

#include "plateau/numeric.hpp"

#include <optional>

namespace plateau {

/// Smith normal form U*M*V = D with U, V unimodular and the diagonal of D
/// a divisibility chain d_1 | d_2 | ... of nonnegative integers.
/// Uinv and Vinv are maintained alongside so chain computations can move
/// between the original and the diagonal basis without inverting anything.
struct SmithForm {
    IntMat u, uinv;  // m x m
    IntMat v, vinv;  // n x n
    IntMat d;        // m x n diagonal
    std::size_t rank = 0;
    IntVec divisors; // the rank positive diagonal entries

    Int diag(std::size_t i) const { return i < rank ? divisors[i] : Int(0); }
};

SmithForm smith_normal_form(const IntMat& m);

/// Integer kernel lattice basis of M: columns span { x : M x = 0 } over Z.
IntMat integer_kernel_basis(const SmithForm& snf);

/// Solves M x = b over Z using a precomputed SNF of M. Empty when no
/// integer solution exists.
std::optional<IntVec> integer_solve(const SmithForm& snf, const IntVec& b);

/// One-shot convenience wrappers.
IntMat integer_kernel_basis(const IntMat& m);
std::optional<IntVec> integer_solve(const IntMat& m, const IntVec& b);

} // namespace plateau

#endif
