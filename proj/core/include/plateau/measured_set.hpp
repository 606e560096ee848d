#ifndef PLATEAU_MEASURED_SET_HPP
#define PLATEAU_MEASURED_SET_HPP

#include "plateau/complex.hpp"

#include <optional>
#include <vector>

namespace plateau {

/// Orthonormal d-frame spanning a tangent plane (rows are basis vectors).
struct TangentFrame {
    std::vector<std::vector<double>> rows;
};

struct WeightedSample {
    std::vector<double> point;
    double weight = 0;
    std::optional<TangentFrame> tangent; // absent = purely unrectifiable part
};

/// A d-dimensional set with mass: an exact cell part (each d-cell carries
/// side^d) and/or a weighted sample cloud approximating the measure.
struct MeasuredSet {
    int d = 1;
    std::optional<CubicalComplex> cell_part;
    std::vector<WeightedSample> samples;
    /// consecutive samples trace a path (enables the polyline estimator)
    bool ordered_path = false;

    double cell_mass() const;
    double sample_mass() const;
    double total_mass() const;

    static MeasuredSet from_cells(const CubicalComplex& cells, int d);
    /// Uniform samples along a segment with total weight = its length.
    static MeasuredSet segment(const std::vector<double>& a, const std::vector<double>& b,
                               std::size_t count);
};

/// Axis-aligned tangent frame of a cubical d-cell.
TangentFrame cell_frame(const Cube& c, int n);

} // namespace plateau

#endif
