#include "plateau/measured_set.hpp"

#include <cmath>
#include <stdexcept>

namespace plateau {

double MeasuredSet::cell_mass() const
{
    if (!cell_part) return 0;
    return to_double(cell_part->cell_mass(d)) * static_cast<double>(cell_part->cell_count(d));
}

double MeasuredSet::sample_mass() const
{
    double m = 0;
    for (const auto& s : samples) m += s.weight;
    return m;
}

double MeasuredSet::total_mass() const { return cell_mass() + sample_mass(); }

MeasuredSet MeasuredSet::from_cells(const CubicalComplex& cells, int d)
{
    MeasuredSet out;
    out.d = d;
    out.cell_part = cells;
    return out;
}

MeasuredSet MeasuredSet::segment(const std::vector<double>& a, const std::vector<double>& b,
                                 std::size_t count)
{
    if (count < 2) throw std::invalid_argument("segment needs at least two samples");
    MeasuredSet out;
    out.d = 1;
    out.ordered_path = true;
    double len2 = 0;
    for (std::size_t i = 0; i < a.size(); ++i) len2 += (b[i] - a[i]) * (b[i] - a[i]);
    double len = std::sqrt(len2);
    TangentFrame frame;
    if (len > 0) {
        std::vector<double> dir(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) dir[i] = (b[i] - a[i]) / len;
        frame.rows.push_back(dir);
    }
    for (std::size_t t = 0; t < count; ++t) {
        double u = static_cast<double>(t) / static_cast<double>(count - 1);
        WeightedSample s;
        s.point.resize(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) s.point[i] = a[i] + u * (b[i] - a[i]);
        s.weight = len / static_cast<double>(count);
        s.tangent = frame;
        out.samples.push_back(std::move(s));
    }
    return out;
}

TangentFrame cell_frame(const Cube& c, int n)
{
    TangentFrame f;
    for (int i = 0; i < n; ++i)
        if (c.spans(i)) {
            std::vector<double> e(n, 0.0);
            e[i] = 1.0;
            f.rows.push_back(std::move(e));
        }
    return f;
}

} // namespace plateau
