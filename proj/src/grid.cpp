#include "aniso/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "aniso/errors.hpp"

namespace aniso {

Grid make_grid(std::vector<int> cells, std::vector<double> half_widths,
               std::int64_t max_cells) {
    if (cells.empty() || cells.size() != half_widths.size())
        throw config_error("grid needs matching per-axis cell counts and half-widths");
    Grid g;
    g.N = static_cast<int>(cells.size());
    g.cells = std::move(cells);
    g.half_widths = std::move(half_widths);
    g.total = 1;
    for (int i = 0; i < g.N; ++i) {
        if (g.cells[static_cast<std::size_t>(i)] < 4)
            throw config_error("each axis needs at least 4 cells");
        if (!(g.half_widths[static_cast<std::size_t>(i)] > 0.0))
            throw config_error("half-widths must be positive");
        g.total *= g.cells[static_cast<std::size_t>(i)];
        if (g.total > max_cells)
            throw config_error("grid exceeds the configured memory cap");
        g.spacing.push_back(2.0 * g.half_widths[static_cast<std::size_t>(i)] /
                            g.cells[static_cast<std::size_t>(i)]);
    }
    g.strides.assign(static_cast<std::size_t>(g.N), 1);
    for (int i = g.N - 2; i >= 0; --i)
        g.strides[static_cast<std::size_t>(i)] =
            g.strides[static_cast<std::size_t>(i + 1)] * g.cells[static_cast<std::size_t>(i + 1)];
    return g;
}

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

InitialShape parse_initial_shape(const std::string& name) {
    if (name == "box-bump") return InitialShape::box_bump;
    if (name == "product-bump") return InitialShape::product_bump;
    if (name == "two-bump") return InitialShape::two_bump;
    throw config_error("unknown initial shape '" + name + "'");
}

ScalarField make_initial_datum(const Grid& grid, InitialShape shape,
                               std::vector<double> R0, double amplitude,
                               double separation) {
    if (R0.size() == 1) R0.assign(static_cast<std::size_t>(grid.N), R0[0]);
    if (static_cast<int>(R0.size()) != grid.N)
        throw config_error("initial radius needs 1 or N entries");
    for (int i = 0; i < grid.N; ++i)
        if (!(R0[static_cast<std::size_t>(i)] > 0.0) ||
            !(R0[static_cast<std::size_t>(i)] < grid.half_widths[static_cast<std::size_t>(i)] / 4.0))
            throw config_error("initial half-width R0 must satisfy 0 < R0 < half-width / 4");
    if (shape == InitialShape::two_bump) {
        if (!(separation > 2.0 * R0[0]))
            throw config_error("two-bump separation must exceed 2*R0 (disjoint bumps)");
        const double reach = separation / 2.0 + R0[0];
        if (!(reach < grid.half_widths[0] - 2.0 * grid.spacing[0]))
            throw config_error("two-bump datum does not fit inside the box");
    }

    ScalarField f;
    f.grid = grid;
    f.time = 0.0;
    f.values.assign(static_cast<std::size_t>(grid.total), 0.0);
    if (amplitude == 0.0)
        return f;

    std::vector<int> idx(static_cast<std::size_t>(grid.N), 0);
    for (std::int64_t k = 0; k < grid.total; ++k) {
        double v = 0.0;
        switch (shape) {
        case InitialShape::box_bump: {
            bool inside = true;
            for (int i = 0; i < grid.N; ++i)
                inside = inside && std::abs(grid.center(i, idx[static_cast<std::size_t>(i)])) <=
                                       R0[static_cast<std::size_t>(i)];
            v = inside ? amplitude : 0.0;
            break;
        }
        case InitialShape::product_bump: {
            double w = amplitude;
            for (int i = 0; i < grid.N; ++i) {
                const double r = grid.center(i, idx[static_cast<std::size_t>(i)]) /
                                 R0[static_cast<std::size_t>(i)];
                w *= std::max(0.0, 1.0 - r * r);
            }
            v = w;
            break;
        }
        case InitialShape::two_bump: {
            bool inside = true;
            for (int i = 1; i < grid.N; ++i)
                inside = inside && std::abs(grid.center(i, idx[static_cast<std::size_t>(i)])) <=
                                       R0[static_cast<std::size_t>(i)];
            const double x0 = grid.center(0, idx[0]);
            inside = inside && (std::abs(x0 - separation / 2.0) <= R0[0] ||
                                std::abs(x0 + separation / 2.0) <= R0[0]);
            v = inside ? amplitude : 0.0;
            break;
        }
        }
        f.values[static_cast<std::size_t>(k)] = v;
        for (int i = grid.N - 1; i >= 0; --i) {
            if (++idx[static_cast<std::size_t>(i)] < grid.cells[static_cast<std::size_t>(i)])
                break;
            idx[static_cast<std::size_t>(i)] = 0;
        }
    }
    return f;
}

} // namespace aniso
