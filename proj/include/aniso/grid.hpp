#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace aniso {

/// Cell-centered rectangular grid on the box prod_i [-L_i, L_i].
/// Cell k along axis i has center -L_i + (k + 1/2) h_i with h_i = 2 L_i / n_i.
/// Values are stored row-major with the LAST axis contiguous.
struct Grid {
    int N = 0;
    std::vector<int> cells;          ///< n_i >= 4 per axis
    std::vector<double> half_widths; ///< L_i > 0 per axis
    std::vector<double> spacing;     ///< h_i = 2 L_i / n_i
    std::vector<std::int64_t> strides;
    std::int64_t total = 0;

    /// Center coordinate of cell index k along axis i.
    double center(int axis, int k) const {
        return -half_widths[static_cast<std::size_t>(axis)] +
               (static_cast<double>(k) + 0.5) * spacing[static_cast<std::size_t>(axis)];
    }

    /// Product of all spacings (cell volume).
    double cell_volume() const {
        double v = 1.0;
        for (double h : spacing) v *= h;
        return v;
    }
};

/// Builds and validates a grid. Throws config_error when a cell count is
/// below 4, a half-width is nonpositive, or the total cell count exceeds
/// max_cells (memory cap).
Grid make_grid(std::vector<int> cells, std::vector<double> half_widths,
               std::int64_t max_cells = std::int64_t(1) << 28);

/// Solution snapshot: one value per cell at a fixed time.
struct ScalarField {
    Grid grid;
    std::vector<double> values;
    double time = 0.0;

    double max_abs() const;
};

enum class InitialShape { box_bump, product_bump, two_bump };

InitialShape parse_initial_shape(const std::string& name);

/// Nonnegative compactly supported initial datum. R0 holds per-axis support
/// half-widths (a single entry broadcasts to every axis).
///  - box_bump: amplitude * indicator of the R0-box around the origin.
///  - product_bump: amplitude * prod_i max(0, 1 - (x_i/R0_i)^2).
///  - two_bump: two disjoint box bumps centered at +-(separation/2) along
///    axis 0 (support radius separation/2 + R0_0 along that axis).
/// Requires R0_i < L_i / 4; two_bump additionally requires the bumps to
/// fit strictly inside the box with a one-cell margin.
ScalarField make_initial_datum(const Grid& grid, InitialShape shape,
                               std::vector<double> R0, double amplitude,
                               double separation = 0.0);

} // namespace aniso
