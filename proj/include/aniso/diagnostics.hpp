#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "aniso/exponents.hpp"
#include "aniso/grid.hpp"

namespace aniso {

/// Fixed-order pairwise summation: deterministic and far more accurate than
/// a running sum on long series. All norms below use it.
double pairwise_sum(std::span<const double> values);

/// Norms of one snapshot: signed mass, L1, L2, Linf (all with the discrete
/// cell measure prod h_i).
struct NormRecord {
    double mass = 0.0;
    double l1 = 0.0;
    double l2 = 0.0;
    double linf = 0.0;
};

/// Per-axis support radii max{|x_j| : |u| > epsilon} of one snapshot.
struct SupportRecord {
    std::vector<double> radii;
};

/// Exact discrete norms plus thresholded support geometry. epsilon = 0
/// measures exact-zero support, which is meaningful for the explicit scheme
/// in the all-degenerate regime (exact zeros propagate).
std::pair<NormRecord, SupportRecord> measure(const ScalarField& field, double epsilon);

struct NormSeries {
    std::vector<double> times, mass, l1, l2, linf;
};

/// radii[axis][k] tracks axis `axis` at times[k].
struct SupportSeries {
    std::vector<double> times;
    std::vector<std::vector<double>> radii;
    double epsilon = 0.0;
};

/// Power-law fit y - shift ~ exp(log_prefactor) * t^exponent over a time
/// window, by least squares on (log t, log(y - shift)).
struct RateFit {
    double exponent = 0.0;
    double log_prefactor = 0.0;
    double r_squared = 0.0;
    double window_lo = 0.0, window_hi = 0.0;
    int points = 0;
};

/// Fits points with window_lo <= t <= window_hi. Throws contract_error when
/// fewer than 8 such points exist or any windowed y - shift is nonpositive.
RateFit fit_power_law(const std::vector<double>& t, const std::vector<double>& y,
                      double window_lo, double window_hi, double shift = 0.0);

struct AxisComparison {
    int axis = 0;            ///< 1-based label as printed in reports
    double fitted = 0.0;
    double predicted = 0.0;
    double rel_error = 0.0;  ///< (fitted - predicted)/|predicted|
    double r_squared = 0.0;
};

/// Fitted-versus-predicted table for one run, plus monotonicity verdicts.
struct TheoryComparison {
    std::vector<AxisComparison> support; ///< slow axes only
    std::vector<int> skipped_axes;       ///< 1-based axes with p_j <= 2 (no law)
    AxisComparison linf;
    bool l1_nonincreasing = false;       ///< within 1e-8 relative per step
    bool l2_nonincreasing = false;
    double mass_max_rel_dev = 0.0;
    bool mixed_regime = false;           ///< some p_j <= 2: exponent mismatches expected
    double window_lo = 0.0, window_hi = 0.0;
};

/// Fits support radii (per-axis shift shift_scale*R0_j; the growth law's
/// natural shift is 2R0) and the Linf decay on [window_lo, window_hi] and
/// compares against the predicted exponents for `profile`. A single R0 entry
/// broadcasts to every axis. m1 is the initial L1 mass (reported context;
/// the comparison is exponent-level only).
TheoryComparison compare_to_theory(const NormSeries& norms, const SupportSeries& support,
                                   const AnisotropyProfile& profile, double m1,
                                   std::vector<double> R0, double window_lo,
                                   double window_hi, double shift_scale = 2.0);

/// First snapshot time at which the slow-axis annulus
///   r <= max_{slow j} |x_j| <= 2r
/// contains a cell with |u| > epsilon; nullopt when that never happens.
/// Requires r >= 2*R0 and r within every slow-axis half-width.
std::optional<double> annulus_silence(const std::vector<ScalarField>& snapshots,
                                      const std::vector<int>& slow_axes_0based,
                                      double r, double R0, double epsilon);

} // namespace aniso
