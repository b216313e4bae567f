#ifndef WPCVI_PEARSON_HPP
#define WPCVI_PEARSON_HPP

#include "wpcvi/types.hpp"

#include <cstdint>
#include <span>

namespace wpcvi {

/// Streaming co-moment accumulator (Welford update, Chan merge).
///
/// Accumulates means, second moments and the cross moment of (x, y) pairs in
/// one pass without storing them. Merging two accumulators is exact up to
/// rounding, which allows a fixed-shape reduction tree over chunks.
class PearsonAccumulator {
public:
    void add(double x, double y) noexcept;
    void merge(const PearsonAccumulator& other) noexcept;

    std::int64_t count() const noexcept { return count_; }
    double mean_x() const noexcept { return mean_x_; }
    double mean_y() const noexcept { return mean_y_; }
    double m2_x() const noexcept { return m2_x_; }
    double m2_y() const noexcept { return m2_y_; }
    double comoment() const noexcept { return co_; }

    /// True when either side has zero spread (correlation undefined).
    bool degenerate() const noexcept;

    /// Pearson r clamped to [-1, 1]; 0 when degenerate.
    double correlation() const noexcept;

private:
    std::int64_t count_ = 0;
    double mean_x_ = 0.0;
    double mean_y_ = 0.0;
    double m2_x_ = 0.0;
    double m2_y_ = 0.0;
    double co_ = 0.0;
};

struct Correlation {
    double value = 0.0;
    bool degenerate = false;
};

Correlation pearson(std::span<const double> x, std::span<const double> y);

/// Pearson correlation between the pairwise Euclidean distances of `a` and of
/// `b` (same row count), over all pairs i < j, without materialising either
/// distance vector. Rows are processed in fixed-size chunks reduced in a fixed
/// tree order, so the result is bit-identical for any thread count.
Correlation pairwise_distance_correlation(const Matrix& a, const Matrix& b, int threads = 1);

}  // namespace wpcvi

#endif  // WPCVI_PEARSON_HPP
