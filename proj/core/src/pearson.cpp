#include "wpcvi/pearson.hpp"

#include "wpcvi/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace wpcvi {
namespace {

// Rows per reduction leaf. Fixed so the summation tree is independent of threads.
constexpr Eigen::Index kChunkRows = 32;
constexpr double kRelativeSpreadFloor = 1e-24;

}  // namespace

void PearsonAccumulator::add(double x, double y) noexcept {
    ++count_;
    const double n = static_cast<double>(count_);
    const double dx = x - mean_x_;
    const double dy = y - mean_y_;
    mean_x_ += dx / n;
    mean_y_ += dy / n;
    m2_x_ += dx * (x - mean_x_);
    m2_y_ += dy * (y - mean_y_);
    co_ += dx * (y - mean_y_);
}

void PearsonAccumulator::merge(const PearsonAccumulator& other) noexcept {
    if (other.count_ == 0) return;
    if (count_ == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(count_);
    const double nb = static_cast<double>(other.count_);
    const double n = na + nb;
    const double dx = other.mean_x_ - mean_x_;
    const double dy = other.mean_y_ - mean_y_;
    const double f = na * nb / n;
    mean_x_ += dx * nb / n;
    mean_y_ += dy * nb / n;
    m2_x_ += other.m2_x_ + dx * dx * f;
    m2_y_ += other.m2_y_ + dy * dy * f;
    co_ += other.co_ + dx * dy * f;
    count_ += other.count_;
}

bool PearsonAccumulator::degenerate() const noexcept {
    if (count_ < 2) return true;
    // Spread below 1e-12 of the mean magnitude is rounding noise, not signal.
    const double n = static_cast<double>(count_);
    const auto flat = [n](double m2, double mean) { return !(m2 > kRelativeSpreadFloor * n * mean * mean) || !(m2 > 0.0); };
    return flat(m2_x_, mean_x_) || flat(m2_y_, mean_y_);
}

double PearsonAccumulator::correlation() const noexcept {
    if (degenerate()) return 0.0;
    const double r = co_ / (std::sqrt(m2_x_) * std::sqrt(m2_y_));
    return std::clamp(r, -1.0, 1.0);
}

Correlation pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw InvalidInput("pearson: length mismatch");
    PearsonAccumulator acc;
    for (std::size_t i = 0; i < x.size(); ++i) acc.add(x[i], y[i]);
    return {acc.correlation(), acc.degenerate()};
}

Correlation pairwise_distance_correlation(const Matrix& a, const Matrix& b, int threads) {
    if (a.rows() != b.rows()) throw InvalidInput("pairwise correlation: row count mismatch");
    const Eigen::Index n = a.rows();
    if (n < 2) throw InvalidInput("pairwise correlation needs at least 2 rows");

    const auto chunks = static_cast<std::size_t>((n + kChunkRows - 1) / kChunkRows);
    std::vector<PearsonAccumulator> leaves(chunks);
    parallel_for(chunks, threads, [&](std::size_t chunk) {
        const Eigen::Index begin = static_cast<Eigen::Index>(chunk) * kChunkRows;
        const Eigen::Index end = std::min(n, begin + kChunkRows);
        PearsonAccumulator& acc = leaves[chunk];
        for (Eigen::Index i = begin; i < end; ++i) {
            const auto ai = row_span(a, i);
            const auto bi = row_span(b, i);
            for (Eigen::Index j = i + 1; j < n; ++j) {
                acc.add(std::sqrt(squared_distance(ai, row_span(a, j))), std::sqrt(squared_distance(bi, row_span(b, j))));
            }
        }
    });
    // Pairwise tree reduction over adjacent leaves.
    for (std::size_t width = 1; width < leaves.size(); width *= 2) {
        for (std::size_t i = 0; i + width < leaves.size(); i += 2 * width) leaves[i].merge(leaves[i + width]);
    }
    return {leaves.front().correlation(), leaves.front().degenerate()};
}

}  // namespace wpcvi
