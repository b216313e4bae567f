#ifndef WPCVI_TYPES_HPP
#define WPCVI_TYPES_HPP

#include <Eigen/Core>

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wpcvi {

/// Row-major dense matrix; rows are observations (or centroids), columns are features.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Precondition or shape violation on caller-supplied data.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// The computation is mathematically undefined for this input (zero variance,
/// coincident centroids, empty denominators, ...).
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// Malformed file content. Row and column are 1-based; 0 means "not applicable".
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t row, std::size_t column);

    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

/// n points in p dimensions with optional integer class labels.
///
/// Invariants: n >= 2, p >= 1, every coordinate finite, and labels (when
/// present) have exactly n entries. Enforced at construction.
class DataMatrix {
public:
    explicit DataMatrix(Matrix points, std::optional<std::vector<int>> labels = std::nullopt);

    const Matrix& points() const noexcept { return points_; }
    const std::optional<std::vector<int>>& labels() const noexcept { return labels_; }
    bool has_labels() const noexcept { return labels_.has_value(); }

    int n() const noexcept { return static_cast<int>(points_.rows()); }
    int p() const noexcept { return static_cast<int>(points_.cols()); }

    /// Number of distinct label values; 0 when unlabeled.
    int distinct_labels() const;

    /// Mean of all points (the global data centroid).
    Vector centroid() const;

private:
    Matrix points_;
    std::optional<std::vector<int>> labels_;
};

/// Contiguous view of row i of a row-major matrix.
inline std::span<const double> row_span(const Matrix& m, Eigen::Index i) {
    return {m.data() + i * m.cols(), static_cast<std::size_t>(m.cols())};
}

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

}  // namespace wpcvi

#endif  // WPCVI_TYPES_HPP
