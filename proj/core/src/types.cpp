#include "wpcvi/types.hpp"

#include <cmath>
#include <set>

namespace wpcvi {

ParseError::ParseError(const std::string& what, std::size_t row, std::size_t column)
    : Error(what), row_(row), column_(column) {}

DataMatrix::DataMatrix(Matrix points, std::optional<std::vector<int>> labels)
    : points_(std::move(points)), labels_(std::move(labels)) {
    if (points_.rows() < 2) {
        throw InvalidInput("data needs at least 2 points, got " + std::to_string(points_.rows()));
    }
    if (points_.cols() < 1) {
        throw InvalidInput("data needs at least 1 dimension");
    }
    if (!points_.allFinite()) {
        throw InvalidInput("data contains non-finite values");
    }
    if (labels_ && static_cast<Eigen::Index>(labels_->size()) != points_.rows()) {
        throw InvalidInput("label count " + std::to_string(labels_->size()) + " does not match point count " +
                           std::to_string(points_.rows()));
    }
}

int DataMatrix::distinct_labels() const {
    if (!labels_) return 0;
    return static_cast<int>(std::set<int>(labels_->begin(), labels_->end()).size());
}

Vector DataMatrix::centroid() const {
    return points_.colwise().mean().transpose();
}

}  // namespace wpcvi
