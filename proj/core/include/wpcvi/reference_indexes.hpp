#ifndef WPCVI_REFERENCE_INDEXES_HPP
#define WPCVI_REFERENCE_INDEXES_HPP

#include "wpcvi/fcm.hpp"
#include "wpcvi/types.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wpcvi {

/// Every validity index the toolkit reports. WP lives in wp_index.hpp; the
/// rest are the comparison indexes implemented here.
enum class IndexName { WP, XB, PBM, Tang, WL, GC, Kwon2 };

enum class Direction { Min, Max };

std::string_view to_string(IndexName name) noexcept;
std::optional<IndexName> parse_index_name(std::string_view text);
Direction direction_of(IndexName name) noexcept;

/// The six comparison indexes in report order.
std::vector<IndexName> reference_index_names();
/// WP followed by the six comparison indexes.
std::vector<IndexName> all_index_names();

/// Relational product used by the generalized C index.
enum class GcProduct { SumMin, SumProduct, MaxProduct, MaxMin };

/// Xie-Beni. Throws DegenerateError when two centroids coincide.
double xb(const DataMatrix& data, const FcmModel& model);

/// Pakhira-Bandyopadhyay-Maulik. Throws DegenerateError on a zero compactness term.
double pbm(const DataMatrix& data, const FcmModel& model);

/// Tang; the 1/c terms keep it finite for coincident centroids.
double tang(const DataMatrix& data, const FcmModel& model);

/// Wu-Li, with the median over unordered centroid pairs (mean of the central
/// pair for even counts). Throws DegenerateError on coincident centroids or an
/// empty membership column.
double wl(const DataMatrix& data, const FcmModel& model);

/// Generalized C index (normalised generalized Hubert's gamma).
///
/// Gamma sums r_ij * ||x_i - x_j|| over all pairs. Its bounds sum the first
/// n_ws products after sorting distances descending and r descending (max) or
/// ascending (min), each sequence sorted on its own.
double gc(const DataMatrix& data, const FcmModel& model, GcProduct product = GcProduct::SumMin);

/// Kwon2 with membership exponent 2^sqrt(m/2).
double kwon2(const DataMatrix& data, const FcmModel& model, double m);

/// Evaluates one comparison index (not WP) on a fitted model.
double evaluate_index(IndexName name, const DataMatrix& data, const FcmModel& model, double m);

struct IndexValue {
    IndexName name = IndexName::XB;
    int c = 0;
    double value = 0.0;
    Direction direction = Direction::Min;
    bool degenerate = false;
    std::string note;  // reason when degenerate
};

struct IndexSeries {
    IndexName name = IndexName::XB;
    Direction direction = Direction::Min;
    std::vector<IndexValue> values;  // ascending c
    /// Non-degenerate counts, best first; ties go to the smaller c.
    std::vector<int> ranking;
};

struct CviReport {
    std::vector<IndexSeries> indexes;

    const IndexSeries* find(IndexName name) const;
};

/// Ranks non-degenerate entries of a series by its direction.
std::vector<int> rank_index_values(std::span<const IndexValue> values, Direction direction);

/// Evaluates each selected comparison index at each c in [cmin, cmax].
/// Degenerate evaluations are recorded and left out of the ranking. WP in the
/// selection is ignored here.
CviReport compute_all(const DataMatrix& data, const std::map<int, FcmModel>& models, double m,
                      std::span<const IndexName> selection, int cmin, int cmax);

}  // namespace wpcvi

#endif  // WPCVI_REFERENCE_INDEXES_HPP
