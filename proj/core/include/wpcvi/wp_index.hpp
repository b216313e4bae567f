#ifndef WPCVI_WP_INDEX_HPP
#define WPCVI_WP_INDEX_HPP

#include "wpcvi/fcm.hpp"
#include "wpcvi/types.hpp"

#include <map>
#include <set>
#include <string_view>
#include <vector>

namespace wpcvi {

/// How the correlation at c = 1 is defined.
enum class Wpc1Mode {
    Zero,     ///< WPC(1) = 0
    SdRatio,  ///< SD of distances to the data centroid over their range
};

std::string_view to_string(Wpc1Mode mode) noexcept;

struct WpConfig {
    /// Exponent applied to memberships when forming adjusted centroids.
    double gamma = 7.0;
    int cmin = 2;
    int cmax = 10;
    Wpc1Mode wpc1_mode = Wpc1Mode::SdRatio;
    int threads = 1;

    /// 7 m^2 / 4.
    static double default_gamma(double m) noexcept { return 7.0 * m * m / 4.0; }

    /// Config with gamma derived from the FCM fuzziness.
    static WpConfig for_fuzziness(double m, int cmin, int cmax, Wpc1Mode mode = Wpc1Mode::SdRatio);

    /// Throws InvalidInput unless gamma > 0 and 2 <= cmin <= cmax <= n - 1.
    void validate(int n) const;

    /// Smallest c that must be fitted: 2 when cmin == 2, otherwise cmin - 1.
    int first_fitted_c() const noexcept { return cmin == 2 ? 2 : cmin - 1; }
    /// Largest c that must be fitted (cmax + 1).
    int last_fitted_c() const noexcept { return cmax + 1; }
};

struct WpcValue {
    double value = 0.0;
    bool degenerate = false;
};

struct WpcSeries {
    std::map<int, double> values;
    /// Counts whose correlation was undefined and replaced by 0.
    std::set<int> degenerate;
    Wpc1Mode mode_used = Wpc1Mode::SdRatio;

    double at(int c) const;
    bool contains(int c) const { return values.count(c) != 0; }
};

enum class WpCase { Case1, Case2, Case3 };

std::string_view to_string(WpCase c) noexcept;

struct WpReport {
    std::map<int, double> wpi1;  // may hold +/-infinity
    std::map<int, double> wpi2;
    std::map<int, double> wp;    // always finite
    std::vector<int> ranking;    // wp descending, ties to smaller c
    WpCase case_used = WpCase::Case1;
};

/// Euclidean distances for all pairs i < j, ordered (0,1), (0,2), ..., (1,2), ...
std::vector<double> pairwise_distances(const Matrix& points);

/// Per-point convex combination of the centroids weighted by mu_ij^gamma.
Matrix adjusted_centroids(const FcmModel& model, double gamma);

/// Correlation between pairwise data distances and pairwise adjusted-centroid
/// distances. Returns 0 flagged degenerate when either side has zero variance.
WpcValue wpc(const DataMatrix& data, const FcmModel& model, const WpConfig& config);

/// The c = 1 value under the selected mode (sample SD, n - 1 divisor).
WpcValue wpc_at_one(const DataMatrix& data, Wpc1Mode mode);

/// Correlations for every c in [first_fitted_c, cmax + 1], plus c = 1 when cmin == 2.
WpcSeries wpc_series(const DataMatrix& data, const std::map<int, FcmModel>& models, const WpConfig& config);

struct WpiPair {
    double wpi1 = 0.0;
    double wpi2 = 0.0;
};

/// Improvement ratio (wpi1) and difference (wpi2) at c. A zero wpi1 denominator
/// maps to +inf / -inf / 0 by the sign of the numerator. Throws DegenerateError
/// when WPC(c-1) or WPC(c) equals 1.
WpiPair wpi(const WpcSeries& series, int c);

/// Combines wpi1/wpi2 over [cmin, cmax] into finite scores and a ranking.
WpReport wp_index(const WpcSeries& series, const WpConfig& config);

/// Sorts counts by value in the given sense; ties go to the smaller count.
std::vector<int> rank_counts(const std::map<int, double>& values, bool larger_is_better);

}  // namespace wpcvi

#endif  // WPCVI_WP_INDEX_HPP
