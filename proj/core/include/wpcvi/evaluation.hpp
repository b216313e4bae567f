#ifndef WPCVI_EVALUATION_HPP
#define WPCVI_EVALUATION_HPP

#include "wpcvi/data.hpp"
#include "wpcvi/fcm.hpp"
#include "wpcvi/reference_indexes.hpp"
#include "wpcvi/types.hpp"
#include "wpcvi/wp_index.hpp"

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wpcvi {

// ---------------------------------------------------------------------------
// Scoring primitives
// ---------------------------------------------------------------------------

/// Maximum-weight perfect matching on a square score matrix (Hungarian
/// algorithm). Returns assignment[row] = column.
std::vector<int> optimal_assignment(const std::vector<std::vector<double>>& score);

/// Fraction of points whose argmax cluster maps to their class under the best
/// cluster-to-class bijection. Requires c == number of distinct labels.
double accuracy(const FcmModel& model, std::span<const int> labels);

enum class DatasetKind { Artificial, RealWorld, Image };

std::string_view to_string(DatasetKind kind) noexcept;
std::optional<DatasetKind> parse_dataset_kind(std::string_view text);

/// Accuracy threshold below which a dataset is excluded: 0.75 artificial,
/// 0.70 real-world.
double gate_threshold(DatasetKind kind);

/// True when accuracy is at or above the kind's threshold. Image datasets have
/// no threshold and are rejected with InvalidInput.
bool gate(double accuracy, DatasetKind kind);

/// Largest count scanned for a dataset with `true_c` clusters: 10, 15 or 20.
int cmax_rule(int true_c);

/// 1-based position of c_true in ranking; 0 when absent.
int rank_of(std::span<const int> ranking, int c_true);

struct RScore {
    int sc1 = 0;
    int sc2 = 0;
    int total = 0;
};

/// Primary count c1 scores 3/2/1 at ranks 1/2/3; secondary c2 scores 2 at
/// rank 2 and 1 at ranks 1 or 3. Anything else scores 0.
RScore r_score(std::span<const int> ranking, int c1, int c2);

/// Scores the top three ranked counts against an acceptable set.
double i_score(std::span<const int> ranking, const std::set<int>& acceptable);

// ---------------------------------------------------------------------------
// Full pipeline on one dataset
// ---------------------------------------------------------------------------

struct PipelineOptions {
    double m = 2.0;
    std::optional<double> gamma;  // defaults to 7 m^2 / 4
    int cmin = 2;
    int cmax = 10;
    Wpc1Mode wpc1_mode = Wpc1Mode::SdRatio;
    NormalizationMode normalization = NormalizationMode::Standardize;
    FcmOptions fcm;
    std::vector<IndexName> indexes = all_index_names();

    double resolved_gamma() const { return gamma.value_or(WpConfig::default_gamma(m)); }
    WpConfig wp_config() const;
    bool wants(IndexName name) const;
};

/// Everything computed for one dataset at one fuzziness level.
struct PipelineResult {
    std::map<int, FcmModel> models;  // every fitted c
    std::optional<WpcSeries> wpc;
    std::optional<WpReport> wp;
    std::string wp_error;  // set when WP could not be computed
    CviReport reference;

    /// Ranking produced by `name`, empty when unavailable.
    std::vector<int> ranking(IndexName name) const;
};

/// Fits models over the needed count range on already-normalized data and
/// evaluates WP plus the selected comparison indexes over [cmin, cmax].
PipelineResult run_pipeline(const DataMatrix& normalized, const PipelineOptions& options);

// ---------------------------------------------------------------------------
// Benchmark aggregation
// ---------------------------------------------------------------------------

struct BenchDataset {
    std::string name;
    DatasetKind kind = DatasetKind::Artificial;
    DataMatrix data;
    std::optional<int> true_c;       // C, or C1 when a secondary option exists
    std::optional<int> secondary_c;  // C2 for R-scores
    std::set<int> acceptable;        // A for I-scores
    std::optional<int> cmax;         // overrides cmax_rule
};

struct BenchOptions {
    std::vector<double> ms{2.0};
    std::optional<double> gamma;
    Wpc1Mode wpc1_mode = Wpc1Mode::SdRatio;
    NormalizationMode normalization = NormalizationMode::Standardize;
    FcmOptions fcm;
    std::vector<IndexName> indexes = all_index_names();
    int threads = 1;  // dataset-level jobs
};

struct IndexOutcome {
    std::vector<int> ranking;
    int rank = 0;                   // rank of true_c (0 = not ranked / not applicable)
    std::optional<RScore> rscore;
    std::optional<double> iscore;
};

struct DatasetOutcome {
    std::string name;
    DatasetKind kind = DatasetKind::Artificial;
    double m = 2.0;
    int cmax = 0;
    std::optional<double> accuracy;
    bool excluded = false;  // failed the accuracy gate
    std::map<IndexName, IndexOutcome> indexes;
};

struct IndexSummary {
    int correct_count = 0;
    int ranked_datasets = 0;
    double avg_rank = 0.0;
    int r_score_total = 0;
    double i_score_total = 0.0;
};

struct BenchmarkScore {
    std::vector<DatasetOutcome> outcomes;           // dataset-major, then m
    std::map<double, std::map<IndexName, IndexSummary>> summary;  // by m
};

BenchmarkScore run_benchmark(std::span<const BenchDataset> datasets, const BenchOptions& options);

// ---------------------------------------------------------------------------
// Gamma sensitivity
// ---------------------------------------------------------------------------

enum class SensitivityMode {
    Regenerate,  ///< fresh data every repeat, one FCM randomisation each
    Refit,       ///< data generated once, fresh FCM randomisation every repeat
};

std::string_view to_string(SensitivityMode mode) noexcept;

struct SensitivityDataset {
    std::string name;
    MixtureSpec spec;
    int true_c = 2;
};

struct SensitivityOptions {
    std::vector<double> gammas{0.1, 1.0, 7.0, 100.0};
    int repeats = 30;
    double m = 2.0;
    int cmin = 2;
    int cmax = 10;
    SensitivityMode mode = SensitivityMode::Refit;
    Wpc1Mode wpc1_mode = Wpc1Mode::SdRatio;
    NormalizationMode normalization = NormalizationMode::Standardize;
    FcmOptions fcm;  // fcm.seed drives the repeat schedule
    /// Reuse one seed for every repeat (spread is then exactly zero).
    bool fixed_seed = false;
};

struct SensitivityCell {
    std::string dataset;
    double gamma = 0.0;
    std::map<int, double> sd_by_c;  // sample SD of WP(c) across repeats
    double average_sd = 0.0;
    std::map<int, int> rank_counts;  // rank of true C -> frequency
    int modal_rank = 0;
    int modal_frequency = 0;
    int degenerate_repeats = 0;
};

struct SensitivityReport {
    std::vector<SensitivityCell> cells;  // dataset-major, then gamma order
};

/// Repeats the WP computation per dataset and gamma and summarises its spread.
SensitivityReport sensitivity_study(std::span<const SensitivityDataset> datasets, const SensitivityOptions& options);

/// Sample standard deviation (n - 1 divisor); 0 for fewer than two values.
double sample_sd(std::span<const double> values);

}  // namespace wpcvi

#endif  // WPCVI_EVALUATION_HPP
