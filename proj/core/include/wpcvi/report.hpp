#ifndef WPCVI_REPORT_HPP
#define WPCVI_REPORT_HPP

#include "wpcvi/evaluation.hpp"
#include "wpcvi/fcm.hpp"
#include "wpcvi/reference_indexes.hpp"
#include "wpcvi/wp_index.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <string>

namespace wpcvi {

/// Report JSON keeps insertion order so output is byte-stable.
using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Finite values become numbers; infinities become the strings "inf"/"-inf".
Json number_or_inf(double v);

/// Shortest round-trip decimal text for v ("inf", "-inf", "nan" for non-finite).
std::string format_double(double v);

Json to_json(const FcmModel& model, bool include_memberships);
Json to_json(const WpcSeries& series);
Json to_json(const WpReport& report);
Json to_json(const IndexSeries& series);
Json to_json(const CviReport& report);
Json to_json(const PipelineOptions& options);
Json to_json(const BenchmarkScore& score);
Json to_json(const SensitivityReport& report);

/// Tidy long-format rows: c,index,value,degenerate
void write_plot_csv(std::ostream& out, const PipelineResult& result);

/// One row per (dataset, m, index).
void write_bench_csv(std::ostream& out, const BenchmarkScore& score);
/// One row per (m, index).
void write_bench_summary_csv(std::ostream& out, const BenchmarkScore& score);
/// One row per (dataset, gamma, c).
void write_sensitivity_csv(std::ostream& out, const SensitivityReport& report);

}  // namespace wpcvi

#endif  // WPCVI_REPORT_HPP
