#include "wpcvi/wp_index.hpp"

#include "wpcvi/pearson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace wpcvi {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::string_view to_string(Wpc1Mode mode) noexcept {
    return mode == Wpc1Mode::Zero ? "zero" : "sd";
}

std::string_view to_string(WpCase c) noexcept {
    switch (c) {
        case WpCase::Case1: return "case1";
        case WpCase::Case2: return "case2";
        case WpCase::Case3: return "case3";
    }
    return "unknown";
}

WpConfig WpConfig::for_fuzziness(double m, int cmin, int cmax, Wpc1Mode mode) {
    WpConfig config;
    config.gamma = default_gamma(m);
    config.cmin = cmin;
    config.cmax = cmax;
    config.wpc1_mode = mode;
    return config;
}

void WpConfig::validate(int n) const {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidInput("gamma must be a finite value > 0");
    if (cmin < 2) throw InvalidInput("cmin must be >= 2");
    if (cmax < cmin) throw InvalidInput("cmax must be >= cmin");
    if (cmax > n - 1) {
        throw InvalidInput("cmax " + std::to_string(cmax) + " must be <= n - 1 = " + std::to_string(n - 1));
    }
}

double WpcSeries::at(int c) const {
    const auto it = values.find(c);
    if (it == values.end()) throw InvalidInput("WPC series has no entry for c = " + std::to_string(c));
    return it->second;
}

std::vector<double> pairwise_distances(const Matrix& points) {
    const Eigen::Index n = points.rows();
    if (n < 2) throw InvalidInput("pairwise distances need at least 2 points");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            out.push_back(std::sqrt(squared_distance(row_span(points, i), row_span(points, j))));
        }
    }
    return out;
}

Matrix adjusted_centroids(const FcmModel& model, double gamma) {
    if (!(gamma > 0.0)) throw InvalidInput("gamma must be > 0");
    const Matrix& u = model.memberships;
    const Matrix& v = model.centroids;
    if (u.cols() != v.rows()) throw InvalidInput("membership columns do not match centroid count");

    Matrix out = Matrix::Zero(u.rows(), v.cols());
    std::vector<double> w(static_cast<std::size_t>(u.cols()));
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        // Dividing by the row maximum keeps mu^gamma from underflowing at large gamma.
        const double top = u.row(i).maxCoeff();
        if (!(top > 0.0)) throw InvalidInput("membership row " + std::to_string(i) + " has no positive entry");
        double total = 0.0;
        for (Eigen::Index j = 0; j < u.cols(); ++j) {
            w[j] = std::pow(u(i, j) / top, gamma);
            total += w[j];
        }
        for (Eigen::Index j = 0; j < u.cols(); ++j) out.row(i) += (w[j] / total) * v.row(j);
    }
    return out;
}

WpcValue wpc(const DataMatrix& data, const FcmModel& model, const WpConfig& config) {
    if (model.c() < 2) throw InvalidInput("WPC requires a model with c >= 2");
    if (model.memberships.rows() != data.n()) throw InvalidInput("model was fitted on a different point count");
    const Matrix adjusted = adjusted_centroids(model, config.gamma);
    const Correlation r = pairwise_distance_correlation(data.points(), adjusted, config.threads);
    return {r.value, r.degenerate};
}

WpcValue wpc_at_one(const DataMatrix& data, Wpc1Mode mode) {
    if (mode == Wpc1Mode::Zero) return {0.0, false};
    const Vector v0 = data.centroid();
    const Matrix& x = data.points();
    std::vector<double> d(static_cast<std::size_t>(data.n()));
    for (int i = 0; i < data.n(); ++i) d[i] = (x.row(i).transpose() - v0).norm();

    const auto [lo, hi] = std::minmax_element(d.begin(), d.end());
    const double range = *hi - *lo;
    if (!(range > 1e-12 * std::max(1.0, *hi))) return {0.0, true};

    const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
    double ss = 0.0;
    for (double di : d) ss += (di - mean) * (di - mean);
    const double sd = std::sqrt(ss / static_cast<double>(d.size() - 1));
    return {sd / range, false};
}

WpcSeries wpc_series(const DataMatrix& data, const std::map<int, FcmModel>& models, const WpConfig& config) {
    config.validate(data.n());
    WpcSeries series;
    series.mode_used = config.wpc1_mode;
    if (config.cmin == 2) {
        const WpcValue one = wpc_at_one(data, config.wpc1_mode);
        series.values[1] = one.value;
        if (one.degenerate) series.degenerate.insert(1);
    }
    for (int c = config.first_fitted_c(); c <= config.last_fitted_c(); ++c) {
        const auto it = models.find(c);
        if (it == models.end()) throw InvalidInput("no fitted model for c = " + std::to_string(c));
        const WpcValue value = wpc(data, it->second, config);
        series.values[c] = value.value;
        if (value.degenerate) series.degenerate.insert(c);
    }
    return series;
}

WpiPair wpi(const WpcSeries& series, int c) {
    const double prev = series.at(c - 1);
    const double cur = series.at(c);
    const double next = series.at(c + 1);
    const double room_prev = 1.0 - prev;
    const double room_cur = 1.0 - cur;
    if (room_prev == 0.0 || room_cur == 0.0) {
        throw DegenerateError("WPC reaches 1 at c = " + std::to_string(room_prev == 0.0 ? c - 1 : c) +
                              "; improvement ratios are undefined");
    }
    const double gain = cur - prev;
    const double numerator = gain * room_cur;
    const double denominator = std::max(0.0, next - cur) * room_prev;

    WpiPair out;
    if (denominator == 0.0) {
        out.wpi1 = numerator > 0.0 ? kInf : (numerator < 0.0 ? -kInf : 0.0);
    } else {
        out.wpi1 = numerator / denominator;
    }
    out.wpi2 = gain / room_prev - (next - cur) / room_cur;
    return out;
}

WpReport wp_index(const WpcSeries& series, const WpConfig& config) {
    if (config.cmin < 2 || config.cmax < config.cmin) throw InvalidInput("invalid cluster-count range");
    WpReport report;
    double min_finite = kInf;
    double max_finite = -kInf;
    bool any_pos_inf = false;
    for (int c = config.cmin; c <= config.cmax; ++c) {
        const WpiPair pair = wpi(series, c);
        report.wpi1[c] = pair.wpi1;
        report.wpi2[c] = pair.wpi2;
        if (std::isfinite(pair.wpi1)) {
            min_finite = std::min(min_finite, pair.wpi1);
            max_finite = std::max(max_finite, pair.wpi1);
        } else if (pair.wpi1 > 0.0) {
            any_pos_inf = true;
        }
    }
    const bool any_finite = std::isfinite(min_finite);

    if (!any_finite) {
        report.case_used = WpCase::Case3;
        report.wp = report.wpi2;
    } else if (!any_pos_inf) {
        report.case_used = WpCase::Case1;
        for (const auto& [c, v] : report.wpi1) report.wp[c] = std::isfinite(v) ? v : min_finite;
    } else {
        report.case_used = WpCase::Case2;
        for (const auto& [c, v] : report.wpi1) {
            const double base = std::isfinite(v) ? v : (v > 0.0 ? max_finite : min_finite);
            report.wp[c] = base + report.wpi2.at(c);
        }
    }
    report.ranking = rank_counts(report.wp, true);
    return report;
}

std::vector<int> rank_counts(const std::map<int, double>& values, bool larger_is_better) {
    std::vector<std::pair<int, double>> entries(values.begin(), values.end());
    std::stable_sort(entries.begin(), entries.end(), [larger_is_better](const auto& a, const auto& b) {
        return larger_is_better ? a.second > b.second : a.second < b.second;
    });
    std::vector<int> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.first);
    return out;
}

}  // namespace wpcvi
