#include "wpcvi/reference_indexes.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace wpcvi {
namespace {

constexpr double kCoincident = 1e-12;

void check_model(const DataMatrix& data, const FcmModel& model) {
    if (model.c() < 2) throw InvalidInput("index requires c >= 2");
    if (model.memberships.rows() != data.n() || model.memberships.cols() != model.c()) {
        throw InvalidInput("model shape does not match data");
    }
    if (model.centroids.cols() != data.p()) throw InvalidInput("centroid dimension does not match data");
}

// Sum_j Sum_i mu_ij^e ||x_i - v_j||^2.
double weighted_compactness(const DataMatrix& data, const FcmModel& model, double e) {
    const Matrix& x = data.points();
    const Matrix& u = model.memberships;
    double total = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (int j = 0; j < model.c(); ++j) {
            const double w = e == 2.0 ? u(i, j) * u(i, j) : std::pow(u(i, j), e);
            total += w * squared_distance(row_span(x, i), row_span(model.centroids, j));
        }
    }
    return total;
}

// Squared distances between centroids over unordered pairs j < k.
std::vector<double> centroid_gaps(const FcmModel& model) {
    std::vector<double> out;
    const Matrix& v = model.centroids;
    for (Eigen::Index j = 0; j + 1 < v.rows(); ++j) {
        for (Eigen::Index k = j + 1; k < v.rows(); ++k) out.push_back(squared_distance(row_span(v, j), row_span(v, k)));
    }
    return out;
}

double min_gap_or_throw(const std::vector<double>& gaps, const char* index) {
    const double lo = *std::min_element(gaps.begin(), gaps.end());
    if (std::sqrt(lo) < kCoincident) throw DegenerateError(std::string(index) + ": two centroids coincide");
    return lo;
}

double relation(const Matrix& u, Eigen::Index i, Eigen::Index j, GcProduct product) {
    double r = 0.0;
    for (Eigen::Index k = 0; k < u.cols(); ++k) {
        const double a = u(i, k);
        const double b = u(j, k);
        switch (product) {
            case GcProduct::SumMin: r += std::min(a, b); break;
            case GcProduct::SumProduct: r += a * b; break;
            case GcProduct::MaxProduct: r = std::max(r, a * b); break;
            case GcProduct::MaxMin: r = std::max(r, std::min(a, b)); break;
        }
    }
    return r;
}

}  // namespace

std::string_view to_string(IndexName name) noexcept {
    switch (name) {
        case IndexName::WP: return "WP";
        case IndexName::XB: return "XB";
        case IndexName::PBM: return "PBM";
        case IndexName::Tang: return "Tang";
        case IndexName::WL: return "WL";
        case IndexName::GC: return "GC";
        case IndexName::Kwon2: return "Kwon2";
    }
    return "?";
}

std::optional<IndexName> parse_index_name(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
    for (IndexName name : all_index_names()) {
        std::string candidate(to_string(name));
        std::transform(candidate.begin(), candidate.end(), candidate.begin(),
                       [](unsigned char ch) { return std::tolower(ch); });
        if (candidate == lower) return name;
    }
    return std::nullopt;
}

Direction direction_of(IndexName name) noexcept {
    return (name == IndexName::WP || name == IndexName::PBM) ? Direction::Max : Direction::Min;
}

std::vector<IndexName> reference_index_names() {
    return {IndexName::XB, IndexName::PBM, IndexName::Tang, IndexName::WL, IndexName::GC, IndexName::Kwon2};
}

std::vector<IndexName> all_index_names() {
    return {IndexName::WP, IndexName::XB, IndexName::PBM, IndexName::Tang, IndexName::WL, IndexName::GC, IndexName::Kwon2};
}

double xb(const DataMatrix& data, const FcmModel& model) {
    check_model(data, model);
    const double min_gap = min_gap_or_throw(centroid_gaps(model), "XB");
    return weighted_compactness(data, model, 2.0) / (data.n() * min_gap);
}

double pbm(const DataMatrix& data, const FcmModel& model) {
    check_model(data, model);
    const Matrix& x = data.points();
    const Vector v0 = data.centroid();
    double spread = 0.0;  // E1
    for (Eigen::Index i = 0; i < x.rows(); ++i) spread += (x.row(i).transpose() - v0).norm();

    double compact = 0.0;  // Ec, unsquared distances weighted by mu
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (int j = 0; j < model.c(); ++j) {
            compact += model.memberships(i, j) * std::sqrt(squared_distance(row_span(x, i), row_span(model.centroids, j)));
        }
    }
    if (!(compact > kCoincident * std::max(spread, 1.0))) throw DegenerateError("PBM: zero within-cluster spread");

    const auto gaps = centroid_gaps(model);
    const double max_gap = std::sqrt(*std::max_element(gaps.begin(), gaps.end()));
    const double ratio = spread * max_gap / (model.c() * compact);
    return ratio * ratio;
}

double tang(const DataMatrix& data, const FcmModel& model) {
    check_model(data, model);
    const double c = model.c();
    const auto gaps = centroid_gaps(model);
    double ordered_sum = 0.0;
    for (double g : gaps) ordered_sum += 2.0 * g;  // both (j,k) and (k,j)
    const double min_gap = *std::min_element(gaps.begin(), gaps.end());
    return (weighted_compactness(data, model, 2.0) + ordered_sum / (c * (c - 1.0))) / (min_gap + 1.0 / c);
}

double wl(const DataMatrix& data, const FcmModel& model) {
    check_model(data, model);
    const Matrix& x = data.points();
    const Matrix& u = model.memberships;
    double numerator = 0.0;
    for (int j = 0; j < model.c(); ++j) {
        double compact = 0.0;
        double mass = 0.0;
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            compact += u(i, j) * u(i, j) * squared_distance(row_span(x, i), row_span(model.centroids, j));
            mass += u(i, j);
        }
        if (!(mass > kCoincident)) throw DegenerateError("WL: empty membership column " + std::to_string(j));
        numerator += compact / mass;
    }
    auto gaps = centroid_gaps(model);
    const double min_gap = min_gap_or_throw(gaps, "WL");
    std::sort(gaps.begin(), gaps.end());
    const std::size_t mid = gaps.size() / 2;
    const double median = gaps.size() % 2 == 1 ? gaps[mid] : 0.5 * (gaps[mid - 1] + gaps[mid]);
    return numerator / (min_gap + median);
}

double gc(const DataMatrix& data, const FcmModel& model, GcProduct product) {
    check_model(data, model);
    const Matrix& x = data.points();
    const Matrix& u = model.memberships;
    const Eigen::Index n = x.rows();
    const std::size_t pairs = static_cast<std::size_t>(n * (n - 1) / 2);

    std::vector<double> dist;
    std::vector<double> rel;
    dist.reserve(pairs);
    rel.reserve(pairs);
    double gamma = 0.0;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double d = std::sqrt(squared_distance(row_span(x, i), row_span(x, j)));
            const double r = relation(u, i, j, product);
            gamma += r * d;
            dist.push_back(d);
            rel.push_back(r);
        }
    }

    double within = 0.0;
    for (int j = 0; j < model.c(); ++j) {
        const double s = u.col(j).sum();
        within += s * (s - 1.0);
    }
    const auto nws = static_cast<std::size_t>(std::clamp(std::floor(within / 2.0), 0.0, static_cast<double>(pairs)));
    const auto top = static_cast<std::ptrdiff_t>(nws);

    // Only the leading n_ws positions of each ordering are needed.
    std::partial_sort(dist.begin(), dist.begin() + top, dist.end(), std::greater<>());
    std::partial_sort(rel.begin(), rel.begin() + top, rel.end(), std::greater<>());
    double gamma_max = 0.0;
    for (std::size_t k = 0; k < nws; ++k) gamma_max += dist[k] * rel[k];
    std::partial_sort(rel.begin(), rel.begin() + top, rel.end());
    double gamma_min = 0.0;
    for (std::size_t k = 0; k < nws; ++k) gamma_min += dist[k] * rel[k];

    const double span = gamma_max - gamma_min;
    if (!(span > kCoincident * std::max(std::abs(gamma_max), 1.0))) {
        throw DegenerateError("GC: max and min of gamma coincide");
    }
    return (gamma - gamma_min) / span;
}

double kwon2(const DataMatrix& data, const FcmModel& model, double m) {
    check_model(data, model);
    if (!(m > 1.0)) throw InvalidInput("Kwon2: fuzziness must be > 1");
    const double n = data.n();
    const double c = model.c();
    if (!(n > c - 1.0)) throw InvalidInput("Kwon2 requires n > c - 1");

    const double w1 = (n - c + 1.0) / n;
    const double w2 = std::pow(c / (c - 1.0), std::sqrt(2.0));
    const double w3 = n * c / ((n - c + 1.0) * (n - c + 1.0));
    const double exponent = std::pow(2.0, std::sqrt(m / 2.0));

    const Vector v0 = data.centroid();
    double spread_sum = 0.0;
    double spread_max = 0.0;
    for (int j = 0; j < model.c(); ++j) {
        const double s = (model.centroids.row(j).transpose() - v0).squaredNorm();
        spread_sum += s;
        spread_max = std::max(spread_max, s);
    }
    if (!(spread_max > 0.0)) throw DegenerateError("Kwon2: every centroid sits on the data centroid");

    const auto gaps = centroid_gaps(model);
    const double min_gap = *std::min_element(gaps.begin(), gaps.end());
    const double bracket = w2 * weighted_compactness(data, model, exponent) + spread_sum / spread_max + w3;
    return w1 * bracket / (min_gap + 1.0 / c + 1.0 / std::pow(c, m - 1.0));
}

double evaluate_index(IndexName name, const DataMatrix& data, const FcmModel& model, double m) {
    switch (name) {
        case IndexName::XB: return xb(data, model);
        case IndexName::PBM: return pbm(data, model);
        case IndexName::Tang: return tang(data, model);
        case IndexName::WL: return wl(data, model);
        case IndexName::GC: return gc(data, model);
        case IndexName::Kwon2: return kwon2(data, model, m);
        case IndexName::WP: break;
    }
    throw InvalidInput("WP is not a comparison index; use wp_index");
}

const IndexSeries* CviReport::find(IndexName name) const {
    for (const auto& s : indexes) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

std::vector<int> rank_index_values(std::span<const IndexValue> values, Direction direction) {
    std::vector<const IndexValue*> usable;
    for (const auto& v : values) {
        if (!v.degenerate) usable.push_back(&v);
    }
    std::sort(usable.begin(), usable.end(), [direction](const IndexValue* a, const IndexValue* b) {
        if (a->value != b->value) return direction == Direction::Max ? a->value > b->value : a->value < b->value;
        return a->c < b->c;
    });
    std::vector<int> out;
    out.reserve(usable.size());
    for (const auto* v : usable) out.push_back(v->c);
    return out;
}

CviReport compute_all(const DataMatrix& data, const std::map<int, FcmModel>& models, double m,
                      std::span<const IndexName> selection, int cmin, int cmax) {
    if (cmin < 2 || cmax < cmin) throw InvalidInput("invalid cluster-count range");
    for (int c = cmin; c <= cmax; ++c) {
        if (!models.count(c)) throw InvalidInput("no fitted model for c = " + std::to_string(c));
    }
    CviReport report;
    for (IndexName name : selection) {
        if (name == IndexName::WP) continue;
        IndexSeries series;
        series.name = name;
        series.direction = direction_of(name);
        for (int c = cmin; c <= cmax; ++c) {
            IndexValue value;
            value.name = name;
            value.c = c;
            value.direction = series.direction;
            try {
                value.value = evaluate_index(name, data, models.at(c), m);
                if (!std::isfinite(value.value)) {
                    value.degenerate = true;
                    value.note = "non-finite value";
                }
            } catch (const DegenerateError& e) {
                value.degenerate = true;
                value.value = std::numeric_limits<double>::quiet_NaN();
                value.note = e.what();
            }
            series.values.push_back(std::move(value));
        }
        series.ranking = rank_index_values(series.values, series.direction);
        report.indexes.push_back(std::move(series));
    }
    return report;
}

}  // namespace wpcvi
