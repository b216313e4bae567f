#include "wpcvi/fcm.hpp"

#include "wpcvi/parallel.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace wpcvi {
namespace {

constexpr double kCoincidentDistance = 1e-12;
constexpr double kEmptyClusterWeight = 1e-12;

// x^e with exact fast paths for the common integer exponents.
inline double power(double x, double e) {
    if (e == 1.0) return x;
    if (e == 2.0) return x * x;
    return std::pow(x, e);
}

void check_fuzziness(double m) {
    if (!(m > 1.0) || !std::isfinite(m)) {
        throw InvalidInput("fuzziness m must be a finite value > 1, got " + std::to_string(m));
    }
}

void check_centroids(const DataMatrix& data, const Matrix& centroids) {
    if (centroids.rows() < 1) throw InvalidInput("at least one centroid is required");
    if (centroids.cols() != data.p()) {
        throw InvalidInput("centroid dimension " + std::to_string(centroids.cols()) + " does not match data dimension " +
                           std::to_string(data.p()));
    }
    if (!centroids.allFinite()) throw InvalidInput("centroids contain non-finite values");
}

void check_memberships(const DataMatrix& data, const Matrix& memberships) {
    if (memberships.rows() != data.n() || memberships.cols() < 1) {
        throw InvalidInput("membership matrix must be n x c with n = " + std::to_string(data.n()));
    }
    if (!memberships.allFinite()) throw InvalidInput("memberships contain non-finite values");
}

}  // namespace

void FcmOptions::validate() const {
    if (max_iterations < 1) throw InvalidInput("max_iterations must be >= 1");
    if (!(tolerance > 0.0)) throw InvalidInput("tolerance must be > 0");
    if (restarts < 1) throw InvalidInput("restarts must be >= 1");
}

Matrix update_memberships(const DataMatrix& data, const Matrix& centroids, double m) {
    check_fuzziness(m);
    check_centroids(data, centroids);
    const Eigen::Index n = data.n();
    const Eigen::Index c = centroids.rows();
    const double exponent = 1.0 / (m - 1.0);  // applied to squared-distance ratios
    const Matrix& x = data.points();

    Matrix u(n, c);
    std::vector<double> d2(static_cast<std::size_t>(c));
    for (Eigen::Index i = 0; i < n; ++i) {
        double dmin = std::numeric_limits<double>::infinity();
        int coincident = 0;
        for (Eigen::Index j = 0; j < c; ++j) {
            d2[j] = squared_distance(row_span(x, i), row_span(centroids, j));
            dmin = std::min(dmin, d2[j]);
            if (d2[j] < kCoincidentDistance * kCoincidentDistance) ++coincident;
        }
        if (coincident > 0) {
            const double share = 1.0 / coincident;
            for (Eigen::Index j = 0; j < c; ++j) {
                u(i, j) = d2[j] < kCoincidentDistance * kCoincidentDistance ? share : 0.0;
            }
            continue;
        }
        // mu_ij = w_j / sum_k w_k with w_k = (dmin / d2_k)^(1/(m-1)); every w_k is in (0, 1].
        double total = 0.0;
        for (Eigen::Index j = 0; j < c; ++j) {
            d2[j] = power(dmin / d2[j], exponent);
            total += d2[j];
        }
        for (Eigen::Index j = 0; j < c; ++j) u(i, j) = d2[j] / total;
    }
    return u;
}

CentroidUpdate update_centroids(const DataMatrix& data, const Matrix& memberships, double m, Rng& rng) {
    check_fuzziness(m);
    check_memberships(data, memberships);
    const Eigen::Index n = data.n();
    const Eigen::Index p = data.p();
    const Eigen::Index c = memberships.cols();
    const Matrix& x = data.points();

    CentroidUpdate out;
    out.centroids = Matrix::Zero(c, p);
    std::vector<double> weight(static_cast<std::size_t>(c), 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < c; ++j) {
            const double w = power(memberships(i, j), m);
            weight[j] += w;
            for (Eigen::Index k = 0; k < p; ++k) out.centroids(j, k) += w * x(i, k);
        }
    }
    for (Eigen::Index j = 0; j < c; ++j) {
        if (weight[j] < kEmptyClusterWeight) {
            const auto pick = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(n)));
            out.centroids.row(j) = x.row(pick);
            out.reseeded.push_back(static_cast<int>(j));
        } else {
            out.centroids.row(j) /= weight[j];
        }
    }
    return out;
}

double objective(const DataMatrix& data, const Matrix& centroids, const Matrix& memberships, double m) {
    check_centroids(data, centroids);
    check_memberships(data, memberships);
    if (memberships.cols() != centroids.rows()) {
        throw InvalidInput("membership columns do not match centroid count");
    }
    const Matrix& x = data.points();
    double total = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < centroids.rows(); ++j) {
            total += power(memberships(i, j), m) * squared_distance(row_span(x, i), row_span(centroids, j));
        }
    }
    return total;
}

FcmModel fit_fcm_from(const DataMatrix& data, Matrix initial_centroids, double m, const FcmOptions& opts) {
    opts.validate();
    check_fuzziness(m);
    check_centroids(data, initial_centroids);
    const int c = static_cast<int>(initial_centroids.rows());
    if (c < 2) throw InvalidInput("cluster count must be >= 2, got " + std::to_string(c));
    if (c > data.n()) {
        throw InvalidInput("cluster count " + std::to_string(c) + " exceeds point count " + std::to_string(data.n()));
    }

    Rng rng(opts.seed);
    FcmModel model;
    model.fuzziness = m;
    model.centroids = std::move(initial_centroids);

    double previous = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= opts.max_iterations; ++it) {
        const Matrix u = update_memberships(data, model.centroids, m);
        CentroidUpdate next = update_centroids(data, u, m, rng);
        model.centroids = std::move(next.centroids);
        const double current = objective(data, model.centroids, u, m);
        model.objective_history.push_back(current);
        model.iterations = it;
        if (!next.reseeded.empty()) {
            model.reseed_events += static_cast<int>(next.reseeded.size());
            previous = std::numeric_limits<double>::infinity();
            continue;
        }
        if (previous - current < opts.tolerance) {
            model.converged = true;
            break;
        }
        previous = current;
    }
    model.memberships = update_memberships(data, model.centroids, m);
    model.objective = objective(data, model.centroids, model.memberships, m);
    return model;
}

FcmModel fit_fcm(const DataMatrix& data, int c, double m, const FcmOptions& opts) {
    if (c < 2) throw InvalidInput("cluster count must be >= 2, got " + std::to_string(c));
    if (c > data.n()) {
        throw InvalidInput("cluster count " + std::to_string(c) + " exceeds point count " + std::to_string(data.n()));
    }
    // Initial centroids come from a stream separate from the re-seeding stream.
    Rng init(derive_seed(opts.seed, 0x1u));
    const auto picks = init.sample_without_replacement(static_cast<std::size_t>(data.n()), static_cast<std::size_t>(c));
    Matrix centroids(c, data.p());
    for (int j = 0; j < c; ++j) centroids.row(j) = data.points().row(static_cast<Eigen::Index>(picks[j]));
    FcmOptions run = opts;
    run.seed = derive_seed(opts.seed, 0x2u);
    return fit_fcm_from(data, std::move(centroids), m, run);
}

std::uint64_t restart_seed(std::uint64_t seed, int round) noexcept {
    return derive_seed(seed, 0x100u + static_cast<std::uint64_t>(round));
}

FcmModel fit_best_of(const DataMatrix& data, int c, double m, const FcmOptions& opts) {
    opts.validate();
    std::vector<FcmModel> rounds(static_cast<std::size_t>(opts.restarts));
    parallel_for(rounds.size(), opts.threads, [&](std::size_t r) {
        FcmOptions one = opts;
        one.seed = restart_seed(opts.seed, static_cast<int>(r));
        rounds[r] = fit_fcm(data, c, m, one);
    });
    std::size_t best = 0;
    for (std::size_t r = 1; r < rounds.size(); ++r) {
        if (rounds[r].objective < rounds[best].objective) best = r;
    }
    return std::move(rounds[best]);
}

std::map<int, FcmModel> fit_range(const DataMatrix& data, int first, int last, double m, const FcmOptions& opts) {
    if (first > last) throw InvalidInput("empty cluster-count range");
    std::map<int, FcmModel> models;
    for (int c = first; c <= last; ++c) {
        FcmOptions per_c = opts;
        per_c.seed = derive_seed(opts.seed, static_cast<std::uint64_t>(c));
        models.emplace(c, fit_best_of(data, c, m, per_c));
    }
    return models;
}

std::vector<int> hard_assignments(const Matrix& memberships) {
    std::vector<int> out(static_cast<std::size_t>(memberships.rows()));
    for (Eigen::Index i = 0; i < memberships.rows(); ++i) {
        int best = 0;
        for (Eigen::Index j = 1; j < memberships.cols(); ++j) {
            if (memberships(i, j) > memberships(i, best)) best = static_cast<int>(j);
        }
        out[static_cast<std::size_t>(i)] = best;
    }
    return out;
}

}  // namespace wpcvi
