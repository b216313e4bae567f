#ifndef WPCVI_FCM_HPP
#define WPCVI_FCM_HPP

#include "wpcvi/rng.hpp"
#include "wpcvi/types.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace wpcvi {

struct FcmOptions {
    int max_iterations = 200;
    /// Stop once the objective decreases by less than this (absolute).
    double tolerance = 1e-8;
    /// Independent rounds for fit_best_of.
    int restarts = 20;
    std::uint64_t seed = 0;
    /// Worker threads for restarts; results do not depend on this.
    int threads = 1;

    void validate() const;
};

/// A converged fuzzy c-means partition. Immutable after fitting.
struct FcmModel {
    Matrix centroids;    // c x p
    Matrix memberships;  // n x c, rows sum to 1
    double fuzziness = 2.0;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
    /// Number of times an empty cluster had its centroid re-seeded.
    int reseed_events = 0;
    /// Objective after each iteration; non-increasing apart from re-seeds.
    std::vector<double> objective_history;

    int c() const noexcept { return static_cast<int>(centroids.rows()); }
};

/// Membership update for fixed centroids.
///
/// A point closer than 1e-12 to one or more centroids is assigned crisply,
/// with the mass split equally among all coincident centroids.
Matrix update_memberships(const DataMatrix& data, const Matrix& centroids, double m);

struct CentroidUpdate {
    Matrix centroids;
    /// Clusters whose total weight underflowed and were re-seeded from a data point.
    std::vector<int> reseeded;
};

/// Centroid update: each centroid is the mu^m-weighted mean of the data.
/// A column with total weight below 1e-12 gets a uniformly drawn data point.
CentroidUpdate update_centroids(const DataMatrix& data, const Matrix& memberships, double m, Rng& rng);

/// Weighted within-cluster objective: sum_i sum_j mu_ij^m ||x_i - v_j||^2.
double objective(const DataMatrix& data, const Matrix& centroids, const Matrix& memberships, double m);

/// Single FCM run initialised from c distinct data points drawn with opts.seed.
FcmModel fit_fcm(const DataMatrix& data, int c, double m, const FcmOptions& opts);

/// Single FCM run from explicit initial centroids (opts.seed only drives re-seeding).
FcmModel fit_fcm_from(const DataMatrix& data, Matrix initial_centroids, double m, const FcmOptions& opts);

/// Seed used by round `round` of fit_best_of.
std::uint64_t restart_seed(std::uint64_t seed, int round) noexcept;

/// opts.restarts independent rounds; keeps the smallest objective (lowest round on ties).
FcmModel fit_best_of(const DataMatrix& data, int c, double m, const FcmOptions& opts);

/// fit_best_of for every c in [first, last]; each c gets its own seed stream.
std::map<int, FcmModel> fit_range(const DataMatrix& data, int first, int last, double m, const FcmOptions& opts);

/// Index of the largest membership in each row; ties break to the lowest index.
std::vector<int> hard_assignments(const Matrix& memberships);

}  // namespace wpcvi

#endif  // WPCVI_FCM_HPP
