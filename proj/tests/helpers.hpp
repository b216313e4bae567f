#ifndef WPCVI_TESTS_HELPERS_HPP
#define WPCVI_TESTS_HELPERS_HPP

#include "oracles.hpp"
#include "wpcvi/fcm.hpp"
#include "wpcvi/types.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace testkit {

inline wpcvi::DataMatrix data_of(const oracle::Rows& rows) { return wpcvi::DataMatrix(oracle::matrix_of(rows)); }

inline wpcvi::DataMatrix line(std::initializer_list<double> xs) {
    oracle::Rows rows;
    for (double x : xs) rows.push_back({x});
    return data_of(rows);
}

inline wpcvi::FcmModel model_of(const oracle::Rows& centroids, const oracle::Rows& memberships, double m = 2.0) {
    wpcvi::FcmModel model;
    model.centroids = oracle::matrix_of(centroids);
    model.memberships = oracle::matrix_of(memberships);
    model.fuzziness = m;
    return model;
}

// {0,1,10,11} with crisp memberships and centroids {0.5, 10.5}.
inline wpcvi::DataMatrix crisp_data() { return line({0, 1, 10, 11}); }
inline wpcvi::FcmModel crisp_model() { return model_of({{0.5}, {10.5}}, {{1, 0}, {1, 0}, {0, 1}, {0, 1}}); }

// Hand-rolled generators for property tests.
struct Gen {
    std::mt19937_64 eng;
    explicit Gen(std::uint64_t seed) : eng(seed) {}
    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng); }

    oracle::Rows points(int n, int p, double spread = 10.0) {
        oracle::Rows x(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(p)));
        for (auto& r : x) {
            for (auto& e : r) e = real(-spread, spread);
        }
        return x;
    }

    // Rows of strictly positive memberships summing to one.
    oracle::Rows memberships(int n, int c) {
        oracle::Rows u(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(c)));
        for (auto& r : u) {
            double s = 0;
            for (auto& e : r) s += (e = real(0.05, 1.0));
            for (auto& e : r) e /= s;
        }
        return u;
    }

    // Memberships whose entries in every row are pairwise distinct by a margin.
    oracle::Rows ordered_memberships(int n, int c) {
        oracle::Rows u;
        while (static_cast<int>(u.size()) < n) {
            auto row = memberships(1, c)[0];
            auto sorted = row;
            std::sort(sorted.begin(), sorted.end());
            bool ok = true;
            for (std::size_t k = 1; k < sorted.size(); ++k) ok = ok && sorted[k] - sorted[k - 1] > 0.02;
            if (ok) u.push_back(row);
        }
        return u;
    }
};

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

}  // namespace testkit

#endif  // WPCVI_TESTS_HELPERS_HPP
