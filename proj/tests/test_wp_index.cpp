#include "helpers.hpp"

#include "wpcvi/wp_index.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace wpcvi;
using testkit::line;
using testkit::model_of;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

WpcSeries series_of(std::initializer_list<double> values) {
    WpcSeries s;
    int c = 1;
    for (double v : values) s.values[c++] = v;
    return s;
}

WpConfig range(int cmin, int cmax) {
    WpConfig config;
    config.cmin = cmin;
    config.cmax = cmax;
    return config;
}

}  // namespace

TEST_SUITE("wp_index") {

TEST_CASE("pairwise distances in row-major pair order") {
    CHECK(pairwise_distances(oracle::matrix_of({{0}, {3}, {4}})) == std::vector<double>{3, 4, 1});
    CHECK(pairwise_distances(oracle::matrix_of({{0, 0}, {3, 4}})) == std::vector<double>{5});
    const auto dup = pairwise_distances(oracle::matrix_of({{1, 1}, {1, 1}, {2, 1}}));
    CHECK(dup[0] == 0.0);
    CHECK_THROWS_AS(pairwise_distances(oracle::matrix_of({{1}})), InvalidInput);
}

TEST_CASE("adjusted centroids: hand cases") {
    const oracle::Rows v{{0}, {10}};
    for (double g : {0.5, 3.0, 50.0}) {
        CHECK(adjusted_centroids(model_of(v, {{1, 0}}), g)(0, 0) == doctest::Approx(0.0));
        CHECK(adjusted_centroids(model_of(v, {{0.5, 0.5}}), g)(0, 0) == doctest::Approx(5.0));
    }
    CHECK(adjusted_centroids(model_of(v, {{0.75, 0.25}}), 1.0)(0, 0) == doctest::Approx(2.5));
    CHECK(std::abs(adjusted_centroids(model_of(v, {{0.75, 0.25}}), 100.0)(0, 0)) < 1e-6);
    CHECK_THROWS_AS(adjusted_centroids(model_of(v, {{0.75, 0.25}}), 0.0), InvalidInput);
    CHECK_THROWS_AS(adjusted_centroids(model_of(v, {{0.75, 0.25}}), -1.0), InvalidInput);
}

TEST_CASE("adjusted centroids agree with the oracle and stay inside the centroid box") {
    testkit::Gen gen(21);
    for (int t = 0; t < 30; ++t) {
        const int c = gen.integer(2, 5);
        const auto v = gen.points(c, 3);
        const auto u = gen.memberships(15, c);
        const double g = gen.real(0.1, 20);
        const Matrix o = adjusted_centroids(model_of(v, u), g);
        const auto expect = oracle::adjusted(u, v, g);
        for (int i = 0; i < 15; ++i) {
            for (int k = 0; k < 3; ++k) {
                CHECK(o(i, k) == doctest::Approx(expect[i][k]).epsilon(1e-12));
                double lo = kInf, hi = -kInf;
                for (const auto& vj : v) {
                    lo = std::min(lo, vj[k]);
                    hi = std::max(hi, vj[k]);
                }
                CHECK(o(i, k) >= lo - 1e-12);
                CHECK(o(i, k) <= hi + 1e-12);
            }
        }
    }
}

TEST_CASE("adjusted centroids survive exponents that underflow naive powers") {
    const Matrix o = adjusted_centroids(model_of({{0}, {10}}, {{0.6, 0.4}, {1e-3, 1 - 1e-3}}), 2000.0);
    CHECK(o(0, 0) == doctest::Approx(0.0));
    CHECK(o(1, 0) == doctest::Approx(10.0));
}

TEST_CASE("adjusted centroids: small and large exponent limits") {
    testkit::Gen gen(29);
    for (int t = 0; t < 20; ++t) {
        const int c = gen.integer(2, 5);
        const auto v = gen.points(c, 2);
        const auto mean = oracle::mean_row(v);
        const auto u = gen.ordered_memberships(10, c);
        const Matrix low = adjusted_centroids(model_of(v, u), 1e-8);
        const Matrix high = adjusted_centroids(model_of(v, u), 1e3);
        for (int i = 0; i < 10; ++i) {
            const auto top = static_cast<std::size_t>(std::max_element(u[i].begin(), u[i].end()) - u[i].begin());
            for (int k = 0; k < 2; ++k) {
                CHECK(std::abs(low(i, k) - mean[k]) < 1e-4);
                CHECK(std::abs(high(i, k) - v[top][k]) < 1e-4);
            }
        }
    }
}

TEST_CASE("adjusted centroids of a c = n fit reproduce the data") {
    for (std::uint64_t s = 0; s < 5; ++s) {
        testkit::Gen gen(30 + s);
        const int n = gen.integer(3, 12);
        const auto x = gen.points(n, 2);
        FcmOptions opts;
        opts.seed = s;
        const FcmModel model = fit_fcm(testkit::data_of(x), n, 2.0, opts);
        const Matrix o = adjusted_centroids(model, WpConfig::default_gamma(2.0));
        for (int i = 0; i < n; ++i) {
            CHECK(std::abs(o(i, 0) - x[i][0]) < 1e-6);
            CHECK(std::abs(o(i, 1) - x[i][1]) < 1e-6);
        }
        CHECK(std::abs(wpc(testkit::data_of(x), model, WpConfig{}).value - 1.0) < 1e-6);
    }
}

TEST_CASE("wpc: crisp fixture matches the pair oracle") {
    WpConfig config;
    config.gamma = 3.5;
    const WpcValue w = wpc(testkit::crisp_data(), testkit::crisp_model(), config);
    CHECK_FALSE(w.degenerate);
    const double expect = oracle::pearson({1, 10, 11, 9, 10, 1}, {0, 10, 10, 10, 10, 0});
    CHECK(w.value == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("wpc: identical membership rows are degenerate") {
    const WpcValue w = wpc(testkit::crisp_data(), model_of({{0.5}, {10.5}}, {{0.3, 0.7}, {0.3, 0.7}, {0.3, 0.7}, {0.3, 0.7}}), WpConfig{});
    CHECK(w.degenerate);
    CHECK(w.value == 0.0);
}

TEST_CASE("wpc: c = n fit gives one") {
    testkit::Gen gen(22);
    const auto x = gen.points(8, 2);
    FcmOptions opts;
    const FcmModel model = fit_fcm(testkit::data_of(x), 8, 2.0, opts);
    CHECK(std::abs(wpc(testkit::data_of(x), model, WpConfig{}).value - 1.0) < 1e-9);
}

TEST_CASE("wpc agrees with the oracle on random models") {
    testkit::Gen gen(23);
    for (int t = 0; t < 25; ++t) {
        const int n = gen.integer(4, 60);
        const int c = gen.integer(2, 5);
        const auto x = gen.points(n, gen.integer(1, 3));
        const auto v = gen.points(c, static_cast<int>(x[0].size()));
        const auto u = gen.memberships(n, c);
        WpConfig config;
        config.gamma = gen.real(0.5, 12);
        config.threads = gen.integer(1, 3);
        const WpcValue w = wpc(testkit::data_of(x), model_of(v, u), config);
        CHECK(w.value == doctest::Approx(oracle::wpc(x, u, v, config.gamma)).epsilon(1e-10));
        CHECK(w.value >= -1.0);
        CHECK(w.value <= 1.0);
    }
}

TEST_CASE("wpc at one") {
    CHECK(wpc_at_one(testkit::crisp_data(), Wpc1Mode::Zero).value == 0.0);
    const WpcValue sd = wpc_at_one(testkit::crisp_data(), Wpc1Mode::SdRatio);
    CHECK(sd.value == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-12));
    const WpcValue flat = wpc_at_one(line({-1, 1, -1, 1}), Wpc1Mode::SdRatio);
    CHECK(flat.degenerate);
    CHECK(flat.value == 0.0);
    testkit::Gen gen(24);
    const auto x = gen.points(20, 3);
    CHECK(wpc_at_one(testkit::data_of(x), Wpc1Mode::SdRatio).value == doctest::Approx(oracle::wpc1_sd_ratio(x)).epsilon(1e-12));
}

TEST_CASE("wpc series covers the lower bound through cmax + 1") {
    const auto x = testkit::Gen(25).points(30, 2);
    const auto data = testkit::data_of(x);
    FcmOptions opts;
    opts.restarts = 2;
    const auto models = fit_range(data, 2, 7, 2.0, opts);

    const WpcSeries low = wpc_series(data, models, range(2, 4));
    CHECK(low.values.size() == 5);
    CHECK(low.contains(1));
    CHECK(low.contains(5));
    CHECK(low.mode_used == Wpc1Mode::SdRatio);

    const WpcSeries high = wpc_series(data, models, range(4, 6));
    CHECK_FALSE(high.contains(1));
    CHECK_FALSE(high.contains(2));
    CHECK(high.contains(3));
    CHECK(high.contains(7));
    for (const auto& [c, v] : high.values) {
        CHECK(v >= -1.0);
        CHECK(v <= 1.0);
    }
    CHECK_THROWS_AS(wpc_series(data, models, range(4, 7)), InvalidInput);
}

TEST_CASE("config defaults and validation") {
    CHECK(WpConfig::default_gamma(2.0) == 7.0);
    CHECK(WpConfig::default_gamma(4.0) == 28.0);
    CHECK(WpConfig::for_fuzziness(3.0, 2, 5).gamma == doctest::Approx(15.75));
    CHECK_THROWS_AS(range(1, 4).validate(10), InvalidInput);
    CHECK_THROWS_AS(range(5, 4).validate(10), InvalidInput);
    CHECK_THROWS_AS(range(2, 10).validate(10), InvalidInput);
    CHECK_NOTHROW(range(2, 9).validate(10));
    WpConfig g = range(2, 4);
    g.gamma = 0;
    CHECK_THROWS_AS(g.validate(10), InvalidInput);
    CHECK(range(2, 4).first_fitted_c() == 2);
    CHECK(range(4, 6).first_fitted_c() == 3);
    CHECK(range(4, 6).last_fitted_c() == 7);
}

TEST_CASE("wpi: worked case 1 series") {
    const auto s = series_of({0.4, 0.7, 0.9, 0.95, 0.97});
    CHECK(wpi(s, 2).wpi1 == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(std::abs(wpi(s, 3).wpi1 - 4.0 / 3.0) < 1e-12);
    CHECK(wpi(s, 4).wpi1 == doctest::Approx(1.25).epsilon(1e-12));
}

TEST_CASE("wpi: worked case 2 series") {
    const auto s = series_of({0.4, 0.7, 0.9, 0.85, 0.92});
    CHECK(wpi(s, 2).wpi1 == doctest::Approx(0.75));
    CHECK(wpi(s, 3).wpi1 == kInf);
    CHECK(std::abs(wpi(s, 4).wpi1 - (-1.07)) < 0.005);
    CHECK(std::abs(wpi(s, 2).wpi2 - (-1.0 / 6.0)) < 1e-12);
    CHECK(std::abs(wpi(s, 3).wpi2 - 7.0 / 6.0) < 1e-12);
    CHECK(std::abs(wpi(s, 4).wpi2 - (-0.97)) < 0.005);
}

TEST_CASE("wpi: worked case 3 series") {
    const auto s = series_of({0.4, 0.9, 0.8, 0.7, 0.6});
    CHECK(wpi(s, 2).wpi1 == kInf);
    CHECK(wpi(s, 3).wpi1 == -kInf);
    CHECK(wpi(s, 4).wpi1 == -kInf);
    CHECK(std::abs(wpi(s, 2).wpi2 - 11.0 / 6.0) < 1e-12);
    CHECK(std::abs(wpi(s, 3).wpi2 - (-0.5)) < 1e-12);
    CHECK(std::abs(wpi(s, 4).wpi2 - (-1.0 / 6.0)) < 1e-12);
}

TEST_CASE("wpi: zero numerator over zero denominator is zero") {
    const auto s = series_of({0.5, 0.5, 0.5, 0.6});
    CHECK(wpi(s, 2).wpi1 == 0.0);
}

TEST_CASE("wpi: a perfect previous correlation is a degenerate series") {
    CHECK_THROWS_AS(wpi(series_of({0.4, 1.0, 0.9, 0.95}), 3), DegenerateError);
    CHECK_THROWS_AS(wpi(series_of({0.4, 0.9, 1.0, 0.95}), 3), DegenerateError);
    CHECK_THROWS_AS(wpi(series_of({0.4, 0.9, 0.95}), 3), InvalidInput);
}

TEST_CASE("wp index: the three worked cases") {
    const WpReport one = wp_index(series_of({0.4, 0.7, 0.9, 0.95, 0.97}), range(2, 4));
    CHECK(one.case_used == WpCase::Case1);
    CHECK(one.ranking == std::vector<int>{3, 4, 2});
    CHECK(std::abs(one.wp.at(3) - 4.0 / 3.0) < 1e-12);

    const WpReport two = wp_index(series_of({0.4, 0.7, 0.9, 0.85, 0.92}), range(2, 4));
    CHECK(two.case_used == WpCase::Case2);
    CHECK(std::abs(two.wp.at(2) - 0.58) < 0.005);
    CHECK(std::abs(two.wp.at(3) - 1.92) < 0.005);
    CHECK(std::abs(two.wp.at(4) - (-2.04)) < 0.005);
    CHECK(std::abs(two.wp.at(2) - 7.0 / 12.0) < 1e-12);
    CHECK(std::abs(two.wp.at(3) - (0.75 + 7.0 / 6.0)) < 1e-12);
    CHECK(two.ranking == std::vector<int>{3, 2, 4});

    const WpReport three = wp_index(series_of({0.4, 0.9, 0.8, 0.7, 0.6}), range(2, 4));
    CHECK(three.case_used == WpCase::Case3);
    CHECK(three.ranking == std::vector<int>{2, 4, 3});
    CHECK(std::abs(three.wp.at(2) - 11.0 / 6.0) < 1e-12);
}

TEST_CASE("wp index: ties rank the smaller count first") {
    const WpReport rep = wp_index(series_of({0.1, 0.2, 0.3, 0.4, 0.5, 0.6}), range(2, 5));
    for (const auto& [c, v] : rep.wp) CHECK(std::isfinite(v));
    CHECK(rank_counts({{2, 1.0}, {3, 2.0}, {4, 2.0}}, true) == std::vector<int>{3, 4, 2});
    CHECK(rank_counts({{2, 1.0}, {3, 2.0}, {4, 1.0}}, false) == std::vector<int>{2, 4, 3});
}

TEST_CASE("wp index agrees with a transcription of the definition on random series") {
    testkit::Gen gen(26);
    int seen[4] = {0, 0, 0, 0};
    for (int t = 0; t < 400; ++t) {
        const int cmin = gen.integer(2, 4);
        const int cmax = cmin + gen.integer(0, 6);
        std::map<int, double> w;
        for (int c = cmin - 1; c <= cmax + 1; ++c) {
            // Coarse values make ties, plateaus and sign flips common.
            w[c] = std::round(gen.real(-0.9, 0.95) * 20) / 20;
        }
        WpcSeries s;
        s.values = w;
        const auto expect = oracle::wp_from_series(w, cmin, cmax);
        const WpReport rep = wp_index(s, range(cmin, cmax));
        ++seen[expect.which_case];
        CHECK(static_cast<int>(rep.case_used) + 1 == expect.which_case);
        for (int c = cmin; c <= cmax; ++c) {
            CHECK(std::isfinite(rep.wp.at(c)));
            CHECK(rep.wp.at(c) == doctest::Approx(expect.wp.at(c)).epsilon(1e-12));
            if (std::isfinite(expect.wpi1.at(c))) {
                CHECK(rep.wpi1.at(c) == doctest::Approx(expect.wpi1.at(c)).epsilon(1e-12));
            } else {
                CHECK(rep.wpi1.at(c) == expect.wpi1.at(c));
            }
        }
        std::vector<int> sorted = rep.ranking;
        std::sort(sorted.begin(), sorted.end());
        CHECK(sorted.front() == cmin);
        CHECK(sorted.back() == cmax);
        CHECK(static_cast<int>(sorted.size()) == cmax - cmin + 1);
        if (rep.case_used == WpCase::Case1) {
            for (const auto& [c, v] : rep.wpi1) {
                CHECK(v != kInf);
                if (std::isfinite(v)) CHECK(rep.wp.at(c) == v);
            }
        }
    }
    CHECK(seen[1] > 0);
    CHECK(seen[2] > 0);
    CHECK(seen[3] > 0);
}

TEST_CASE("wp report is unchanged by a reflection of the data") {
    const auto x = testkit::Gen(27).points(25, 2);
    auto rx = x;
    for (auto& r : rx) r[0] = -r[0];
    FcmOptions opts;
    opts.restarts = 1;
    const auto models = fit_range(testkit::data_of(x), 2, 6, 2.0, opts);
    std::map<int, FcmModel> reflected = models;
    for (auto& [c, m] : reflected) m.centroids.col(0) = -m.centroids.col(0);
    const WpConfig config = range(2, 5);
    const WpcSeries a = wpc_series(testkit::data_of(x), models, config);
    const WpcSeries b = wpc_series(testkit::data_of(rx), reflected, config);
    CHECK(a.values == b.values);
    CHECK(wp_index(a, config).wp == wp_index(b, config).wp);
}

TEST_CASE("wpc is unchanged by rotation and translation up to rounding") {
    const auto x = testkit::Gen(28).points(30, 2);
    const double th = 0.7;
    oracle::Rows rx;
    for (const auto& r : x) rx.push_back({std::cos(th) * r[0] - std::sin(th) * r[1] + 5, std::sin(th) * r[0] + std::cos(th) * r[1] - 2});
    FcmOptions opts;
    opts.restarts = 1;
    const auto models = fit_range(testkit::data_of(x), 2, 4, 2.0, opts);
    for (const auto& [c, m] : models) {
        FcmModel moved = m;
        for (Eigen::Index j = 0; j < m.centroids.rows(); ++j) {
            moved.centroids(j, 0) = std::cos(th) * m.centroids(j, 0) - std::sin(th) * m.centroids(j, 1) + 5;
            moved.centroids(j, 1) = std::sin(th) * m.centroids(j, 0) + std::cos(th) * m.centroids(j, 1) - 2;
        }
        CHECK(wpc(testkit::data_of(rx), moved, WpConfig{}).value ==
              doctest::Approx(wpc(testkit::data_of(x), m, WpConfig{}).value).epsilon(1e-9));
    }
}

}  // TEST_SUITE
