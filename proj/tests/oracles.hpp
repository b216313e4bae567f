// Naive reference implementations used only by the tests. They work on plain
// nested vectors and share no code with the library.
#ifndef WPCVI_TESTS_ORACLES_HPP
#define WPCVI_TESTS_ORACLES_HPP

#include "wpcvi/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <vector>

namespace oracle {

using Rows = std::vector<std::vector<double>>;

inline Rows rows_of(const wpcvi::Matrix& m) {
    Rows out(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
    }
    return out;
}

inline wpcvi::Matrix matrix_of(const Rows& r) {
    wpcvi::Matrix m(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(r.empty() ? 0 : r[0].size()));
    for (std::size_t i = 0; i < r.size(); ++i) {
        for (std::size_t j = 0; j < r[i].size(); ++j) m(i, j) = r[i][j];
    }
    return m;
}

inline double sq(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return s;
}

inline double dist(const std::vector<double>& a, const std::vector<double>& b) { return std::sqrt(sq(a, b)); }

inline std::vector<double> mean_row(const Rows& x) {
    std::vector<double> v(x[0].size(), 0.0);
    for (const auto& r : x) {
        for (std::size_t k = 0; k < r.size(); ++k) v[k] += r[k];
    }
    for (auto& e : v) e /= static_cast<double>(x.size());
    return v;
}

// ---- FCM --------------------------------------------------------------------

inline Rows memberships(const Rows& x, const Rows& v, double m) {
    Rows u(x.size(), std::vector<double>(v.size(), 0.0));
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::vector<std::size_t> hits;
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (dist(x[i], v[j]) < 1e-12) hits.push_back(j);
        }
        if (!hits.empty()) {
            for (auto j : hits) u[i][j] = 1.0 / static_cast<double>(hits.size());
            continue;
        }
        for (std::size_t j = 0; j < v.size(); ++j) {
            double s = 0;
            for (std::size_t k = 0; k < v.size(); ++k) s += std::pow(dist(x[i], v[j]) / dist(x[i], v[k]), 2.0 / (m - 1.0));
            u[i][j] = 1.0 / s;
        }
    }
    return u;
}

inline Rows centroids(const Rows& x, const Rows& u, double m) {
    const std::size_t c = u[0].size();
    Rows v(c, std::vector<double>(x[0].size(), 0.0));
    for (std::size_t j = 0; j < c; ++j) {
        double w = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double a = std::pow(u[i][j], m);
            w += a;
            for (std::size_t k = 0; k < x[i].size(); ++k) v[j][k] += a * x[i][k];
        }
        for (auto& e : v[j]) e /= w;
    }
    return v;
}

inline double objective(const Rows& x, const Rows& v, const Rows& u, double m) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < v.size(); ++j) s += std::pow(u[i][j], m) * sq(x[i], v[j]);
    }
    return s;
}

// ---- correlation --------------------------------------------------------------

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

inline std::vector<double> pair_distances(const Rows& x) {
    std::vector<double> d;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = i + 1; j < x.size(); ++j) d.push_back(dist(x[i], x[j]));
    }
    return d;
}

// ---- WP -----------------------------------------------------------------------

inline Rows adjusted(const Rows& u, const Rows& v, double gamma) {
    Rows o(u.size(), std::vector<double>(v[0].size(), 0.0));
    for (std::size_t i = 0; i < u.size(); ++i) {
        double w = 0;
        for (std::size_t j = 0; j < v.size(); ++j) {
            const double a = std::pow(u[i][j], gamma);
            w += a;
            for (std::size_t k = 0; k < v[j].size(); ++k) o[i][k] += a * v[j][k];
        }
        for (auto& e : o[i]) e /= w;
    }
    return o;
}

inline double wpc(const Rows& x, const Rows& u, const Rows& v, double gamma) {
    return pearson(pair_distances(x), pair_distances(adjusted(u, v, gamma)));
}

inline double wpc1_sd_ratio(const Rows& x) {
    const auto v0 = mean_row(x);
    std::vector<double> d;
    for (const auto& r : x) d.push_back(dist(r, v0));
    const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
    double ss = 0;
    for (double e : d) ss += (e - mean) * (e - mean);
    const double sd = std::sqrt(ss / static_cast<double>(d.size() - 1));
    return sd / (*std::max_element(d.begin(), d.end()) - *std::min_element(d.begin(), d.end()));
}

struct Wp {
    std::map<int, double> wpi1, wpi2, wp;
    int which_case = 0;
};

// Straight transcription of the three-case definition over a WPC series keyed by c.
inline Wp wp_from_series(const std::map<int, double>& w, int cmin, int cmax) {
    const double inf = std::numeric_limits<double>::infinity();
    Wp r;
    for (int c = cmin; c <= cmax; ++c) {
        const double num = (w.at(c) - w.at(c - 1)) * (1 - w.at(c));
        const double den = std::max(0.0, w.at(c + 1) - w.at(c)) * (1 - w.at(c - 1));
        r.wpi1[c] = den != 0 ? num / den : (num > 0 ? inf : (num < 0 ? -inf : 0.0));
        r.wpi2[c] = (w.at(c) - w.at(c - 1)) / (1 - w.at(c - 1)) - (w.at(c + 1) - w.at(c)) / (1 - w.at(c));
    }
    std::vector<double> finite;
    bool pos_inf = false;
    for (auto& [c, v] : r.wpi1) {
        if (std::isfinite(v)) finite.push_back(v);
        if (v == inf) pos_inf = true;
    }
    if (finite.empty()) {
        r.which_case = 3;
        r.wp = r.wpi2;
        return r;
    }
    const double lo = *std::min_element(finite.begin(), finite.end());
    const double hi = *std::max_element(finite.begin(), finite.end());
    r.which_case = pos_inf ? 2 : 1;
    for (auto& [c, v] : r.wpi1) {
        double base = v;
        if (v == -inf) base = lo;
        if (v == inf) base = hi;
        r.wp[c] = pos_inf ? base + r.wpi2[c] : base;
    }
    return r;
}

// ---- comparison indexes -------------------------------------------------------

inline double min_gap2(const Rows& v) {
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < v.size(); ++j) {
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (j != k) g = std::min(g, sq(v[j], v[k]));
        }
    }
    return g;
}

inline double xb(const Rows& x, const Rows& u, const Rows& v) {
    double s = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        for (std::size_t i = 0; i < x.size(); ++i) s += u[i][j] * u[i][j] * sq(x[i], v[j]);
    }
    return s / (static_cast<double>(x.size()) * min_gap2(v));
}

inline double pbm(const Rows& x, const Rows& u, const Rows& v) {
    const auto v0 = mean_row(x);
    double e1 = 0;
    for (const auto& r : x) e1 += dist(r, v0);
    double dmax = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        for (std::size_t k = 0; k < v.size(); ++k) dmax = std::max(dmax, dist(v[j], v[k]));
    }
    double ec = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        for (std::size_t i = 0; i < x.size(); ++i) ec += u[i][j] * dist(x[i], v[j]);
    }
    const double r = e1 * dmax / (static_cast<double>(v.size()) * ec);
    return r * r;
}

inline double tang(const Rows& x, const Rows& u, const Rows& v) {
    const double c = static_cast<double>(v.size());
    double comp = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        for (std::size_t i = 0; i < x.size(); ++i) comp += u[i][j] * u[i][j] * sq(x[i], v[j]);
    }
    double sep = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (j != k) sep += sq(v[j], v[k]);
        }
    }
    return (comp + sep / (c * (c - 1))) / (min_gap2(v) + 1 / c);
}

inline double wl(const Rows& x, const Rows& u, const Rows& v) {
    double num = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        double a = 0, b = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            a += u[i][j] * u[i][j] * sq(x[i], v[j]);
            b += u[i][j];
        }
        num += a / b;
    }
    std::vector<double> g;
    for (std::size_t j = 0; j < v.size(); ++j) {
        for (std::size_t k = j + 1; k < v.size(); ++k) g.push_back(sq(v[j], v[k]));
    }
    std::sort(g.begin(), g.end());
    const std::size_t h = g.size() / 2;
    const double med = g.size() % 2 ? g[h] : (g[h - 1] + g[h]) / 2;
    return num / (g.front() + med);
}

inline double gc_sum_min(const Rows& x, const Rows& u) {
    std::vector<double> d, r;
    double gamma = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            double rij = 0;
            for (std::size_t k = 0; k < u[i].size(); ++k) rij += std::min(u[i][k], u[j][k]);
            d.push_back(dist(x[i], x[j]));
            r.push_back(rij);
            gamma += rij * d.back();
        }
    }
    double nws = 0;
    for (std::size_t k = 0; k < u[0].size(); ++k) {
        double s = 0;
        for (const auto& row : u) s += row[k];
        nws += s * (s - 1) / 2;
    }
    const std::size_t take = static_cast<std::size_t>(std::floor(nws));
    std::vector<double> dd = d, rd = r, ra = r;
    std::sort(dd.rbegin(), dd.rend());
    std::sort(rd.rbegin(), rd.rend());
    std::sort(ra.begin(), ra.end());
    double gmax = 0, gmin = 0;
    for (std::size_t t = 0; t < take && t < dd.size(); ++t) {
        gmax += dd[t] * rd[t];
        gmin += dd[t] * ra[t];
    }
    return (gamma - gmin) / (gmax - gmin);
}

inline double kwon2(const Rows& x, const Rows& u, const Rows& v, double m) {
    const double n = static_cast<double>(x.size());
    const double c = static_cast<double>(v.size());
    const double w1 = (n - c + 1) / n;
    const double w2 = std::pow(c / (c - 1), std::sqrt(2.0));
    const double w3 = n * c / ((n - c + 1) * (n - c + 1));
    const double e = std::pow(2.0, std::sqrt(m / 2));
    double comp = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        for (std::size_t i = 0; i < x.size(); ++i) comp += std::pow(u[i][j], e) * sq(x[i], v[j]);
    }
    const auto v0 = mean_row(x);
    double s = 0, smax = 0;
    for (const auto& vj : v) {
        s += sq(vj, v0);
        smax = std::max(smax, sq(vj, v0));
    }
    return w1 * (w2 * comp + s / smax + w3) / (min_gap2(v) + 1 / c + 1 / std::pow(c, m - 1));
}

// ---- scoring ------------------------------------------------------------------

// Best agreement over every cluster -> class bijection (small c only).
inline double accuracy_brute(const std::vector<int>& cluster, const std::vector<int>& label, int c) {
    std::vector<int> perm(static_cast<std::size_t>(c));
    std::iota(perm.begin(), perm.end(), 0);
    std::size_t best = 0;
    do {
        std::size_t hit = 0;
        for (std::size_t i = 0; i < cluster.size(); ++i) hit += perm[cluster[i]] == label[i];
        best = std::max(best, hit);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(best) / static_cast<double>(cluster.size());
}

// Positions are 1-based; 0 means "not in the top three".
inline int sc1_table(int pos) { return pos == 1 ? 3 : pos == 2 ? 2 : pos == 3 ? 1 : 0; }
inline int sc2_table(int pos) { return pos == 2 ? 2 : (pos == 1 || pos == 3) ? 1 : 0; }

inline double isc_table(bool r1, bool r2, bool r3) {
    if (r1 && r2 && r3) return 3;
    if (r1 && r2) return 2.5;
    if (r1 && r3) return 2;
    if (r1) return 1.5;
    if (r2 && r3) return 1.5;
    if (r2) return 1;
    if (r3) return 0.5;
    return 0;
}

}  // namespace oracle

#endif  // WPCVI_TESTS_ORACLES_HPP
