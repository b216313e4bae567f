#include "wpcvi/evaluation.hpp"

#include "wpcvi/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace wpcvi {

std::vector<int> optimal_assignment(const std::vector<std::vector<double>>& score) {
    const int n = static_cast<int>(score.size());
    if (n == 0) return {};
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& row : score) {
        if (static_cast<int>(row.size()) != n) throw InvalidInput("assignment matrix must be square");
        for (double v : row) top = std::max(top, v);
    }
    // Shortest augmenting path Hungarian method on cost = top - score, 1-based
    // internally with row/column potentials u, v.
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> match(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = match[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = (top - score[i0 - 1][j - 1]) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> assignment(n, -1);
    for (int j = 1; j <= n; ++j) assignment[match[j] - 1] = j - 1;
    return assignment;
}

double accuracy(const FcmModel& model, std::span<const int> labels) {
    const int c = model.c();
    if (static_cast<Eigen::Index>(labels.size()) != model.memberships.rows()) {
        throw InvalidInput("label count does not match the model's point count");
    }
    std::vector<int> classes(labels.begin(), labels.end());
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    if (static_cast<int>(classes.size()) != c) {
        throw InvalidInput("accuracy needs c (" + std::to_string(c) + ") equal to the number of classes (" +
                           std::to_string(classes.size()) + ")");
    }
    const auto clusters = hard_assignments(model.memberships);
    std::vector<std::vector<double>> confusion(static_cast<std::size_t>(c), std::vector<double>(static_cast<std::size_t>(c), 0.0));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto cls = std::lower_bound(classes.begin(), classes.end(), labels[i]) - classes.begin();
        confusion[static_cast<std::size_t>(clusters[i])][static_cast<std::size_t>(cls)] += 1.0;
    }
    const auto assignment = optimal_assignment(confusion);
    double matched = 0.0;
    for (int k = 0; k < c; ++k) matched += confusion[k][assignment[k]];
    return matched / static_cast<double>(labels.size());
}

std::string_view to_string(DatasetKind kind) noexcept {
    switch (kind) {
        case DatasetKind::Artificial: return "artificial";
        case DatasetKind::RealWorld: return "real_world";
        case DatasetKind::Image: return "image";
    }
    return "?";
}

std::optional<DatasetKind> parse_dataset_kind(std::string_view text) {
    if (text == "artificial") return DatasetKind::Artificial;
    if (text == "real_world" || text == "real-world" || text == "real") return DatasetKind::RealWorld;
    if (text == "image") return DatasetKind::Image;
    return std::nullopt;
}

double gate_threshold(DatasetKind kind) {
    switch (kind) {
        case DatasetKind::Artificial: return 0.75;
        case DatasetKind::RealWorld: return 0.70;
        case DatasetKind::Image: break;
    }
    throw InvalidInput("image datasets have no accuracy gate");
}

bool gate(double accuracy, DatasetKind kind) {
    return !(accuracy < gate_threshold(kind));
}

int cmax_rule(int true_c) {
    if (true_c >= 2 && true_c <= 8) return 10;
    if (true_c >= 9 && true_c <= 13) return 15;
    if (true_c >= 14 && true_c <= 18) return 20;
    throw InvalidInput("true cluster count " + std::to_string(true_c) + " outside [2, 18]");
}

int rank_of(std::span<const int> ranking, int c_true) {
    const auto it = std::find(ranking.begin(), ranking.end(), c_true);
    return it == ranking.end() ? 0 : static_cast<int>(it - ranking.begin()) + 1;
}

RScore r_score(std::span<const int> ranking, int c1, int c2) {
    RScore s;
    switch (rank_of(ranking, c1)) {
        case 1: s.sc1 = 3; break;
        case 2: s.sc1 = 2; break;
        case 3: s.sc1 = 1; break;
        default: break;
    }
    switch (rank_of(ranking, c2)) {
        case 2: s.sc2 = 2; break;
        case 1:
        case 3: s.sc2 = 1; break;
        default: break;
    }
    s.total = s.sc1 + s.sc2;
    return s;
}

double i_score(std::span<const int> ranking, const std::set<int>& acceptable) {
    if (acceptable.empty()) throw InvalidInput("acceptable set must not be empty");
    const auto hit = [&](std::size_t k) { return k < ranking.size() && acceptable.count(ranking[k]) != 0; };
    const int pattern = (hit(0) ? 4 : 0) | (hit(1) ? 2 : 0) | (hit(2) ? 1 : 0);
    switch (pattern) {
        case 0b111: return 3.0;
        case 0b110: return 2.5;
        case 0b101: return 2.0;
        case 0b100:
        case 0b011: return 1.5;
        case 0b010: return 1.0;
        case 0b001: return 0.5;
        default: return 0.0;
    }
}

// ---------------------------------------------------------------------------

WpConfig PipelineOptions::wp_config() const {
    WpConfig config;
    config.gamma = resolved_gamma();
    config.cmin = cmin;
    config.cmax = cmax;
    config.wpc1_mode = wpc1_mode;
    config.threads = fcm.threads;
    return config;
}

bool PipelineOptions::wants(IndexName name) const {
    return std::find(indexes.begin(), indexes.end(), name) != indexes.end();
}

std::vector<int> PipelineResult::ranking(IndexName name) const {
    if (name == IndexName::WP) return wp ? wp->ranking : std::vector<int>{};
    const IndexSeries* series = reference.find(name);
    return series ? series->ranking : std::vector<int>{};
}

PipelineResult run_pipeline(const DataMatrix& normalized, const PipelineOptions& options) {
    const bool with_wp = options.wants(IndexName::WP);
    const WpConfig config = options.wp_config();
    config.validate(normalized.n());
    const int first = with_wp ? config.first_fitted_c() : options.cmin;
    const int last = with_wp ? config.last_fitted_c() : options.cmax;

    PipelineResult result;
    result.models = fit_range(normalized, first, last, options.m, options.fcm);
    if (with_wp) {
        result.wpc = wpc_series(normalized, result.models, config);
        const bool all_flat = std::all_of(result.wpc->values.begin(), result.wpc->values.end(), [&](const auto& kv) {
            return kv.first == 1 || result.wpc->degenerate.count(kv.first) != 0;
        });
        if (all_flat) {
            result.wp_error = "WPC is undefined at every fitted cluster count";
        } else {
            try {
                result.wp = wp_index(*result.wpc, config);
            } catch (const DegenerateError& e) {
                result.wp_error = e.what();
            }
        }
    }
    result.reference = compute_all(normalized, result.models, options.m, options.indexes, options.cmin, options.cmax);
    return result;
}

// ---------------------------------------------------------------------------

namespace {

int dataset_cmax(const BenchDataset& ds) {
    int cmax = 10;
    if (ds.cmax) {
        cmax = *ds.cmax;
    } else if (ds.true_c) {
        cmax = cmax_rule(*ds.true_c);
    } else if (!ds.acceptable.empty()) {
        cmax = cmax_rule(std::max(2, *ds.acceptable.rbegin()));
    }
    return std::min(cmax, ds.data.n() - 2);
}

DatasetOutcome run_one(const BenchDataset& ds, double m, std::uint64_t seed, const BenchOptions& options) {
    DatasetOutcome out;
    out.name = ds.name;
    out.kind = ds.kind;
    out.m = m;
    out.cmax = dataset_cmax(ds);
    if (out.cmax < 2) throw InvalidInput("dataset '" + ds.name + "' is too small to scan cluster counts");

    PipelineOptions po;
    po.m = m;
    po.gamma = options.gamma;
    po.cmin = 2;
    po.cmax = out.cmax;
    po.wpc1_mode = options.wpc1_mode;
    po.normalization = options.normalization;
    po.fcm = options.fcm;
    po.fcm.seed = seed;
    po.indexes = options.indexes;

    const DataMatrix normalized = normalize(ds.data, options.normalization);
    const PipelineResult result = run_pipeline(normalized, po);

    if (ds.kind != DatasetKind::Image && ds.data.has_labels()) {
        const int classes = ds.data.distinct_labels();
        const auto it = result.models.find(classes);
        if (it != result.models.end()) {
            out.accuracy = accuracy(it->second, *ds.data.labels());
            out.excluded = !gate(*out.accuracy, ds.kind);
        }
    }
    if (out.excluded) return out;

    for (IndexName name : options.indexes) {
        IndexOutcome io;
        io.ranking = result.ranking(name);
        if (ds.true_c) io.rank = rank_of(io.ranking, *ds.true_c);
        if (ds.true_c && ds.secondary_c) io.rscore = r_score(io.ranking, *ds.true_c, *ds.secondary_c);
        if (!ds.acceptable.empty()) io.iscore = i_score(io.ranking, ds.acceptable);
        out.indexes.emplace(name, std::move(io));
    }
    return out;
}

}  // namespace

BenchmarkScore run_benchmark(std::span<const BenchDataset> datasets, const BenchOptions& options) {
    if (options.ms.empty()) throw InvalidInput("benchmark needs at least one fuzziness value");
    const std::size_t per_dataset = options.ms.size();
    std::vector<DatasetOutcome> outcomes(datasets.size() * per_dataset);
    parallel_for(outcomes.size(), options.threads, [&](std::size_t job) {
        const std::size_t d = job / per_dataset;
        const std::size_t k = job % per_dataset;
        const std::uint64_t seed = derive_seed(derive_seed(options.fcm.seed, d), k);
        outcomes[job] = run_one(datasets[d], options.ms[k], seed, options);
    });

    BenchmarkScore score;
    for (double m : options.ms) {
        auto& table = score.summary[m];
        for (IndexName name : options.indexes) table[name] = IndexSummary{};
    }
    std::map<double, std::map<IndexName, double>> rank_sums;
    for (std::size_t job = 0; job < outcomes.size(); ++job) {
        const auto& out = outcomes[job];
        const BenchDataset& ds = datasets[job / per_dataset];
        if (out.excluded) continue;
        auto& table = score.summary[out.m];
        for (const auto& [name, io] : out.indexes) {
            IndexSummary& s = table[name];
            if (ds.true_c && !ds.secondary_c) {
                // A true count missing from the ranking (degenerate there) counts as the worst rank.
                const int rank = io.rank > 0 ? io.rank : out.cmax - 1;
                ++s.ranked_datasets;
                if (rank == 1) ++s.correct_count;
                rank_sums[out.m][name] += rank;
            }
            if (io.rscore) s.r_score_total += io.rscore->total;
            if (io.iscore) s.i_score_total += *io.iscore;
        }
    }
    for (auto& [m, table] : score.summary) {
        for (auto& [name, s] : table) {
            if (s.ranked_datasets > 0) s.avg_rank = rank_sums[m][name] / s.ranked_datasets;
        }
    }
    score.outcomes = std::move(outcomes);
    return score;
}

// ---------------------------------------------------------------------------

std::string_view to_string(SensitivityMode mode) noexcept {
    return mode == SensitivityMode::Regenerate ? "regenerate" : "refit";
}

double sample_sd(std::span<const double> values) {
    if (values.size() < 2) return 0.0;
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

SensitivityReport sensitivity_study(std::span<const SensitivityDataset> datasets, const SensitivityOptions& options) {
    if (options.repeats < 2) throw InvalidInput("sensitivity study needs at least 2 repeats");
    if (options.gammas.empty()) throw InvalidInput("sensitivity study needs at least one gamma");

    SensitivityReport report;
    for (std::size_t di = 0; di < datasets.size(); ++di) {
        const SensitivityDataset& ds = datasets[di];
        const std::uint64_t dataset_seed = derive_seed(options.fcm.seed, di);
        const std::optional<DataMatrix> fixed =
            options.mode == SensitivityMode::Refit ? std::optional<DataMatrix>(normalize(generate_mixture(ds.spec), options.normalization))
                                                   : std::nullopt;

        // wp[g][r] -> WP by c; empty when the repeat was degenerate.
        std::vector<std::vector<std::map<int, double>>> wp(options.gammas.size(),
                                                           std::vector<std::map<int, double>>(static_cast<std::size_t>(options.repeats)));
        std::vector<std::vector<int>> ranks(options.gammas.size(), std::vector<int>(static_cast<std::size_t>(options.repeats), 0));

        for (int r = 0; r < options.repeats; ++r) {
            const std::uint64_t repeat_seed = options.fixed_seed ? dataset_seed : derive_seed(dataset_seed, static_cast<std::uint64_t>(r));
            std::optional<DataMatrix> fresh;
            if (!fixed) {
                MixtureSpec spec = ds.spec;
                spec.seed = derive_seed(repeat_seed, 0xDA7Au);
                fresh = normalize(generate_mixture(spec), options.normalization);
            }
            const DataMatrix& data = fixed ? *fixed : *fresh;

            WpConfig config;
            config.cmin = options.cmin;
            config.cmax = options.cmax;
            config.wpc1_mode = options.wpc1_mode;
            config.threads = options.fcm.threads;
            config.validate(data.n());
            FcmOptions fcm = options.fcm;
            fcm.seed = repeat_seed;
            const auto models = fit_range(data, config.first_fitted_c(), config.last_fitted_c(), options.m, fcm);

            for (std::size_t g = 0; g < options.gammas.size(); ++g) {
                config.gamma = options.gammas[g];
                try {
                    const WpReport rep = wp_index(wpc_series(data, models, config), config);
                    wp[g][static_cast<std::size_t>(r)] = rep.wp;
                    ranks[g][static_cast<std::size_t>(r)] = rank_of(rep.ranking, ds.true_c);
                } catch (const DegenerateError&) {
                    // recorded as an empty map
                }
            }
        }

        for (std::size_t g = 0; g < options.gammas.size(); ++g) {
            SensitivityCell cell;
            cell.dataset = ds.name;
            cell.gamma = options.gammas[g];
            for (int c = options.cmin; c <= options.cmax; ++c) {
                std::vector<double> values;
                for (const auto& rep : wp[g]) {
                    if (const auto it = rep.find(c); it != rep.end()) values.push_back(it->second);
                }
                cell.sd_by_c[c] = sample_sd(values);
            }
            double total = 0.0;
            for (const auto& [c, sd] : cell.sd_by_c) total += sd;
            cell.average_sd = total / static_cast<double>(cell.sd_by_c.size());
            for (std::size_t r = 0; r < wp[g].size(); ++r) {
                if (wp[g][r].empty()) {
                    ++cell.degenerate_repeats;
                    continue;
                }
                ++cell.rank_counts[ranks[g][r]];
            }
            for (const auto& [rank, freq] : cell.rank_counts) {
                if (freq > cell.modal_frequency) {
                    cell.modal_rank = rank;
                    cell.modal_frequency = freq;
                }
            }
            report.cells.push_back(std::move(cell));
        }
    }
    return report;
}

}  // namespace wpcvi
