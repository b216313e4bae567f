#include "wpcvi/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace wpcvi {
namespace {

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

template <class Map>
Json by_count(const Map& values) {
    Json out = Json::object();
    for (const auto& [c, v] : values) out[std::to_string(c)] = number_or_inf(v);
    return out;
}

}  // namespace

Json number_or_inf(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

Json to_json(const FcmModel& model, bool include_memberships) {
    Json out;
    out["c"] = model.c();
    out["fuzziness"] = model.fuzziness;
    out["objective"] = model.objective;
    out["iterations"] = model.iterations;
    out["converged"] = model.converged;
    out["reseed_events"] = model.reseed_events;
    out["centroids"] = matrix_to_json(model.centroids);
    if (include_memberships) out["memberships"] = matrix_to_json(model.memberships);
    return out;
}

Json to_json(const WpcSeries& series) {
    Json out;
    out["wpc1_mode"] = std::string(to_string(series.mode_used));
    out["values"] = by_count(series.values);
    out["degenerate"] = Json(std::vector<int>(series.degenerate.begin(), series.degenerate.end()));
    return out;
}

Json to_json(const WpReport& report) {
    Json out;
    out["case"] = std::string(to_string(report.case_used));
    out["wpi1"] = by_count(report.wpi1);
    out["wpi2"] = by_count(report.wpi2);
    out["wp"] = by_count(report.wp);
    out["ranking"] = report.ranking;
    return out;
}

Json to_json(const IndexSeries& series) {
    Json out;
    out["index"] = std::string(to_string(series.name));
    out["direction"] = series.direction == Direction::Max ? "max" : "min";
    Json values = Json::array();
    for (const auto& v : series.values) {
        Json row;
        row["c"] = v.c;
        row["value"] = number_or_inf(v.value);
        row["degenerate"] = v.degenerate;
        if (v.degenerate) row["note"] = v.note;
        values.push_back(std::move(row));
    }
    out["values"] = std::move(values);
    out["ranking"] = series.ranking;
    return out;
}

Json to_json(const CviReport& report) {
    Json out = Json::array();
    for (const auto& s : report.indexes) out.push_back(to_json(s));
    return out;
}

Json to_json(const PipelineOptions& options) {
    Json out;
    out["m"] = options.m;
    out["gamma"] = options.resolved_gamma();
    out["gamma_source"] = options.gamma ? "explicit" : "default_7m2_over_4";
    out["cmin"] = options.cmin;
    out["cmax"] = options.cmax;
    out["wpc1_mode"] = std::string(to_string(options.wpc1_mode));
    out["normalization"] = std::string(to_string(options.normalization));
    out["restarts"] = options.fcm.restarts;
    out["max_iterations"] = options.fcm.max_iterations;
    out["tolerance"] = options.fcm.tolerance;
    out["seed"] = options.fcm.seed;
    Json names = Json::array();
    for (IndexName n : options.indexes) names.push_back(std::string(to_string(n)));
    out["indexes"] = std::move(names);
    return out;
}

Json to_json(const BenchmarkScore& score) {
    Json out;
    Json summary = Json::array();
    for (const auto& [m, table] : score.summary) {
        for (const auto& [name, s] : table) {
            Json row;
            row["m"] = m;
            row["index"] = std::string(to_string(name));
            row["correct_count"] = s.correct_count;
            row["ranked_datasets"] = s.ranked_datasets;
            row["avg_rank"] = s.avg_rank;
            row["r_score_total"] = s.r_score_total;
            row["i_score_total"] = s.i_score_total;
            summary.push_back(std::move(row));
        }
    }
    out["summary"] = std::move(summary);

    Json outcomes = Json::array();
    for (const auto& o : score.outcomes) {
        Json row;
        row["dataset"] = o.name;
        row["kind"] = std::string(to_string(o.kind));
        row["m"] = o.m;
        row["cmax"] = o.cmax;
        row["accuracy"] = o.accuracy ? Json(*o.accuracy) : Json(nullptr);
        row["excluded"] = o.excluded;
        Json per_index = Json::object();
        for (const auto& [name, io] : o.indexes) {
            Json entry;
            entry["ranking"] = io.ranking;
            entry["rank"] = io.rank;
            if (io.rscore) entry["r_score"] = {{"sc1", io.rscore->sc1}, {"sc2", io.rscore->sc2}, {"total", io.rscore->total}};
            if (io.iscore) entry["i_score"] = *io.iscore;
            per_index[std::string(to_string(name))] = std::move(entry);
        }
        row["indexes"] = std::move(per_index);
        outcomes.push_back(std::move(row));
    }
    out["datasets"] = std::move(outcomes);
    return out;
}

Json to_json(const SensitivityReport& report) {
    Json cells = Json::array();
    for (const auto& cell : report.cells) {
        Json row;
        row["dataset"] = cell.dataset;
        row["gamma"] = cell.gamma;
        row["sd_by_c"] = by_count(cell.sd_by_c);
        row["average_sd"] = cell.average_sd;
        row["modal_rank"] = cell.modal_rank;
        row["modal_frequency"] = cell.modal_frequency;
        Json counts = Json::object();
        for (const auto& [rank, freq] : cell.rank_counts) counts[std::to_string(rank)] = freq;
        row["rank_counts"] = std::move(counts);
        row["degenerate_repeats"] = cell.degenerate_repeats;
        cells.push_back(std::move(row));
    }
    return cells;
}

void write_plot_csv(std::ostream& out, const PipelineResult& result) {
    out << "c,index,value,degenerate\n";
    if (result.wpc) {
        for (const auto& [c, v] : result.wpc->values) {
            out << c << ",WPC," << format_double(v) << ',' << (result.wpc->degenerate.count(c) ? 1 : 0) << '\n';
        }
    }
    if (result.wp) {
        for (const auto& [c, v] : result.wp->wp) out << c << ",WP," << format_double(v) << ",0\n";
    }
    for (const auto& series : result.reference.indexes) {
        for (const auto& v : series.values) {
            out << v.c << ',' << to_string(series.name) << ',' << format_double(v.value) << ',' << (v.degenerate ? 1 : 0)
                << '\n';
        }
    }
}

void write_bench_csv(std::ostream& out, const BenchmarkScore& score) {
    out << "dataset,kind,m,cmax,accuracy,excluded,index,rank,top1,top2,top3,sc1,sc2,r_score,i_score\n";
    for (const auto& o : score.outcomes) {
        const auto prefix = [&] {
            out << o.name << ',' << to_string(o.kind) << ',' << format_double(o.m) << ',' << o.cmax << ','
                << (o.accuracy ? format_double(*o.accuracy) : "") << ',' << (o.excluded ? 1 : 0) << ',';
        };
        if (o.indexes.empty()) {
            prefix();
            out << ",,,,,,,,\n";
            continue;
        }
        for (const auto& [name, io] : o.indexes) {
            prefix();
            out << to_string(name) << ',' << io.rank;
            for (std::size_t k = 0; k < 3; ++k) {
                out << ',';
                if (k < io.ranking.size()) out << io.ranking[k];
            }
            if (io.rscore) {
                out << ',' << io.rscore->sc1 << ',' << io.rscore->sc2 << ',' << io.rscore->total;
            } else {
                out << ",,,";
            }
            out << ',' << (io.iscore ? format_double(*io.iscore) : "") << '\n';
        }
    }
}

void write_bench_summary_csv(std::ostream& out, const BenchmarkScore& score) {
    out << "m,index,correct_count,ranked_datasets,avg_rank,r_score_total,i_score_total\n";
    for (const auto& [m, table] : score.summary) {
        for (const auto& [name, s] : table) {
            out << format_double(m) << ',' << to_string(name) << ',' << s.correct_count << ',' << s.ranked_datasets << ','
                << format_double(s.avg_rank) << ',' << s.r_score_total << ',' << format_double(s.i_score_total) << '\n';
        }
    }
}

void write_sensitivity_csv(std::ostream& out, const SensitivityReport& report) {
    out << "dataset,gamma,c,sd,average_sd,modal_rank,modal_frequency\n";
    for (const auto& cell : report.cells) {
        for (const auto& [c, sd] : cell.sd_by_c) {
            out << cell.dataset << ',' << format_double(cell.gamma) << ',' << c << ',' << format_double(sd) << ','
                << format_double(cell.average_sd) << ',' << cell.modal_rank << ',' << cell.modal_frequency << '\n';
        }
    }
}

}  // namespace wpcvi
