#include "cli.hpp"

#include "wpcvi/data.hpp"
#include "wpcvi/evaluation.hpp"
#include "wpcvi/fcm.hpp"
#include "wpcvi/image.hpp"
#include "wpcvi/reference_indexes.hpp"
#include "wpcvi/report.hpp"
#include "wpcvi/types.hpp"
#include "wpcvi/wp_index.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace wpcvi::cli {
namespace {

namespace fs = std::filesystem;

struct Settings {
    std::string input;
    std::string output_dir = ".";
    double m = 2.0;
    double gamma = 0.0;
    bool gamma_set = false;
    int cmin = 2;
    int cmax = 10;
    int restarts = 20;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string indexes;
    std::string wpc1_mode = "sd";
    std::string normalize = "standardize";
    int top_k = 3;
    int threads = 1;
    std::string label_column;
    int clusters = 0;
    std::string wpc_series;
    int target_width = 120;
    int target_height = 80;
    std::string gammas = "0.1,1,7,100";
    int repeats = 30;
    std::string mode = "refit";
    int true_c = 0;
};

const std::string kImageIndexes = "wp,xb,pbm,tang,wl,kwon2";

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        parts.push_back(b == std::string::npos ? std::string() : item.substr(b, e - b + 1));
    }
    return parts;
}

double parse_real(const std::string& text, const std::string& what) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw InvalidInput("invalid number '" + text + "' in " + what);
    }
    return v;
}

std::vector<double> parse_reals(const std::string& text, const std::string& what) {
    std::vector<double> out;
    for (const auto& part : split(text, ',')) out.push_back(parse_real(part, what));
    if (out.empty()) throw InvalidInput(what + " is empty");
    return out;
}

std::vector<IndexName> parse_indexes(const std::string& text) {
    if (text.empty() || text == "all") return all_index_names();
    std::vector<IndexName> out;
    for (const auto& part : split(text, ',')) {
        const auto name = parse_index_name(part);
        if (!name) throw InvalidInput("unknown index '" + part + "'");
        if (std::find(out.begin(), out.end(), *name) == out.end()) out.push_back(*name);
    }
    if (out.empty()) throw InvalidInput("--indexes selects nothing");
    return out;
}

Wpc1Mode wpc1_mode(const Settings& s) { return s.wpc1_mode == "zero" ? Wpc1Mode::Zero : Wpc1Mode::SdRatio; }

NormalizationMode normalization(const Settings& s) {
    const auto mode = parse_normalization(s.normalize);
    if (!mode) throw InvalidInput("unknown normalization '" + s.normalize + "'");
    return *mode;
}

LabelColumn label_column(const Settings& s) {
    if (s.label_column.empty()) return std::nullopt;
    return s.label_column;
}

FcmOptions fcm_options(const Settings& s) {
    FcmOptions fcm;
    fcm.restarts = s.restarts;
    fcm.seed = s.seed;
    fcm.threads = s.threads;
    fcm.validate();
    return fcm;
}

PipelineOptions pipeline_options(const Settings& s, const std::string& default_indexes = "all") {
    PipelineOptions po;
    po.m = s.m;
    if (s.gamma_set) {
        if (!(s.gamma > 0.0)) throw InvalidInput("--gamma must be > 0");
        po.gamma = s.gamma;
    }
    if (!(s.m > 1.0)) throw InvalidInput("--m must be > 1");
    po.cmin = s.cmin;
    po.cmax = s.cmax;
    po.wpc1_mode = wpc1_mode(s);
    po.normalization = normalization(s);
    po.fcm = fcm_options(s);
    po.indexes = parse_indexes(s.indexes.empty() ? default_indexes : s.indexes);
    return po;
}

Json report_header(const std::string& command) {
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = command;
    return doc;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidInput("cannot write " + path.string());
    f << text;
    if (!f) throw InvalidInput("failed writing " + path.string());
}

void write_json(const fs::path& path, const Json& doc) { write_file(path, doc.dump(2) + "\n"); }

fs::path output_dir(const Settings& s) {
    const fs::path dir(s.output_dir);
    fs::create_directories(dir);
    return dir;
}

nlohmann::json read_json_file(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InvalidInput("cannot open " + path.string());
    try {
        return nlohmann::json::parse(f);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInput(path.string() + ": " + e.what());
    }
}

DataMatrix load_input(const Settings& s) {
    if (s.input.empty()) throw InvalidInput("--input is required");
    return load_csv(s.input, label_column(s));
}

Json pipeline_config(const Settings& s, const PipelineOptions& po) {
    Json config = to_json(po);
    config["input"] = s.input;
    if (!s.label_column.empty()) config["label_column"] = s.label_column;
    return config;
}

Json rankings_json(const PipelineResult& result, const PipelineOptions& po) {
    Json out = Json::object();
    for (IndexName name : po.indexes) out[std::string(to_string(name))] = result.ranking(name);
    return out;
}

Json pipeline_json(const PipelineResult& result, const PipelineOptions& po) {
    Json out;
    if (result.wpc) out["wpc"] = to_json(*result.wpc);
    if (result.wp) out["wp"] = to_json(*result.wp);
    if (!result.wp_error.empty()) out["wp_error"] = result.wp_error;
    out["indexes"] = to_json(result.reference);
    out["rankings"] = rankings_json(result, po);
    return out;
}

// A point cloud with a single distinct point (up to rounding) has nothing to validate.
void require_spread(const DataMatrix& data) {
    const Matrix& x = data.points();
    for (Eigen::Index k = 0; k < x.cols(); ++k) {
        const double range = x.col(k).maxCoeff() - x.col(k).minCoeff();
        if (range > 1e-12 * std::max(1.0, x.col(k).cwiseAbs().maxCoeff())) return;
    }
    throw DegenerateError("all points are identical");
}

bool everything_degenerate(const PipelineResult& result, const PipelineOptions& po) {
    if (po.wants(IndexName::WP) && result.wp) return false;
    for (const auto& series : result.reference.indexes) {
        for (const auto& v : series.values) {
            if (!v.degenerate) return false;
        }
    }
    return true;
}

std::vector<std::pair<int, double>> ranked_values(const PipelineResult& result, IndexName name) {
    std::vector<std::pair<int, double>> out;
    if (name == IndexName::WP) {
        if (!result.wp) return out;
        for (int c : result.wp->ranking) out.emplace_back(c, result.wp->wp.at(c));
        return out;
    }
    const IndexSeries* series = result.reference.find(name);
    if (!series) return out;
    for (int c : series->ranking) {
        const auto it = std::find_if(series->values.begin(), series->values.end(), [&](const IndexValue& v) { return v.c == c; });
        out.emplace_back(c, it->value);
    }
    return out;
}

void print_ranked(std::ostream& out, std::string_view label, const std::vector<std::pair<int, double>>& ranked, int k) {
    out << label << ':';
    if (ranked.empty()) out << " unavailable";
    const std::size_t shown = std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(std::max(k, 0)));
    for (std::size_t i = 0; i < shown; ++i) {
        out << (i == 0 ? " " : ", ") << ranked[i].first << " (" << format_double(ranked[i].second) << ')';
    }
    out << '\n';
}

Json ranked_json(IndexName name, const std::vector<std::pair<int, double>>& ranked, int k) {
    Json row;
    row["index"] = std::string(to_string(name));
    Json top = Json::array();
    const std::size_t shown = std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(std::max(k, 0)));
    for (std::size_t i = 0; i < shown; ++i) top.push_back({{"c", ranked[i].first}, {"value", number_or_inf(ranked[i].second)}});
    row["top"] = std::move(top);
    return row;
}

// ---------------------------------------------------------------------------

int cmd_generate(const Settings& s, std::ostream& out) {
    if (s.input.empty()) throw InvalidInput("--input (mixture spec JSON) is required");
    MixtureSpec spec = load_mixture_spec(s.input);
    if (s.seed_set) spec.seed = s.seed;
    const DataMatrix data = generate_mixture(spec);
    const fs::path dir = output_dir(s);
    save_csv(dir / "data.csv", data);

    Json doc = report_header("generate");
    doc["config"] = {{"input", s.input}, {"seed", spec.seed}};
    doc["spec"] = Json::parse(spec.to_json().dump());
    doc["n"] = data.n();
    doc["p"] = data.p();
    write_json(dir / "generate.json", doc);
    out << "wrote " << data.n() << " points to " << (dir / "data.csv").string() << '\n';
    return kExitOk;
}

int cmd_fit(const Settings& s, std::ostream& out) {
    const DataMatrix raw = load_input(s);
    if (!(s.m > 1.0)) throw InvalidInput("--m must be > 1");
    const NormalizationMode norm = normalization(s);
    const DataMatrix data = normalize(raw, norm);
    FcmOptions fcm = fcm_options(s);
    fcm.seed = derive_seed(s.seed, static_cast<std::uint64_t>(s.clusters));
    const FcmModel model = fit_best_of(data, s.clusters, s.m, fcm);

    Json doc = report_header("fit");
    doc["config"] = {{"input", s.input},       {"c", s.clusters},          {"m", s.m},
                     {"normalization", std::string(to_string(norm))}, {"restarts", fcm.restarts}, {"seed", s.seed},
                     {"max_iterations", fcm.max_iterations},           {"tolerance", fcm.tolerance}};
    if (raw.has_labels() && raw.distinct_labels() == s.clusters) doc["accuracy"] = accuracy(model, *raw.labels());
    doc["model"] = to_json(model, true);

    const fs::path dir = output_dir(s);
    write_json(dir / "fit.json", doc);
    std::ostringstream csv;
    csv << "point,cluster,membership\n";
    const auto hard = hard_assignments(model.memberships);
    for (std::size_t i = 0; i < hard.size(); ++i) {
        csv << i << ',' << hard[i] << ',' << format_double(model.memberships(static_cast<Eigen::Index>(i), hard[i])) << '\n';
    }
    write_file(dir / "assignments.csv", csv.str());
    out << "c=" << s.clusters << " objective=" << format_double(model.objective) << " iterations=" << model.iterations
        << (model.converged ? "" : " (not converged)") << '\n';
    return kExitOk;
}

int cmd_cvi(const Settings& s, std::ostream& out, std::ostream& err) {
    const PipelineOptions po = pipeline_options(s);
    const DataMatrix data = normalize(load_input(s), po.normalization);
    require_spread(data);
    const PipelineResult result = run_pipeline(data, po);

    Json doc = report_header("cvi");
    doc["config"] = pipeline_config(s, po);
    doc.update(pipeline_json(result, po));
    const fs::path dir = output_dir(s);
    write_json(dir / "cvi.json", doc);
    std::ostringstream csv;
    write_plot_csv(csv, result);
    write_file(dir / "cvi.csv", csv.str());

    for (IndexName name : po.indexes) print_ranked(out, to_string(name), ranked_values(result, name), 1);
    if (everything_degenerate(result, po)) {
        err << "error: every selected index is degenerate on this dataset\n";
        return kExitDegenerate;
    }
    return kExitOk;
}

int cmd_rank_series(const Settings& s, std::ostream& out) {
    if (s.cmin < 2 || s.cmax < s.cmin) throw InvalidInput("need 2 <= cmin <= cmax");
    const auto values = parse_reals(s.wpc_series, "--wpc-series");
    WpConfig config;
    config.cmin = s.cmin;
    config.cmax = s.cmax;
    if (static_cast<int>(values.size()) < config.cmax + 1) {
        throw InvalidInput("--wpc-series must cover c = 1.." + std::to_string(config.cmax + 1));
    }
    WpcSeries series;
    for (std::size_t i = 0; i < values.size(); ++i) series.values[static_cast<int>(i) + 1] = values[i];
    const WpReport rep = wp_index(series, config);
    std::vector<std::pair<int, double>> ranked;
    for (int c : rep.ranking) ranked.emplace_back(c, rep.wp.at(c));
    print_ranked(out, "WP", ranked, s.top_k);

    Json doc = report_header("rank");
    doc["config"] = {{"wpc_series", s.wpc_series}, {"cmin", s.cmin}, {"cmax", s.cmax}, {"top_k", s.top_k}};
    doc["wp"] = to_json(rep);
    doc["rankings"] = Json::array({ranked_json(IndexName::WP, ranked, s.top_k)});
    write_json(output_dir(s) / "rank.json", doc);
    return kExitOk;
}

int cmd_rank(const Settings& s, std::ostream& out, std::ostream& err) {
    if (!s.wpc_series.empty()) return cmd_rank_series(s, out);
    const PipelineOptions po = pipeline_options(s);
    const DataMatrix data = normalize(load_input(s), po.normalization);
    require_spread(data);
    const PipelineResult result = run_pipeline(data, po);

    Json doc = report_header("rank");
    doc["config"] = pipeline_config(s, po);
    doc["config"]["top_k"] = s.top_k;
    Json rankings = Json::array();
    for (IndexName name : po.indexes) {
        const auto ranked = ranked_values(result, name);
        print_ranked(out, to_string(name), ranked, s.top_k);
        rankings.push_back(ranked_json(name, ranked, s.top_k));
    }
    doc["rankings"] = std::move(rankings);
    if (!result.wp_error.empty()) doc["wp_error"] = result.wp_error;
    write_json(output_dir(s) / "rank.json", doc);
    if (everything_degenerate(result, po)) {
        err << "error: every selected index is degenerate on this dataset\n";
        return kExitDegenerate;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// Manifests

[[noreturn]] void missing_field(const std::string& where, const std::string& field) {
    throw InvalidInput("manifest: " + where + " is missing required field \"" + field + "\"");
}

template <class T>
T field_as(const nlohmann::json& obj, const std::string& where, const std::string& field) {
    try {
        return obj.at(field).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw InvalidInput("manifest: " + where + " field \"" + field + "\" has the wrong type");
    }
}

MixtureSpec mixture_from_entry(const nlohmann::json& entry, const fs::path& base, const std::string& where) {
    if (entry.contains("mixture")) {
        const auto& mix = entry.at("mixture");
        if (mix.is_string()) return load_mixture_spec(base / mix.get<std::string>());
        return MixtureSpec::from_json(mix);
    }
    missing_field(where, "mixture");
}

DataMatrix load_bench_data(const nlohmann::json& entry, const fs::path& base, const std::string& where, DatasetKind kind,
                           const Settings& s) {
    if (entry.contains("path")) {
        const fs::path path = base / field_as<std::string>(entry, where, "path");
        if (kind == DatasetKind::Image) return image_to_points(load_image(path), s.target_width, s.target_height);
        LabelColumn labels;
        if (entry.contains("label_column")) {
            const auto& lc = entry.at("label_column");
            labels = lc.is_number_integer() ? std::to_string(lc.get<int>()) : field_as<std::string>(entry, where, "label_column");
        }
        return load_csv(path, labels);
    }
    if (entry.contains("mixture")) return generate_mixture(mixture_from_entry(entry, base, where));
    missing_field(where, "path");
}

std::vector<BenchDataset> parse_bench_manifest(const nlohmann::json& doc, const fs::path& base, const Settings& s) {
    if (!doc.is_object() || !doc.contains("datasets")) missing_field("root", "datasets");
    if (!doc.at("datasets").is_array()) throw InvalidInput("manifest: \"datasets\" must be an array");
    std::vector<BenchDataset> out;
    std::size_t i = 0;
    for (const auto& entry : doc.at("datasets")) {
        const std::string where = "datasets[" + std::to_string(i++) + "]";
        if (!entry.is_object()) throw InvalidInput("manifest: " + where + " must be an object");
        if (!entry.contains("name")) missing_field(where, "name");
        if (!entry.contains("kind")) missing_field(where, "kind");
        const std::string name = field_as<std::string>(entry, where, "name");
        const auto kind = parse_dataset_kind(field_as<std::string>(entry, where, "kind"));
        if (!kind) throw InvalidInput("manifest: " + where + " has unknown kind");
        const bool has_acceptable = entry.contains("acceptable");
        if (!entry.contains("true_c") && !has_acceptable) missing_field(where, "true_c");

        BenchDataset ds{name, *kind, load_bench_data(entry, base, where, *kind, s), std::nullopt, std::nullopt, {}, std::nullopt};
        if (entry.contains("true_c")) ds.true_c = field_as<int>(entry, where, "true_c");
        if (entry.contains("c2")) ds.secondary_c = field_as<int>(entry, where, "c2");
        if (has_acceptable) {
            for (int c : field_as<std::vector<int>>(entry, where, "acceptable")) ds.acceptable.insert(c);
            if (ds.acceptable.empty()) throw InvalidInput("manifest: " + where + " has an empty acceptable set");
        }
        if (entry.contains("cmax")) ds.cmax = field_as<int>(entry, where, "cmax");
        out.push_back(std::move(ds));
    }
    if (out.empty()) throw InvalidInput("manifest lists no datasets");
    return out;
}

int cmd_bench(const Settings& s, std::ostream& out) {
    if (s.input.empty()) throw InvalidInput("--input (benchmark manifest JSON) is required");
    const fs::path manifest_path(s.input);
    const nlohmann::json manifest = read_json_file(manifest_path);
    const auto datasets = parse_bench_manifest(manifest, manifest_path.parent_path(), s);

    BenchOptions bo;
    bo.ms = manifest.contains("ms") ? field_as<std::vector<double>>(manifest, "root", "ms") : std::vector<double>{s.m};
    for (double m : bo.ms) {
        if (!(m > 1.0)) throw InvalidInput("fuzziness values must be > 1");
    }
    if (s.gamma_set) bo.gamma = s.gamma;
    bo.wpc1_mode = wpc1_mode(s);
    bo.normalization = normalization(s);
    bo.fcm = fcm_options(s);
    bo.fcm.threads = 1;
    bo.indexes = parse_indexes(s.indexes);
    bo.threads = s.threads;
    const BenchmarkScore score = run_benchmark(datasets, bo);

    Json doc = report_header("bench");
    Json config;
    config["input"] = s.input;
    config["ms"] = bo.ms;
    config["gamma"] = bo.gamma ? Json(*bo.gamma) : Json("default_7m2_over_4");
    config["wpc1_mode"] = std::string(to_string(bo.wpc1_mode));
    config["normalization"] = std::string(to_string(bo.normalization));
    config["restarts"] = bo.fcm.restarts;
    config["seed"] = bo.fcm.seed;
    Json names = Json::array();
    for (IndexName n : bo.indexes) names.push_back(std::string(to_string(n)));
    config["indexes"] = std::move(names);
    doc["config"] = std::move(config);
    doc.update(to_json(score));

    const fs::path dir = output_dir(s);
    write_json(dir / "bench.json", doc);
    std::ostringstream detail;
    write_bench_csv(detail, score);
    write_file(dir / "bench.csv", detail.str());
    std::ostringstream summary;
    write_bench_summary_csv(summary, score);
    write_file(dir / "bench_summary.csv", summary.str());
    out << summary.str();
    return kExitOk;
}

int cmd_sensitivity(const Settings& s, std::ostream& out) {
    if (s.input.empty()) throw InvalidInput("--input (mixture spec or sensitivity manifest JSON) is required");
    const fs::path path(s.input);
    const nlohmann::json doc_in = read_json_file(path);
    std::vector<SensitivityDataset> datasets;
    if (doc_in.contains("datasets")) {
        std::size_t i = 0;
        for (const auto& entry : doc_in.at("datasets")) {
            const std::string where = "datasets[" + std::to_string(i++) + "]";
            if (!entry.contains("name")) missing_field(where, "name");
            if (!entry.contains("true_c")) missing_field(where, "true_c");
            datasets.push_back({field_as<std::string>(entry, where, "name"), mixture_from_entry(entry, path.parent_path(), where),
                                field_as<int>(entry, where, "true_c")});
        }
    } else {
        MixtureSpec spec = MixtureSpec::from_json(doc_in);
        std::set<int> labels;
        for (const auto& comp : spec.components) labels.insert(comp.label);
        const int true_c = s.true_c > 0 ? s.true_c : static_cast<int>(labels.size());
        datasets.push_back({path.stem().string(), std::move(spec), true_c});
    }

    SensitivityOptions so;
    so.gammas = parse_reals(s.gammas, "--gammas");
    for (double g : so.gammas) {
        if (!(g > 0.0)) throw InvalidInput("gamma values must be > 0");
    }
    so.repeats = s.repeats;
    so.m = s.m;
    if (!(s.m > 1.0)) throw InvalidInput("--m must be > 1");
    so.cmin = s.cmin;
    so.cmax = s.cmax;
    so.mode = s.mode == "regenerate" ? SensitivityMode::Regenerate : SensitivityMode::Refit;
    so.wpc1_mode = wpc1_mode(s);
    so.normalization = normalization(s);
    so.fcm = fcm_options(s);
    const SensitivityReport report = sensitivity_study(datasets, so);

    Json doc = report_header("sensitivity");
    doc["config"] = {{"input", s.input},
                     {"gammas", so.gammas},
                     {"repeats", so.repeats},
                     {"m", so.m},
                     {"cmin", so.cmin},
                     {"cmax", so.cmax},
                     {"mode", std::string(to_string(so.mode))},
                     {"wpc1_mode", std::string(to_string(so.wpc1_mode))},
                     {"normalization", std::string(to_string(so.normalization))},
                     {"restarts", so.fcm.restarts},
                     {"seed", so.fcm.seed}};
    doc["cells"] = to_json(report);
    const fs::path dir = output_dir(s);
    write_json(dir / "sensitivity.json", doc);
    std::ostringstream csv;
    write_sensitivity_csv(csv, report);
    write_file(dir / "sensitivity.csv", csv.str());
    for (const auto& cell : report.cells) {
        out << cell.dataset << " gamma=" << format_double(cell.gamma) << " average_sd=" << format_double(cell.average_sd)
            << " modal_rank=" << cell.modal_rank << " (" << cell.modal_frequency << "x)\n";
    }
    return kExitOk;
}

// Each pixel takes the colour of its argmax cluster, where a cluster's colour
// is the mu^m weighted mean of the downscaled pixels.
RgbImage recolor(const Matrix& pixels, const FcmModel& model, int width, int height) {
    const Eigen::Index c = model.c();
    Matrix colors = Matrix::Zero(c, 3);
    Vector mass = Vector::Zero(c);
    for (Eigen::Index i = 0; i < pixels.rows(); ++i) {
        for (Eigen::Index j = 0; j < c; ++j) {
            const double w = std::pow(model.memberships(i, j), model.fuzziness);
            colors.row(j) += w * pixels.row(i);
            mass[j] += w;
        }
    }
    for (Eigen::Index j = 0; j < c; ++j) {
        if (mass[j] > 0.0) colors.row(j) /= mass[j];
    }
    const auto hard = hard_assignments(model.memberships);
    Matrix out(pixels.rows(), 3);
    for (Eigen::Index i = 0; i < pixels.rows(); ++i) out.row(i) = colors.row(hard[static_cast<std::size_t>(i)]);
    return points_to_image(out, width, height);
}

int cmd_image(const Settings& s, std::ostream& out, std::ostream& err) {
    if (s.input.empty()) throw InvalidInput("--input (P6 PPM image) is required");
    const PipelineOptions po = pipeline_options(s, kImageIndexes);
    const RgbImage image = load_image(s.input);
    const DataMatrix pixels = image_to_points(image, s.target_width, s.target_height);
    require_spread(pixels);
    const DataMatrix data = normalize(pixels, po.normalization);
    const PipelineResult result = run_pipeline(data, po);

    const fs::path dir = output_dir(s);
    Json doc = report_header("image");
    doc["config"] = pipeline_config(s, po);
    doc["config"]["target_width"] = s.target_width;
    doc["config"]["target_height"] = s.target_height;
    doc["source"] = {{"width", image.width}, {"height", image.height}};
    doc.update(pipeline_json(result, po));
    Json previews = Json::array();
    for (int c = po.cmin; c <= po.cmax; ++c) {
        const std::string name = "preview_c" + std::to_string(c) + ".ppm";
        save_ppm(dir / name, recolor(pixels.points(), result.models.at(c), s.target_width, s.target_height));
        previews.push_back({{"c", c}, {"file", name}});
    }
    doc["previews"] = std::move(previews);
    save_ppm(dir / "downscaled.ppm", points_to_image(pixels.points(), s.target_width, s.target_height));
    write_json(dir / "image.json", doc);
    std::ostringstream csv;
    write_plot_csv(csv, result);
    write_file(dir / "image.csv", csv.str());

    for (IndexName name : po.indexes) print_ranked(out, to_string(name), ranked_values(result, name), s.top_k);
    if (everything_degenerate(result, po)) {
        err << "error: every selected index is degenerate on this image\n";
        return kExitDegenerate;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

void add_output(CLI::App* sub, Settings& s) {
    sub->add_option("--output-dir", s.output_dir, "Directory for report files")->capture_default_str();
}

void add_data(CLI::App* sub, Settings& s) {
    sub->add_option("--label-column", s.label_column, "Label column name, or 0-based index");
    sub->add_option("--normalize", s.normalize, "Feature scaling")
        ->check(CLI::IsMember({"standardize", "minmax", "none"}))
        ->capture_default_str();
}

void add_fcm(CLI::App* sub, Settings& s) {
    sub->add_option("--m", s.m, "FCM fuzziness (> 1)")->capture_default_str();
    sub->add_option("--restarts", s.restarts, "FCM rounds per cluster count; best objective wins")->capture_default_str();
    sub->add_option("--seed", s.seed, "Master seed")->capture_default_str();
    sub->add_option("--threads", s.threads, "Worker threads (results do not depend on it)")->capture_default_str();
}

void add_index(CLI::App* sub, Settings& s, const std::string& indexes_default) {
    sub->add_option("--gamma", s.gamma, "WP adjusted-centroid exponent (default 7 m^2 / 4)");
    sub->add_option("--cmin", s.cmin, "Smallest cluster count scored")->capture_default_str();
    sub->add_option("--cmax", s.cmax, "Largest cluster count scored")->capture_default_str();
    sub->add_option("--indexes", s.indexes, "Comma list of wp,xb,pbm,tang,wl,gc,kwon2 or 'all' (default " + indexes_default + ")");
    sub->add_option("--wpc1-mode", s.wpc1_mode, "WPC(1) convention")->check(CLI::IsMember({"zero", "sd"}))->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fuzzy cluster validity: FCM, the WP correlation index and six comparison indexes", "wpcvi"};
    app.require_subcommand(1);
    app.footer("Exit codes: 0 success, 2 input or configuration error, 3 degenerate computation.");
    Settings s;

    auto* generate = app.add_subcommand("generate", "Sample a Gaussian / uniform-box mixture to CSV");
    generate->add_option("--input", s.input, "Mixture spec JSON")->required();
    generate->add_option("--seed", s.seed, "Override the spec's seed");
    add_output(generate, s);

    auto* fit = app.add_subcommand("fit", "Fit best-of-restarts FCM for one cluster count");
    fit->add_option("--input", s.input, "Dataset CSV")->required();
    fit->add_option("-c,--clusters", s.clusters, "Cluster count")->required();
    add_data(fit, s);
    add_fcm(fit, s);
    add_output(fit, s);

    auto* cvi = app.add_subcommand("cvi", "Score cluster counts with WP and the comparison indexes");
    cvi->add_option("--input", s.input, "Dataset CSV")->required();
    add_data(cvi, s);
    add_fcm(cvi, s);
    add_index(cvi, s, "all");
    add_output(cvi, s);

    auto* rank = app.add_subcommand("rank", "Print the top-k cluster counts per index");
    rank->add_option("--input", s.input, "Dataset CSV");
    rank->add_option("--top-k", s.top_k, "Ranked options shown per index")->capture_default_str();
    rank->add_option("--wpc-series", s.wpc_series, "Rank a given WPC(1..cmax+1) series instead of fitting data");
    add_data(rank, s);
    add_fcm(rank, s);
    add_index(rank, s, "all");
    add_output(rank, s);

    auto* bench = app.add_subcommand("bench", "Run a benchmark manifest and aggregate detection scores");
    bench->add_option("--input", s.input, "Benchmark manifest JSON")->required();
    bench->add_option("--target-width", s.target_width, "Image datasets: downscaled width")->capture_default_str();
    bench->add_option("--target-height", s.target_height, "Image datasets: downscaled height")->capture_default_str();
    bench->add_option("--gamma", s.gamma, "WP adjusted-centroid exponent (default 7 m^2 / 4)");
    bench->add_option("--indexes", s.indexes, "Comma list of wp,xb,pbm,tang,wl,gc,kwon2 or 'all' (default all)");
    bench->add_option("--wpc1-mode", s.wpc1_mode, "WPC(1) convention")->check(CLI::IsMember({"zero", "sd"}))->capture_default_str();
    bench->add_option("--normalize", s.normalize, "Feature scaling")
        ->check(CLI::IsMember({"standardize", "minmax", "none"}))
        ->capture_default_str();
    add_fcm(bench, s);
    add_output(bench, s);

    auto* sens = app.add_subcommand("sensitivity", "Spread of WP across repeats for several gamma values");
    sens->add_option("--input", s.input, "Mixture spec JSON, or {\"datasets\": [...]} manifest")->required();
    sens->add_option("--gammas", s.gammas, "Comma list of gamma values")->capture_default_str();
    sens->add_option("--repeats", s.repeats, "Repeats per dataset")->capture_default_str();
    sens->add_option("--mode", s.mode, "refit: one dataset, new FCM runs; regenerate: new data each repeat")
        ->check(CLI::IsMember({"refit", "regenerate"}))
        ->capture_default_str();
    sens->add_option("--true-c", s.true_c, "True cluster count for a bare mixture spec (default: distinct labels)");
    sens->add_option("--cmin", s.cmin, "Smallest cluster count scored")->capture_default_str();
    sens->add_option("--cmax", s.cmax, "Largest cluster count scored")->capture_default_str();
    sens->add_option("--wpc1-mode", s.wpc1_mode, "WPC(1) convention")->check(CLI::IsMember({"zero", "sd"}))->capture_default_str();
    sens->add_option("--normalize", s.normalize, "Feature scaling")
        ->check(CLI::IsMember({"standardize", "minmax", "none"}))
        ->capture_default_str();
    add_fcm(sens, s);
    add_output(sens, s);

    auto* image = app.add_subcommand("image", "Cluster the pixel colours of a P6 PPM image");
    image->add_option("--input", s.input, "P6 PPM image")->required();
    image->add_option("--target-width", s.target_width, "Downscaled width")->capture_default_str();
    image->add_option("--target-height", s.target_height, "Downscaled height")->capture_default_str();
    image->add_option("--top-k", s.top_k, "Ranked options printed per index")->capture_default_str();
    image->add_option("--normalize", s.normalize, "Feature scaling")
        ->check(CLI::IsMember({"standardize", "minmax", "none"}))
        ->capture_default_str();
    add_fcm(image, s);
    add_index(image, s, kImageIndexes);
    add_output(image, s);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    for (CLI::App* sub : app.get_subcommands()) {
        if (sub->get_option_no_throw("--gamma") && sub->count("--gamma") > 0) s.gamma_set = true;
        if (sub->get_option_no_throw("--seed") && sub->count("--seed") > 0) s.seed_set = true;
    }

    try {
        if (generate->parsed()) return cmd_generate(s, out);
        if (fit->parsed()) return cmd_fit(s, out);
        if (cvi->parsed()) return cmd_cvi(s, out, err);
        if (rank->parsed()) return cmd_rank(s, out, err);
        if (bench->parsed()) return cmd_bench(s, out);
        if (sens->parsed()) return cmd_sensitivity(s, out);
        if (image->parsed()) return cmd_image(s, out, err);
    } catch (const DegenerateError& e) {
        err << "error: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const ParseError& e) {
        err << "error: " << s.input << ':' << e.row() << ':' << e.column() << ": " << e.what() << '\n';
        return kExitInput;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitInput;
}

}  // namespace wpcvi::cli
