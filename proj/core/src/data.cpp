#include "wpcvi/data.hpp"

#include "wpcvi/rng.hpp"

#include <Eigen/Cholesky>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace wpcvi {
namespace {

using nlohmann::json;

Vector vector_from_json(const json& node, const char* field) {
    if (!node.is_array() || node.empty()) throw InvalidInput(std::string("mixture spec: '") + field + "' must be a non-empty array");
    Vector v(static_cast<Eigen::Index>(node.size()));
    for (std::size_t k = 0; k < node.size(); ++k) v[static_cast<Eigen::Index>(k)] = node[k].get<double>();
    return v;
}

json vector_to_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v[k]);
    return out;
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells;
}

std::optional<double> parse_number(const std::string& cell) {
    if (cell.empty()) return std::nullopt;
    const char* begin = cell.data();
    const char* end = cell.data() + cell.size();
    if (*begin == '+') ++begin;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
    return value;
}

bool all_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char ch) { return std::isdigit(ch); });
}

}  // namespace

int MixtureSpec::dimension() const {
    if (components.empty()) return 0;
    const auto& c = components.front();
    return static_cast<int>(c.kind == ComponentKind::Gaussian ? c.mean.size() : c.lower.size());
}

void MixtureSpec::validate() const {
    if (components.empty()) throw InvalidInput("mixture spec has no components");
    if (total_points < 2) throw InvalidInput("mixture spec needs total_points >= 2");
    const int p = dimension();
    if (p < 1) throw InvalidInput("mixture components need at least one dimension");
    double weight_sum = 0.0;
    for (std::size_t k = 0; k < components.size(); ++k) {
        const auto& comp = components[k];
        const std::string where = "component " + std::to_string(k) + ": ";
        if (!(comp.weight > 0.0)) throw InvalidInput(where + "weight must be positive");
        weight_sum += comp.weight;
        if (comp.kind == ComponentKind::Gaussian) {
            if (comp.mean.size() != p) throw InvalidInput(where + "mean dimension mismatch");
            if (comp.covariance.rows() != p || comp.covariance.cols() != p) {
                throw InvalidInput(where + "covariance must be " + std::to_string(p) + "x" + std::to_string(p));
            }
            if (!comp.covariance.isApprox(comp.covariance.transpose(), 1e-12)) {
                throw InvalidInput(where + "covariance is not symmetric");
            }
            Eigen::LLT<Eigen::MatrixXd> llt(comp.covariance);
            if (llt.info() != Eigen::Success) throw InvalidInput(where + "covariance is not positive definite");
        } else {
            if (comp.lower.size() != p || comp.upper.size() != p) throw InvalidInput(where + "box dimension mismatch");
            if ((comp.upper.array() < comp.lower.array()).any()) throw InvalidInput(where + "box max below min");
        }
    }
    if (std::abs(weight_sum - 1.0) > 1e-9) throw InvalidInput("mixture weights must sum to 1");
}

MixtureSpec MixtureSpec::from_json(const json& doc) {
    MixtureSpec spec;
    try {
        spec.total_points = doc.at("total_points").get<int>();
        spec.seed = doc.value("seed", std::uint64_t{0});
        for (const auto& node : doc.at("components")) {
            MixtureComponent comp;
            comp.weight = node.at("weight").get<double>();
            comp.label = node.value("label", 0);
            const std::string dist = node.value("distribution", std::string("gaussian"));
            if (dist == "gaussian") {
                comp.kind = ComponentKind::Gaussian;
                comp.mean = vector_from_json(node.at("mean"), "mean");
                const auto p = comp.mean.size();
                if (node.contains("covariance")) {
                    const auto& rows = node.at("covariance");
                    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != p) {
                        throw InvalidInput("mixture spec: covariance must have one row per dimension");
                    }
                    comp.covariance.resize(p, p);
                    for (Eigen::Index r = 0; r < p; ++r) {
                        const Vector row = vector_from_json(rows[static_cast<std::size_t>(r)], "covariance");
                        if (row.size() != p) throw InvalidInput("mixture spec: covariance row length mismatch");
                        comp.covariance.row(r) = row.transpose();
                    }
                } else {
                    const double sd = node.at("sd").get<double>();
                    comp.covariance = Matrix::Identity(p, p) * (sd * sd);
                }
            } else if (dist == "uniform_box") {
                comp.kind = ComponentKind::UniformBox;
                comp.lower = vector_from_json(node.at("min"), "min");
                comp.upper = vector_from_json(node.at("max"), "max");
            } else {
                throw InvalidInput("mixture spec: unknown distribution '" + dist + "'");
            }
            spec.components.push_back(std::move(comp));
        }
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("mixture spec: ") + e.what());
    }
    spec.validate();
    return spec;
}

json MixtureSpec::to_json() const {
    json comps = json::array();
    for (const auto& comp : components) {
        json node;
        node["weight"] = comp.weight;
        node["label"] = comp.label;
        if (comp.kind == ComponentKind::Gaussian) {
            node["distribution"] = "gaussian";
            node["mean"] = vector_to_json(comp.mean);
            json rows = json::array();
            for (Eigen::Index r = 0; r < comp.covariance.rows(); ++r) rows.push_back(vector_to_json(comp.covariance.row(r).transpose()));
            node["covariance"] = rows;
        } else {
            node["distribution"] = "uniform_box";
            node["min"] = vector_to_json(comp.lower);
            node["max"] = vector_to_json(comp.upper);
        }
        comps.push_back(node);
    }
    return json{{"total_points", total_points}, {"seed", seed}, {"components", comps}};
}

MixtureSpec load_mixture_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open mixture spec " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ParseError("mixture spec " + path.string() + ": " + e.what(), 0, 0);
    }
    return MixtureSpec::from_json(doc);
}

DataMatrix generate_mixture(const MixtureSpec& spec) {
    spec.validate();
    const int p = spec.dimension();
    std::vector<Matrix> factors;
    std::vector<double> cumulative;
    double acc = 0.0;
    for (const auto& comp : spec.components) {
        acc += comp.weight;
        cumulative.push_back(acc);
        if (comp.kind == ComponentKind::Gaussian) {
            factors.emplace_back(Eigen::LLT<Eigen::MatrixXd>(comp.covariance).matrixL());
        } else {
            factors.emplace_back();
        }
    }

    Rng rng(spec.seed);
    Matrix points(spec.total_points, p);
    std::vector<int> labels(static_cast<std::size_t>(spec.total_points));
    Vector z(p);
    for (int i = 0; i < spec.total_points; ++i) {
        const double u = rng.uniform() * acc;
        std::size_t k = 0;
        while (k + 1 < cumulative.size() && u >= cumulative[k]) ++k;
        const auto& comp = spec.components[k];
        if (comp.kind == ComponentKind::Gaussian) {
            for (int d = 0; d < p; ++d) z[d] = rng.normal();
            points.row(i) = (comp.mean + factors[k] * z).transpose();
        } else {
            for (int d = 0; d < p; ++d) points(i, d) = comp.lower[d] + rng.uniform() * (comp.upper[d] - comp.lower[d]);
        }
        labels[static_cast<std::size_t>(i)] = comp.label;
    }
    return DataMatrix(std::move(points), std::move(labels));
}

DataMatrix parse_csv(std::istream& in, const LabelColumn& label_column) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
        if (trim(line).empty()) continue;
        rows.push_back(split_cells(line));
        line_numbers.push_back(line_no);
    }
    if (rows.empty()) throw ParseError("CSV input is empty", 0, 0);

    const std::size_t width = rows.front().size();
    const bool has_header =
        std::any_of(rows.front().begin(), rows.front().end(), [](const std::string& cell) { return !parse_number(cell); });

    std::optional<std::size_t> label_index;
    if (label_column) {
        if (all_digits(*label_column)) {
            label_index = static_cast<std::size_t>(std::stoul(*label_column));
        } else if (has_header) {
            const auto& header = rows.front();
            const auto it = std::find(header.begin(), header.end(), *label_column);
            if (it == header.end()) throw ParseError("label column '" + *label_column + "' not found in header", line_numbers.front(), 0);
            label_index = static_cast<std::size_t>(it - header.begin());
        } else {
            throw ParseError("label column '" + *label_column + "' given by name but the file has no header", 0, 0);
        }
        if (*label_index >= width) throw ParseError("label column index out of range", line_numbers.front(), 0);
    }

    const std::size_t first = has_header ? 1 : 0;
    const std::size_t features = width - (label_index ? 1 : 0);
    if (features == 0) throw ParseError("CSV has no feature columns", 0, 0);
    const std::size_t n = rows.size() - first;
    if (n == 0) throw ParseError("CSV has a header but no data rows", 0, 0);

    Matrix points(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(features));
    std::vector<int> labels;
    std::map<std::string, int> codes;
    for (std::size_t r = first; r < rows.size(); ++r) {
        const auto& cells = rows[r];
        const std::size_t row_no = line_numbers[r];
        if (cells.size() != width) {
            throw ParseError("row " + std::to_string(row_no) + " has " + std::to_string(cells.size()) + " cells, expected " +
                                 std::to_string(width),
                             row_no, 0);
        }
        std::size_t f = 0;
        for (std::size_t col = 0; col < width; ++col) {
            if (label_index && col == *label_index) {
                const auto [it, inserted] = codes.emplace(cells[col], static_cast<int>(codes.size()));
                labels.push_back(it->second);
                continue;
            }
            const auto value = parse_number(cells[col]);
            if (!value) {
                throw ParseError("row " + std::to_string(row_no) + ", column " + std::to_string(col + 1) +
                                     ": non-numeric value '" + cells[col] + "'",
                                 row_no, col + 1);
            }
            points(static_cast<Eigen::Index>(r - first), static_cast<Eigen::Index>(f++)) = *value;
        }
    }
    if (label_index) return DataMatrix(std::move(points), std::move(labels));
    return DataMatrix(std::move(points));
}

DataMatrix load_csv(const std::filesystem::path& path, const LabelColumn& label_column) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path.string());
    return parse_csv(in, label_column);
}

void write_csv(std::ostream& out, const DataMatrix& data) {
    for (int k = 0; k < data.p(); ++k) out << (k ? "," : "") << 'x' << (k + 1);
    if (data.has_labels()) out << ",label";
    out << '\n';
    char buf[32];
    for (int i = 0; i < data.n(); ++i) {
        for (int k = 0; k < data.p(); ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", data.points()(i, k));
            out << (k ? "," : "") << buf;
        }
        if (data.has_labels()) out << ',' << (*data.labels())[static_cast<std::size_t>(i)];
        out << '\n';
    }
}

void save_csv(const std::filesystem::path& path, const DataMatrix& data) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write " + path.string());
    write_csv(out, data);
}

std::string_view to_string(NormalizationMode mode) noexcept {
    switch (mode) {
        case NormalizationMode::Standardize: return "standardize";
        case NormalizationMode::MinMax: return "minmax";
        case NormalizationMode::None: return "none";
    }
    return "?";
}

std::optional<NormalizationMode> parse_normalization(std::string_view text) {
    if (text == "standardize") return NormalizationMode::Standardize;
    if (text == "minmax") return NormalizationMode::MinMax;
    if (text == "none") return NormalizationMode::None;
    return std::nullopt;
}

DataMatrix normalize(const DataMatrix& data, NormalizationMode mode) {
    Matrix x = data.points();
    const double n = data.n();
    for (Eigen::Index k = 0; k < x.cols(); ++k) {
        auto col = x.col(k);
        if (mode == NormalizationMode::Standardize) {
            const double mean = col.mean();
            col.array() -= mean;
            const double sd = std::sqrt(col.squaredNorm() / (n - 1.0));
            if (sd > 1e-12 * std::max(1.0, std::abs(mean))) {
                col /= sd;
            } else {
                col.setZero();
            }
        } else if (mode == NormalizationMode::MinMax) {
            const double lo = col.minCoeff();
            const double range = col.maxCoeff() - lo;
            if (range > 1e-12 * std::max(1.0, std::abs(lo))) {
                col = (col.array() - lo) / range;
            } else {
                col.setZero();
            }
        }
    }
    return DataMatrix(std::move(x), data.labels());
}

}  // namespace wpcvi
