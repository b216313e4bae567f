#ifndef WPCVI_DATA_HPP
#define WPCVI_DATA_HPP

#include "wpcvi/types.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wpcvi {

enum class ComponentKind { Gaussian, UniformBox };

struct MixtureComponent {
    double weight = 1.0;
    ComponentKind kind = ComponentKind::Gaussian;
    Vector mean;        // Gaussian
    Matrix covariance;  // Gaussian, symmetric positive definite
    Vector lower;       // UniformBox
    Vector upper;       // UniformBox
    int label = 0;
};

struct MixtureSpec {
    std::vector<MixtureComponent> components;
    int total_points = 0;
    std::uint64_t seed = 0;

    int dimension() const;

    /// Throws InvalidInput on bad weights, shapes or non-SPD covariances.
    void validate() const;

    /// JSON document:
    /// {"total_points": N, "seed": S, "components": [
    ///   {"weight": w, "label": k, "distribution": "gaussian", "mean": [...], "covariance": [[...]]},
    ///   {"weight": w, "label": k, "distribution": "uniform_box", "min": [...], "max": [...]} ]}
    /// A scalar "sd" may replace "covariance" for an isotropic Gaussian.
    static MixtureSpec from_json(const nlohmann::json& doc);
    nlohmann::json to_json() const;
};

MixtureSpec load_mixture_spec(const std::filesystem::path& path);

/// Draws total_points points: each point picks a component by weight, then is
/// sampled from it (Cholesky factor for Gaussians). Labels are the component
/// labels. Deterministic per seed.
DataMatrix generate_mixture(const MixtureSpec& spec);

/// Label column selector: a header name, or a 0-based column index when the
/// text is all digits.
using LabelColumn = std::optional<std::string>;

/// Parses comma-separated numeric rows. The first row is a header when any of
/// its cells is non-numeric. Label values are coded as integers in order of
/// first appearance.
DataMatrix parse_csv(std::istream& in, const LabelColumn& label_column = std::nullopt);
DataMatrix load_csv(const std::filesystem::path& path, const LabelColumn& label_column = std::nullopt);

/// Writes x1..xp (and "label" when present) with 17 significant digits.
void write_csv(std::ostream& out, const DataMatrix& data);
void save_csv(const std::filesystem::path& path, const DataMatrix& data);

enum class NormalizationMode { Standardize, MinMax, None };

std::string_view to_string(NormalizationMode mode) noexcept;
std::optional<NormalizationMode> parse_normalization(std::string_view text);

/// Standardize: zero mean, unit sample SD per feature. MinMax: [0, 1] per
/// feature. Constant features become 0 under both. None: unchanged copy.
DataMatrix normalize(const DataMatrix& data, NormalizationMode mode);

}  // namespace wpcvi

#endif  // WPCVI_DATA_HPP
