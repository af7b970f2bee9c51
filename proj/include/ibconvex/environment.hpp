#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

namespace ibc {

/// Raised when a constructor or builder receives inconsistent input.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

using Point = std::array<double, 3>;

/// Coordinates for every index of a meaning or referent set.
///
/// Points always carry three components; components past `dimension()` are
/// zero so geometry code can work in a common 3D frame.
class Embedding {
public:
    Embedding() = default;
    Embedding(std::size_t dimension, std::vector<Point> points);

    static Embedding line(std::span<const double> coords);
    static Embedding integer_line(int first, int last);
    static Embedding grid(int width, int height);

    std::size_t dimension() const { return dimension_; }
    std::size_t size() const { return points_.size(); }
    const Point& operator[](std::size_t i) const { return points_[i]; }
    const std::vector<Point>& points() const { return points_; }

    Embedding translated(const Point& offset) const;

    friend bool operator==(const Embedding&, const Embedding&) = default;

private:
    std::size_t dimension_ = 1;
    std::vector<Point> points_;
};

/// A semantic environment: referents U, meanings M with prior p(m), and
/// meaning kernels p(u|m) stored one row per meaning.
///
/// Immutable once built. The constructor renormalizes the prior by its sum
/// and checks that every kernel row is a probability vector.
class Environment {
public:
    Environment(std::string name, Eigen::VectorXd prior, Eigen::MatrixXd kernel,
                Embedding meaning_embedding, Embedding referent_embedding);

    const std::string& name() const { return name_; }
    std::size_t num_meanings() const { return static_cast<std::size_t>(prior_.size()); }
    std::size_t num_referents() const { return static_cast<std::size_t>(kernel_.cols()); }
    const Eigen::VectorXd& prior() const { return prior_; }
    /// p(u|m), meanings x referents.
    const Eigen::MatrixXd& kernel() const { return kernel_; }
    const Embedding& meaning_embedding() const { return meaning_embedding_; }
    const Embedding& referent_embedding() const { return referent_embedding_; }

    /// p(u) = sum_m p(m) p(u|m)
    Eigen::VectorXd referent_marginal() const;
    bool has_full_support() const;

    friend bool operator==(const Environment&, const Environment&) = default;

private:
    std::string name_;
    Eigen::VectorXd prior_;
    Eigen::MatrixXd kernel_;
    Embedding meaning_embedding_;
    Embedding referent_embedding_;
};

enum class BaseFamily { CPUM, NPUM, CPDM, NPDM };

enum class Variant {
    CPDMConvex,
    CPDMAdj,
    NPDMAdj,
    NPDMShift,
    CPUMSplit,
    CPDMSplit,
    Manhattan55,
};

/// Normalized normal density evaluated at each coordinate.
std::vector<double> gaussian_kernel(double center, double variance,
                                    std::span<const double> referent_coords);

Environment build_base(BaseFamily which);
Environment build_dual(BaseFamily base);
Environment build_variant(Variant which);

/// Accepts the names used in result tables, e.g. "CPUM", "NPDM-Dual",
/// "CPDM-Adj", "Manhattan-5-5". Throws ParameterError for unknown names.
Environment build_named(std::string_view name);

std::vector<std::string> experiment2_environment_names();
std::vector<std::string> experiment3_environment_names();

std::string_view to_string(BaseFamily which);
std::string_view to_string(Variant which);

nlohmann::json to_json(const Environment& env);
Environment environment_from_json(const nlohmann::json& doc);

}  // namespace ibc
