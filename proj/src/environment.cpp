#include "ibconvex/environment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

namespace ibc {

namespace {

constexpr double kNormTol = 1e-9;

// Variances used by the synthetic families.
constexpr double kBaseVariance = 9.0 / 4.0;
constexpr double kDualVariance = 3.0 / 2.0;

double normal_pdf(double x, double mean, double variance)
{
    const double z = x - mean;
    return std::exp(-z * z / (2.0 * variance)) / std::sqrt(2.0 * std::numbers::pi * variance);
}

std::vector<double> int_range(int first, int last)
{
    std::vector<double> out;
    for (int v = first; v <= last; ++v) out.push_back(v);
    return out;
}

// Rows proportional to `weights(m, u)`, normalized per meaning.
template <typename Fn>
Eigen::MatrixXd normalized_kernel(std::span<const double> meanings, std::span<const double> referents,
                                  Fn weights)
{
    Eigen::MatrixXd k(meanings.size(), referents.size());
    for (std::size_t i = 0; i < meanings.size(); ++i) {
        double total = 0.0;
        for (std::size_t j = 0; j < referents.size(); ++j) {
            const double w = weights(meanings[i], referents[j]);
            k(i, j) = w;
            total += w;
        }
        k.row(i) /= total;
    }
    return k;
}

Eigen::VectorXd uniform(std::size_t n)
{
    return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n));
}

// Stated "edge-heavy" weights for the non-convex families: heavy at both
// ends, 0.01 elsewhere. Renormalized by the Environment constructor.
Eigen::VectorXd edge_heavy(std::size_t n)
{
    Eigen::VectorXd p = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 0.01);
    p(0) = 0.455;
    p(static_cast<Eigen::Index>(n) - 1) = 0.455;
    return p;
}

bool is_convex_prior(BaseFamily f) { return f == BaseFamily::CPUM || f == BaseFamily::CPDM; }
bool has_duplicates(BaseFamily f) { return f == BaseFamily::CPDM || f == BaseFamily::NPDM; }

std::vector<double> base_meanings(BaseFamily f)
{
    return has_duplicates(f) ? int_range(-10, 10) : int_range(0, 10);
}

Eigen::VectorXd base_prior(BaseFamily f)
{
    const auto n = base_meanings(f).size();
    return is_convex_prior(f) ? uniform(n) : edge_heavy(n);
}

Eigen::MatrixXd base_kernel(std::span<const double> meanings, std::span<const double> referents,
                            double variance)
{
    return normalized_kernel(meanings, referents, [variance](double m, double u) {
        return normal_pdf(u, std::abs(m), variance);
    });
}

}  // namespace

// ---------------------------------------------------------------------------
// Embedding

Embedding::Embedding(std::size_t dimension, std::vector<Point> points)
    : dimension_(dimension), points_(std::move(points))
{
    if (dimension_ < 1 || dimension_ > 3) throw ParameterError("embedding dimension must be 1, 2 or 3");
    for (auto& p : points_) {
        for (std::size_t d = 0; d < 3; ++d) {
            if (!std::isfinite(p[d])) throw ParameterError("embedding coordinates must be finite");
            if (d >= dimension_ && p[d] != 0.0)
                throw ParameterError("embedding point has components beyond its dimension");
        }
    }
}

Embedding Embedding::line(std::span<const double> coords)
{
    std::vector<Point> pts;
    pts.reserve(coords.size());
    for (double c : coords) pts.push_back({c, 0.0, 0.0});
    return Embedding(1, std::move(pts));
}

Embedding Embedding::integer_line(int first, int last)
{
    const auto coords = int_range(first, last);
    return line(coords);
}

Embedding Embedding::grid(int width, int height)
{
    std::vector<Point> pts;
    for (int i = 0; i < width; ++i)
        for (int j = 0; j < height; ++j) pts.push_back({double(i), double(j), 0.0});
    return Embedding(2, std::move(pts));
}

Embedding Embedding::translated(const Point& offset) const
{
    auto pts = points_;
    for (auto& p : pts)
        for (std::size_t d = 0; d < dimension_; ++d) p[d] += offset[d];
    return Embedding(dimension_, std::move(pts));
}

// ---------------------------------------------------------------------------
// Environment

Environment::Environment(std::string name, Eigen::VectorXd prior, Eigen::MatrixXd kernel,
                         Embedding meaning_embedding, Embedding referent_embedding)
    : name_(std::move(name)),
      prior_(std::move(prior)),
      kernel_(std::move(kernel)),
      meaning_embedding_(std::move(meaning_embedding)),
      referent_embedding_(std::move(referent_embedding))
{
    if (prior_.size() == 0 || kernel_.cols() == 0) throw ParameterError(name_ + ": empty meaning or referent set");
    if (kernel_.rows() != prior_.size()) throw ParameterError(name_ + ": kernel rows must match prior size");
    if (meaning_embedding_.size() != num_meanings())
        throw ParameterError(name_ + ": meaning embedding does not cover the meaning set");
    if (referent_embedding_.size() != num_referents())
        throw ParameterError(name_ + ": referent embedding does not cover the referent set");
    if (!prior_.allFinite() || (prior_.array() < 0.0).any()) throw ParameterError(name_ + ": prior must be nonnegative");
    const double total = prior_.sum();
    if (!(total > 0.0)) throw ParameterError(name_ + ": prior has zero mass");
    // Already-normalized priors are kept bit-for-bit so JSON round trips are exact.
    if (std::abs(total - 1.0) > 1e-12) prior_ /= total;
    if (!kernel_.allFinite() || (kernel_.array() < 0.0).any())
        throw ParameterError(name_ + ": kernel entries must be nonnegative");
    for (Eigen::Index i = 0; i < kernel_.rows(); ++i) {
        if (std::abs(kernel_.row(i).sum() - 1.0) > kNormTol)
            throw ParameterError(name_ + ": kernel row " + std::to_string(i) + " does not sum to 1");
    }
}

Eigen::VectorXd Environment::referent_marginal() const { return kernel_.transpose() * prior_; }

bool Environment::has_full_support() const { return (kernel_.array() > 0.0).all(); }

// ---------------------------------------------------------------------------
// Builders

std::vector<double> gaussian_kernel(double center, double variance, std::span<const double> referent_coords)
{
    if (!(variance > 0.0)) throw ParameterError("gaussian_kernel: variance must be positive");
    if (referent_coords.empty()) throw ParameterError("gaussian_kernel: no referents");
    std::vector<double> row;
    row.reserve(referent_coords.size());
    double total = 0.0;
    for (double u : referent_coords) {
        row.push_back(normal_pdf(u, center, variance));
        total += row.back();
    }
    for (double& v : row) v /= total;
    return row;
}

Environment build_base(BaseFamily which)
{
    const auto meanings = base_meanings(which);
    const auto referents = int_range(0, 10);
    return Environment(std::string(to_string(which)), base_prior(which),
                       base_kernel(meanings, referents, kBaseVariance), Embedding::line(meanings),
                       Embedding::line(referents));
}

Environment build_dual(BaseFamily base)
{
    const auto meanings = base_meanings(base);
    const auto referents = int_range(-10, 10);
    auto kernel = normalized_kernel(meanings, referents, [](double m, double u) {
        return (normal_pdf(u, m, kDualVariance) + normal_pdf(u, -m, kDualVariance)) / 2.0;
    });
    return Environment(std::string(to_string(base)) + "-Dual", base_prior(base), std::move(kernel),
                       Embedding::line(meanings), Embedding::line(referents));
}

Environment build_variant(Variant which)
{
    const std::string name(to_string(which));
    const auto referents11 = int_range(0, 10);

    switch (which) {
    case Variant::CPDMConvex: {
        const auto meanings = int_range(-10, 10);
        Eigen::VectorXd prior(meanings.size());
        for (std::size_t i = 0; i < meanings.size(); ++i) prior(i) = meanings[i] < 0 ? 0.099 : 0.01 / 11.0;
        return Environment(name, prior, base_kernel(meanings, referents11, kBaseVariance),
                           Embedding::line(meanings), Embedding::line(referents11));
    }
    case Variant::CPDMAdj: {
        const auto meanings = int_range(0, 19);
        auto kernel = normalized_kernel(meanings, referents11, [](double m, double u) {
            return normal_pdf(u, std::floor(m / 2.0), kDualVariance);
        });
        return Environment(name, uniform(meanings.size()), std::move(kernel), Embedding::line(meanings),
                           Embedding::line(referents11));
    }
    case Variant::NPDMAdj: {
        const auto meanings = int_range(0, 17);
        Eigen::VectorXd prior(meanings.size());
        for (std::size_t i = 0; i < meanings.size(); ++i) prior(i) = (i % 3 == 1) ? 0.01 / 6.0 : 0.495 / 6.0;
        auto kernel = normalized_kernel(meanings, referents11, [](double m, double u) {
            return normal_pdf(u, std::floor(m / 3.0), kDualVariance);
        });
        return Environment(name, prior, std::move(kernel), Embedding::line(meanings),
                           Embedding::line(referents11));
    }
    case Variant::NPDMShift: {
        const auto meanings = int_range(-10, 10);
        Eigen::VectorXd prior = Eigen::VectorXd::Constant(meanings.size(), 0.01);
        prior(0) = 0.2075;
        prior(10) = 0.415;
        prior(20) = 0.2075;
        return Environment(name, prior, base_kernel(meanings, referents11, kBaseVariance),
                           Embedding::line(meanings), Embedding::line(referents11));
    }
    case Variant::CPUMSplit: {
        const auto meanings = int_range(0, 9);
        const auto referents = int_range(0, 19);
        Eigen::MatrixXd kernel = Eigen::MatrixXd::Constant(10, 20, 0.01);
        for (int m = 0; m < 10; ++m) {
            kernel(m, m) = 0.41;
            kernel(m, m + 10) = 0.41;
        }
        return Environment(name, uniform(10), std::move(kernel), Embedding::line(meanings),
                           Embedding::line(referents));
    }
    case Variant::CPDMSplit: {
        const auto values = int_range(0, 9);
        Eigen::MatrixXd kernel = Eigen::MatrixXd::Constant(10, 10, 0.1);
        kernel.row(0).setConstant(0.01);
        kernel(0, 0) = 0.91;
        kernel.row(9).setConstant(0.01);
        kernel(9, 9) = 0.91;
        return Environment(name, uniform(10), std::move(kernel), Embedding::line(values),
                           Embedding::line(values));
    }
    case Variant::Manhattan55: {
        auto grid = Embedding::grid(5, 5);
        Eigen::MatrixXd kernel(25, 25);
        for (std::size_t m = 0; m < 25; ++m) {
            for (std::size_t u = 0; u < 25; ++u) {
                const double dist = std::abs(grid[m][0] - grid[u][0]) + std::abs(grid[m][1] - grid[u][1]);
                kernel(m, u) = dist + 1.0;
            }
            kernel.row(m) /= kernel.row(m).sum();
        }
        return Environment(name, uniform(25), std::move(kernel), grid, grid);
    }
    }
    throw ParameterError("unknown variant");
}

std::string_view to_string(BaseFamily which)
{
    switch (which) {
    case BaseFamily::CPUM: return "CPUM";
    case BaseFamily::NPUM: return "NPUM";
    case BaseFamily::CPDM: return "CPDM";
    case BaseFamily::NPDM: return "NPDM";
    }
    return "?";
}

std::string_view to_string(Variant which)
{
    switch (which) {
    case Variant::CPDMConvex: return "CPDM-Convex";
    case Variant::CPDMAdj: return "CPDM-Adj";
    case Variant::NPDMAdj: return "NPDM-Adj";
    case Variant::NPDMShift: return "NPDM-Shift";
    case Variant::CPUMSplit: return "CPUM-Split";
    case Variant::CPDMSplit: return "CPDM-Split";
    case Variant::Manhattan55: return "Manhattan-5-5";
    }
    return "?";
}

Environment build_named(std::string_view name)
{
    constexpr BaseFamily bases[] = {BaseFamily::CPUM, BaseFamily::NPUM, BaseFamily::CPDM, BaseFamily::NPDM};
    constexpr Variant variants[] = {Variant::CPDMConvex, Variant::CPDMAdj,   Variant::NPDMAdj,    Variant::NPDMShift,
                                    Variant::CPUMSplit,  Variant::CPDMSplit, Variant::Manhattan55};
    for (auto b : bases) {
        if (name == to_string(b)) return build_base(b);
        if (name == std::string(to_string(b)) + "-Dual") return build_dual(b);
    }
    for (auto v : variants)
        if (name == to_string(v)) return build_variant(v);
    throw ParameterError("unknown environment '" + std::string(name) + "'");
}

std::vector<std::string> experiment2_environment_names()
{
    return {"CPUM",      "NPUM",      "CPDM",        "NPDM",     "CPUM-Dual", "NPUM-Dual",
            "CPDM-Dual", "NPDM-Dual", "CPDM-Convex", "CPDM-Adj", "NPDM-Adj",  "Manhattan-5-5"};
}

std::vector<std::string> experiment3_environment_names()
{
    return {"CPUM",      "NPUM",      "CPDM",       "NPDM",       "CPUM-Dual",  "NPUM-Dual",
            "CPDM-Dual", "NPDM-Dual", "NPDM-Shift", "CPUM-Split", "CPDM-Split", "Manhattan-5-5"};
}

// ---------------------------------------------------------------------------
// JSON

namespace {

nlohmann::json embedding_to_json(const Embedding& e)
{
    nlohmann::json coords = nlohmann::json::array();
    for (const auto& p : e.points()) coords.push_back(std::vector<double>(p.begin(), p.begin() + e.dimension()));
    return {{"dimension", e.dimension()}, {"coordinates", coords}};
}

Embedding embedding_from_json(const nlohmann::json& j)
{
    const auto dim = j.at("dimension").get<std::size_t>();
    std::vector<Point> pts;
    for (const auto& c : j.at("coordinates")) {
        const auto v = c.get<std::vector<double>>();
        if (v.size() != dim) throw ParameterError("embedding coordinate has wrong dimension");
        Point p{0.0, 0.0, 0.0};
        std::copy(v.begin(), v.end(), p.begin());
        pts.push_back(p);
    }
    return Embedding(dim, std::move(pts));
}

}  // namespace

nlohmann::json to_json(const Environment& env)
{
    const auto& k = env.kernel();
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(k.size()));
    for (Eigen::Index i = 0; i < k.rows(); ++i)
        for (Eigen::Index j = 0; j < k.cols(); ++j) flat.push_back(k(i, j));
    return {
        {"name", env.name()},
        {"n_referents", env.num_referents()},
        {"n_meanings", env.num_meanings()},
        {"prior", std::vector<double>(env.prior().data(), env.prior().data() + env.prior().size())},
        {"kernel", flat},
        {"meaning_embedding", embedding_to_json(env.meaning_embedding())},
        {"referent_embedding", embedding_to_json(env.referent_embedding())},
    };
}

Environment environment_from_json(const nlohmann::json& doc)
{
    const auto nu = doc.at("n_referents").get<std::size_t>();
    const auto nm = doc.at("n_meanings").get<std::size_t>();
    const auto prior = doc.at("prior").get<std::vector<double>>();
    const auto flat = doc.at("kernel").get<std::vector<double>>();
    if (prior.size() != nm || flat.size() != nm * nu) throw ParameterError("environment JSON: size mismatch");
    Eigen::MatrixXd kernel(nm, nu);
    for (std::size_t i = 0; i < nm; ++i)
        for (std::size_t j = 0; j < nu; ++j) kernel(i, j) = flat[i * nu + j];
    return Environment(doc.at("name").get<std::string>(),
                       Eigen::Map<const Eigen::VectorXd>(prior.data(), static_cast<Eigen::Index>(nm)),
                       std::move(kernel), embedding_from_json(doc.at("meaning_embedding")),
                       embedding_from_json(doc.at("referent_embedding")));
}

}  // namespace ibc
