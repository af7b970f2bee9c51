#include "ibconvex/infometrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

namespace ibc {

namespace {

constexpr double kNormTol = 1e-9;
constexpr double kClampTol = 1e-12;

void check_dimensions(const Environment& env, const Encoder& enc)
{
    if (enc.num_meanings() != env.num_meanings())
        throw ParameterError("encoder has " + std::to_string(enc.num_meanings()) + " rows but environment '" +
                             env.name() + "' has " + std::to_string(env.num_meanings()) + " meanings");
}

}  // namespace

Encoder::Encoder(Eigen::MatrixXd table) : table_(std::move(table))
{
    if (table_.rows() == 0 || table_.cols() == 0) throw ParameterError("encoder must have meanings and words");
    if (!table_.allFinite() || (table_.array() < 0.0).any() || (table_.array() > 1.0 + kNormTol).any())
        throw ParameterError("encoder entries must lie in [0,1]");
    for (Eigen::Index i = 0; i < table_.rows(); ++i) {
        if (std::abs(table_.row(i).sum() - 1.0) > kNormTol)
            throw ParameterError("encoder row " + std::to_string(i) + " does not sum to 1");
    }
}

Encoder Encoder::identity(std::size_t meanings)
{
    return Encoder(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(meanings), static_cast<Eigen::Index>(meanings)));
}

Encoder Encoder::single_word(std::size_t meanings)
{
    return Encoder(Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(meanings), 1));
}

Encoder Encoder::from_assignment(std::span<const std::size_t> word_of, std::size_t words)
{
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(word_of.size()), static_cast<Eigen::Index>(words));
    for (std::size_t m = 0; m < word_of.size(); ++m) {
        if (word_of[m] >= words) throw ParameterError("assignment refers to a missing word");
        t(m, word_of[m]) = 1.0;
    }
    return Encoder(std::move(t));
}

Encoder Encoder::without_words(std::span<const std::size_t> words) const
{
    std::vector<bool> drop(num_words(), false);
    for (auto w : words) drop.at(w) = true;
    std::vector<Eigen::Index> keep;
    for (std::size_t w = 0; w < num_words(); ++w)
        if (!drop[w]) keep.push_back(static_cast<Eigen::Index>(w));
    Eigen::MatrixXd t = table_(Eigen::all, keep);
    // Renormalize away the (sub-threshold) mass that sat on dropped words.
    for (Eigen::Index i = 0; i < t.rows(); ++i) t.row(i) /= t.row(i).sum();
    return Encoder(std::move(t));
}

Encoder Encoder::with_permuted_words(std::span<const std::size_t> perm) const
{
    if (perm.size() != num_words()) throw ParameterError("word permutation has wrong length");
    std::vector<Eigen::Index> idx(perm.begin(), perm.end());
    return Encoder(table_(Eigen::all, idx));
}

Marginals marginals(const Environment& env, const Encoder& enc)
{
    check_dimensions(env, enc);
    const auto& p = env.prior();
    Marginals out;
    out.word = enc.table().transpose() * p;
    out.referent = env.referent_marginal();
    for (std::size_t w = 0; w < enc.num_words(); ++w)
        if (out.word(w) > 0.0) out.used_words.push_back(w);

    const auto used = static_cast<Eigen::Index>(out.used_words.size());
    out.meaning_given_word.resize(used, p.size());
    for (Eigen::Index k = 0; k < used; ++k) {
        const auto w = static_cast<Eigen::Index>(out.used_words[k]);
        out.meaning_given_word.row(k) = (p.array() * enc.table().col(w).array()).transpose() / out.word(w);
    }
    out.referent_given_word = out.meaning_given_word * env.kernel();
    return out;
}

double mutual_information(const Eigen::MatrixXd& joint)
{
    if (joint.size() == 0) throw ParameterError("mutual_information: empty table");
    if (!joint.allFinite() || (joint.array() < 0.0).any())
        throw ParameterError("mutual_information: entries must be nonnegative");
    if (std::abs(joint.sum() - 1.0) > kNormTol) throw ParameterError("mutual_information: table is not normalized");

    const Eigen::VectorXd px = joint.rowwise().sum();
    const Eigen::RowVectorXd py = joint.colwise().sum();
    double total = 0.0;
    for (Eigen::Index i = 0; i < joint.rows(); ++i) {
        for (Eigen::Index j = 0; j < joint.cols(); ++j) {
            const double v = joint(i, j);
            if (v > 0.0) total += v * std::log2(v / (px(i) * py(j)));
        }
    }
    if (total < -kClampTol) throw ParameterError("mutual_information: negative result");
    return std::max(total, 0.0);
}

double complexity(const Environment& env, const Encoder& enc)
{
    check_dimensions(env, enc);
    const Eigen::MatrixXd joint = env.prior().asDiagonal() * enc.table();
    return mutual_information(joint);
}

double accuracy(const Environment& env, const Encoder& enc)
{
    const auto mg = marginals(env, enc);
    Eigen::MatrixXd joint(mg.used_words.size(), env.num_referents());
    for (std::size_t k = 0; k < mg.used_words.size(); ++k)
        joint.row(static_cast<Eigen::Index>(k)) =
            mg.word(static_cast<Eigen::Index>(mg.used_words[k])) * mg.referent_given_word.row(static_cast<Eigen::Index>(k));
    return mutual_information(joint);
}

MetricsPoint metrics(const Environment& env, const Encoder& enc)
{
    return MetricsPoint{complexity(env, enc), accuracy(env, enc), std::nullopt, std::nullopt};
}

double meaning_referent_information(const Environment& env)
{
    return mutual_information(env.prior().asDiagonal() * env.kernel());
}

double ib_objective(const Environment& env, const Encoder& enc, double beta)
{
    if (!(beta >= 0.0)) throw ParameterError("ib_objective: beta must be nonnegative");
    const double c = complexity(env, enc);
    if (beta == 0.0) return c;
    return c - beta * accuracy(env, enc);
}

double optimality(const MetricsPoint& point, std::span<const MetricsPoint> frontier)
{
    if (frontier.empty()) throw ParameterError("optimality: empty frontier");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& f : frontier)
        best = std::min(best, std::hypot(point.complexity - f.complexity, point.accuracy - f.accuracy));
    return best > 0.0 ? -best : 0.0;
}

nlohmann::json to_json(const Encoder& enc)
{
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < enc.table().rows(); ++i) {
        std::vector<double> r(enc.table().cols());
        for (Eigen::Index j = 0; j < enc.table().cols(); ++j) r[j] = enc.table()(i, j);
        rows.push_back(std::move(r));
    }
    return {{"n_meanings", enc.num_meanings()}, {"n_words", enc.num_words()}, {"q_w_given_m", rows}};
}

Encoder encoder_from_json(const nlohmann::json& doc)
{
    const auto& rows = doc.at("q_w_given_m");
    if (rows.empty()) throw ParameterError("encoder JSON: no rows");
    const auto nw = rows.front().size();
    Eigen::MatrixXd t(rows.size(), nw);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto r = rows[i].get<std::vector<double>>();
        if (r.size() != nw) throw ParameterError("encoder JSON: ragged rows");
        for (std::size_t j = 0; j < nw; ++j) t(i, j) = r[j];
    }
    return Encoder(std::move(t));
}

}  // namespace ibc
