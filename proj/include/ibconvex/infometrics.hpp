#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "ibconvex/environment.hpp"

namespace ibc {

/// Row-stochastic table q(w|m): one row per meaning, one column per word.
class Encoder {
public:
    Encoder() = default;
    explicit Encoder(Eigen::MatrixXd table);

    static Encoder identity(std::size_t meanings);
    static Encoder single_word(std::size_t meanings);
    /// Hard partition: word_of[m] is the word assigned to meaning m.
    static Encoder from_assignment(std::span<const std::size_t> word_of, std::size_t words);

    std::size_t num_meanings() const { return static_cast<std::size_t>(table_.rows()); }
    std::size_t num_words() const { return static_cast<std::size_t>(table_.cols()); }
    const Eigen::MatrixXd& table() const { return table_; }
    double operator()(std::size_t m, std::size_t w) const { return table_(m, w); }

    /// Drops the listed word columns. Used by the solver's pruning step.
    Encoder without_words(std::span<const std::size_t> words) const;
    /// Reorders words: column j of the result is column perm[j] of this one.
    Encoder with_permuted_words(std::span<const std::size_t> perm) const;

    friend bool operator==(const Encoder& a, const Encoder& b) { return a.table_ == b.table_; }

private:
    Eigen::MatrixXd table_;
};

struct MetricsPoint {
    double complexity = 0.0;  // I(M;W), bits
    double accuracy = 0.0;    // I(W;U), bits
    std::optional<double> beta;
    std::optional<double> optimality;
};

/// Distributions derived from an encoder within an environment.
///
/// Conditional tables only hold words with q(w) > 0; `used_words[k]` maps
/// row k of `meaning_given_word` / `referent_given_word` back to the
/// encoder's word index.
struct Marginals {
    Eigen::VectorXd word;                  // q(w), all words
    Eigen::VectorXd referent;              // p(u)
    std::vector<std::size_t> used_words;
    Eigen::MatrixXd meaning_given_word;    // q(m|w), used words x meanings
    Eigen::MatrixXd referent_given_word;   // q(u|w), used words x referents
};

Marginals marginals(const Environment& env, const Encoder& enc);

/// Mutual information in bits of a joint probability table.
double mutual_information(const Eigen::MatrixXd& joint);

double complexity(const Environment& env, const Encoder& enc);
double accuracy(const Environment& env, const Encoder& enc);
MetricsPoint metrics(const Environment& env, const Encoder& enc);
/// I(M;U) of the environment itself: the accuracy ceiling.
double meaning_referent_information(const Environment& env);

/// complexity - beta * accuracy
double ib_objective(const Environment& env, const Encoder& enc, double beta);

/// Negative Euclidean distance (bits) to the nearest point of `frontier`.
double optimality(const MetricsPoint& point, std::span<const MetricsPoint> frontier);

nlohmann::json to_json(const Encoder& enc);
Encoder encoder_from_json(const nlohmann::json& doc);

}  // namespace ibc
