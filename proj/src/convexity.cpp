#include "ibconvex/convexity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hull.hpp"

namespace ibc {

namespace {

constexpr double kNormTol = 1e-9;
constexpr double kBoundaryTol = 1e-9;
constexpr double kWordMassFloor = 1e-12;

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

// Interval counting for 1D embeddings; equivalent to the general hull path.
std::size_t count_in_interval(std::span<const std::size_t> members, const Embedding& e)
{
    double lo = e[members.front()][0];
    double hi = lo;
    for (auto i : members) lo = std::min(lo, e[i][0]), hi = std::max(hi, e[i][0]);
    std::size_t count = 0;
    for (const auto& p : e.points())
        if (p[0] >= lo - kBoundaryTol && p[0] <= hi + kBoundaryTol) ++count;
    return count;
}

std::size_t points_in_hull(std::span<const std::size_t> members, const Embedding& e)
{
    if (e.dimension() == 1) return count_in_interval(members, e);
    std::vector<Point> pts;
    pts.reserve(members.size());
    for (auto i : members) pts.push_back(e[i]);
    return detail::count_in_hull(pts, e.points());
}

}  // namespace

std::string_view to_string(QcSide side) { return side == QcSide::Meaning ? "meaning" : "referent"; }

LevelSet level_set(std::span<const double> p, double threshold)
{
    LevelSet ls{threshold, {}};
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] >= threshold) ls.members.push_back(i);
    return ls;
}

double hard_convexity(std::span<const std::size_t> members, const Embedding& embedding)
{
    if (members.empty()) throw ParameterError("hard_convexity: empty set");
    for (auto i : members)
        if (i >= embedding.size()) throw ParameterError("hard_convexity: member outside the embedded domain");
    const auto inside = points_in_hull(members, embedding);
    // Members always lie in their own hull; guard against rounding at facets.
    const auto hull_count = std::max(inside, members.size());
    return clamp01(static_cast<double>(members.size()) / static_cast<double>(hull_count));
}

double dcon(std::span<const double> p, const Embedding& embedding, std::size_t steps)
{
    if (steps < 1) throw ParameterError("dcon: steps must be at least 1");
    if (p.size() != embedding.size()) throw ParameterError("dcon: distribution does not match the embedding");
    double total = 0.0;
    double top = 0.0;
    for (double v : p) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw ParameterError("dcon: entries must be nonnegative");
        total += v;
        top = std::max(top, v);
    }
    if (!(top > 0.0)) throw ParameterError("dcon: zero vector");
    if (std::abs(total - 1.0) > kNormTol) throw ParameterError("dcon: distribution does not sum to 1");

    // Level sets are prefixes of the indices sorted by decreasing mass, so
    // hard convexity only needs evaluating once per distinct prefix length.
    std::vector<std::size_t> order(p.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return p[a] > p[b]; });
    std::vector<double> memo(p.size() + 1, -1.0);

    const double mesh = 1.0 / static_cast<double>(steps);
    const double level = top / static_cast<double>(steps);
    double qc = 0.0;
    std::size_t k = p.size();
    for (std::size_t i = 1; i <= steps; ++i) {
        const double threshold = level * static_cast<double>(i);
        while (k > 0 && p[order[k - 1]] < threshold) --k;
        if (k == 0) {
            qc += mesh;
            continue;
        }
        if (memo[k] < 0.0) memo[k] = hard_convexity(std::span(order).first(k), embedding);
        qc += mesh * memo[k];
    }
    return clamp01(qc);
}

ConvexityScore encoder_convexity(const Environment& env, const Marginals& mg, QcSide side, std::size_t steps)
{
    const auto& cond = side == QcSide::Meaning ? mg.meaning_given_word : mg.referent_given_word;
    const auto& embedding = side == QcSide::Meaning ? env.meaning_embedding() : env.referent_embedding();

    ConvexityScore score;
    score.steps = steps;
    std::vector<double> row(static_cast<std::size_t>(cond.cols()));
    for (std::size_t k = 0; k < mg.used_words.size(); ++k) {
        const auto w = mg.used_words[k];
        const double weight = mg.word(static_cast<Eigen::Index>(w));
        if (weight < kWordMassFloor) continue;
        for (Eigen::Index j = 0; j < cond.cols(); ++j) row[j] = cond(static_cast<Eigen::Index>(k), j);
        const double d = dcon(row, embedding, steps);
        score.per_word.push_back({w, weight, d});
    }
    double acc = 0.0;
    for (const auto& pw : score.per_word) acc += pw.weight * pw.dcon;
    score.value = clamp01(acc);
    return score;
}

ConvexityScore encoder_convexity(const Environment& env, const Encoder& enc, QcSide side, std::size_t steps)
{
    return encoder_convexity(env, marginals(env, enc), side, steps);
}

}  // namespace ibc
