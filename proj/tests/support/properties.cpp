#include "properties.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "ibconvex/convexity.hpp"
#include "ibconvex/experiment.hpp"

namespace ibc::testing {

namespace {

std::string fmt(double v)
{
    std::ostringstream s;
    s.precision(3);
    s << v;
    return s.str();
}

double h2(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

// Subsets of size k of {0..n-1}, visited in lexicographic order.
template <class Fn>
bool for_each_subset(std::size_t n, std::size_t k, Fn&& fn)
{
    if (k > n) return false;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        if (fn(idx)) return true;
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) return false;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

bool in_simplex(const std::vector<Point>& pts, const std::vector<std::size_t>& idx, const Point& x, int dim)
{
    const auto k = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd a(dim + 1, k);
    Eigen::VectorXd b(dim + 1);
    for (Eigen::Index j = 0; j < k; ++j) {
        for (int d = 0; d < dim; ++d) a(d, j) = pts[idx[static_cast<std::size_t>(j)]][d];
        a(dim, j) = 1.0;
    }
    for (int d = 0; d < dim; ++d) b(d) = x[d];
    b(dim) = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (lu.rank() < k) return false;  // some smaller subset covers this case
    const Eigen::VectorXd lambda = a.colPivHouseholderQr().solve(b);
    if ((a * lambda - b).norm() > 1e-9) return false;
    return (lambda.array() >= -1e-9).all();
}

std::vector<Point> cube_points()
{
    std::vector<Point> pts;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) pts.push_back({double(i), double(j), double(k)});
    return pts;
}

std::vector<std::size_t> random_subset(std::mt19937_64& gen, std::size_t n, std::size_t min_size, std::size_t max_size)
{
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    std::shuffle(all.begin(), all.end(), gen);
    std::uniform_int_distribution<std::size_t> size(min_size, max_size);
    all.resize(size(gen));
    std::sort(all.begin(), all.end());
    return all;
}

PropertyResult hull_subsets(const std::string& name, const Embedding& emb, int dim,
                            const std::vector<std::vector<std::size_t>>& subsets)
{
    PropertyResult r{true, name, ""};
    std::size_t bad = 0;
    for (const auto& s : subsets) {
        std::vector<Point> members;
        for (auto i : s) members.push_back(emb[i]);
        const auto hull = brute_force_hull_count(members, emb.points(), dim);
        const double expected = static_cast<double>(s.size()) / static_cast<double>(hull);
        if (hard_convexity(s, emb) != expected) ++bad;
    }
    r.pass = bad == 0;
    r.detail = std::to_string(subsets.size()) + " subsets, " + std::to_string(bad) + " mismatches";
    return r;
}

}  // namespace

std::vector<Environment> toy_environments()
{
    std::vector<std::string> names = experiment2_environment_names();
    for (const auto& n : experiment3_environment_names())
        if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
    std::vector<Environment> out;
    for (const auto& n : names) out.push_back(build_named(n));
    return out;
}

Encoder random_encoder(std::mt19937_64& gen, std::size_t meanings, std::size_t words)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, words - 1);
    Eigen::MatrixXd t(meanings, words);
    for (std::size_t m = 0; m < meanings; ++m) {
        for (std::size_t w = 0; w < words; ++w) t(m, w) = unit(gen) < 0.25 ? 0.0 : unit(gen);
        t(m, pick(gen)) += 0.05;
        t.row(m) /= t.row(m).sum();
    }
    return Encoder(std::move(t));
}

std::vector<double> random_distribution(std::mt19937_64& gen, std::size_t n)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> p(n);
    for (auto& v : p) {
        const double u = unit(gen);
        v = u < 0.2 ? 0.0 : (u < 0.35 ? 0.5 : unit(gen));  // zeros and ties
    }
    p[std::uniform_int_distribution<std::size_t>(0, n - 1)(gen)] += 0.1;
    double s = 0.0;
    for (double v : p) s += v;
    for (auto& v : p) v /= s;
    return p;
}

std::size_t brute_force_hull_count(const std::vector<Point>& members, const std::vector<Point>& domain, int dimension)
{
    std::size_t count = 0;
    for (const auto& x : domain) {
        bool inside = false;
        for (std::size_t k = 1; k <= static_cast<std::size_t>(dimension) + 1 && !inside; ++k)
            inside = for_each_subset(members.size(), k,
                                     [&](const std::vector<std::size_t>& idx) { return in_simplex(members, idx, x, dimension); });
        count += inside ? 1 : 0;
    }
    return count;
}

PropertyResult mi_oracle_property(std::uint64_t seed, int tables)
{
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (int t = 0; t < tables; ++t) {
        Eigen::MatrixXd j(4, 4);
        for (Eigen::Index a = 0; a < 4; ++a)
            for (Eigen::Index b = 0; b < 4; ++b) j(a, b) = unit(gen) < 0.15 ? 0.0 : unit(gen);
        j(t % 4, (t / 4) % 4) += 0.01;
        j /= j.sum();
        // H(X) + H(Y) - H(X,Y), summed directly.
        double hx = 0.0, hy = 0.0, hxy = 0.0;
        for (Eigen::Index a = 0; a < 4; ++a) {
            hx += h2(j.row(a).sum());
            hy += h2(j.col(a).sum());
            for (Eigen::Index b = 0; b < 4; ++b) hxy += h2(j(a, b));
        }
        worst = std::max(worst, std::abs(mutual_information(j) - (hx + hy - hxy)));
    }
    return {worst <= kMiTol, "mutual information vs direct summation",
            std::to_string(tables) + " random 4x4 joints, max error " + fmt(worst)};
}

PropertyResult dpi_property(std::uint64_t seed, int encoders)
{
    std::mt19937_64 gen(seed);
    const auto envs = toy_environments();
    double worst = -1e300;
    for (int i = 0; i < encoders; ++i) {
        const auto& env = envs[static_cast<std::size_t>(i) % envs.size()];
        const auto words = std::uniform_int_distribution<std::size_t>(1, env.num_meanings() + 2)(gen);
        const auto m = metrics(env, random_encoder(gen, env.num_meanings(), words));
        worst = std::max(worst, m.accuracy - m.complexity);
    }
    return {worst <= kDpiTol, "accuracy <= complexity",
            std::to_string(encoders) + " random encoders over " + std::to_string(envs.size()) +
                " environments, max(accuracy - complexity) " + fmt(worst)};
}

PropertyResult monotonicity_property(std::uint64_t seed, int triples)
{
    std::mt19937_64 gen(seed);
    const auto envs = toy_environments();
    std::uniform_real_distribution<double> log_beta(std::log(0.25), std::log(64.0));
    std::size_t violations = 0;
    double worst = 0.0;
    for (int t = 0; t < triples; ++t) {
        const auto& env = envs[std::uniform_int_distribution<std::size_t>(0, envs.size() - 1)(gen)];
        const double beta = std::exp(log_beta(gen));
        const auto words = std::uniform_int_distribution<std::size_t>(2, env.num_meanings())(gen);
        auto enc = random_encoder(gen, env.num_meanings(), words);
        double f = ib_objective(env, enc, beta);
        for (int it = 0; it < 25; ++it) {
            enc = ib_iterate(env, enc, beta);
            const double next = ib_objective(env, enc, beta);
            const double rise = next - f;
            if (rise > kMonotoneTol * (1.0 + std::abs(f))) ++violations;
            worst = std::max(worst, rise);
            f = next;
        }
    }
    return {violations == 0, "per-iteration objective monotonicity",
            std::to_string(triples) + " (environment, beta, init) triples x 25 steps, " + std::to_string(violations) +
                " increases, largest rise " + fmt(worst)};
}

PropertyResult shuffle_property(std::uint64_t seed, int trials)
{
    std::mt19937_64 gen(seed);
    const auto envs = toy_environments();
    std::size_t multiset_failures = 0, uniform_trials = 0;
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        const auto& env = envs[static_cast<std::size_t>(t) % envs.size()];
        const auto words = std::uniform_int_distribution<std::size_t>(1, 6)(gen);
        const auto enc = random_encoder(gen, env.num_meanings(), words);
        ShuffleSpec spec;
        spec.percentage = 10.0 * static_cast<double>(std::uniform_int_distribution<int>(1, 10)(gen));
        spec.seed = gen();
        const auto out = shuffle_encoder(enc, spec);

        auto rows = [](const Encoder& e) {
            std::vector<std::vector<double>> r(e.num_meanings());
            for (std::size_t m = 0; m < e.num_meanings(); ++m)
                for (std::size_t w = 0; w < e.num_words(); ++w) r[m].push_back(e(m, w));
            std::sort(r.begin(), r.end());
            return r;
        };
        if (rows(out) != rows(enc)) ++multiset_failures;

        const auto& p = env.prior();
        if (p.maxCoeff() - p.minCoeff() == 0.0) {
            ++uniform_trials;
            worst = std::max(worst, std::abs(complexity(env, out) - complexity(env, enc)));
        }
    }
    const bool pass = multiset_failures == 0 && worst <= kShuffleComplexityTol && uniform_trials > 0;
    return {pass, "shuffle row multiset and uniform-prior complexity",
            std::to_string(trials) + " shuffles, " + std::to_string(multiset_failures) + " multiset failures; " +
                std::to_string(uniform_trials) + " uniform-prior cases, max complexity change " + fmt(worst)};
}

PropertyResult hull_line_property()
{
    const auto emb = Embedding::integer_line(0, 6);
    std::vector<std::vector<std::size_t>> subsets;
    for (unsigned mask = 1; mask < (1u << 7); ++mask) {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < 7; ++i)
            if (mask & (1u << i)) s.push_back(i);
        subsets.push_back(std::move(s));
    }
    return hull_subsets("hard convexity, all subsets of a 7-point line", emb, 1, subsets);
}

PropertyResult hull_grid_property(std::uint64_t seed, int subsets)
{
    std::mt19937_64 gen(seed);
    const auto emb = Embedding::grid(5, 5);
    std::vector<std::vector<std::size_t>> sets;
    for (int i = 0; i < subsets; ++i) sets.push_back(random_subset(gen, 25, 1, 10));
    return hull_subsets("hard convexity, random subsets of the 5x5 grid", emb, 2, sets);
}

PropertyResult hull_cube_property(std::uint64_t seed, int subsets)
{
    std::mt19937_64 gen(seed);
    const Embedding emb(3, cube_points());
    std::vector<std::vector<std::size_t>> sets;
    for (int i = 0; i < subsets; ++i) sets.push_back(random_subset(gen, 27, 1, 8));
    return hull_subsets("hard convexity, random subsets of the 3x3x3 grid", emb, 3, sets);
}

PropertyResult dcon_range_property(std::uint64_t seed, int distributions)
{
    std::mt19937_64 gen(seed);
    const Embedding embeddings[] = {Embedding::integer_line(0, 10), Embedding::grid(5, 5), Embedding(3, cube_points())};
    std::size_t outside = 0;
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < distributions; ++i) {
        const auto& emb = embeddings[i % 3];
        const auto p = random_distribution(gen, emb.size());
        const double v = dcon(p, emb);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        if (!(v >= 0.0 && v <= 1.0)) ++outside;
    }
    return {outside == 0, "dcon within [0,1]",
            std::to_string(distributions) + " random distributions in 1D/2D/3D, range [" + fmt(lo) + ", " + fmt(hi) + "]"};
}

std::vector<PropertyResult> all_properties(std::uint64_t seed)
{
    return {mi_oracle_property(seed),     dpi_property(seed + 1),       monotonicity_property(seed + 2),
            shuffle_property(seed + 3),   hull_line_property(),         hull_grid_property(seed + 4),
            hull_cube_property(seed + 5), dcon_range_property(seed + 6)};
}

}  // namespace ibc::testing
