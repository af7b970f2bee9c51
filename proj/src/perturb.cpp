#include "ibconvex/perturb.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace ibc {

std::string_view to_string(BaseType t) { return t == BaseType::Natural ? "natural" : "optimal"; }

std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t bound)
{
    if (bound == 0) throw ParameterError("uniform_below: empty range");
    // Largest multiple of bound that fits; draws above it are rejected.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = gen();
    } while (x >= limit);
    return x % bound;
}

std::size_t rows_selected(double percentage, std::size_t meanings)
{
    if (!(percentage > 0.0 && percentage <= 100.0)) throw ParameterError("shuffle percentage must lie in (0, 100]");
    // Product first keeps integral percentages exact (30% of 10 is 3, not 4).
    const double exact = percentage * static_cast<double>(meanings) / 100.0;
    return std::min(meanings, static_cast<std::size_t>(std::ceil(exact - 1e-9)));
}

Encoder shuffle_encoder(const Encoder& enc, const ShuffleSpec& spec)
{
    const auto n = enc.num_meanings();
    const auto k = rows_selected(spec.percentage, n);
    if (n < 2 || k < 2) return enc;

    std::mt19937_64 gen(spec.seed);
    // Partial Fisher-Yates: the first k entries become the selected meanings.
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + uniform_below(gen, n - i)]);
    std::vector<std::size_t> selected(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k));

    std::vector<std::size_t> perm(k);
    const bool forbid_identity = spec.percentage >= 100.0;
    do {
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = k - 1; i > 0; --i) std::swap(perm[i], perm[uniform_below(gen, i + 1)]);
    } while (forbid_identity && std::is_sorted(perm.begin(), perm.end()));

    Eigen::MatrixXd t = enc.table();
    for (std::size_t i = 0; i < k; ++i)
        t.row(static_cast<Eigen::Index>(selected[i])) = enc.table().row(static_cast<Eigen::Index>(selected[perm[i]]));
    return Encoder(std::move(t));
}

std::vector<ShuffleSpec> suite_specs(const std::vector<BaseType>& source_types, const std::vector<double>& percentages,
                                     std::size_t per_setting, std::uint64_t master_seed)
{
    for (double pct : percentages) rows_selected(pct, 1);
    std::vector<ShuffleSpec> out;
    out.reserve(source_types.size() * percentages.size() * per_setting);
    std::uint64_t state = master_seed;
    for (std::size_t s = 0; s < source_types.size(); ++s)
        for (double pct : percentages)
            for (std::size_t r = 0; r < per_setting; ++r) out.push_back({pct, splitmix64(state), s, source_types[s]});
    return out;
}

std::vector<ShuffledEncoder> generate_suite(const std::vector<Encoder>& sources, const std::vector<BaseType>& source_types,
                                            const std::vector<double>& percentages, std::size_t per_setting,
                                            std::uint64_t master_seed)
{
    if (sources.empty()) throw ParameterError("generate_suite: no source encoders");
    if (source_types.size() != sources.size()) throw ParameterError("generate_suite: one type tag per source required");
    std::vector<ShuffledEncoder> out;
    for (const auto& spec : suite_specs(source_types, percentages, per_setting, master_seed))
        out.push_back({spec, shuffle_encoder(sources[spec.source], spec)});
    return out;
}

std::vector<double> default_percentages() { return {10, 20, 30, 40, 50, 60, 70, 80, 90, 100}; }

}  // namespace ibc
