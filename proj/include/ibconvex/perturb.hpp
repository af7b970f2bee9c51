#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "ibconvex/infometrics.hpp"

namespace ibc {

enum class BaseType { Natural, Optimal };

std::string_view to_string(BaseType t);

struct ShuffleSpec {
    double percentage = 100.0;  // in (0, 100]
    std::uint64_t seed = 0;
    std::size_t source = 0;  // index into the source encoder list
    BaseType source_type = BaseType::Optimal;
};

/// SplitMix64 finalizer. Per-item seeds of a suite are the successive
/// outputs of SplitMix64 started from the master seed.
std::uint64_t splitmix64(std::uint64_t& state);

/// Uniform integer in [0, bound) by rejection on the raw mt19937_64 stream,
/// so results do not depend on the standard library's distributions.
std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t bound);

/// Number of meanings a shuffle at `percentage` selects: ceil(pct/100 * n).
std::size_t rows_selected(double percentage, std::size_t meanings);

/// Permutes the rows of a random subset of meanings among themselves.
Encoder shuffle_encoder(const Encoder& enc, const ShuffleSpec& spec);

struct ShuffledEncoder {
    ShuffleSpec spec;
    Encoder encoder;
};

/// Shuffle settings of a suite without materializing the encoders: for each
/// source (outer), percentage, and repetition (inner), one spec. Item i
/// (0-based, in that order) uses the (i+1)-th SplitMix64 output of
/// `master_seed` as its seed.
std::vector<ShuffleSpec> suite_specs(const std::vector<BaseType>& source_types, const std::vector<double>& percentages,
                                     std::size_t per_setting, std::uint64_t master_seed);

/// The encoders described by suite_specs().
std::vector<ShuffledEncoder> generate_suite(const std::vector<Encoder>& sources, const std::vector<BaseType>& source_types,
                                            const std::vector<double>& percentages, std::size_t per_setting,
                                            std::uint64_t master_seed);

std::vector<double> default_percentages();

}  // namespace ibc
