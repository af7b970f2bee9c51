#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "ibconvex/environment.hpp"
#include "ibconvex/infometrics.hpp"

namespace ibc {

inline constexpr std::size_t kDefaultConvexitySteps = 100;

/// { x : p(x) >= threshold }
struct LevelSet {
    double threshold = 0.0;
    std::vector<std::size_t> members;
};

LevelSet level_set(std::span<const double> p, double threshold);

/// |members| / number of embedded domain points inside the members' convex
/// hull (boundary inclusive).
double hard_convexity(std::span<const std::size_t> members, const Embedding& embedding);

/// Quasi-convexity of a distribution over the embedded domain: the average of
/// hard convexity over `steps` evenly spaced level sets between 0 and max(p).
double dcon(std::span<const double> p, const Embedding& embedding, std::size_t steps = kDefaultConvexitySteps);

enum class QcSide { Meaning, Referent };

std::string_view to_string(QcSide side);

struct WordConvexity {
    std::size_t word = 0;
    double weight = 0.0;  // q(w)
    double dcon = 0.0;
};

struct ConvexityScore {
    double value = 0.0;
    std::size_t steps = 0;
    std::vector<WordConvexity> per_word;
};

/// sum_w q(w) dcon(q(.|w)) with q(m|w) (Meaning) or q(u|w) (Referent).
ConvexityScore encoder_convexity(const Environment& env, const Encoder& enc, QcSide side,
                                 std::size_t steps = kDefaultConvexitySteps);

/// Same, reusing already computed marginals.
ConvexityScore encoder_convexity(const Environment& env, const Marginals& mg, QcSide side,
                                 std::size_t steps = kDefaultConvexitySteps);

}  // namespace ibc
