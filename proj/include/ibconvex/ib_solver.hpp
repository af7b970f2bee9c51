#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "ibconvex/environment.hpp"
#include "ibconvex/infometrics.hpp"

namespace ibc {

/// All word weights for some meaning underflowed during an update.
class DegenerateRowError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FrontierPoint {
    double beta = 0.0;
    Encoder encoder;
    MetricsPoint metrics;
    std::size_t iterations = 0;
    bool converged = false;
    /// F_beta after every update, starting with the initial encoder.
    /// Only filled when SolveOptions::record_trace is set.
    std::vector<double> objective_trace;
};

struct SolveOptions {
    double tolerance = 1e-8;       // on |delta F_beta|
    std::size_t max_iterations = 10000;
    double prune_threshold = 1e-12;  // words with q(w) below this are removed
    bool record_trace = false;
};

/// Descending list of trade-off values with per-beta solver settings.
class AnnealSchedule {
public:
    explicit AnnealSchedule(std::vector<double> betas, SolveOptions options = {});

    /// `count` values in total: count-1 values log-spaced from `top` down to
    /// 1, followed by beta = 0.
    static AnnealSchedule log_spaced(std::size_t count = 1501, double top = 8192.0, SolveOptions options = {});
    /// Whitespace-separated betas in any order; sorted descending, duplicates rejected.
    static AnnealSchedule from_file(const std::filesystem::path& path, SolveOptions options = {});

    const std::vector<double>& betas() const { return betas_; }
    const SolveOptions& options() const { return options_; }
    std::size_t size() const { return betas_.size(); }

private:
    std::vector<double> betas_;
    SolveOptions options_;
};

/// One self-consistent IB update at trade-off `beta`.
Encoder ib_iterate(const Environment& env, const Encoder& enc, double beta);

FrontierPoint solve_beta(const Environment& env, const Encoder& init, double beta, const SolveOptions& options = {});

/// Reverse deterministic annealing from the identity encoder at the top beta,
/// warm-starting each lower beta from the previous solution.
std::vector<FrontierPoint> reverse_anneal(const Environment& env, const AnnealSchedule& schedule);

std::vector<MetricsPoint> frontier_metrics(const std::vector<FrontierPoint>& frontier);

/// CSV: beta,complexity_bits,accuracy_bits,n_words,converged
void write_frontier_csv(std::ostream& out, const std::vector<FrontierPoint>& frontier);

}  // namespace ibc
