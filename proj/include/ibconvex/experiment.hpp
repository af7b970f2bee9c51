#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ibconvex/convexity.hpp"
#include "ibconvex/environment.hpp"
#include "ibconvex/ib_solver.hpp"
#include "ibconvex/infometrics.hpp"
#include "ibconvex/perturb.hpp"
#include "ibconvex/stats.hpp"

namespace ibc {

inline constexpr std::uint64_t kDefaultSeed = 42;

enum class EncoderType { Natural, Optimal, Suboptimal };

std::string_view to_string(EncoderType t);
EncoderType encoder_type_from_string(std::string_view s);
BaseType base_type_from_string(std::string_view s);

/// One analyzed encoder; the unit row of every experiment output.
struct EncoderRecord {
    std::size_t id = 0;
    std::string environment;
    EncoderType type = EncoderType::Optimal;
    BaseType base_type = BaseType::Optimal;
    std::size_t base_id = 0;  // record id of the base encoder (itself for bases)
    std::string label;        // "beta=..." for frontier bases, "language=..." for natural ones
    double complexity = 0.0;
    double accuracy = 0.0;
    double optimality = 0.0;
    double qc_meaning = 0.0;
    double qc_referent = 0.0;
    std::optional<double> beta;
    std::optional<double> percentage;
    std::optional<std::uint64_t> seed;

    friend bool operator==(const EncoderRecord&, const EncoderRecord&) = default;
};

struct NamedEncoder {
    std::string label;
    Encoder encoder;
};

struct ExperimentConfig {
    AnnealSchedule schedule = AnnealSchedule::log_spaced();
    std::size_t steps = kDefaultConvexitySteps;
    std::uint64_t seed = kDefaultSeed;
    std::vector<double> percentages = default_percentages();
    std::size_t per_setting = 1;
    std::size_t threads = 1;
    QcSide side = QcSide::Meaning;  // the side the experiment reports on
};

struct ExperimentResult {
    std::string environment;
    std::vector<FrontierPoint> frontier;
    std::vector<EncoderRecord> records;
    /// qc_meaning and qc_referent against optimality, complexity and accuracy.
    std::vector<CorrelationReport> correlations;
};

/// Solves the frontier, then scores the frontier encoders, the natural
/// encoders and their shuffled variants.
ExperimentResult run_experiment(const Environment& env, const ExperimentConfig& config,
                                const std::vector<NamedEncoder>& naturals = {});

/// run_experiment with an already computed frontier.
ExperimentResult score_suite(const Environment& env, std::vector<FrontierPoint> frontier, const ExperimentConfig& config,
                             const std::vector<NamedEncoder>& naturals = {});

std::vector<CorrelationReport> correlate(const std::vector<EncoderRecord>& records);

/// Looks up corr(qc_<side>, variable) in a correlation list; NaN when absent.
double find_correlation(const std::vector<CorrelationReport>& reports, QcSide side, std::string_view variable);

struct RegressionDesign {
    Eigen::MatrixXd design;
    Eigen::VectorXd response;
    std::vector<std::string> names;
};

/// Convexity regressed on dummy-coded type and base type (natural as
/// reference) plus mean-centered optimality, complexity and accuracy with all
/// two- and three-way interactions. Dummies that are linear combinations of
/// the columns before them in this record set are left out.
RegressionDesign convexity_design(const std::vector<EncoderRecord>& records, QcSide side);

// CSV / text outputs

void write_records_csv(std::ostream& out, const std::vector<EncoderRecord>& records);
std::vector<EncoderRecord> read_records_csv(std::istream& in);
/// environment,qc_side,variable,r,n,p_value
void write_correlations_csv(std::ostream& out, const std::vector<ExperimentResult>& results);
/// convexity,qc_side,type,base_type,base_id for external mixed-model fitting
void write_long_format_csv(std::ostream& out, const std::vector<EncoderRecord>& records);

}  // namespace ibc
