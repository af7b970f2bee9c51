#include "ibconvex/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace ibc {

namespace {

// Runs fn(i) for i in [0, count) on up to `threads` workers.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn fn)
{
    threads = std::max<std::size_t>(1, std::min(threads, count));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count && !failed; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    if (error) std::rethrow_exception(error);
}

std::string beta_label(double beta)
{
    std::ostringstream s;
    s.precision(17);
    s << "beta=" << beta;
    return s.str();
}

void score(const Environment& env, const Encoder& enc, const std::vector<MetricsPoint>& frontier, std::size_t steps,
           EncoderRecord& rec)
{
    const auto mg = marginals(env, enc);
    const auto m = metrics(env, enc);
    rec.complexity = m.complexity;
    rec.accuracy = m.accuracy;
    rec.optimality = optimality(m, frontier);
    rec.qc_meaning = encoder_convexity(env, mg, QcSide::Meaning, steps).value;
    rec.qc_referent = encoder_convexity(env, mg, QcSide::Referent, steps).value;
}

}  // namespace

std::string_view to_string(EncoderType t)
{
    switch (t) {
    case EncoderType::Natural: return "natural";
    case EncoderType::Optimal: return "optimal";
    case EncoderType::Suboptimal: return "suboptimal";
    }
    return "?";
}

EncoderType encoder_type_from_string(std::string_view s)
{
    if (s == "natural") return EncoderType::Natural;
    if (s == "optimal") return EncoderType::Optimal;
    if (s == "suboptimal") return EncoderType::Suboptimal;
    throw ParameterError("unknown encoder type '" + std::string(s) + "'");
}

BaseType base_type_from_string(std::string_view s)
{
    if (s == "natural") return BaseType::Natural;
    if (s == "optimal") return BaseType::Optimal;
    throw ParameterError("unknown base type '" + std::string(s) + "'");
}

ExperimentResult run_experiment(const Environment& env, const ExperimentConfig& config,
                                const std::vector<NamedEncoder>& naturals)
{
    return score_suite(env, reverse_anneal(env, config.schedule), config, naturals);
}

ExperimentResult score_suite(const Environment& env, std::vector<FrontierPoint> frontier, const ExperimentConfig& config,
                             const std::vector<NamedEncoder>& naturals)
{
    if (frontier.empty()) throw ParameterError("score_suite: empty frontier");
    ExperimentResult result;
    result.environment = env.name();

    // Sources: natural encoders first, then frontier encoders in schedule order.
    std::vector<const Encoder*> sources;
    std::vector<BaseType> source_types;
    std::vector<EncoderRecord> bases;
    for (const auto& n : naturals) {
        sources.push_back(&n.encoder);
        source_types.push_back(BaseType::Natural);
        EncoderRecord r;
        r.type = EncoderType::Natural;
        r.base_type = BaseType::Natural;
        r.label = n.label;
        bases.push_back(std::move(r));
    }
    for (const auto& f : frontier) {
        sources.push_back(&f.encoder);
        source_types.push_back(BaseType::Optimal);
        EncoderRecord r;
        r.type = EncoderType::Optimal;
        r.base_type = BaseType::Optimal;
        r.label = beta_label(f.beta);
        r.beta = f.beta;
        bases.push_back(std::move(r));
    }

    const auto specs = suite_specs(source_types, config.percentages, config.per_setting, config.seed);
    const std::size_t per_source = config.percentages.size() * config.per_setting;

    // Record layout: each base followed by its shuffled variants.
    auto& records = result.records;
    records.resize(sources.size() * (1 + per_source));
    for (std::size_t s = 0; s < sources.size(); ++s) {
        const std::size_t base_id = s * (1 + per_source);
        records[base_id] = bases[s];
        for (std::size_t j = 0; j < per_source; ++j) {
            const auto& spec = specs[s * per_source + j];
            auto& r = records[base_id + 1 + j];
            r.type = EncoderType::Suboptimal;
            r.base_type = spec.source_type;
            r.label = bases[s].label;
            r.beta = bases[s].beta;
            r.percentage = spec.percentage;
            r.seed = spec.seed;
        }
        for (std::size_t j = 0; j <= per_source; ++j) {
            auto& r = records[base_id + j];
            r.id = base_id + j;
            r.base_id = base_id;
            r.environment = env.name();
        }
    }

    const auto front = frontier_metrics(frontier);
    parallel_for(records.size(), config.threads, [&](std::size_t i) {
        auto& rec = records[i];
        const std::size_t s = i / (1 + per_source);
        const std::size_t j = i % (1 + per_source);
        if (j == 0) {
            score(env, *sources[s], front, config.steps, rec);
        } else {
            const auto enc = shuffle_encoder(*sources[s], specs[s * per_source + j - 1]);
            score(env, enc, front, config.steps, rec);
        }
    });

    result.correlations = correlate(records);
    result.frontier = std::move(frontier);
    return result;
}

std::vector<CorrelationReport> correlate(const std::vector<EncoderRecord>& records)
{
    std::vector<double> qm, qu, opt, comp, acc;
    for (const auto& r : records) {
        qm.push_back(r.qc_meaning);
        qu.push_back(r.qc_referent);
        opt.push_back(r.optimality);
        comp.push_back(r.complexity);
        acc.push_back(r.accuracy);
    }
    std::vector<CorrelationReport> out;
    const std::pair<const char*, const std::vector<double>*> sides[] = {{"qc_meaning", &qm}, {"qc_referent", &qu}};
    const std::pair<const char*, const std::vector<double>*> vars[] = {
        {"optimality", &opt}, {"complexity", &comp}, {"accuracy", &acc}};
    for (const auto& [sname, sv] : sides) {
        for (const auto& [vname, vv] : vars) {
            if (records.size() < 3) continue;
            if (auto rep = try_pearson(*sv, *vv, sname, vname)) {
                out.push_back(*rep);
            } else {
                const double nan = std::numeric_limits<double>::quiet_NaN();
                out.push_back({sname, vname, nan, records.size(), nan});
            }
        }
    }
    return out;
}

double find_correlation(const std::vector<CorrelationReport>& reports, QcSide side, std::string_view variable)
{
    const std::string x = std::string("qc_") + std::string(to_string(side));
    for (const auto& r : reports)
        if (r.x_name == x && r.y_name == variable) return r.r;
    return std::numeric_limits<double>::quiet_NaN();
}

RegressionDesign convexity_design(const std::vector<EncoderRecord>& records, QcSide side)
{
    const auto n = static_cast<Eigen::Index>(records.size());
    if (n == 0) throw ParameterError("convexity_design: no records");

    Eigen::VectorXd opt(n), comp(n), acc(n), y(n), t_opt(n), t_sub(n), b_opt(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& r = records[static_cast<std::size_t>(i)];
        opt(i) = r.optimality;
        comp(i) = r.complexity;
        acc(i) = r.accuracy;
        y(i) = side == QcSide::Meaning ? r.qc_meaning : r.qc_referent;
        t_opt(i) = r.type == EncoderType::Optimal ? 1.0 : 0.0;
        t_sub(i) = r.type == EncoderType::Suboptimal ? 1.0 : 0.0;
        b_opt(i) = r.base_type == BaseType::Optimal ? 1.0 : 0.0;
    }
    opt.array() -= opt.mean();
    comp.array() -= comp.mean();
    acc.array() -= acc.mean();

    std::vector<std::pair<std::string, Eigen::VectorXd>> cols;
    cols.emplace_back("Intercept", Eigen::VectorXd::Ones(n));
    const std::pair<const char*, Eigen::VectorXd*> dummies[] = {
        {"Type (optimal)", &t_opt}, {"Type (suboptimal)", &t_sub}, {"Base type (optimal)", &b_opt}};
    // A level combination missing from the record set (e.g. no natural
    // encoders) makes some dummy a linear function of the columns before it.
    for (const auto& [name, col] : dummies) {
        Eigen::MatrixXd trial(n, static_cast<Eigen::Index>(cols.size()) + 1);
        for (std::size_t j = 0; j < cols.size(); ++j) trial.col(static_cast<Eigen::Index>(j)) = cols[j].second;
        trial.rightCols(1) = *col;
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(trial);
        qr.setThreshold(1e-10);
        if (qr.rank() == trial.cols()) cols.emplace_back(name, *col);
    }
    cols.emplace_back("Optimality", opt);
    cols.emplace_back("Complexity", comp);
    cols.emplace_back("Accuracy", acc);
    cols.emplace_back("Optimality x Complexity", opt.cwiseProduct(comp));
    cols.emplace_back("Optimality x Accuracy", opt.cwiseProduct(acc));
    cols.emplace_back("Complexity x Accuracy", comp.cwiseProduct(acc));
    cols.emplace_back("Optimality x Complexity x Accuracy", opt.cwiseProduct(comp).cwiseProduct(acc));

    RegressionDesign d;
    d.design.resize(n, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
        d.design.col(static_cast<Eigen::Index>(j)) = cols[j].second;
        d.names.push_back(cols[j].first);
    }
    d.response = std::move(y);
    return d;
}

}  // namespace ibc
