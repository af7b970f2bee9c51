#include "ibconvex/ib_solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace ibc {

namespace {

// Quantities of the environment reused by every update.
struct Workspace {
    const Environment& env;
    Eigen::VectorXd neg_entropy;  // sum_u p(u|m) log2 p(u|m), per meaning
    Eigen::VectorXd log_pu;       // log2 p(u)

    explicit Workspace(const Environment& e) : env(e)
    {
        if (!e.has_full_support())
            throw ParameterError("environment '" + e.name() + "' kernels must have full support for the IB update");
        const auto& k = e.kernel();
        neg_entropy = (k.array() * k.array().log() / std::log(2.0)).rowwise().sum();
        log_pu = e.referent_marginal().array().log() / std::log(2.0);
    }
};

struct Conditionals {
    Eigen::VectorXd qw;    // q(w), all words
    Eigen::MatrixXd qmw;   // q(m|w), words x meanings (zero rows for unused words)
    Eigen::MatrixXd quw;   // q(u|w), words x referents
};

Conditionals conditionals(const Workspace& ws, const Eigen::MatrixXd& table)
{
    const auto& p = ws.env.prior();
    Conditionals c;
    c.qw = table.transpose() * p;
    c.qmw = (table.array().colwise() * p.array()).matrix().transpose();
    for (Eigen::Index w = 0; w < c.qw.size(); ++w) {
        if (c.qw(w) > 0.0)
            c.qmw.row(w) /= c.qw(w);
        else
            c.qmw.row(w).setZero();
    }
    c.quw = c.qmw * ws.env.kernel();
    return c;
}

double objective(const Workspace& ws, const Eigen::MatrixXd& table, double beta)
{
    const auto c = conditionals(ws, table);
    const auto& p = ws.env.prior();
    double complexity = 0.0;
    for (Eigen::Index m = 0; m < table.rows(); ++m) {
        for (Eigen::Index w = 0; w < table.cols(); ++w) {
            const double q = table(m, w);
            if (q > 0.0 && p(m) > 0.0) complexity += p(m) * q * std::log2(q / c.qw(w));
        }
    }
    double accuracy = 0.0;
    if (beta != 0.0) {
        for (Eigen::Index w = 0; w < c.quw.rows(); ++w) {
            if (!(c.qw(w) > 0.0)) continue;
            for (Eigen::Index u = 0; u < c.quw.cols(); ++u) {
                const double q = c.quw(w, u);
                if (q > 0.0) accuracy += c.qw(w) * q * (std::log2(q) - ws.log_pu(u));
            }
        }
    }
    return complexity - beta * accuracy;
}

Eigen::MatrixXd update(const Workspace& ws, const Eigen::MatrixXd& table, double beta)
{
    const auto c = conditionals(ws, table);
    const auto words = table.cols();
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();

    // log2 q(w) - beta * KL(p(u|m) || q(u|w)); the 2^x form keeps the update in
    // the same units as the bit-valued objective.
    Eigen::MatrixXd logits(table.rows(), words);
    if (beta == 0.0) {
        for (Eigen::Index w = 0; w < words; ++w)
            logits.col(w).setConstant(c.qw(w) > 0.0 ? std::log2(c.qw(w)) : kNegInf);
    } else {
        Eigen::MatrixXd log_quw = c.quw;
        for (Eigen::Index w = 0; w < words; ++w) {
            if (c.qw(w) > 0.0)
                log_quw.row(w) = c.quw.row(w).array().log() / std::log(2.0);
            else
                log_quw.row(w).setZero();
        }
        const Eigen::MatrixXd cross = ws.env.kernel() * log_quw.transpose();  // meanings x words
        for (Eigen::Index w = 0; w < words; ++w) {
            if (c.qw(w) > 0.0)
                logits.col(w) = std::log2(c.qw(w)) - beta * (ws.neg_entropy - cross.col(w)).array();
            else
                logits.col(w).setConstant(kNegInf);
        }
    }

    Eigen::MatrixXd out(table.rows(), words);
    for (Eigen::Index m = 0; m < table.rows(); ++m) {
        const double top = logits.row(m).maxCoeff();
        if (!std::isfinite(top)) throw DegenerateRowError("IB update: no usable word for meaning " + std::to_string(m));
        out.row(m) = ((logits.row(m).array() - top) * std::log(2.0)).exp();
        const double total = out.row(m).sum();
        if (!(total > 0.0) || !std::isfinite(total))
            throw DegenerateRowError("IB update: row " + std::to_string(m) + " failed to normalize");
        out.row(m) /= total;
    }
    return out;
}

Eigen::MatrixXd prune(const Environment& env, const Eigen::MatrixXd& table, double threshold)
{
    const Eigen::VectorXd qw = table.transpose() * env.prior();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index w = 0; w < qw.size(); ++w)
        if (qw(w) >= threshold) keep.push_back(w);
    if (keep.size() == static_cast<std::size_t>(qw.size())) return table;
    if (keep.empty()) throw DegenerateRowError("IB update: every word fell below the pruning threshold");
    Eigen::MatrixXd t = table(Eigen::all, keep);
    for (Eigen::Index m = 0; m < t.rows(); ++m) {
        const double s = t.row(m).sum();
        if (!(s > 0.0)) throw DegenerateRowError("IB update: meaning " + std::to_string(m) + " lost all its words");
        t.row(m) /= s;
    }
    return t;
}

FrontierPoint solve_with(const Workspace& ws, const Encoder& init, double beta, const SolveOptions& options)
{
    if (!(beta >= 0.0)) throw ParameterError("solve_beta: beta must be nonnegative");
    if (init.num_meanings() != ws.env.num_meanings()) throw ParameterError("solve_beta: encoder does not match environment");

    FrontierPoint point;
    point.beta = beta;
    Eigen::MatrixXd table = prune(ws.env, init.table(), options.prune_threshold);
    double f = objective(ws, table, beta);
    if (options.record_trace) point.objective_trace.push_back(f);

    for (std::size_t it = 1; it <= options.max_iterations; ++it) {
        table = prune(ws.env, update(ws, table, beta), options.prune_threshold);
        const double next = objective(ws, table, beta);
        if (options.record_trace) point.objective_trace.push_back(next);
        point.iterations = it;
        const bool done = std::abs(f - next) < options.tolerance;
        f = next;
        if (done) {
            point.converged = true;
            break;
        }
    }
    point.encoder = Encoder(std::move(table));
    point.metrics = metrics(ws.env, point.encoder);
    point.metrics.beta = beta;
    point.metrics.optimality = 0.0;
    return point;
}

}  // namespace

AnnealSchedule::AnnealSchedule(std::vector<double> betas, SolveOptions options)
    : betas_(std::move(betas)), options_(options)
{
    if (betas_.empty()) throw ParameterError("anneal schedule is empty");
    for (std::size_t i = 0; i < betas_.size(); ++i) {
        if (!(betas_[i] >= 0.0) || !std::isfinite(betas_[i])) throw ParameterError("anneal schedule: betas must be finite and >= 0");
        if (i > 0 && !(betas_[i] < betas_[i - 1])) throw ParameterError("anneal schedule must be strictly descending");
    }
    if (!(options_.tolerance > 0.0) || options_.max_iterations == 0)
        throw ParameterError("anneal schedule: invalid convergence settings");
}

AnnealSchedule AnnealSchedule::log_spaced(std::size_t count, double top, SolveOptions options)
{
    if (count < 2) throw ParameterError("log-spaced schedule needs at least two values");
    if (!(top > 1.0)) throw ParameterError("log-spaced schedule: top beta must exceed 1");
    const std::size_t n_log = count - 1;
    std::vector<double> betas;
    betas.reserve(count);
    const double log_top = std::log2(top);
    for (std::size_t i = 0; i < n_log; ++i) {
        const double frac = n_log == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n_log - 1);
        betas.push_back(std::exp2(log_top * (1.0 - frac)));
    }
    betas.push_back(0.0);
    return AnnealSchedule(std::move(betas), options);
}

AnnealSchedule AnnealSchedule::from_file(const std::filesystem::path& path, SolveOptions options)
{
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open beta schedule '" + path.string() + "'");
    std::vector<double> betas;
    std::string token;
    while (in >> token) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != token.size()) throw ParameterError("beta schedule: bad value '" + token + "'");
        betas.push_back(v);
    }
    std::sort(betas.begin(), betas.end(), std::greater<>());
    if (std::adjacent_find(betas.begin(), betas.end()) != betas.end())
        throw ParameterError("beta schedule: duplicate values");
    return AnnealSchedule(std::move(betas), options);
}

Encoder ib_iterate(const Environment& env, const Encoder& enc, double beta)
{
    if (!(beta >= 0.0)) throw ParameterError("ib_iterate: beta must be nonnegative");
    if (enc.num_meanings() != env.num_meanings()) throw ParameterError("ib_iterate: encoder does not match environment");
    const Workspace ws(env);
    return Encoder(update(ws, enc.table(), beta));
}

FrontierPoint solve_beta(const Environment& env, const Encoder& init, double beta, const SolveOptions& options)
{
    const Workspace ws(env);
    return solve_with(ws, init, beta, options);
}

std::vector<FrontierPoint> reverse_anneal(const Environment& env, const AnnealSchedule& schedule)
{
    const Workspace ws(env);
    std::vector<FrontierPoint> out;
    out.reserve(schedule.size());
    Encoder current = Encoder::identity(env.num_meanings());
    for (double beta : schedule.betas()) {
        out.push_back(solve_with(ws, current, beta, schedule.options()));
        current = out.back().encoder;
    }
    return out;
}

std::vector<MetricsPoint> frontier_metrics(const std::vector<FrontierPoint>& frontier)
{
    std::vector<MetricsPoint> pts;
    pts.reserve(frontier.size());
    for (const auto& f : frontier) pts.push_back(f.metrics);
    return pts;
}

void write_frontier_csv(std::ostream& out, const std::vector<FrontierPoint>& frontier)
{
    out << "beta,complexity_bits,accuracy_bits,n_words,converged\n";
    std::ostringstream line;
    line.precision(17);
    for (const auto& f : frontier) {
        line.str("");
        line << f.beta << ',' << f.metrics.complexity << ',' << f.metrics.accuracy << ',' << f.encoder.num_words() << ','
             << (f.converged ? 1 : 0) << '\n';
        out << line.str();
    }
}

}  // namespace ibc
