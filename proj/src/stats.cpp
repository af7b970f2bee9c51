#include "ibconvex/stats.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "ibconvex/environment.hpp"

namespace ibc {

double student_t_two_tailed(double t, double dof)
{
    if (!std::isfinite(t)) return 0.0;
    const boost::math::students_t dist(dof);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

CorrelationReport pearson(std::span<const double> xs, std::span<const double> ys, std::string x_name, std::string y_name)
{
    if (xs.size() != ys.size()) throw ParameterError("pearson: series lengths differ");
    const auto n = xs.size();
    if (n < 3) throw ParameterError("pearson: need at least three observations");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) mx += xs[i], my += ys[i];
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) throw UndefinedStatisticError("pearson: constant series");

    CorrelationReport rep{std::move(x_name), std::move(y_name), 0.0, n, 1.0};
    rep.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    const double dof = static_cast<double>(n - 2);
    const double denom = 1.0 - rep.r * rep.r;
    rep.p_value = denom <= 0.0 ? 0.0 : student_t_two_tailed(rep.r * std::sqrt(dof / denom), dof);
    return rep;
}

std::optional<CorrelationReport> try_pearson(std::span<const double> xs, std::span<const double> ys, std::string x_name,
                                             std::string y_name)
{
    try {
        return pearson(xs, ys, std::move(x_name), std::move(y_name));
    } catch (const UndefinedStatisticError&) {
        return std::nullopt;
    }
}

std::string format_p_value(double p)
{
    if (p < 0.005) return "< 0.005";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", p);
    return buf;
}

OlsResult ols(const Eigen::MatrixXd& design, const Eigen::VectorXd& response, const std::vector<std::string>& names)
{
    const auto n = design.rows();
    const auto k = design.cols();
    if (response.size() != n) throw ParameterError("ols: response length does not match design rows");
    if (static_cast<Eigen::Index>(names.size()) != k) throw ParameterError("ols: one name per design column required");
    if (n <= k) throw ParameterError("ols: need more observations than predictors");

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(1e-10);
    if (qr.rank() < k) throw UndefinedStatisticError("ols: design matrix is rank deficient");

    const Eigen::VectorXd beta = qr.solve(response);
    const Eigen::VectorXd resid = response - design * beta;
    const double rss = resid.squaredNorm();
    const double tss = (response.array() - response.mean()).square().sum();
    const double dof = static_cast<double>(n - k);
    const double sigma2 = rss / dof;

    // (X'X)^-1 = P R^-1 R^-T P'
    const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(k, k).template triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inv = r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
    const Eigen::MatrixXd perm = qr.colsPermutation();
    const Eigen::MatrixXd xtx_inv = perm * (r_inv * r_inv.transpose()) * perm.transpose();

    OlsResult res;
    res.observations = static_cast<std::size_t>(n);
    for (Eigen::Index j = 0; j < k; ++j) {
        Coefficient c;
        c.name = names[j];
        c.estimate = beta(j);
        c.std_error = std::sqrt(std::max(0.0, sigma2 * xtx_inv(j, j)));
        c.t = c.std_error > 0.0 ? c.estimate / c.std_error : (c.estimate == 0.0 ? 0.0 : INFINITY);
        c.p_value = student_t_two_tailed(c.t, dof);
        res.coefficients.push_back(c);
    }
    res.r_squared = tss > 0.0 ? 1.0 - rss / tss : 1.0;
    res.adj_r_squared = 1.0 - (1.0 - res.r_squared) * static_cast<double>(n - 1) / dof;
    const double model_dof = static_cast<double>(k - 1);
    res.f_statistic = (model_dof > 0.0 && rss > 0.0) ? ((tss - rss) / model_dof) / sigma2 : INFINITY;
    return res;
}

std::string format_ols(const OlsResult& result)
{
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%-40s %12s %10s %10s %10s\n", "Predictor", "estimate", "SE", "t", "p");
    out << line;
    for (const auto& c : result.coefficients) {
        std::snprintf(line, sizeof line, "%-40s %12.6f %10.6f %10.3f %10s\n", c.name.c_str(), c.estimate, c.std_error, c.t,
                      format_p_value(c.p_value).c_str());
        out << line;
    }
    std::snprintf(line, sizeof line, "Observations %zu\nR^2 %.6f\nAdjusted R^2 %.6f\nF %.3f\n", result.observations,
                  result.r_squared, result.adj_r_squared, result.f_statistic);
    out << line;
    return out.str();
}

}  // namespace ibc
