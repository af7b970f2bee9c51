#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ibc {

/// Correlation of a constant series, or a rank-deficient regression.
class UndefinedStatisticError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct CorrelationReport {
    std::string x_name;
    std::string y_name;
    double r = 0.0;
    std::size_t n = 0;
    double p_value = 1.0;  // two-tailed
};

/// Pearson product-moment correlation with a t-test on n-2 degrees of freedom.
CorrelationReport pearson(std::span<const double> xs, std::span<const double> ys, std::string x_name = "x",
                          std::string y_name = "y");

/// pearson() that returns nullopt instead of throwing on constant input.
std::optional<CorrelationReport> try_pearson(std::span<const double> xs, std::span<const double> ys, std::string x_name = "x",
                                             std::string y_name = "y");

/// Two-tailed p value of a Student t statistic.
double student_t_two_tailed(double t, double dof);

/// "< 0.005" below the printing threshold, fixed three decimals otherwise.
std::string format_p_value(double p);

struct Coefficient {
    std::string name;
    double estimate = 0.0;
    double std_error = 0.0;
    double t = 0.0;
    double p_value = 1.0;
};

struct OlsResult {
    std::vector<Coefficient> coefficients;
    double r_squared = 0.0;
    double adj_r_squared = 0.0;
    std::size_t observations = 0;
    double f_statistic = 0.0;
};

/// Least squares on a design matrix whose first column is the intercept.
OlsResult ols(const Eigen::MatrixXd& design, const Eigen::VectorXd& response, const std::vector<std::string>& names);

std::string format_ols(const OlsResult& result);

}  // namespace ibc
