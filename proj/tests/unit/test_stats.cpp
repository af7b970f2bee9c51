#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "ibconvex/environment.hpp"
#include "ibconvex/stats.hpp"

using namespace ibc;

TEST_CASE("pearson oracle and exact cases")
{
    const std::vector<double> x{1, 2, 3, 4}, y{1, 3, 2, 4};
    const auto r = pearson(x, y, "x", "y");
    CHECK(r.r == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(r.p_value == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(r.n == 4);

    std::vector<double> up, down;
    for (double v : x) up.push_back(2 * v + 1), down.push_back(-v);
    CHECK(pearson(x, up).r == doctest::Approx(1.0));
    CHECK(pearson(x, down).r == doctest::Approx(-1.0));
    CHECK(pearson(x, up).p_value == 0.0);
}

TEST_CASE("pearson preconditions")
{
    const std::vector<double> x{1, 2, 3}, c{5, 5, 5};
    CHECK_THROWS_AS(pearson(x, c), UndefinedStatisticError);
    CHECK_THROWS_AS(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2}), ParameterError);
    CHECK_THROWS_AS(pearson(x, std::vector<double>{1, 2}), ParameterError);
    CHECK_FALSE(try_pearson(x, c).has_value());
    CHECK(try_pearson(x, x).has_value());
}

TEST_CASE("student t tail and p-value formatting")
{
    CHECK(student_t_two_tailed(0.0, 5) == doctest::Approx(1.0));
    // t = 2.776 is the 97.5% quantile at 4 degrees of freedom.
    CHECK(student_t_two_tailed(2.7764451051977987, 4) == doctest::Approx(0.05).epsilon(1e-9));
    CHECK(format_p_value(0.001) == "< 0.005");
    CHECK(format_p_value(0.2) == "0.200");
}

TEST_CASE("ols recovers an exact linear fit")
{
    const int n = 30;
    Eigen::MatrixXd x(n, 3);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        x(i, 0) = 1.0;
        x(i, 1) = i;
        x(i, 2) = 0.0 * i + (i % 3);
        y(i) = 2.0 + 0.5 * i;
    }
    const auto fit = ols(x, y, {"Intercept", "slope", "other"});
    CHECK(fit.coefficients[0].estimate == doctest::Approx(2.0));
    CHECK(fit.coefficients[1].estimate == doctest::Approx(0.5));
    CHECK(fit.coefficients[2].estimate == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(fit.r_squared == doctest::Approx(1.0));
    CHECK(fit.observations == 30);
}

TEST_CASE("ols on noise and against known standard errors")
{
    std::mt19937_64 gen(1);
    std::normal_distribution<double> noise(0.0, 1.0);
    const int n = 2000;
    Eigen::MatrixXd x(n, 2);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        x(i, 0) = 1.0;
        x(i, 1) = noise(gen);
        y(i) = noise(gen);
    }
    const auto fit = ols(x, y, {"Intercept", "x"});
    CHECK(fit.r_squared < 0.01);

    // Simple regression: SE(slope) = sqrt(s^2 / Sxx).
    Eigen::MatrixXd d(5, 2);
    d << 1, 1, 1, 2, 1, 3, 1, 4, 1, 5;
    Eigen::VectorXd r(5);
    r << 1.1, 1.9, 3.2, 3.9, 5.1;
    const auto f = ols(d, r, {"Intercept", "x"});
    const double slope = 1.0, icpt = 0.04;  // Sxy = 10, Sxx = 10
    double sse = 0.0;
    for (int i = 0; i < 5; ++i) sse += std::pow(r(i) - icpt - slope * (i + 1), 2);
    CHECK(f.coefficients[1].estimate == doctest::Approx(slope));
    CHECK(f.coefficients[1].std_error == doctest::Approx(std::sqrt(sse / 3.0 / 10.0)));
}

TEST_CASE("ols preconditions")
{
    Eigen::MatrixXd x(4, 2);
    x << 1, 2, 1, 2, 1, 2, 1, 2;
    Eigen::VectorXd y(4);
    y << 1, 2, 3, 4;
    CHECK_THROWS_AS(ols(x, y, {"a", "b"}), UndefinedStatisticError);
    CHECK_THROWS_AS(ols(x, y, {"a"}), ParameterError);
    CHECK_THROWS_AS(ols(x.topRows(2), y.head(2), {"a", "b"}), ParameterError);
    CHECK_FALSE(format_ols(ols(Eigen::MatrixXd::Ones(4, 1), y, {"Intercept"})).empty());
}
