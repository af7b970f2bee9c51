#include <doctest.h>

#include <cmath>
#include <vector>

#include <nlohmann/json.hpp>

#include "ibconvex/environment.hpp"
#include "ibconvex/infometrics.hpp"

using namespace ibc;

TEST_CASE("mutual information oracle values")
{
    Eigen::MatrixXd j(2, 2);
    j << 0.4, 0.1, 0.1, 0.4;
    CHECK(mutual_information(j) == doctest::Approx(0.27807190511263765213).epsilon(1e-14));

    Eigen::MatrixXd indep(2, 3);
    indep << 0.1, 0.2, 0.2, 0.1, 0.2, 0.2;
    CHECK(mutual_information(indep) == doctest::Approx(0.0).epsilon(1e-15));

    Eigen::MatrixXd diag = Eigen::MatrixXd::Identity(4, 4) / 4.0;
    CHECK(mutual_information(diag) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("mutual information rejects invalid tables")
{
    Eigen::MatrixXd neg(1, 2);
    neg << 1.2, -0.2;
    CHECK_THROWS_AS(mutual_information(neg), ParameterError);
    Eigen::MatrixXd unnorm = Eigen::MatrixXd::Constant(2, 2, 0.3);
    CHECK_THROWS_AS(mutual_information(unnorm), ParameterError);
    CHECK_THROWS_AS(mutual_information(Eigen::MatrixXd(0, 0)), ParameterError);
}

TEST_CASE("CPUM metrics against the oracle")
{
    const auto env = build_base(BaseFamily::CPUM);
    CHECK(meaning_referent_information(env) == doctest::Approx(1.0996047002247213918).epsilon(1e-13));

    const auto id = metrics(env, Encoder::identity(11));
    CHECK(id.complexity == doctest::Approx(3.4594316186372972562).epsilon(1e-14));
    CHECK(id.accuracy == doctest::Approx(1.0996047002247213918).epsilon(1e-13));
    CHECK(ib_objective(env, Encoder::identity(11), 1.0) == doctest::Approx(2.3598269184125758644).epsilon(1e-13));

    std::vector<std::size_t> assign{0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1};
    const auto split = metrics(env, Encoder::from_assignment(assign, 2));
    CHECK(split.complexity == doctest::Approx(0.99403021147695645365).epsilon(1e-14));
    CHECK(split.accuracy == doctest::Approx(0.64086240608667228078).epsilon(1e-13));

    const auto one = metrics(env, Encoder::single_word(11));
    CHECK(one.complexity == 0.0);
    CHECK(one.accuracy == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("word relabeling and unused words leave metrics unchanged")
{
    const auto env = build_base(BaseFamily::NPUM);
    std::vector<std::size_t> assign{0, 0, 1, 1, 1, 2, 2, 0, 1, 2, 2};
    const auto enc = Encoder::from_assignment(assign, 4);  // word 3 unused
    const auto base = metrics(env, enc);
    std::vector<std::size_t> perm{3, 2, 0, 1};
    const auto moved = metrics(env, enc.with_permuted_words(perm));
    CHECK(moved.complexity == doctest::Approx(base.complexity).epsilon(1e-14));
    CHECK(moved.accuracy == doctest::Approx(base.accuracy).epsilon(1e-14));

    const auto mg = marginals(env, enc);
    CHECK(mg.used_words == std::vector<std::size_t>{0, 1, 2});
    CHECK(mg.meaning_given_word.rows() == 3);
    for (Eigen::Index k = 0; k < 3; ++k) {
        CHECK(mg.meaning_given_word.row(k).sum() == doctest::Approx(1.0));
        CHECK(mg.referent_given_word.row(k).sum() == doctest::Approx(1.0));
    }
    std::vector<std::size_t> drop{3};
    CHECK(enc.without_words(drop).num_words() == 3);
}

TEST_CASE("encoder validation")
{
    Eigen::MatrixXd bad(2, 2);
    bad << 0.5, 0.4, 0.5, 0.5;
    CHECK_THROWS_AS(Encoder{bad}, ParameterError);
    bad << 1.5, -0.5, 0.5, 0.5;
    CHECK_THROWS_AS(Encoder{bad}, ParameterError);
    std::vector<std::size_t> assign{0, 3};
    CHECK_THROWS_AS(Encoder::from_assignment(assign, 2), ParameterError);
    const auto env = build_base(BaseFamily::CPUM);
    CHECK_THROWS_AS(metrics(env, Encoder::identity(5)), ParameterError);
    CHECK_THROWS_AS(ib_objective(env, Encoder::identity(11), -1.0), ParameterError);
}

TEST_CASE("optimality is the negative distance to the nearest frontier point")
{
    std::vector<MetricsPoint> frontier{{0.0, 0.0, {}, {}}, {1.0, 0.5, {}, {}}, {2.0, 0.8, {}, {}}};
    CHECK(optimality({1.0, 0.5, {}, {}}, frontier) == 0.0);
    CHECK(optimality({1.0, 0.2, {}, {}}, frontier) == doctest::Approx(-0.3));
    CHECK(optimality({3.0, 0.8, {}, {}}, frontier) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(optimality({0.0, 0.0, {}, {}}, {}), ParameterError);
}

TEST_CASE("encoder JSON round trip")
{
    Eigen::MatrixXd t(3, 2);
    t << 0.1, 0.9, 1.0 / 3.0, 2.0 / 3.0, 1.0, 0.0;
    const Encoder enc(t);
    CHECK(encoder_from_json(nlohmann::json::parse(to_json(enc).dump())) == enc);
    CHECK_THROWS(encoder_from_json(nlohmann::json::parse(R"({"q_w_given_m": [[1.0], [0.5, 0.5]]})")));
}
