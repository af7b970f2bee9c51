#include <doctest.h>

#include <cmath>
#include <vector>

#include <nlohmann/json.hpp>

#include "ibconvex/environment.hpp"

using namespace ibc;

namespace {

const std::vector<double> kReferents11 = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

}  // namespace

TEST_CASE("gaussian kernel matches the high-precision oracle")
{
    const double oracle[] = {0.42017315062093543275,   0.33644835740358064824,   0.17273834636139423061,
                             0.056864252347704222746,  0.012002456463709332999,  0.0016243558450512153443,
                             0.00014095238928137692426, 7.8423087920950787905e-6, 2.7976647167629882691e-7,
                             6.3992285732289349983e-9, 9.3851195787544850907e-11};
    const auto row = gaussian_kernel(0.0, 9.0 / 4.0, kReferents11);
    REQUIRE(row.size() == 11);
    for (std::size_t u = 0; u < 11; ++u) CHECK(row[u] == doctest::Approx(oracle[u]).epsilon(1e-12));
    CHECK(std::max_element(row.begin(), row.end()) == row.begin());
}

TEST_CASE("gaussian kernel symmetry and errors")
{
    const auto row = gaussian_kernel(5.0, 9.0 / 4.0, kReferents11);
    for (int k = 0; k <= 5; ++k) CHECK(row[5 - k] == doctest::Approx(row[5 + k]).epsilon(1e-15));
    CHECK_THROWS_AS(gaussian_kernel(0.0, 0.0, kReferents11), ParameterError);
    CHECK_THROWS_AS(gaussian_kernel(0.0, -1.0, kReferents11), ParameterError);
    CHECK_THROWS_AS(gaussian_kernel(0.0, 1.0, std::vector<double>{}), ParameterError);
}

TEST_CASE("base environments")
{
    const auto cpum = build_base(BaseFamily::CPUM);
    CHECK(cpum.num_meanings() == 11);
    CHECK(cpum.num_referents() == 11);
    for (Eigen::Index m = 0; m < 11; ++m) CHECK(cpum.prior()(m) == doctest::Approx(1.0 / 11.0).epsilon(1e-15));

    const auto npum = build_base(BaseFamily::NPUM);
    CHECK(npum.prior()(0) == doctest::Approx(0.455));
    CHECK(npum.prior()(10) == doctest::Approx(0.455));
    for (Eigen::Index m = 1; m < 10; ++m) CHECK(npum.prior()(m) == doctest::Approx(0.01));
    CHECK(npum.prior().sum() == doctest::Approx(1.0).epsilon(1e-12));

    for (auto fam : {BaseFamily::CPDM, BaseFamily::NPDM}) {
        const auto env = build_base(fam);
        REQUIRE(env.num_meanings() == 21);
        for (Eigen::Index k = 1; k <= 10; ++k) CHECK(env.kernel().row(10 - k) == env.kernel().row(10 + k));
    }

    // NPDM: stated weights sum to 1.10 and are renormalized.
    const auto npdm = build_base(BaseFamily::NPDM);
    CHECK(npdm.prior().sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(npdm.prior()(0) / npdm.prior()(5) == doctest::Approx(45.5));
}

TEST_CASE("dual environments")
{
    for (auto fam : {BaseFamily::CPUM, BaseFamily::NPUM, BaseFamily::CPDM, BaseFamily::NPDM}) {
        const auto env = build_dual(fam);
        CHECK(env.num_referents() == 21);
        CHECK(env.prior() == build_base(fam).prior());
        for (Eigen::Index m = 0; m < env.kernel().rows(); ++m)
            for (Eigen::Index u = 0; u < 21; ++u)
                CHECK(env.kernel()(m, u) == doctest::Approx(env.kernel()(m, 20 - u)).epsilon(1e-14));
    }
    // m = 10 row against the oracle; column u sits at index u + 10.
    const auto dual = build_dual(BaseFamily::CPUM);
    const double tail[] = {1.6404197041705166486e-15, 4.6180369520931564805e-13, 1.3349308339629844154e-10,
                           1.9812130225136398699e-8,  1.5096418572999588436e-6,  0.00005905912783493118163,
                           0.0011862342927797707909,  0.012232754670282347906,   0.064766197891650675609,
                           0.17605277882725655899,    0.24570144560225248313};
    for (int u = 0; u <= 10; ++u) CHECK(dual.kernel()(10, u + 10) == doctest::Approx(tail[u]).epsilon(1e-12));
    // m = 0: both components coincide.
    std::vector<double> coords;
    for (int u = -10; u <= 10; ++u) coords.push_back(u);
    const auto single = gaussian_kernel(0.0, 1.5, coords);
    for (int u = 0; u < 21; ++u) CHECK(dual.kernel()(0, u) == doctest::Approx(single[u]).epsilon(1e-14));
}

TEST_CASE("variant environments")
{
    const auto convex = build_variant(Variant::CPDMConvex);
    CHECK(convex.prior().sum() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(convex.prior()(0) == doctest::Approx(0.099));
    CHECK(convex.prior()(20) == doctest::Approx(0.01 / 11.0));

    const auto adj = build_variant(Variant::CPDMAdj);
    for (Eigen::Index k = 0; k < 10; ++k) CHECK(adj.kernel().row(2 * k) == adj.kernel().row(2 * k + 1));

    const auto nadj = build_variant(Variant::NPDMAdj);
    REQUIRE(nadj.num_meanings() == 18);
    CHECK(nadj.prior().sum() == doctest::Approx(1.0).epsilon(1e-12));
    for (Eigen::Index k = 0; k < 6; ++k) {
        CHECK(nadj.kernel().row(3 * k) == nadj.kernel().row(3 * k + 1));
        CHECK(nadj.kernel().row(3 * k) == nadj.kernel().row(3 * k + 2));
        CHECK(nadj.prior()(3 * k + 1) == doctest::Approx(0.01 / 6.0));
        CHECK(nadj.prior()(3 * k) == doctest::Approx(0.495 / 6.0));
    }

    const auto shift = build_variant(Variant::NPDMShift);
    CHECK(shift.prior().sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(shift.prior()(10) > shift.prior()(0));

    const auto split = build_variant(Variant::CPUMSplit);
    for (Eigen::Index m = 0; m < 10; ++m) {
        int big = 0, small = 0;
        for (Eigen::Index u = 0; u < 20; ++u) {
            big += split.kernel()(m, u) == 0.41;
            small += split.kernel()(m, u) == 0.01;
        }
        CHECK(big == 2);
        CHECK(small == 18);
    }

    const auto dsplit = build_variant(Variant::CPDMSplit);
    CHECK(dsplit.kernel()(0, 0) == 0.91);
    CHECK(dsplit.kernel()(9, 9) == 0.91);
    CHECK(dsplit.kernel()(0, 5) == 0.01);
    CHECK(dsplit.kernel()(4, 3) == doctest::Approx(0.1));

    const auto manhattan = build_variant(Variant::Manhattan55);
    CHECK(manhattan.meaning_embedding().dimension() == 2);
    // m=(0,0) is index 0, u=(4,4) is index 24: weight 9 before normalization.
    CHECK(manhattan.kernel()(0, 24) / manhattan.kernel()(0, 0) == doctest::Approx(9.0));
}

TEST_CASE("every named environment is valid and deterministic")
{
    std::vector<std::string> names = experiment2_environment_names();
    for (const auto& n : experiment3_environment_names()) names.push_back(n);
    for (const auto& n : names) {
        CAPTURE(n);
        const auto a = build_named(n);
        const auto b = build_named(n);
        CHECK(a == b);
        CHECK(a.name() == n);
        CHECK(a.prior().sum() == doctest::Approx(1.0).epsilon(1e-9));
        for (Eigen::Index m = 0; m < a.kernel().rows(); ++m)
            CHECK(a.kernel().row(m).sum() == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(a.has_full_support());
        CHECK(a.meaning_embedding().size() == a.num_meanings());
        CHECK(a.referent_embedding().size() == a.num_referents());
    }
    CHECK_THROWS_AS(build_named("nosuch"), ParameterError);
}

TEST_CASE("environment JSON round trip is exact")
{
    for (const auto& n : {"CPUM", "NPDM", "CPUM-Split", "CPDM-Split", "Manhattan-5-5", "NPDM-Adj"}) {
        CAPTURE(n);
        const auto env = build_named(n);
        const auto text = to_json(env).dump();
        CHECK(environment_from_json(nlohmann::json::parse(text)) == env);
    }
}

TEST_CASE("environment validation")
{
    Eigen::VectorXd prior = Eigen::VectorXd::Constant(2, 0.5);
    Eigen::MatrixXd kernel(2, 2);
    kernel << 0.5, 0.5, 0.2, 0.8;
    const auto line = Embedding::integer_line(0, 1);
    CHECK_NOTHROW(Environment("ok", prior, kernel, line, line));

    Eigen::MatrixXd bad = kernel;
    bad(0, 0) = 0.7;
    CHECK_THROWS_AS(Environment("bad-row", prior, bad, line, line), ParameterError);
    CHECK_THROWS_AS(Environment("bad-embed", prior, kernel, Embedding::integer_line(0, 2), line), ParameterError);
    Eigen::VectorXd negative(2);
    negative << 1.5, -0.5;
    CHECK_THROWS_AS(Environment("neg", negative, kernel, line, line), ParameterError);
}

TEST_CASE("embedding helpers")
{
    const auto g = Embedding::grid(5, 5);
    CHECK(g.size() == 25);
    CHECK(g.dimension() == 2);
    const auto t = g.translated({3.0, -2.0, 0.0});
    CHECK(t[0][0] == 3.0);
    CHECK(t[0][1] == -2.0);
    CHECK_THROWS_AS(Embedding(1, {{0.0, 1.0, 0.0}}), ParameterError);
}
