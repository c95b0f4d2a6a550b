#include "tvbo/dpp.hpp"

#include "tvbo/errors.hpp"

#include <doctest.h>

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>
#include <random>

using namespace tvbo;

namespace {

Eigen::VectorXd vec1(double v) {
    Eigen::VectorXd x(1);
    x << v;
    return x;
}

const KernelSpec kMatern{KernelFamily::Matern, 1.5, 0.2, 1.0};
const KernelSpec kSe{KernelFamily::SquaredExponential, 1.5, 0.2, 1.0};

double selection_log_det(const KernelSpec& kernel,
                         const std::vector<Eigen::VectorXd>& candidates,
                         const std::vector<int>& subset) {
    std::vector<Eigen::VectorXd> chosen;
    for (int i : subset)
        chosen.push_back(candidates[static_cast<size_t>(i)]);
    const Eigen::MatrixXd gram = kernel_gram(kernel, chosen);
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    REQUIRE(llt.info() == Eigen::Success);
    double log_det = 0.0;
    const Eigen::MatrixXd lower = llt.matrixL();
    for (Eigen::Index i = 0; i < lower.rows(); ++i)
        log_det += 2.0 * std::log(lower(i, i));
    return log_det;
}

} // namespace

TEST_CASE("degenerate selections") {
    CHECK(greedy_dpp_select(kMatern, {vec1(0.5)}, 3) == std::vector<int>{0});

    // a duplicate adds zero determinant gain and is skipped
    const auto two_same = greedy_dpp_select(kMatern, {vec1(0.3), vec1(0.3)}, 2);
    CHECK(two_same == std::vector<int>{0});

    CHECK_THROWS_AS(greedy_dpp_select(kMatern, {}, 2), std::invalid_argument);
    CHECK_THROWS_AS(greedy_dpp_select(kMatern, {vec1(0.0)}, 0), std::invalid_argument);
}

TEST_CASE("budget at or above the distinct count selects everything distinct") {
    const std::vector<Eigen::VectorXd> candidates = {vec1(0.1), vec1(0.5), vec1(0.5),
                                                     vec1(0.9), vec1(0.1)};
    const auto picked = greedy_dpp_select(kMatern, candidates, 10);
    CHECK(picked.size() == 3);
    for (size_t i = 0; i < picked.size(); ++i)
        for (size_t j = i + 1; j < picked.size(); ++j) {
            const auto& a = candidates[static_cast<size_t>(picked[i])];
            const auto& b = candidates[static_cast<size_t>(picked[j])];
            CHECK((a - b).norm() > kDppGainFloor);
        }
}

TEST_CASE("greedy order prefers spread-out points") {
    // equal diagonals: first pick is the lowest index, second the farthest point
    const std::vector<Eigen::VectorXd> candidates = {vec1(0.0), vec1(0.1), vec1(1.0)};
    const auto picked = greedy_dpp_select(kMatern, candidates, 2);
    REQUIRE(picked.size() == 2);
    CHECK(picked[0] == 0);
    CHECK(picked[1] == 2);
}

TEST_CASE("greedy gains are non-increasing and selections stay spread") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<Eigen::VectorXd> candidates;
        const int n = 5 + static_cast<int>(unit(rng) * 25);
        for (int i = 0; i < n; ++i)
            candidates.push_back(vec1(unit(rng)));
        const auto picked = greedy_dpp_select(kSe, candidates, n);

        // marginal log-det gains decrease along the greedy order (submodularity)
        double prev_gain = std::numeric_limits<double>::infinity();
        std::vector<int> prefix;
        double prev_log_det = 0.0;
        for (int idx : picked) {
            prefix.push_back(idx);
            const double log_det = selection_log_det(kSe, candidates, prefix);
            const double gain = log_det - prev_log_det;
            CHECK(gain <= prev_gain + 1e-7);
            prev_gain = gain;
            prev_log_det = log_det;
        }
        for (size_t i = 0; i < picked.size(); ++i)
            for (size_t j = i + 1; j < picked.size(); ++j)
                CHECK((candidates[static_cast<size_t>(picked[i])] -
                       candidates[static_cast<size_t>(picked[j])])
                          .norm() > kDppGainFloor);
    }
}

TEST_CASE("query budget schedule") {
    CHECK(query_budget(1, kSe, 1, 1.0) == 1); // log 1 = 0 floors to 1
    CHECK(query_budget(1, kMatern, 1, 1.0) == 1);

    const long t_e2 = static_cast<long>(std::ceil(std::exp(2.0))); // 8, log > 2
    CHECK(query_budget(t_e2, kSe, 1, 1.0) == 3);
    CHECK(query_budget(7, kSe, 1, 1.0) == 2); // log 7 = 1.945...

    // Matern nu=1.5, d=1: exponent 2d/(2nu - d) = 1
    CHECK(query_budget(9, kMatern, 1, 1.0) == 9);
    CHECK(query_budget(9, kMatern, 1, 0.5) == 5);

    long prev = 0;
    for (long t = 1; t <= 2000; t += 13) {
        const long q = query_budget(t, kSe, 2, 1.0);
        CHECK(q >= 1);
        CHECK(q >= prev);
        prev = q;
    }

    KernelSpec thin{KernelFamily::Matern, 0.5, 0.2, 1.0};
    CHECK_THROWS_AS(query_budget(10, thin, 1, 1.0), ConfigError);  // 2nu = d
    CHECK_THROWS_AS(query_budget(10, thin, 3, 1.0), ConfigError);
}
