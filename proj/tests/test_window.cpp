#include "tvbo/window.hpp"

#include <doctest.h>

#include <cmath>

using namespace tvbo;

TEST_CASE("next_window_length reference values") {
    CHECK(next_window_length(1, 1.0, 0.5) == 2);
    CHECK(next_window_length(1, 2.0, 0.7) == 2);
    CHECK(next_window_length(16, 1.0, 0.5) == 5); // floor(16^0.5) + 1
    CHECK(next_window_length(2, 1.0, 1.0) == 3);  // floor(2) + 1
    CHECK_THROWS_AS(next_window_length(5, 0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(next_window_length(5, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(next_window_length(0, 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("variance proxy schedule") {
    CHECK(variance_proxy(10, 10, 0.04, 1.0) == doctest::Approx(0.04));
    CHECK(variance_proxy(10, 10, 0.04, 0.0) == doctest::Approx(0.04)); // lag 0 stays sigma2
    CHECK(variance_proxy(9, 10, 0.04, 0.3) == doctest::Approx(0.08)); // 1^alpha = 1
    CHECK(variance_proxy(9, 10, 0.04, 2.7) == doctest::Approx(0.08));
    CHECK(variance_proxy(6, 10, 0.25, 1.0) == doctest::Approx(1.25)); // 0.25 * (1 + 4)
    CHECK_THROWS_AS(variance_proxy(11, 10, 0.25, 1.0), std::invalid_argument);

    double prev = 0.0;
    for (long lag = 0; lag <= 50; ++lag) {
        const double p = variance_proxy(100 - lag, 100, 0.01, 0.7);
        CHECK(p >= prev);
        prev = p;
    }
}

TEST_CASE("schedule starts for ratio one") {
    WindowSchedule schedule(1.0, 1.0);
    CHECK(schedule.is_window_start(1));
    CHECK(schedule.is_window_start(3));
    CHECK(schedule.is_window_start(7));
    CHECK(schedule.is_window_start(15));
    CHECK(schedule.is_window_start(31));
    CHECK_FALSE(schedule.is_window_start(2));
    CHECK_FALSE(schedule.is_window_start(10));
    CHECK(schedule.window_index(1) == 1);
    CHECK(schedule.window_index(2) == 1);
    CHECK(schedule.window_index(3) == 2);
    CHECK(schedule.window_index(14) == 3);
    CHECK(schedule.window_index(15) == 4);
}

TEST_CASE("two-sided length inequality up to 1e5") {
    for (double ratio : {0.2, 0.5, 1.0}) {
        WindowSchedule schedule(1.0, ratio);
        schedule.is_window_start(100000); // force materialization
        const auto& starts = schedule.starts();
        REQUIRE(starts.front() == 1);
        long violations = 0;
        for (size_t j = 0; j + 1 < starts.size() && starts[j] <= 100000; ++j) {
            const double power = std::pow(static_cast<double>(starts[j]), ratio);
            const long length = starts[j + 1] - starts[j];
            if (!(power < static_cast<double>(length) &&
                  static_cast<double>(length) <= power + 1.0))
                ++violations;
        }
        CHECK(violations == 0);
    }
}

TEST_CASE("windows tile the timeline") {
    WindowSchedule schedule(1.0, 0.4);
    long covered = 0;
    long expected_window = 0;
    for (long t = 1; t <= 5000; ++t) {
        if (schedule.is_window_start(t))
            ++expected_window;
        CHECK(schedule.window_index(t) == expected_window);
        ++covered;
    }
    CHECK(covered == 5000);
}

TEST_CASE("admissible alpha_tilde thresholds") {
    KernelSpec se{KernelFamily::SquaredExponential, 1.5, 0.2, 1.0};
    CHECK(admissible_alpha_tilde(se, 1) == doctest::Approx(1.0 / 3.0));
    CHECK(admissible_alpha_tilde(se, 5) == doctest::Approx(1.0 / 3.0));

    KernelSpec matern15{KernelFamily::Matern, 1.5, 0.2, 1.0};
    CHECK(admissible_alpha_tilde(matern15, 1) == doctest::Approx(0.1));
    // threshold goes negative once d(d+1) outgrows 2 nu
    CHECK(admissible_alpha_tilde(matern15, 2) < 0.0);

    KernelSpec matern25{KernelFamily::Matern, 2.5, 0.2, 1.0};
    CHECK(admissible_alpha_tilde(matern25, 1) == doctest::Approx(3.0 / 14.0));
}
