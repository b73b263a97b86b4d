#include <cmath>

#include "doctest.h"

#include "extent/calibrate.hpp"
#include "extent/errors.hpp"
#include "extent/trace.hpp"
#include "extent/units.hpp"

using namespace extent;

TEST_CASE("calibration reproduces the anchor figures") {
    const RunConfig nominal;
    const CalibrationTargets targets;
    const CalibrationResult result = calibrate(targets, nominal);

    CHECK(result.residual_energy < 0.005);
    CHECK(result.residual_latency < 0.005);
    CHECK(result.residual_basic < 0.01);

    const ExpectedOutcome w1 =
        expected_outcome(QualityLevel::Q11, 1, CellState::from_bit(0),
                         result.config.driver, result.config.mtj, result.config.write);
    CHECK(w1.energy_at_mean == doctest::Approx(337.2 * unit::pj).epsilon(0.005));
    CHECK(w1.latency_at_mean == doctest::Approx(6.9 * unit::ns).epsilon(0.005));

    const BasicFigures basic = basic_profile_figures(result.config, result.basic);
    CHECK(basic.energy == doctest::Approx(1046.0 * unit::pj).epsilon(0.01));
    CHECK(basic.latency == doctest::Approx(19.0 * unit::ns).epsilon(0.01));

    SUBCASE("energy asymmetry lands on the target ratio") {
        const ExpectedOutcome w0 =
            expected_outcome(QualityLevel::Q11, 0, CellState::from_bit(1),
                             result.config.driver, result.config.mtj, result.config.write);
        const double ratio = w1.energy_at_mean / w0.energy_at_mean;
        CHECK(ratio == doctest::Approx(2.5).epsilon(1e-6));
        CHECK(ratio >= 2.0);
        CHECK(ratio <= 3.0);
        // The time asymmetry follows the same factor.
        CHECK(w1.latency_at_mean / w0.latency_at_mean ==
              doctest::Approx(2.5).epsilon(1e-3));
    }
    SUBCASE("sampled write energies keep the asymmetry inside the band") {
        Rng rng(17);
        double e1 = 0.0, e0 = 0.0;
        const int n = 20000;
        for (int k = 0; k < n; ++k) {
            const CellWrite one =
                write_cell(CellState::from_bit(0), WriteRequest{1, QualityLevel::Q11},
                           result.config.driver, result.config.mtj, result.config.write,
                           rng);
            const CellWrite zero =
                write_cell(CellState::from_bit(1), WriteRequest{0, QualityLevel::Q11},
                           result.config.driver, result.config.mtj, result.config.write,
                           rng);
            e1 += one.outcome.energy;
            e0 += zero.outcome.energy;
        }
        const double ratio = e1 / e0;
        CHECK(ratio >= 2.0);
        CHECK(ratio <= 3.0);
    }
    SUBCASE("baseline improvements match the published percentages") {
        const PerWriteFigures ours{w1.energy_at_mean, w1.latency_at_mean};
        const auto improvements = compare_baselines(ours, default_baselines());
        double vs18 = 0.0, vs21 = 0.0;
        for (const auto& imp : improvements) {
            if (imp.name == "ref18") vs18 = imp.energy_pct;
            if (imp.name == "ref21") vs21 = imp.latency_pct;
        }
        CHECK(std::abs(vs18 - 33.04) <= 0.05);
        CHECK(std::abs(vs21 - 5.48) <= 0.05);
    }
    SUBCASE("report emits a parseable driver section") {
        const std::string report = format_calibration_report(result, targets);
        CHECK(report.find("[driver]") != std::string::npos);
        CHECK(report.find("r_on_pair_ohm") != std::string::npos);
        CHECK(report.find("ap_to_p_ic_scale") != std::string::npos);
    }
}

TEST_CASE("calibration is idempotent") {
    const RunConfig nominal;
    const CalibrationTargets targets;
    const CalibrationResult first = calibrate(targets, nominal);
    const CalibrationResult second = calibrate(targets, first.config);
    CHECK(second.config.driver.r_on_pair ==
          doctest::Approx(first.config.driver.r_on_pair).epsilon(1e-9));
    CHECK(second.config.write.ap_to_p_ic_scale ==
          doctest::Approx(first.config.write.ap_to_p_ic_scale).epsilon(1e-9));
    CHECK(second.config.driver.e_driver[3] ==
          doctest::Approx(first.config.driver.e_driver[3]).epsilon(1e-9));
    CHECK(second.config.driver.e_driver_w0 ==
          doctest::Approx(first.config.driver.e_driver_w0).epsilon(1e-9));
}

TEST_CASE("infeasible targets raise calibration errors") {
    const RunConfig nominal;

    SUBCASE("zero targets cannot be bracketed") {
        CalibrationTargets zero;
        zero.e_write1_exact = 0.0;
        zero.t_write1_exact = 0.0;
        CHECK_THROWS_AS(calibrate(zero, nominal), calibration_error);
    }
    SUBCASE("latency below the reachable floor") {
        CalibrationTargets fast;
        fast.t_write1_exact = 1e-12;
        CHECK_THROWS_AS(calibrate(fast, nominal), calibration_error);
    }
    SUBCASE("energy below the supply-path floor") {
        CalibrationTargets tiny;
        tiny.e_write1_exact = 0.01 * unit::pj; // below detector + path energy
        CHECK_THROWS_AS(calibrate(tiny, nominal), calibration_error);
    }
}
