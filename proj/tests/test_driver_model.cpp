#include <cmath>

#include "doctest.h"

#include "extent/driver.hpp"
#include "extent/errors.hpp"

using namespace extent;

TEST_CASE("threshold voltage under body bias") {
    TransistorParams p;
    CHECK(threshold_voltage(0.0, p) == doctest::Approx(p.v_th0).epsilon(1e-12));
    // 0.3 + 0.4*(sqrt(1.7) - sqrt(0.7))
    CHECK(threshold_voltage(1.0, p) == doctest::Approx(0.4868722).epsilon(1e-6));
    // First radical vanishes at v_sb = -phi_f2.
    CHECK(threshold_voltage(-p.phi_f2, p) ==
          doctest::Approx(p.v_th0 - p.gamma_body * std::sqrt(p.phi_f2)).epsilon(1e-12));

    double prev = threshold_voltage(-p.phi_f2, p);
    for (double v_sb = -p.phi_f2; v_sb <= 2.0; v_sb += 0.05) {
        const double v = threshold_voltage(v_sb, p);
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
}

TEST_CASE("subthreshold current") {
    TransistorParams p;
    const double v_th = threshold_voltage(0.0, p);
    CHECK(subthreshold_current(v_th, 10.0, p, v_th) == doctest::Approx(p.i_s).epsilon(1e-9));
    // One decade of gate overdrive.
    CHECK(subthreshold_current(v_th + p.s_slope, 0.25, p, v_th) ==
          doctest::Approx(10.0 * p.i_s * (1.0 - std::pow(10.0, -0.25 / p.s_slope)))
              .epsilon(1e-12));
    // Drain factor at v_ds = S is 1 - 1/10.
    CHECK(subthreshold_current(v_th, p.s_slope, p, v_th) ==
          doctest::Approx(0.9 * p.i_s).epsilon(1e-12));
}

TEST_CASE("triode current") {
    TransistorParams p;
    p.mu_ref = 1.0;
    p.c_ox = 1e-3;
    p.w = p.l = 1e-6; // mu*c_ox*w/l = 1e-3 A/V^2
    const double v_th = 0.3;
    CHECK(triode_current(0.8, 0.0, 1.0, p, v_th) == doctest::Approx(0.0));
    CHECK(triode_current(0.8, 0.1, 1.0, p, v_th) == doctest::Approx(45e-6).epsilon(1e-12));
    p.w *= 2.0;
    CHECK(triode_current(0.8, 0.1, 1.0, p, v_th) == doctest::Approx(90e-6).epsilon(1e-12));
    CHECK_THROWS_AS(triode_current(0.2, 0.1, 1.0, p, v_th), regime_error);
    CHECK_THROWS_AS(triode_current(0.8, 0.6, 1.0, p, v_th), regime_error);
}

TEST_CASE("mobility temperature scaling") {
    TransistorParams p;
    CHECK(mobility(p.t_ref, p) == doctest::Approx(p.mu_ref).epsilon(1e-12));
    CHECK(mobility(2.0 * p.t_ref, p) ==
          doctest::Approx(p.mu_ref * std::pow(2.0, -1.5)).epsilon(1e-12));
    p.k_u = 0.0;
    CHECK(mobility(450.0, p) == doctest::Approx(p.mu_ref).epsilon(1e-12));
}

TEST_CASE("current equations agree at the region handoff") {
    // The default subthreshold prefactor is derived so both equations meet at
    // the stitch point (60 mV overdrive, 40 mV drain).
    TransistorParams p;
    const double v_th = threshold_voltage(0.0, p);
    const double v_ov = 0.06;
    const double v_ds = 0.04;
    const double mu = mobility(p.t_ref, p);
    const double i_tri = triode_current(v_th + v_ov, v_ds, mu, p, v_th);
    const double i_sub = subthreshold_current(v_th + v_ov, v_ds, p, v_th);
    CHECK(std::abs(i_tri - i_sub) / i_sub < 0.10);
}

TEST_CASE("drive current resolution") {
    DriverConfig cfg;
    const double r_p = 4200.0;

    SUBCASE("writing zero always uses the single low-rail pair") {
        for (QualityLevel level : {QualityLevel::Q00, QualityLevel::Q01,
                                   QualityLevel::Q10, QualityLevel::Q11}) {
            CHECK(drive_current(level, 0, r_p, cfg) ==
                  doctest::Approx(cfg.vddl / (cfg.r_on_pair + r_p)).epsilon(1e-12));
        }
    }
    SUBCASE("level strength ordering for write-1") {
        const double i01 = drive_current(QualityLevel::Q01, 1, r_p, cfg);
        const double i10 = drive_current(QualityLevel::Q10, 1, r_p, cfg);
        const double i00 = drive_current(QualityLevel::Q00, 1, r_p, cfg);
        const double i11 = drive_current(QualityLevel::Q11, 1, r_p, cfg);
        CHECK(i01 <= i10);
        CHECK(i10 <= i00);
        CHECK(i00 <= i11);
    }
    SUBCASE("ohmic division in the pair resistance") {
        const double full = drive_current(QualityLevel::Q01, 1, 0.0, cfg);
        cfg.r_on_pair /= 2.0;
        CHECK(drive_current(QualityLevel::Q01, 1, 0.0, cfg) ==
              doctest::Approx(2.0 * full).epsilon(1e-12));
    }
    SUBCASE("strictly decreasing in the cell resistance") {
        double prev = drive_current(QualityLevel::Q11, 1, 100.0, cfg);
        for (double r = 500.0; r < 10000.0; r += 500.0) {
            const double i = drive_current(QualityLevel::Q11, 1, r, cfg);
            CHECK(i < prev);
            prev = i;
        }
    }
    SUBCASE("strictly increasing in active pairs") {
        DriverConfig one = cfg, two = cfg, three = cfg;
        one.level_map[3] = {Supply::Vddh, 1};
        two.level_map[3] = {Supply::Vddh, 2};
        three.level_map[3] = {Supply::Vddh, 3};
        const double i1 = drive_current(QualityLevel::Q11, 1, r_p, one);
        const double i2 = drive_current(QualityLevel::Q11, 1, r_p, two);
        const double i3 = drive_current(QualityLevel::Q11, 1, r_p, three);
        CHECK(i1 < i2);
        CHECK(i2 < i3);
    }
    SUBCASE("negative cell resistance is rejected") {
        CHECK_THROWS_AS(drive_current(QualityLevel::Q11, 1, -1.0, cfg), domain_error);
    }
}

TEST_CASE("level and path parsing") {
    CHECK(parse_quality_tag("11") == QualityLevel::Q11);
    CHECK(parse_quality_tag("00") == QualityLevel::Q00);
    CHECK_THROWS_AS(parse_quality_tag("12"), usage_error);
    CHECK(parse_quality_name("q10") == QualityLevel::Q10);
    CHECK_THROWS_AS(parse_quality_name("q12"), usage_error);

    const DriverPath path = parse_driver_path("vddh:3");
    CHECK(path.supply == Supply::Vddh);
    CHECK(path.pairs == 3);
    CHECK(format_driver_path(path) == "vddh:3");
    CHECK_THROWS_AS(parse_driver_path("vdd:3"), usage_error);
    CHECK_THROWS_AS(parse_driver_path("vddl:4"), usage_error);
    CHECK_THROWS_AS(parse_driver_path("vddl"), usage_error);
}

TEST_CASE("driver config validation") {
    DriverConfig cfg;
    validate(cfg);
    cfg.vddl = 1.0;
    CHECK_THROWS_AS(validate(cfg), domain_error);
    cfg = DriverConfig{};
    cfg.r_on_pair = 0.0;
    CHECK_THROWS_AS(validate(cfg), domain_error);
}
