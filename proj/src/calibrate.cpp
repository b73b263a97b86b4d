#include "extent/calibrate.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>

#include "extent/errors.hpp"
#include "extent/units.hpp"

namespace extent {

namespace {

// Mean switching time of the exact-level write-1 at a given pair resistance,
// +inf when the drive falls out of the precessional regime.
double exact_latency_at(RunConfig cfg, double r_on_pair) {
    cfg.driver.r_on_pair = r_on_pair;
    const SwitchingPoint pt =
        switching_point(QualityLevel::Q11, 1, cfg.mtj.r_p, cfg.driver, cfg.mtj,
                        cfg.write, /*required=*/false);
    return pt.in_regime ? pt.t_sw : std::numeric_limits<double>::infinity();
}

double write0_latency_at(RunConfig cfg, double scale) {
    cfg.write.ap_to_p_ic_scale = scale;
    const SwitchingPoint pt =
        switching_point(QualityLevel::Q11, 0, cfg.mtj.r_ap, cfg.driver, cfg.mtj,
                        cfg.write, /*required=*/false);
    return pt.in_regime ? pt.t_sw : std::numeric_limits<double>::infinity();
}

// Bisects f (monotone increasing) for f(x) = target on [lo, hi].
double bisect_increasing(const std::function<double(double)>& f, double lo, double hi,
                         double target, const char* target_name) {
    double f_lo = f(lo);
    double f_hi = f(hi);
    if (!(f_lo <= target && target <= f_hi))
        throw calibration_error(std::string("target '") + target_name +
                                "' cannot be bracketed");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = f(mid);
        if (f_mid < target) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

BasicFigures basic_profile_figures(const RunConfig& cfg, const BasicProfile& basic) {
    // Fixed pulse, always-write, no monitoring: the full pulse energy plus
    // the profile's peripheral constant.
    const double i_w = cfg.driver.vddh / (cfg.driver.r_on_pair + cfg.mtj.r_p);
    BasicFigures f;
    f.latency = basic.t_pulse;
    f.energy = cfg.driver.vddh * i_w * basic.t_pulse + basic.e_driver;
    return f;
}

CalibrationResult calibrate(const CalibrationTargets& targets, const RunConfig& nominal) {
    if (!(targets.e_write1_exact > 0.0) || !(targets.t_write1_exact > 0.0) ||
        !(targets.e_basic > 0.0) || !(targets.t_basic > 0.0) ||
        !(targets.asymmetry > 0.0))
        throw calibration_error("all calibration targets must be positive");

    CalibrationResult result;
    result.config = nominal;
    RunConfig& cfg = result.config;

    // 1. Pair resistance fixes the exact-level mean switching time.
    const double r_on = bisect_increasing(
        [&](double r) { return exact_latency_at(cfg, r); }, 1e-3, 1e8,
        targets.t_write1_exact, "exact write-1 latency");
    cfg.driver.r_on_pair = r_on;

    // 2. The AP->P critical-current scale fixes the write-0 switching time
    //    at the same asymmetry ratio as the energies.
    const double t0_target = targets.t_write1_exact / targets.asymmetry;
    const double scale = bisect_increasing(
        [&](double s) { return write0_latency_at(cfg, s); }, 1e-9, 1.0, t0_target,
        "write-0 latency (asymmetry)");
    cfg.write.ap_to_p_ic_scale = scale;

    // 3. The per-path driver energies close the energy anchors exactly.
    const ExpectedOutcome w1 = expected_outcome(QualityLevel::Q11, 1,
                                                CellState::from_bit(0), cfg.driver,
                                                cfg.mtj, cfg.write);
    const double path1 = w1.point.v_supply * w1.point.i_w * w1.point.t_sw;
    const double e_q11 = targets.e_write1_exact - cfg.driver.e_detector - path1;
    if (e_q11 < 0.0)
        throw calibration_error("exact write-1 energy target below the supply-path floor");
    cfg.driver.e_driver[static_cast<int>(QualityLevel::Q11)] = e_q11;

    const ExpectedOutcome w0 = expected_outcome(QualityLevel::Q11, 0,
                                                CellState::from_bit(1), cfg.driver,
                                                cfg.mtj, cfg.write);
    const double path0 = w0.point.v_supply * w0.point.i_w * w0.point.t_sw;
    const double e0_target = targets.e_write1_exact / targets.asymmetry;
    const double e_w0 = e0_target - cfg.driver.e_detector - path0;
    if (e_w0 < 0.0)
        throw calibration_error("write-0 energy target below the supply-path floor");
    cfg.driver.e_driver_w0 = e_w0;

    // 4. Basic profile: fixed pulse width is the latency anchor itself; its
    //    peripheral energy closes the energy anchor.
    result.basic.t_pulse = targets.t_basic;
    const double i_basic = cfg.driver.vddh / (cfg.driver.r_on_pair + cfg.mtj.r_p);
    const double path_basic = cfg.driver.vddh * i_basic * targets.t_basic;
    const double e_basic = targets.e_basic - path_basic;
    if (e_basic < 0.0)
        throw calibration_error("basic energy target below the supply-path floor");
    result.basic.e_driver = e_basic;

    // Residuals from a fresh expected-value evaluation of the result.
    const ExpectedOutcome check1 = expected_outcome(QualityLevel::Q11, 1,
                                                    CellState::from_bit(0), cfg.driver,
                                                    cfg.mtj, cfg.write);
    const ExpectedOutcome check0 = expected_outcome(QualityLevel::Q11, 0,
                                                    CellState::from_bit(1), cfg.driver,
                                                    cfg.mtj, cfg.write);
    const BasicFigures basic = basic_profile_figures(cfg, result.basic);
    result.residual_energy =
        std::abs(check1.energy_at_mean - targets.e_write1_exact) / targets.e_write1_exact;
    result.residual_latency =
        std::abs(check1.latency_at_mean - targets.t_write1_exact) / targets.t_write1_exact;
    result.residual_basic = std::abs(basic.energy - targets.e_basic) / targets.e_basic;
    const double ratio = check1.energy_at_mean / check0.energy_at_mean;
    result.residual_asymmetry = std::abs(ratio - targets.asymmetry) / targets.asymmetry;
    result.write0_energy = check0.energy_at_mean;
    result.write0_latency = check0.latency_at_mean;

    if (result.residual_energy > targets.tol_exact)
        throw calibration_error("exact write-1 energy missed its tolerance");
    if (result.residual_latency > targets.tol_exact)
        throw calibration_error("exact write-1 latency missed its tolerance");
    if (result.residual_basic > targets.tol_basic)
        throw calibration_error("basic profile energy missed its tolerance");
    return result;
}

std::string format_calibration_report(const CalibrationResult& result,
                                      const CalibrationTargets& targets) {
    std::ostringstream out;
    char line[200];
    std::snprintf(line, sizeof(line),
                  "# calibrated: write-1 %.4f pJ / %.4f ns, write-0 %.4f pJ / %.4f ns\n",
                  targets.e_write1_exact / unit::pj, targets.t_write1_exact / unit::ns,
                  result.write0_energy / unit::pj, result.write0_latency / unit::ns);
    out << line;
    std::snprintf(line, sizeof(line),
                  "# residuals: energy %.3e, latency %.3e, basic %.3e, asymmetry %.3e\n",
                  result.residual_energy, result.residual_latency, result.residual_basic,
                  result.residual_asymmetry);
    out << line;
    std::snprintf(line, sizeof(line),
                  "# basic profile: pulse %.2f ns, peripheral %.4f pJ\n",
                  result.basic.t_pulse / unit::ns, result.basic.e_driver / unit::pj);
    out << line;
    out << format_driver_section(result.config);
    std::snprintf(line, sizeof(line), "\n[write]\nap_to_p_ic_scale = %.10g\n",
                  result.config.write.ap_to_p_ic_scale);
    out << line;
    return out.str();
}

} // namespace extent
