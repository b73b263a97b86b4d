#ifndef EXTENT_CALIBRATE_HPP
#define EXTENT_CALIBRATE_HPP

#include <string>

#include "extent/config.hpp"
#include "extent/write_engine.hpp"

namespace extent {

// Anchors the calibrated configuration reproduces, with per-target
// tolerances as fractions.
struct CalibrationTargets {
    double e_write1_exact = 337.2e-12; // J
    double t_write1_exact = 6.9e-9;    // s
    double e_basic = 1046.0e-12;       // J
    double t_basic = 19.0e-9;          // s
    double asymmetry = 2.5;            // write-1 / write-0 energy ratio
    double tol_exact = 0.005;
    double tol_basic = 0.01;
};

// The conventional fixed-pulse cell: one low-threshold pair at the high
// rail, no skip, no termination, no monitoring. Its pulse width and
// peripheral energy are calibration outputs.
struct BasicProfile {
    double t_pulse = 19e-9;  // s
    double e_driver = 0.0;   // J per write
};

struct CalibrationResult {
    RunConfig config;      // calibrated copy of the nominal
    BasicProfile basic;
    double residual_energy = 0.0;  // fraction, exact write-1 energy
    double residual_latency = 0.0; // fraction, exact write-1 latency
    double residual_basic = 0.0;   // fraction, basic profile energy
    double residual_asymmetry = 0.0;
    double write0_energy = 0.0;    // J, calibrated expected write-0 energy
    double write0_latency = 0.0;   // s
};

// Deterministic coordinate solve over (r_on_pair, ap_to_p_ic_scale,
// per-path driver energies) using expected-value write outcomes. Throws
// calibration_error naming the first target that cannot be bracketed.
CalibrationResult calibrate(const CalibrationTargets& targets, const RunConfig& nominal);

// Expected-value figures of the basic profile under a calibrated config.
struct BasicFigures {
    double energy = 0.0;  // J
    double latency = 0.0; // s
};

BasicFigures basic_profile_figures(const RunConfig& cfg, const BasicProfile& basic);

std::string format_calibration_report(const CalibrationResult& result,
                                      const CalibrationTargets& targets);

} // namespace extent

#endif
