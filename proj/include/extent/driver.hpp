#ifndef EXTENT_DRIVER_HPP
#define EXTENT_DRIVER_HPP

#include <array>
#include <cstdint>
#include <string>

namespace extent {

// Two-bit write priority tag. Q11 = high/exact, Q10 = low, Q00 = normal
// (default), Q01 = reserved intermediate (weakest drive).
enum class QualityLevel : std::uint8_t { Q00 = 0, Q01 = 1, Q10 = 2, Q11 = 3 };

const char* to_string(QualityLevel level);       // "00", "01", "10", "11"
const char* level_name(QualityLevel level);      // "q00", ...
QualityLevel parse_quality_tag(const std::string& tag);   // from "00".."11"
QualityLevel parse_quality_name(const std::string& name); // from "q00".."q11"

enum class Supply : std::uint8_t { Vddl, Vddh };

// One write-current path of the driver: which rail feeds it and how many
// transistor pairs are active in parallel.
struct DriverPath {
    Supply supply = Supply::Vddl;
    int pairs = 1;
};

DriverPath parse_driver_path(const std::string& text); // "vddl:1", "vddh:3"
std::string format_driver_path(const DriverPath& path);

// Behavioral write-driver configuration. Energies in joules, times in
// seconds. The per-level driver energies and overdrive factors are
// calibration outputs that map the abstract switching law onto the measured
// per-level energy/error behavior of the circuit.
struct DriverConfig {
    double vddl = 0.86001; // V
    double vddh = 0.9;     // V
    double t_pulse = 10e-9;
    double r_on_pair = 1200.0;  // ohm, one driver pair
    double e_detector = 20e-12; // J, completion-detector cost per executed write
    double e_sense = 2e-12;     // J, repetitive-write sense cost (skipped writes)

    // Write-"1" current paths, indexed by QualityLevel (Q00, Q01, Q10, Q11).
    std::array<DriverPath, 4> level_map = {
        DriverPath{Supply::Vddh, 3},
        DriverPath{Supply::Vddl, 1},
        DriverPath{Supply::Vddl, 2},
        DriverPath{Supply::Vddh, 3},
    };

    // Per-level driver/peripheral energy per executed write-"1" (J), and the
    // write-"0" path's own. Calibration outputs.
    std::array<double, 4> e_driver = {700e-12, 150e-12, 300e-12, 700e-12};
    double e_driver_w0 = 150e-12;

    // Per-level effective-overdrive factor applied to the write current when
    // evaluating the switching law (not the supply current used for energy).
    std::array<double, 4> overdrive = {2.4, 0.62, 1.0, 2.4};

    double supply_voltage(Supply s) const { return s == Supply::Vddl ? vddl : vddh; }
    const DriverPath& path_for(QualityLevel level) const {
        return level_map[static_cast<int>(level)];
    }
    double e_driver_for(QualityLevel level) const {
        return e_driver[static_cast<int>(level)];
    }
    double overdrive_for(QualityLevel level) const {
        return overdrive[static_cast<int>(level)];
    }
};

void validate(const DriverConfig& cfg);

// Access-transistor parameters for the current equations. SI units.
struct TransistorParams {
    double v_th0 = 0.3;      // V, zero-bias threshold
    double gamma_body = 0.4; // sqrt(V), body-effect coefficient
    double phi_f2 = 0.7;     // V, twice the Fermi surface potential
    double s_slope = 0.1;    // V/decade, subthreshold swing
    double i_s = 12.5e-6;    // A, subthreshold prefactor
    double w = 1e-6;         // m, channel width
    double l = 32e-9;        // m, channel length
    double c_ox = 0.02;      // F/m^2, gate oxide capacitance per area
    double mu_ref = 0.03;    // m^2/(V s), mobility at t_ref
    double t_ref = 300.0;    // K
    double k_u = 1.5;        // mobility temperature exponent
};

void validate(const TransistorParams& p);

// Threshold voltage under body bias v_sb.
double threshold_voltage(double v_sb, const TransistorParams& p);

// Drain current below threshold (exponential law with drain saturation factor).
double subthreshold_current(double v_gs, double v_ds, const TransistorParams& p, double v_th);

// Drain current in the triode region; requires v_gs > v_th and
// 0 <= v_ds <= v_gs - v_th.
double triode_current(double v_gs, double v_ds, double mu, const TransistorParams& p, double v_th);

// Carrier mobility at temperature t.
double mobility(double t_kelvin, const TransistorParams& p);

// Write current delivered into an MTJ of resistance r_mtj. Writing a zero
// always uses the single-pair low-rail path; writing a one uses the level's
// configured path. Deterministic, purely ohmic.
double drive_current(QualityLevel level, int bit, double r_mtj, const DriverConfig& cfg);

// Path actually resolved by drive_current for (level, bit).
DriverPath resolve_path(QualityLevel level, int bit, const DriverConfig& cfg);

} // namespace extent

#endif
