#ifndef EXTENT_MTJ_HPP
#define EXTENT_MTJ_HPP

#include <cstdint>

namespace extent {

// Magnetization alignment of the free layer relative to the pinned layer.
// Parallel is the low-resistance state and stores logic zero.
enum class Magnetization : std::uint8_t { Parallel, AntiParallel };

struct CellState {
    Magnetization magnetization = Magnetization::Parallel;

    int stored_bit() const { return magnetization == Magnetization::Parallel ? 0 : 1; }
    static CellState from_bit(int bit) {
        return CellState{bit ? Magnetization::AntiParallel : Magnetization::Parallel};
    }
};

// Which write-error-rate law to evaluate.
enum class WerModel : std::uint8_t {
    Thermal,     // thermal-stability form with technology constant C
    Llg,         // damping/anisotropy form
    Exponential, // survival of the exponential switching-time law
};

enum class IcMode : std::uint8_t { Tabulated, Physics };

enum class SwitchDirection : std::uint8_t { PtoAP, APtoP };

// Immutable device constants for one MTJ cell. SI units throughout.
struct MtjParams {
    double r_p = 4200.0;           // ohm, parallel (low) resistance at 300 K
    double r_ap = 6600.0;          // ohm, antiparallel (high) resistance at 300 K
    double tmr0 = 2.0;             // informational zero-bias TMR; resistance-derived TMR is used
    double i_c = 200e-6;           // A, tabulated critical current
    double delta = 60.0;           // thermal stability factor
    double tau0 = 1e-9;            // s, relaxation time
    double lambda = 0.2333;        // overdrive coefficient of the precessional law
    double c_tech = 1e9;           // 1/s, technology constant of the thermal WER law
    double theta0 = 0.0314;        // rad, initial free-layer angle
    double alpha_damp = 0.01;      // Gilbert damping
    double gamma_gyro = 1.76e11;   // 1/(T s), gyromagnetic ratio
    double m_s = 1e6;              // A/m, saturation magnetization
    double h_k = 8e4;              // A/m, anisotropy field
    double v_st = 2.08e-23;        // m^3, free-layer volume
    double e_barrier = 2.4851682e-19; // J, energy barrier (delta * kT at 300 K)
    double t_fl = 1.3e-9;          // m, free-layer thickness
    double spin_p = 0.6;           // spin polarization
    double h_ex = 0.0;             // A/m, exchange field
    double h_dip = 0.0;            // A/m, dipole field from the pinned layer
    double h_ki = 8e4;             // A/m, interfacial perpendicular anisotropy field
    double h_d = 0.0;              // A/m, demagnetizing field
    double v_c0 = 1.2;             // V, critical switching voltage
    double temperature = 300.0;    // K, ambient
    double tmr_temp_coeff = 1e-3;  // 1/K, linear TMR falloff above 300 K
    double area = 1.6e-14;         // m^2, cell area
    double ra_product = 5e-12;     // ohm m^2
    double t_ox = 0.85e-9;         // m, oxide barrier thickness

    // Resistance-derived TMR at 300 K and zero bias.
    double tmr_cell() const { return (r_ap - r_p) / r_p; }
};

// Throws domain_error on invariant violations; call after construction/load.
void validate(const MtjParams& p);

// Effective TMR with the linear temperature falloff, clamped at zero.
// Bias dependence is disabled (coefficient fixed to zero); v_bias is accepted
// for interface stability only.
double tmr_eff(double t_kelvin, double v_bias, const MtjParams& p);

// Cell resistance in a given state. Parallel is temperature-invariant.
double resistance(CellState state, double t_kelvin, double v_bias, const MtjParams& p);
inline double resistance(CellState state, const MtjParams& p) {
    return resistance(state, p.temperature, 0.0, p);
}

// Thermal spin efficiency g(T) from the effective TMR. Strictly increasing
// in TMR, bounded above by 0.5.
double spin_efficiency_thermal(double t_kelvin, double v_bias, const MtjParams& p);

// Angular spin efficiency g(theta); singular at theta = pi/2.
double spin_efficiency_angle(double theta, const MtjParams& p);

// Critical switching current. Tabulated mode returns the configured value;
// Physics mode evaluates the damping/barrier form.
double critical_current(const MtjParams& p, double t_kelvin, IcMode mode);

// Threshold current density for the requested transition direction.
// Both directions evaluate the angular efficiency at theta = 0.
double critical_current_density(SwitchDirection direction, const MtjParams& p);

// Mean precessional switching time at write current i_w.
// Requires i_w > lambda * i_c; below that the cell is in the
// thermal-activation regime and this law does not apply.
double mean_switching_time(double i_w, const MtjParams& p);

// Write error rate under the selected law, clamped to [0, 1].
double wer(WerModel model, double i_w, double t_w, const MtjParams& p);

// Switching probability of a voltage pulse of width t_p at bias v.
double switching_probability(double t_p, double v, const MtjParams& p);

// Inverse-CDF sample of the exponential switching-time law.
// u must lie in [0, 1); t_sw is the mean switching time.
double sample_switching_time(double u, double t_sw);

} // namespace extent

#endif
