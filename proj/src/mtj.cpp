#include "extent/mtj.hpp"

#include <algorithm>
#include <cmath>

#include "extent/errors.hpp"
#include "extent/units.hpp"

namespace extent {

void validate(const MtjParams& p) {
    if (!(p.r_p > 0.0) || !(p.r_ap > p.r_p))
        throw domain_error("mtj: require r_ap > r_p > 0");
    if (!(p.i_c > 0.0)) throw domain_error("mtj: critical current must be positive");
    if (!(p.tau0 > 0.0)) throw domain_error("mtj: relaxation time must be positive");
    if (!(p.delta > 0.0)) throw domain_error("mtj: thermal stability factor must be positive");
    if (!(p.theta0 > 0.0 && p.theta0 < phys::pi / 2.0))
        throw domain_error("mtj: initial angle must lie in (0, pi/2)");
    if (!(p.spin_p >= 0.0 && p.spin_p < 1.0))
        throw domain_error("mtj: spin polarization must lie in [0, 1)");
    if (!(p.temperature > 0.0)) throw domain_error("mtj: temperature must be positive");
    if (!(p.lambda > 0.0)) throw domain_error("mtj: lambda must be positive");
}

double tmr_eff(double t_kelvin, double /*v_bias*/, const MtjParams& p) {
    if (!(t_kelvin > 0.0)) throw domain_error("tmr: temperature must be positive");
    const double falloff = 1.0 - p.tmr_temp_coeff * (t_kelvin - 300.0);
    return p.tmr_cell() * std::max(0.0, falloff);
}

double resistance(CellState state, double t_kelvin, double v_bias, const MtjParams& p) {
    if (!(t_kelvin > 0.0)) throw domain_error("resistance: temperature must be positive");
    if (state.magnetization == Magnetization::Parallel) return p.r_p;
    return p.r_p * (1.0 + tmr_eff(t_kelvin, v_bias, p));
}

double spin_efficiency_thermal(double t_kelvin, double v_bias, const MtjParams& p) {
    const double tmr = tmr_eff(t_kelvin, v_bias, p);
    if (!(tmr > 0.0))
        throw domain_error("spin efficiency: effective TMR must be positive");
    return std::sqrt(tmr * (tmr + 2.0)) / (2.0 * (tmr + 1.0));
}

double spin_efficiency_angle(double theta, const MtjParams& p) {
    const double c = std::cos(theta);
    if (std::abs(c) < 1e-12)
        throw domain_error("spin efficiency: singular at theta = pi/2");
    return 1.0 / (2.0 * (1.0 + p.spin_p * p.spin_p) * c);
}

double critical_current(const MtjParams& p, double t_kelvin, IcMode mode) {
    if (mode == IcMode::Tabulated) return p.i_c;
    const double g = spin_efficiency_thermal(t_kelvin, 0.0, p);
    if (!(g > 0.0)) throw domain_error("critical current: zero spin efficiency");
    return 2.0 * p.alpha_damp *
           (p.gamma_gyro * phys::elementary_charge / (phys::bohr_magneton * g)) *
           p.e_barrier;
}

double critical_current_density(SwitchDirection /*direction*/, const MtjParams& p) {
    // theta = 0 for both directions; the direction-dependent efficiency
    // argument is not well defined and is deliberately not modeled.
    const double g = spin_efficiency_angle(0.0, p);
    if (!(g > 0.0)) throw domain_error("current density: zero spin efficiency");
    const double prefactor = p.alpha_damp * p.gamma_gyro * phys::elementary_charge *
                             p.t_fl * p.m_s / (phys::bohr_magneton * g);
    return prefactor * ((p.h_ex + p.h_dip) + (p.h_ki + p.h_d));
}

double mean_switching_time(double i_w, const MtjParams& p) {
    const double knee = p.lambda * p.i_c;
    if (!(i_w > knee))
        throw regime_error("thermal-activation regime: precessional switching law inapplicable");
    const double overdrive = i_w / knee - 1.0;
    const double log_term = std::log(phys::pi / (2.0 * p.theta0));
    return p.tau0 * log_term / overdrive;
}

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

double wer_thermal(double i_ratio, double t_w, const MtjParams& p) {
    const double num = phys::pi * phys::pi * (i_ratio - 1.0) * p.delta;
    const double den =
        4.0 * (i_ratio * std::exp(p.c_tech * (i_ratio - 1.0) * t_w) - 1.0);
    return clamp01(1.0 - std::exp(-num / den));
}

double wer_llg(double i_ratio, double t_w, const MtjParams& p) {
    const double rate = 2.0 * p.alpha_damp * p.gamma_gyro * phys::mu0 * p.h_k /
                        (1.0 + p.alpha_damp * p.alpha_damp);
    const double num = (phys::pi * phys::pi / 4.0) * (i_ratio - 1.0);
    const double den = i_ratio * std::exp(rate * (i_ratio - 1.0) * t_w) - 1.0;
    return clamp01(1.0 - std::exp(-num / den));
}

} // namespace

double wer(WerModel model, double i_w, double t_w, const MtjParams& p) {
    if (t_w < 0.0) throw domain_error("wer: negative pulse width");
    switch (model) {
    case WerModel::Thermal:
    case WerModel::Llg: {
        const double i_ratio = i_w / p.i_c;
        if (!(i_ratio > 1.0))
            throw regime_error("wer: write current must exceed the critical current");
        return model == WerModel::Thermal ? wer_thermal(i_ratio, t_w, p)
                                          : wer_llg(i_ratio, t_w, p);
    }
    case WerModel::Exponential: {
        const double t_sw = mean_switching_time(i_w, p);
        return clamp01(std::exp(-t_w / t_sw));
    }
    }
    throw usage_error("wer: unknown model");
}

double switching_probability(double t_p, double v, const MtjParams& p) {
    if (t_p < 0.0) throw domain_error("switching probability: negative pulse width");
    if (!(p.v_c0 > 0.0)) throw domain_error("switching probability: v_c0 must be positive");
    const double tau = p.tau0 * std::exp(p.delta * (1.0 - v / p.v_c0));
    return std::clamp(1.0 - std::exp(-t_p / tau), 0.0, 1.0);
}

double sample_switching_time(double u, double t_sw) {
    if (!(u >= 0.0 && u < 1.0))
        throw domain_error("sample switching time: u must lie in [0, 1)");
    if (!(t_sw > 0.0))
        throw domain_error("sample switching time: mean must be positive");
    return -t_sw * std::log1p(-u);
}

} // namespace extent
