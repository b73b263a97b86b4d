#include "extent/driver.hpp"

#include <cmath>

#include "extent/errors.hpp"

namespace extent {

const char* to_string(QualityLevel level) {
    switch (level) {
    case QualityLevel::Q00: return "00";
    case QualityLevel::Q01: return "01";
    case QualityLevel::Q10: return "10";
    case QualityLevel::Q11: return "11";
    }
    return "??";
}

const char* level_name(QualityLevel level) {
    switch (level) {
    case QualityLevel::Q00: return "q00";
    case QualityLevel::Q01: return "q01";
    case QualityLevel::Q10: return "q10";
    case QualityLevel::Q11: return "q11";
    }
    return "q??";
}

QualityLevel parse_quality_tag(const std::string& tag) {
    if (tag == "00") return QualityLevel::Q00;
    if (tag == "01") return QualityLevel::Q01;
    if (tag == "10") return QualityLevel::Q10;
    if (tag == "11") return QualityLevel::Q11;
    throw usage_error("invalid priority tag '" + tag + "' (expected 00, 01, 10 or 11)");
}

QualityLevel parse_quality_name(const std::string& name) {
    if (name == "q00") return QualityLevel::Q00;
    if (name == "q01") return QualityLevel::Q01;
    if (name == "q10") return QualityLevel::Q10;
    if (name == "q11") return QualityLevel::Q11;
    throw usage_error("invalid quality level '" + name + "' (expected q00..q11)");
}

DriverPath parse_driver_path(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw usage_error("driver path '" + text + "' must look like vddl:1");
    const std::string rail = text.substr(0, colon);
    const std::string pairs = text.substr(colon + 1);
    DriverPath path;
    if (rail == "vddl") path.supply = Supply::Vddl;
    else if (rail == "vddh") path.supply = Supply::Vddh;
    else throw usage_error("driver path rail must be vddl or vddh, got '" + rail + "'");
    if (pairs == "1") path.pairs = 1;
    else if (pairs == "2") path.pairs = 2;
    else if (pairs == "3") path.pairs = 3;
    else throw usage_error("driver path pairs must be 1, 2 or 3, got '" + pairs + "'");
    return path;
}

std::string format_driver_path(const DriverPath& path) {
    return std::string(path.supply == Supply::Vddl ? "vddl" : "vddh") + ":" +
           std::to_string(path.pairs);
}

void validate(const DriverConfig& cfg) {
    if (!(cfg.vddl > 0.0 && cfg.vddl < cfg.vddh))
        throw domain_error("driver: require 0 < vddl < vddh");
    if (!(cfg.r_on_pair > 0.0)) throw domain_error("driver: r_on_pair must be positive");
    if (!(cfg.t_pulse > 0.0)) throw domain_error("driver: pulse width must be positive");
    for (double k : cfg.overdrive)
        if (!(k > 0.0)) throw domain_error("driver: overdrive factors must be positive");
}

void validate(const TransistorParams& p) {
    if (!(p.w > 0.0 && p.l > 0.0 && p.c_ox > 0.0 && p.s_slope > 0.0 &&
          p.mu_ref > 0.0 && p.t_ref > 0.0))
        throw domain_error("cmos: w, l, c_ox, s_slope, mu_ref, t_ref must be positive");
    if (p.k_u < 0.0) throw domain_error("cmos: k_u must be non-negative");
}

double threshold_voltage(double v_sb, const TransistorParams& p) {
    return p.v_th0 + p.gamma_body * (std::sqrt(std::abs(p.phi_f2 + v_sb)) -
                                     std::sqrt(std::abs(p.phi_f2)));
}

double subthreshold_current(double v_gs, double v_ds, const TransistorParams& p,
                            double v_th) {
    const double gate = std::pow(10.0, (v_gs - v_th) / p.s_slope);
    const double drain = 1.0 - std::pow(10.0, -v_ds / p.s_slope);
    return p.i_s * gate * drain;
}

double triode_current(double v_gs, double v_ds, double mu, const TransistorParams& p,
                      double v_th) {
    const double v_ov = v_gs - v_th;
    if (!(v_ov > 0.0))
        throw regime_error("triode: gate voltage must exceed threshold");
    if (v_ds < 0.0 || v_ds > v_ov)
        throw regime_error("triode: require 0 <= v_ds <= v_gs - v_th");
    return mu * p.c_ox * (p.w / p.l) * (v_ov - v_ds / 2.0) * v_ds;
}

double mobility(double t_kelvin, const TransistorParams& p) {
    if (!(t_kelvin > 0.0)) throw domain_error("mobility: temperature must be positive");
    return p.mu_ref * std::pow(t_kelvin / p.t_ref, -p.k_u);
}

DriverPath resolve_path(QualityLevel level, int bit, const DriverConfig& cfg) {
    if (bit == 0) return DriverPath{Supply::Vddl, 1};
    return cfg.path_for(level);
}

double drive_current(QualityLevel level, int bit, double r_mtj, const DriverConfig& cfg) {
    if (r_mtj < 0.0) throw domain_error("drive current: r_mtj must be non-negative");
    const DriverPath path = resolve_path(level, bit, cfg);
    const double v = cfg.supply_voltage(path.supply);
    return v / (cfg.r_on_pair / path.pairs + r_mtj);
}

} // namespace extent
