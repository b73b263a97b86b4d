#include "extent/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>
#include <vector>

#include "extent/errors.hpp"
#include "extent/units.hpp"

namespace extent {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_double(const std::string& value) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw usage_error("expected a number, got '" + value + "'");
    }
    if (pos != value.size())
        throw usage_error("trailing characters in number '" + value + "'");
    return v;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

struct Key {
    std::string section;
    std::string name;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

// Scaled numeric key: stored value = parsed value * scale.
Key num(const char* section, const char* name,
        std::function<double&(RunConfig&)> ref, double scale) {
    return Key{section, name,
               [ref, scale](RunConfig& c, const std::string& v) {
                   ref(c) = parse_double(v) * scale;
               },
               [ref, scale](const RunConfig& c) {
                   return format_double(ref(const_cast<RunConfig&>(c)) / scale);
               }};
}

#define NUM(section, name, field, scale) \
    num(section, name, [](RunConfig& c) -> double& { return c.field; }, scale)

Key level_map_key(const char* name, int index) {
    return Key{"driver", name,
               [index](RunConfig& c, const std::string& v) {
                   c.driver.level_map[index] = parse_driver_path(v);
               },
               [index](const RunConfig& c) {
                   return format_driver_path(c.driver.level_map[index]);
               }};
}

Key enum_key(const char* section, const char* name,
             std::function<void(RunConfig&, const std::string&)> set,
             std::function<std::string(const RunConfig&)> get) {
    return Key{section, name, std::move(set), std::move(get)};
}

const std::vector<Key>& registry() {
    static const std::vector<Key> keys = [] {
        std::vector<Key> r;
        // [mtj]
        r.push_back(NUM("mtj", "r_p_ohm", mtj.r_p, 1.0));
        r.push_back(NUM("mtj", "r_ap_ohm", mtj.r_ap, 1.0));
        r.push_back(NUM("mtj", "i_c_ua", mtj.i_c, unit::ua));
        r.push_back(NUM("mtj", "delta", mtj.delta, 1.0));
        r.push_back(NUM("mtj", "tau0_ns", mtj.tau0, unit::ns));
        r.push_back(NUM("mtj", "lambda", mtj.lambda, 1.0));
        r.push_back(NUM("mtj", "c_tech_per_ns", mtj.c_tech, 1e9));
        r.push_back(NUM("mtj", "theta0_rad", mtj.theta0, 1.0));
        r.push_back(NUM("mtj", "temperature_k", mtj.temperature, 1.0));
        r.push_back(NUM("mtj", "tmr_temp_coeff_per_k", mtj.tmr_temp_coeff, 1.0));
        r.push_back(NUM("mtj", "v_c0_v", mtj.v_c0, 1.0));
        r.push_back(NUM("mtj", "spin_p", mtj.spin_p, 1.0));
        r.push_back(NUM("mtj", "t_fl_nm", mtj.t_fl, unit::nm));
        // [mtj] physics-mode extras
        r.push_back(NUM("mtj", "tmr0", mtj.tmr0, 1.0));
        r.push_back(NUM("mtj", "alpha_damp", mtj.alpha_damp, 1.0));
        r.push_back(NUM("mtj", "gamma_gyro_per_ts", mtj.gamma_gyro, 1.0));
        r.push_back(NUM("mtj", "m_s_a_per_m", mtj.m_s, 1.0));
        r.push_back(NUM("mtj", "h_k_a_per_m", mtj.h_k, 1.0));
        r.push_back(NUM("mtj", "v_st_m3", mtj.v_st, 1.0));
        r.push_back(NUM("mtj", "e_barrier_j", mtj.e_barrier, 1.0));
        r.push_back(NUM("mtj", "h_ex_a_per_m", mtj.h_ex, 1.0));
        r.push_back(NUM("mtj", "h_dip_a_per_m", mtj.h_dip, 1.0));
        r.push_back(NUM("mtj", "h_ki_a_per_m", mtj.h_ki, 1.0));
        r.push_back(NUM("mtj", "h_d_a_per_m", mtj.h_d, 1.0));
        r.push_back(NUM("mtj", "area_m2", mtj.area, 1.0));
        r.push_back(NUM("mtj", "ra_ohm_m2", mtj.ra_product, 1.0));
        r.push_back(NUM("mtj", "t_ox_nm", mtj.t_ox, unit::nm));
        // [driver]
        r.push_back(NUM("driver", "vddl_v", driver.vddl, 1.0));
        r.push_back(NUM("driver", "vddh_v", driver.vddh, 1.0));
        r.push_back(NUM("driver", "t_pulse_ns", driver.t_pulse, unit::ns));
        r.push_back(NUM("driver", "r_on_pair_ohm", driver.r_on_pair, 1.0));
        r.push_back(NUM("driver", "e_detector_pj", driver.e_detector, unit::pj));
        r.push_back(NUM("driver", "e_sense_pj", driver.e_sense, unit::pj));
        r.push_back(level_map_key("level_map.q00", 0));
        r.push_back(level_map_key("level_map.q01", 1));
        r.push_back(level_map_key("level_map.q10", 2));
        r.push_back(level_map_key("level_map.q11", 3));
        r.push_back(NUM("driver", "e_driver_pj.q00", driver.e_driver[0], unit::pj));
        r.push_back(NUM("driver", "e_driver_pj.q01", driver.e_driver[1], unit::pj));
        r.push_back(NUM("driver", "e_driver_pj.q10", driver.e_driver[2], unit::pj));
        r.push_back(NUM("driver", "e_driver_pj.q11", driver.e_driver[3], unit::pj));
        r.push_back(NUM("driver", "e_driver_pj.w0", driver.e_driver_w0, unit::pj));
        r.push_back(NUM("driver", "overdrive.q00", driver.overdrive[0], 1.0));
        r.push_back(NUM("driver", "overdrive.q01", driver.overdrive[1], 1.0));
        r.push_back(NUM("driver", "overdrive.q10", driver.overdrive[2], 1.0));
        r.push_back(NUM("driver", "overdrive.q11", driver.overdrive[3], 1.0));
        // [cmos]
        r.push_back(NUM("cmos", "v_th0_v", cmos.v_th0, 1.0));
        r.push_back(NUM("cmos", "gamma_body_sqrt_v", cmos.gamma_body, 1.0));
        r.push_back(NUM("cmos", "phi_f2_v", cmos.phi_f2, 1.0));
        r.push_back(NUM("cmos", "s_slope_v_per_dec", cmos.s_slope, 1.0));
        r.push_back(NUM("cmos", "i_s_ua", cmos.i_s, unit::ua));
        r.push_back(NUM("cmos", "w_nm", cmos.w, unit::nm));
        r.push_back(NUM("cmos", "l_nm", cmos.l, unit::nm));
        r.push_back(NUM("cmos", "c_ox_f_per_m2", cmos.c_ox, 1.0));
        r.push_back(NUM("cmos", "mu_ref_m2_per_vs", cmos.mu_ref, 1.0));
        r.push_back(NUM("cmos", "t_ref_k", cmos.t_ref, 1.0));
        r.push_back(NUM("cmos", "k_u", cmos.k_u, 1.0));
        // [write]
        r.push_back(NUM("write", "sense_latency_ns", write.sense_latency, unit::ns));
        r.push_back(NUM("write", "ap_to_p_ic_scale", write.ap_to_p_ic_scale, 1.0));
        r.push_back(enum_key("write", "skip_mode",
            [](RunConfig& c, const std::string& v) {
                if (v == "bit") c.write.skip_mode = SkipMode::Bit;
                else if (v == "word") c.write.skip_mode = SkipMode::Word;
                else if (v == "off") c.write.skip_mode = SkipMode::Off;
                else throw usage_error("skip_mode must be bit, word or off");
            },
            [](const RunConfig& c) -> std::string {
                switch (c.write.skip_mode) {
                case SkipMode::Bit: return "bit";
                case SkipMode::Word: return "word";
                case SkipMode::Off: return "off";
                }
                return "bit";
            }));
        // [soft_error]
        r.push_back(NUM("soft_error", "q_delay_fc", soft_error.q_delay, unit::fc));
        r.push_back(NUM("soft_error", "q_fail_fc", soft_error.q_fail, unit::fc));
        r.push_back(NUM("soft_error", "tau_rise_ps", soft_tau_rise, unit::ps));
        r.push_back(NUM("soft_error", "tau_fall_ps", soft_tau_fall, unit::ps));
        // [variation]
        r.push_back(NUM("variation", "t_ox_sigma_frac", variation.t_ox_sigma_frac, 1.0));
        r.push_back(NUM("variation", "t_ox_clamp_frac", variation.t_ox_clamp_frac, 1.0));
        r.push_back(NUM("variation", "t_fl_sigma_frac", variation.t_fl_sigma_frac, 1.0));
        r.push_back(NUM("variation", "t_fl_clamp_frac", variation.t_fl_clamp_frac, 1.0));
        r.push_back(NUM("variation", "res_sigma_frac", variation.res_sigma_frac, 1.0));
        r.push_back(NUM("variation", "res_clamp_frac", variation.res_clamp_frac, 1.0));
        r.push_back(NUM("variation", "res_correlation", variation.res_correlation, 1.0));
        r.push_back(NUM("variation", "cmos_sigma_frac", variation.cmos_sigma_frac, 1.0));
        r.push_back(NUM("variation", "cmos_clamp_frac", variation.cmos_clamp_frac, 1.0));
        r.push_back(NUM("variation", "k_ox", variation.k_ox, 1.0));
        // [trace]
        r.push_back(enum_key("trace", "table_capacity",
            [](RunConfig& c, const std::string& v) {
                const double n = parse_double(v);
                if (n < 1) throw usage_error("table_capacity must be at least 1");
                c.trace.table_capacity = static_cast<std::size_t>(n);
            },
            [](const RunConfig& c) { return std::to_string(c.trace.table_capacity); }));
        r.push_back(enum_key("trace", "block_bytes",
            [](RunConfig& c, const std::string& v) {
                const double n = parse_double(v);
                if (n < 1) throw usage_error("block_bytes must be at least 1");
                c.trace.block_bytes = static_cast<int>(n);
            },
            [](const RunConfig& c) { return std::to_string(c.trace.block_bytes); }));
        r.push_back(enum_key("trace", "default_level",
            [](RunConfig& c, const std::string& v) {
                c.trace.default_level = parse_quality_name(v);
            },
            [](const RunConfig& c) { return level_name(c.trace.default_level); }));
        r.push_back(enum_key("trace", "store_init",
            [](RunConfig& c, const std::string& v) {
                if (v == "zero") c.trace.store_init = StoreInit::Zero;
                else if (v == "random") c.trace.store_init = StoreInit::Random;
                else throw usage_error("store_init must be zero or random");
            },
            [](const RunConfig& c) {
                return c.trace.store_init == StoreInit::Zero ? "zero" : "random";
            }));
        return r;
    }();
    return keys;
}

const Key* find_key(const std::string& section, const std::string& name) {
    for (const Key& k : registry())
        if (k.section == section && k.name == name) return &k;
    return nullptr;
}

} // namespace

void validate(const RunConfig& cfg) {
    validate(cfg.mtj);
    validate(cfg.driver);
    validate(cfg.cmos);
    if (!(cfg.write.ap_to_p_ic_scale > 0.0))
        throw domain_error("write: ap_to_p_ic_scale must be positive");
    if (!(cfg.write.sense_latency >= 0.0))
        throw domain_error("write: sense latency must be non-negative");
    if (!(cfg.soft_error.q_fail >= cfg.soft_error.q_delay))
        throw domain_error("soft_error: q_fail must be at least q_delay");
}

RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        if (text.front() == '[') {
            if (text.back() != ']')
                throw parse_error("unterminated section header", lineno, 1);
            section = trim(text.substr(1, text.size() - 2));
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw parse_error("expected 'key = value'", lineno, 1);
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (section.empty())
            throw parse_error("key '" + key + "' outside any [section]", lineno, 1);
        const Key* entry = find_key(section, key);
        if (!entry)
            throw parse_error("unknown key '" + section + "." + key + "'", lineno, 1);
        try {
            entry->set(cfg, value);
        } catch (const usage_error& e) {
            throw parse_error(e.what(), lineno, static_cast<int>(eq + 2));
        }
    }
    validate(cfg);
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open config file '" + path + "'");
    return parse_config(in);
}

void apply_override(RunConfig& cfg, const std::string& dotted_key,
                    const std::string& value) {
    const auto dot = dotted_key.find('.');
    if (dot == std::string::npos)
        throw usage_error("override '" + dotted_key + "' must look like section.key");
    const std::string section = dotted_key.substr(0, dot);
    const std::string name = dotted_key.substr(dot + 1);
    const Key* entry = find_key(section, name);
    if (!entry) throw usage_error("unknown key '" + dotted_key + "'");
    entry->set(cfg, value);
}

namespace {

std::string format_section(const RunConfig& cfg, const std::string& section) {
    std::ostringstream out;
    out << "[" << section << "]\n";
    for (const Key& k : registry())
        if (k.section == section) out << k.name << " = " << k.get(cfg) << "\n";
    return out.str();
}

} // namespace

std::string format_driver_section(const RunConfig& cfg) {
    return format_section(cfg, "driver");
}

std::string format_config(const RunConfig& cfg) {
    std::string out;
    for (const char* section :
         {"mtj", "driver", "cmos", "write", "soft_error", "variation", "trace"}) {
        out += format_section(cfg, section);
        out += "\n";
    }
    return out;
}

} // namespace extent
