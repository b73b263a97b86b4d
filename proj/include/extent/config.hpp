#ifndef EXTENT_CONFIG_HPP
#define EXTENT_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <string>

#include "extent/driver.hpp"
#include "extent/mtj.hpp"
#include "extent/write_engine.hpp"

namespace extent {

enum class StoreInit : std::uint8_t { Zero, Random };

struct VariationConfig {
    double t_ox_sigma_frac = 0.03;
    double t_ox_clamp_frac = 0.10;
    double t_fl_sigma_frac = 0.03;
    double t_fl_clamp_frac = 0.10;
    double res_sigma_frac = 0.03;
    double res_clamp_frac = 0.05;
    double res_correlation = 0.0; // between the r_p and r_ap draws
    double cmos_sigma_frac = 0.03;
    double cmos_clamp_frac = 0.09; // 3 sigma
    double k_ox = 2.0;             // resistance sensitivity to oxide thickness
};

struct TraceConfig {
    std::size_t table_capacity = 4096; // quality-table entries (blocks)
    int block_bytes = 64;
    QualityLevel default_level = QualityLevel::Q00;
    StoreInit store_init = StoreInit::Zero;
};

// Merged view of every tunable. Loaded from the plain-text config file,
// then optionally overridden from the command line.
struct RunConfig {
    MtjParams mtj;
    DriverConfig driver;
    TransistorParams cmos;
    WritePolicy write;
    SoftErrorThresholds soft_error;
    double soft_tau_rise = 50e-12; // s, default glitch shape
    double soft_tau_fall = 200e-12;
    VariationConfig variation;
    TraceConfig trace;
};

void validate(const RunConfig& cfg);

// Parses `key = value` lines under `[section]` headers; '#' starts a
// comment line. Unknown sections or keys are rejected.
RunConfig parse_config(std::istream& in);
RunConfig load_config_file(const std::string& path);

// Applies a single `section.key=value` override.
void apply_override(RunConfig& cfg, const std::string& dotted_key,
                    const std::string& value);

// Serializers. The driver section is what `calibrate` emits.
std::string format_driver_section(const RunConfig& cfg);
std::string format_config(const RunConfig& cfg);

} // namespace extent

#endif
