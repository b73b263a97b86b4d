#ifndef EXTENT_VARIATION_HPP
#define EXTENT_VARIATION_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "extent/config.hpp"
#include "extent/write_engine.hpp"

namespace extent {

// One perturbed parameter: Gaussian around the nominal with a relative
// sigma, clamped to a relative band.
struct VariationEntry {
    std::string path; // e.g. "mtj.t_ox", "cmos.w", "mtj.r", "driver.vddh"
    double sigma_frac = 0.0;
    double clamp_frac = 0.0; // 0 disables clamping
};

struct VariationSpec {
    std::vector<VariationEntry> entries;
    double res_correlation = 0.0; // between the r_p and r_ap draws of "mtj.r"
};

// The default process-variation study: oxide and free-layer thickness,
// cell resistances, and the access-transistor geometry/threshold.
VariationSpec default_variation_spec(const VariationConfig& cfg);

// Draws one perturbed configuration. Thickness draws map onto the device
// model through derived sensitivities (oxide -> resistances, free layer ->
// critical current, transistor geometry/threshold -> driver on-resistance).
RunConfig sample_parameters(const VariationSpec& spec, Rng& rng, const RunConfig& nominal);

enum class Scenario : std::uint8_t { WriteOne, WriteZero };

struct ScenarioSpec {
    Scenario kind = Scenario::WriteOne;
    QualityLevel level = QualityLevel::Q11;
};

struct TrialRow {
    std::uint64_t trial = 0;
    std::uint64_t param_hash = 0;
    double energy = 0.0;  // J
    double latency = 0.0; // s
    bool switched = false;
    double wer = 1.0; // closed-form failure probability under the trial's parameters
};

struct MetricSummary {
    double min = 0.0, max = 0.0, mean = 0.0, std_dev = 0.0;
};

inline constexpr int kHistogramBins = 32;

struct Histogram {
    double lo = 0.0, hi = 0.0;
    std::array<std::uint64_t, kHistogramBins> counts = {};
};

struct McSummary {
    std::uint64_t n_trials = 0;
    std::uint64_t seed = 0;
    MetricSummary energy;  // J
    MetricSummary latency; // s
    MetricSummary wer;
    Histogram energy_hist; // J
};

struct McResult {
    std::vector<TrialRow> rows; // ordered by trial index
    McSummary summary;
};

// Runs n independent trials. Each trial derives its own substream from
// (seed, trial index), so any execution order or thread count reproduces
// identical rows. Regime failures are recorded as failed trials.
McResult run_monte_carlo(const ScenarioSpec& scenario, std::uint64_t n,
                         std::uint64_t seed, const VariationSpec& spec,
                         const RunConfig& nominal, int threads = 1);

// Aggregates rows (in trial order) into the summary; exposed so tests can
// check order independence.
McSummary summarize(const std::vector<TrialRow>& rows, std::uint64_t seed);

struct SweepRow {
    double value = 0.0;
    double energy = 0.0;  // J, expected-value energy of the scenario write
    double latency = 0.0; // s, E[t | switch]
    double wer = 0.0;
};

// Deterministic expected-value evaluation of the scenario at each setting of
// the swept parameter.
std::vector<SweepRow> sweep(const std::string& param_path, const std::vector<double>& values,
                            const ScenarioSpec& scenario, const RunConfig& nominal);

} // namespace extent

#endif
