#ifndef EXTENT_WRITE_ENGINE_HPP
#define EXTENT_WRITE_ENGINE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "extent/driver.hpp"
#include "extent/mtj.hpp"
#include "extent/rng.hpp"

namespace extent {

enum class SkipMode : std::uint8_t { Bit, Word, Off };

// Knobs of the write transaction model.
struct WritePolicy {
    double sense_latency = 0.5e-9;  // s, cost of detecting a repetitive write
    double ap_to_p_ic_scale = 0.625; // critical-current factor for AP->P switching
    SkipMode skip_mode = SkipMode::Bit;
};

struct WriteRequest {
    int target_bit = 0;
    QualityLevel level = QualityLevel::Q00;
};

enum class WriteResult : std::uint8_t { Skipped, Switched, Failed };

struct WriteOutcome {
    WriteResult result = WriteResult::Skipped;
    double latency = 0.0; // s
    double energy = 0.0;  // J
    std::optional<double> t_switch_sampled; // s, absent for skipped writes
    bool soft_error_applied = false;
};

enum class GlitchPolarity : std::uint8_t { Positive, Negative };

// Particle-strike glitch: double-exponential current injection.
struct SoftErrorEvent {
    double charge = 0.0;   // C
    GlitchPolarity polarity = GlitchPolarity::Negative;
    double t_strike = 0.0; // s, offset inside the pulse
    double tau_rise = 50e-12;
    double tau_fall = 200e-12;
};

struct SoftErrorThresholds {
    double q_delay = 50e-15; // C, below this the strike has no effect
    double q_fail = 200e-15; // C, at or above this the write is lost
};

enum class SoftErrorClass : std::uint8_t { None, Delayed, FailedWrite };

struct SoftErrorEffect {
    double delta_q = 0.0; // C, charge removed from (negative) or added to the path
    SoftErrorClass classification = SoftErrorClass::None;
};

// Integrates the glitch over the remainder of the pulse and classifies the
// effect against the configured charge thresholds.
SoftErrorEffect inject_soft_error(const SoftErrorEvent& ev, double i_w,
                                  const DriverConfig& cfg,
                                  const SoftErrorThresholds& thresholds);

// Switching figures of one write direction at one level, with the level's
// effective overdrive and the AP->P critical-current scale applied. This is
// the single source of truth the stochastic engine, the expected-value mode
// and the closed-form error oracle all share.
struct SwitchingPoint {
    double i_w = 0.0;      // A, supply current (energy accounting)
    double i_eff = 0.0;    // A, effective current seen by the switching law
    double v_supply = 0.0; // V
    double t_sw = 0.0;     // s, mean switching time
    double wer = 1.0;      // failure probability at the full pulse width
    bool in_regime = false;
};

// r_source is the resistance of the current cell state. Throws regime_error
// only when `required` is set; otherwise returns in_regime = false.
SwitchingPoint switching_point(QualityLevel level, int target_bit, double r_source,
                               const DriverConfig& cfg, const MtjParams& mtj,
                               const WritePolicy& policy, bool required = true);

// Deterministic write outcome with the switching time pinned at its mean;
// used by calibration and sweep anchors.
struct ExpectedOutcome {
    SwitchingPoint point;
    double latency_at_mean = 0.0;  // s, the mean switching time itself
    double energy_at_mean = 0.0;   // J, supply path at mean time plus overheads
    double latency_conditional = 0.0; // s, E[t | t <= t_pulse]
    double energy_mean = 0.0;      // J, true mean over switch/fail outcomes
};

ExpectedOutcome expected_outcome(QualityLevel level, int target_bit, CellState cell,
                                 const DriverConfig& cfg, const MtjParams& mtj,
                                 const WritePolicy& policy);

// One stochastic write transaction against a single cell.
struct CellWrite {
    CellState state;
    WriteOutcome outcome;
};

CellWrite write_cell(CellState cell, const WriteRequest& req, const DriverConfig& cfg,
                     const MtjParams& mtj, const WritePolicy& policy, Rng& rng,
                     const SoftErrorEvent* strike = nullptr,
                     const SoftErrorThresholds* thresholds = nullptr);

// Per-bit application of write_cell over equally sized bit vectors.
// Aggregate energy is the sum over bits, latency the maximum. Sense energy
// of skipped bits is kept as a count so totals stay exact.
struct WordWrite {
    std::uint64_t word = 0;
    double energy_write = 0.0; // J, executed (non-skipped) bit writes
    double latency = 0.0;      // s, max over bits
    int skipped = 0;
    int switched = 0;
    int failed = 0;

    // Per-direction tallies of executed bit writes.
    double e_write1 = 0.0, e_write0 = 0.0; // J
    double lat1_sum = 0.0, lat0_sum = 0.0; // s
    int n_write1 = 0, n_write0 = 0;
    int fail1 = 0, fail0 = 0;

    double total_energy(double e_sense) const {
        return energy_write + static_cast<double>(skipped) * e_sense;
    }
};

WordWrite write_word(std::uint64_t word_old, std::uint64_t word_new, QualityLevel level,
                     const DriverConfig& cfg, const MtjParams& mtj,
                     const WritePolicy& policy, Rng& rng, int width = 64);

} // namespace extent

#endif
