#include "extent/write_engine.hpp"

#include <algorithm>
#include <cmath>

#include "extent/errors.hpp"

namespace extent {

SoftErrorEffect inject_soft_error(const SoftErrorEvent& ev, double /*i_w*/,
                                  const DriverConfig& cfg,
                                  const SoftErrorThresholds& thresholds) {
    if (ev.t_strike < 0.0 || ev.t_strike > cfg.t_pulse)
        throw domain_error("soft error: strike must fall inside the pulse window");
    if (!(ev.tau_fall > ev.tau_rise && ev.tau_rise > 0.0))
        throw domain_error("soft error: require tau_fall > tau_rise > 0");

    SoftErrorEffect effect;
    const double window = cfg.t_pulse - ev.t_strike;
    // Integral of (Q/(tf-tr)) * (exp(-t/tf) - exp(-t/tr)) over [0, window].
    const double tf = ev.tau_fall;
    const double tr = ev.tau_rise;
    const double collected = ev.charge / (tf - tr) *
                             (tf * (1.0 - std::exp(-window / tf)) -
                              tr * (1.0 - std::exp(-window / tr)));
    effect.delta_q = ev.polarity == GlitchPolarity::Negative ? -collected : collected;

    // Positive glitches are compensated by the driver and have no modeled
    // effect on the write.
    const double magnitude = std::abs(effect.delta_q);
    if (ev.polarity == GlitchPolarity::Negative && magnitude >= thresholds.q_fail)
        effect.classification = SoftErrorClass::FailedWrite;
    else if (ev.polarity == GlitchPolarity::Negative && magnitude >= thresholds.q_delay)
        effect.classification = SoftErrorClass::Delayed;
    else
        effect.classification = SoftErrorClass::None;
    return effect;
}

SwitchingPoint switching_point(QualityLevel level, int target_bit, double r_source,
                               const DriverConfig& cfg, const MtjParams& mtj,
                               const WritePolicy& policy, bool required) {
    SwitchingPoint pt;
    const DriverPath path = resolve_path(level, target_bit, cfg);
    pt.v_supply = cfg.supply_voltage(path.supply);
    pt.i_w = drive_current(level, target_bit, r_source, cfg);

    // Writing zero is the AP->P transition; its critical current is scaled.
    MtjParams effective = mtj;
    if (target_bit == 0) effective.i_c = mtj.i_c * policy.ap_to_p_ic_scale;
    const double kappa = target_bit == 0 ? 1.0 : cfg.overdrive_for(level);
    pt.i_eff = kappa * pt.i_w;

    if (pt.i_eff > effective.lambda * effective.i_c) {
        pt.in_regime = true;
        pt.t_sw = mean_switching_time(pt.i_eff, effective);
        pt.wer = std::exp(-cfg.t_pulse / pt.t_sw);
    } else if (required) {
        throw regime_error("thermal-activation regime: precessional switching law inapplicable");
    } else {
        pt.t_sw = 0.0;
        pt.wer = 1.0;
    }
    return pt;
}

namespace {

double overhead_energy(QualityLevel level, int target_bit, const DriverConfig& cfg) {
    const double e_driver = target_bit == 0 ? cfg.e_driver_w0 : cfg.e_driver_for(level);
    return e_driver + cfg.e_detector;
}

} // namespace

ExpectedOutcome expected_outcome(QualityLevel level, int target_bit, CellState cell,
                                 const DriverConfig& cfg, const MtjParams& mtj,
                                 const WritePolicy& policy) {
    ExpectedOutcome out;
    const double r_source = resistance(cell, mtj);
    out.point = switching_point(level, target_bit, r_source, cfg, mtj, policy);
    const double overhead = overhead_energy(level, target_bit, cfg);
    const double supply_power = out.point.v_supply * out.point.i_w;

    out.latency_at_mean = out.point.t_sw;
    out.energy_at_mean = supply_power * out.point.t_sw + overhead;

    // E[t | t <= T] of the exponential law truncated at the pulse width.
    const double t_sw = out.point.t_sw;
    const double T = cfg.t_pulse;
    const double fail = out.point.wer;
    const double p_switch = 1.0 - fail;
    out.latency_conditional =
        p_switch > 0.0 ? t_sw - T * fail / p_switch : T;
    out.energy_mean = supply_power * (out.latency_conditional * p_switch + T * fail) +
                      overhead;
    return out;
}

CellWrite write_cell(CellState cell, const WriteRequest& req, const DriverConfig& cfg,
                     const MtjParams& mtj, const WritePolicy& policy, Rng& rng,
                     const SoftErrorEvent* strike,
                     const SoftErrorThresholds* thresholds) {
    CellWrite result;
    result.state = cell;

    const bool repetitive = cell.stored_bit() == req.target_bit;
    if (repetitive && policy.skip_mode != SkipMode::Off) {
        result.outcome.result = WriteResult::Skipped;
        result.outcome.energy = cfg.e_sense;
        result.outcome.latency = policy.sense_latency;
        return result;
    }

    const double r_source = resistance(cell, mtj);
    const double overhead = overhead_energy(req.level, req.target_bit, cfg);

    if (repetitive) {
        // Suppression disabled: the driver holds the full pulse and the
        // comparator never fires (the cell already matches).
        const SwitchingPoint pt =
            switching_point(req.level, req.target_bit, r_source, cfg, mtj, policy, false);
        result.outcome.result = WriteResult::Switched;
        result.outcome.latency = cfg.t_pulse;
        result.outcome.energy = pt.v_supply * pt.i_w * cfg.t_pulse + overhead;
        return result;
    }

    const SwitchingPoint pt =
        switching_point(req.level, req.target_bit, r_source, cfg, mtj, policy);
    double t_switch = sample_switching_time(rng.uniform01(), pt.t_sw);
    result.outcome.t_switch_sampled = t_switch;

    bool forced_fail = false;
    if (strike && thresholds) {
        const SoftErrorEffect effect = inject_soft_error(*strike, pt.i_w, cfg, *thresholds);
        if (effect.classification == SoftErrorClass::FailedWrite) {
            forced_fail = true;
            result.outcome.soft_error_applied = true;
        } else if (effect.classification == SoftErrorClass::Delayed) {
            t_switch += std::abs(effect.delta_q) / pt.i_w;
            result.outcome.soft_error_applied = true;
        }
    }

    if (!forced_fail && t_switch <= cfg.t_pulse) {
        result.outcome.result = WriteResult::Switched;
        result.outcome.latency = t_switch;
        result.outcome.energy = pt.v_supply * pt.i_w * t_switch + overhead;
        result.state = CellState::from_bit(req.target_bit);
    } else {
        result.outcome.result = WriteResult::Failed;
        result.outcome.latency = cfg.t_pulse;
        result.outcome.energy = pt.v_supply * pt.i_w * cfg.t_pulse + overhead;
    }
    return result;
}

WordWrite write_word(std::uint64_t word_old, std::uint64_t word_new, QualityLevel level,
                     const DriverConfig& cfg, const MtjParams& mtj,
                     const WritePolicy& policy, Rng& rng, int width) {
    if (width < 1 || width > 64)
        throw usage_error("write word: width must lie in [1, 64]");

    WordWrite agg;
    agg.word = word_old;

    WritePolicy bit_policy = policy;
    if (policy.skip_mode == SkipMode::Word) {
        // Word-granular comparator: skip only when the whole word matches,
        // otherwise every cell is driven.
        if (word_old == word_new) {
            agg.skipped = width;
            agg.latency = policy.sense_latency;
            return agg;
        }
        bit_policy.skip_mode = SkipMode::Off;
    }

    for (int bit = 0; bit < width; ++bit) {
        const int old_bit = static_cast<int>((word_old >> bit) & 1u);
        const int new_bit = static_cast<int>((word_new >> bit) & 1u);
        WriteRequest req{new_bit, level};
        const CellWrite cw =
            write_cell(CellState::from_bit(old_bit), req, cfg, mtj, bit_policy, rng);
        switch (cw.outcome.result) {
        case WriteResult::Skipped:
            ++agg.skipped;
            break;
        case WriteResult::Switched:
        case WriteResult::Failed: {
            if (cw.outcome.result == WriteResult::Switched) ++agg.switched;
            else ++agg.failed;
            agg.energy_write += cw.outcome.energy;
            if (new_bit == 1) {
                agg.e_write1 += cw.outcome.energy;
                agg.lat1_sum += cw.outcome.latency;
                ++agg.n_write1;
                if (cw.outcome.result == WriteResult::Failed) ++agg.fail1;
            } else {
                agg.e_write0 += cw.outcome.energy;
                agg.lat0_sum += cw.outcome.latency;
                ++agg.n_write0;
                if (cw.outcome.result == WriteResult::Failed) ++agg.fail0;
            }
            break;
        }
        }
        agg.latency = std::max(agg.latency, cw.outcome.latency);
        const std::uint64_t mask = 1ull << bit;
        agg.word = (agg.word & ~mask) |
                   (static_cast<std::uint64_t>(cw.state.stored_bit()) << bit);
    }
    return agg;
}

} // namespace extent
