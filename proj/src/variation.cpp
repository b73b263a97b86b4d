#include "extent/variation.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <thread>

#include "extent/errors.hpp"

namespace extent {

VariationSpec default_variation_spec(const VariationConfig& cfg) {
    VariationSpec spec;
    spec.entries = {
        {"mtj.t_ox", cfg.t_ox_sigma_frac, cfg.t_ox_clamp_frac},
        {"mtj.t_fl", cfg.t_fl_sigma_frac, cfg.t_fl_clamp_frac},
        {"mtj.r", cfg.res_sigma_frac, cfg.res_clamp_frac},
        {"cmos.w", cfg.cmos_sigma_frac, cfg.cmos_clamp_frac},
        {"cmos.l", cfg.cmos_sigma_frac, cfg.cmos_clamp_frac},
        {"cmos.v_th0", cfg.cmos_sigma_frac, cfg.cmos_clamp_frac},
    };
    spec.res_correlation = cfg.res_correlation;
    return spec;
}

namespace {

double clamp_rel(double rel, double clamp_frac) {
    if (clamp_frac <= 0.0) return rel;
    return std::clamp(rel, -clamp_frac, clamp_frac);
}

struct HashAcc {
    std::uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a
    void add(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xffu;
            h *= 0x100000001b3ULL;
        }
    }
};

// Applies an absolute value to a parameter path, folding derived
// sensitivities into the device/driver model.
void set_param(RunConfig& cfg, const std::string& path, double value,
               const VariationConfig& var) {
    if (path == "mtj.t_ox") {
        // Tunneling resistance rises exponentially with barrier thickness.
        const double factor = std::exp(var.k_ox * (value - cfg.mtj.t_ox) / cfg.mtj.t_ox);
        cfg.mtj.r_p *= factor;
        cfg.mtj.r_ap *= factor;
        cfg.mtj.t_ox = value;
    } else if (path == "mtj.t_fl") {
        // Threshold current density scales with the free-layer thickness.
        cfg.mtj.i_c *= value / cfg.mtj.t_fl;
        cfg.mtj.t_fl = value;
    } else if (path == "mtj.r_p") {
        cfg.mtj.r_p = value;
    } else if (path == "mtj.r_ap") {
        cfg.mtj.r_ap = value;
    } else if (path == "mtj.i_c") {
        cfg.mtj.i_c = value;
    } else if (path == "mtj.theta0") {
        cfg.mtj.theta0 = value;
    } else if (path == "cmos.w") {
        cfg.driver.r_on_pair *= cfg.cmos.w / value;
        cfg.cmos.w = value;
    } else if (path == "cmos.l") {
        cfg.driver.r_on_pair *= value / cfg.cmos.l;
        cfg.cmos.l = value;
    } else if (path == "cmos.v_th0") {
        const double v_ov_old = cfg.driver.vddh - cfg.cmos.v_th0;
        const double v_ov_new = cfg.driver.vddh - value;
        if (!(v_ov_new > 0.0))
            throw domain_error("variation: threshold above the supply rail");
        cfg.driver.r_on_pair *= v_ov_old / v_ov_new;
        cfg.cmos.v_th0 = value;
    } else if (path == "driver.vddl") {
        cfg.driver.vddl = value;
    } else if (path == "driver.vddh") {
        cfg.driver.vddh = value;
    } else if (path == "driver.r_on_pair") {
        cfg.driver.r_on_pair = value;
    } else if (path == "driver.t_pulse") {
        cfg.driver.t_pulse = value;
    } else {
        throw usage_error("unknown parameter path '" + path + "'");
    }
}

double get_param(const RunConfig& cfg, const std::string& path) {
    if (path == "mtj.t_ox") return cfg.mtj.t_ox;
    if (path == "mtj.t_fl") return cfg.mtj.t_fl;
    if (path == "mtj.r_p") return cfg.mtj.r_p;
    if (path == "mtj.r_ap") return cfg.mtj.r_ap;
    if (path == "mtj.i_c") return cfg.mtj.i_c;
    if (path == "mtj.theta0") return cfg.mtj.theta0;
    if (path == "cmos.w") return cfg.cmos.w;
    if (path == "cmos.l") return cfg.cmos.l;
    if (path == "cmos.v_th0") return cfg.cmos.v_th0;
    if (path == "driver.vddl") return cfg.driver.vddl;
    if (path == "driver.vddh") return cfg.driver.vddh;
    if (path == "driver.r_on_pair") return cfg.driver.r_on_pair;
    if (path == "driver.t_pulse") return cfg.driver.t_pulse;
    throw usage_error("unknown parameter path '" + path + "'");
}

} // namespace

RunConfig sample_parameters(const VariationSpec& spec, Rng& rng, const RunConfig& nominal) {
    RunConfig out = nominal;
    for (const VariationEntry& entry : spec.entries) {
        if (entry.path == "mtj.r") {
            // One correlated pair of relative draws for the two resistances.
            const double z1 = rng.gaussian();
            const double z2 = rng.gaussian();
            const double rho = std::clamp(spec.res_correlation, -1.0, 1.0);
            const double z_ap = rho * z1 + std::sqrt(1.0 - rho * rho) * z2;
            const double rel_p = clamp_rel(entry.sigma_frac * z1, entry.clamp_frac);
            const double rel_ap = clamp_rel(entry.sigma_frac * z_ap, entry.clamp_frac);
            out.mtj.r_p = nominal.mtj.r_p * (1.0 + rel_p);
            out.mtj.r_ap = nominal.mtj.r_ap * (1.0 + rel_ap);
            continue;
        }
        const double nominal_value = get_param(nominal, entry.path);
        const double rel = clamp_rel(entry.sigma_frac * rng.gaussian(), entry.clamp_frac);
        set_param(out, entry.path, nominal_value * (1.0 + rel), nominal.variation);
    }
    return out;
}

namespace {

TrialRow run_trial(const ScenarioSpec& scenario, std::uint64_t trial, std::uint64_t seed,
                   const VariationSpec& spec, const RunConfig& nominal) {
    Rng rng = Rng::substream(seed, trial);
    const RunConfig cfg = sample_parameters(spec, rng, nominal);

    HashAcc hash;
    hash.add(cfg.mtj.r_p);
    hash.add(cfg.mtj.r_ap);
    hash.add(cfg.mtj.i_c);
    hash.add(cfg.mtj.t_ox);
    hash.add(cfg.mtj.t_fl);
    hash.add(cfg.driver.r_on_pair);
    hash.add(cfg.cmos.v_th0);

    TrialRow row;
    row.trial = trial;
    row.param_hash = hash.h;

    const int target = scenario.kind == Scenario::WriteOne ? 1 : 0;
    const CellState cell = CellState::from_bit(1 - target);
    const WriteRequest req{target, scenario.level};

    const double r_source = resistance(cell, cfg.mtj);
    const SwitchingPoint pt = switching_point(scenario.level, target, r_source,
                                              cfg.driver, cfg.mtj, cfg.write,
                                              /*required=*/false);
    row.wer = pt.wer;
    if (!pt.in_regime) {
        // Sub-threshold drive: the pulse runs its full width and the cell
        // never switches. Recorded as a failed trial, not an abort.
        const double overhead = (target == 0 ? cfg.driver.e_driver_w0
                                             : cfg.driver.e_driver_for(scenario.level)) +
                                cfg.driver.e_detector;
        row.energy = pt.v_supply * pt.i_w * cfg.driver.t_pulse + overhead;
        row.latency = cfg.driver.t_pulse;
        row.switched = false;
        return row;
    }

    const CellWrite cw = write_cell(cell, req, cfg.driver, cfg.mtj, cfg.write, rng);
    row.energy = cw.outcome.energy;
    row.latency = cw.outcome.latency;
    row.switched = cw.outcome.result == WriteResult::Switched;
    return row;
}

MetricSummary summarize_metric(const std::vector<TrialRow>& rows,
                               double (*pick)(const TrialRow&)) {
    MetricSummary m;
    if (rows.empty()) return m;
    m.min = m.max = pick(rows.front());
    double sum = 0.0;
    for (const TrialRow& row : rows) {
        const double v = pick(row);
        m.min = std::min(m.min, v);
        m.max = std::max(m.max, v);
        sum += v;
    }
    m.mean = sum / static_cast<double>(rows.size());
    double sq = 0.0;
    for (const TrialRow& row : rows) {
        const double d = pick(row) - m.mean;
        sq += d * d;
    }
    m.std_dev = std::sqrt(sq / static_cast<double>(rows.size()));
    return m;
}

} // namespace

McSummary summarize(const std::vector<TrialRow>& rows, std::uint64_t seed) {
    McSummary s;
    s.n_trials = rows.size();
    s.seed = seed;
    s.energy = summarize_metric(rows, [](const TrialRow& r) { return r.energy; });
    s.latency = summarize_metric(rows, [](const TrialRow& r) { return r.latency; });
    s.wer = summarize_metric(rows, [](const TrialRow& r) { return r.wer; });

    s.energy_hist.lo = s.energy.min;
    s.energy_hist.hi = s.energy.max;
    const double span = s.energy_hist.hi - s.energy_hist.lo;
    for (const TrialRow& row : rows) {
        int bin = 0;
        if (span > 0.0) {
            bin = static_cast<int>((row.energy - s.energy_hist.lo) / span *
                                   kHistogramBins);
            bin = std::clamp(bin, 0, kHistogramBins - 1);
        }
        ++s.energy_hist.counts[bin];
    }
    return s;
}

McResult run_monte_carlo(const ScenarioSpec& scenario, std::uint64_t n,
                         std::uint64_t seed, const VariationSpec& spec,
                         const RunConfig& nominal, int threads) {
    if (n < 1) throw usage_error("monte carlo needs at least one trial");
    McResult result;
    result.rows.resize(n);

    const int workers = std::max(1, threads);
    if (workers == 1) {
        for (std::uint64_t k = 0; k < n; ++k)
            result.rows[k] = run_trial(scenario, k, seed, spec, nominal);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const std::uint64_t chunk = (n + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const std::uint64_t lo = w * chunk;
            const std::uint64_t hi = std::min(n, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back([&, lo, hi] {
                for (std::uint64_t k = lo; k < hi; ++k)
                    result.rows[k] = run_trial(scenario, k, seed, spec, nominal);
            });
        }
        for (std::thread& t : pool) t.join();
    }

    result.summary = summarize(result.rows, seed);
    return result;
}

std::vector<SweepRow> sweep(const std::string& param_path, const std::vector<double>& values,
                            const ScenarioSpec& scenario, const RunConfig& nominal) {
    if (values.empty()) throw usage_error("sweep needs a non-empty value list");
    std::vector<SweepRow> rows;
    rows.reserve(values.size());
    const int target = scenario.kind == Scenario::WriteOne ? 1 : 0;
    const CellState cell = CellState::from_bit(1 - target);
    for (double value : values) {
        RunConfig cfg = nominal;
        set_param(cfg, param_path, value, nominal.variation);
        const ExpectedOutcome out =
            expected_outcome(scenario.level, target, cell, cfg.driver, cfg.mtj, cfg.write);
        SweepRow row;
        row.value = value;
        row.energy = out.energy_mean;
        row.latency = out.latency_conditional;
        row.wer = out.point.wer;
        rows.push_back(row);
    }
    return rows;
}

} // namespace extent
