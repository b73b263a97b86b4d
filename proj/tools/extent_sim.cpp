// extent-sim: approximate STT-RAM write simulator command line.
//
// Subcommands: device, mc, trace, image, calibrate, gen-trace.
// Exit codes: 0 success, 1 usage/parse error, 2 domain/regime error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "extent/calibrate.hpp"
#include "extent/config.hpp"
#include "extent/errors.hpp"
#include "extent/image.hpp"
#include "extent/trace.hpp"
#include "extent/units.hpp"
#include "extent/variation.hpp"

namespace {

using namespace extent;

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir = ".";
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path,
                    "config file (falls back to $EXTENT_SIM_CONFIG)");
    cmd->add_option("--set", opts.overrides,
                    "override a config value, section.key=value (repeatable)");
    cmd->add_option("--out", opts.out_dir, "output directory for artifacts");
}

RunConfig make_config(const CommonOpts& opts) {
    RunConfig cfg;
    std::string path = opts.config_path;
    if (path.empty()) {
        if (const char* env = std::getenv("EXTENT_SIM_CONFIG")) path = env;
    }
    if (!path.empty()) cfg = load_config_file(path);
    for (const std::string& kv : opts.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw usage_error("--set expects section.key=value, got '" + kv + "'");
        apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    validate(cfg);
    return cfg;
}

std::ofstream open_out(const CommonOpts& opts, const std::string& name) {
    const std::string path = opts.out_dir + "/" + name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw usage_error("cannot write output file '" + path + "'");
    return out;
}

std::vector<double> sweep_values(double from, double to, int steps) {
    if (steps < 1) throw usage_error("--steps must be at least 1");
    std::vector<double> values;
    values.reserve(steps);
    if (steps == 1) {
        values.push_back(from);
        return values;
    }
    for (int i = 0; i < steps; ++i)
        values.push_back(from + (to - from) * static_cast<double>(i) / (steps - 1));
    return values;
}

ScenarioSpec parse_scenario(const std::string& scenario, const std::string& level) {
    ScenarioSpec spec;
    if (scenario == "write1") spec.kind = Scenario::WriteOne;
    else if (scenario == "write0") spec.kind = Scenario::WriteZero;
    else throw usage_error("scenario must be write1 or write0");
    spec.level = parse_quality_name(level);
    return spec;
}

int cmd_device(const CommonOpts& common, const std::string& op, const std::string& model,
               double tw_ns, double tsw_ns, std::optional<double> iw_ua, double vsb_v,
               double vgs_v, double vds_v, double t_k, const std::string& sweep_path,
               double from, double to, int steps, const std::string& scenario,
               const std::string& level) {
    const RunConfig cfg = make_config(common);

    if (!sweep_path.empty()) {
        const ScenarioSpec spec = parse_scenario(scenario, level);
        const auto rows = sweep(sweep_path, sweep_values(from, to, steps), spec, cfg);
        auto out = open_out(common, "sweep.csv");
        out << "value,energy_pj,latency_ns,wer\n";
        char line[160];
        for (const SweepRow& row : rows) {
            std::snprintf(line, sizeof(line), "%.9g,%.9g,%.9g,%.9g\n", row.value,
                          row.energy / unit::pj, row.latency / unit::ns, row.wer);
            out << line;
        }
        std::cout << rows.size() << " sweep rows written to sweep.csv\n";
        return 0;
    }

    char buf[64];
    if (op == "wer") {
        double value = 0.0;
        if (model == "exp" && tsw_ns > 0.0) {
            // Direct survival evaluation when the mean switching time is given.
            value = std::exp(-tw_ns / tsw_ns);
        } else {
            WerModel m;
            if (model == "thermal") m = WerModel::Thermal;
            else if (model == "llg") m = WerModel::Llg;
            else if (model == "exp") m = WerModel::Exponential;
            else throw usage_error("--model must be thermal, llg or exp");
            if (!iw_ua) throw usage_error("--iw-ua is required for this model");
            value = wer(m, *iw_ua * unit::ua, tw_ns * unit::ns, cfg.mtj);
        }
        std::snprintf(buf, sizeof(buf), "%.4e\n", value);
        std::cout << buf;
        return 0;
    }
    if (op == "tsw") {
        if (!iw_ua) throw usage_error("--iw-ua is required for --op tsw");
        const double t = mean_switching_time(*iw_ua * unit::ua, cfg.mtj);
        std::snprintf(buf, sizeof(buf), "%.6g\n", t / unit::ns);
        std::cout << buf;
        return 0;
    }
    if (op == "psw") {
        const double p = switching_probability(tw_ns * unit::ns, cfg.driver.vddh, cfg.mtj);
        std::snprintf(buf, sizeof(buf), "%.4e\n", p);
        std::cout << buf;
        return 0;
    }
    if (op == "resistance") {
        std::snprintf(buf, sizeof(buf), "%.6g %.6g\n",
                      resistance(CellState::from_bit(0), cfg.mtj),
                      resistance(CellState::from_bit(1), cfg.mtj));
        std::cout << buf;
        return 0;
    }
    if (op == "ic") {
        std::snprintf(buf, sizeof(buf), "%.6g\n",
                      critical_current(cfg.mtj, cfg.mtj.temperature, IcMode::Physics) /
                          unit::ua);
        std::cout << buf;
        return 0;
    }
    if (op == "jc0") {
        std::snprintf(buf, sizeof(buf), "%.6g\n",
                      critical_current_density(SwitchDirection::PtoAP, cfg.mtj));
        std::cout << buf;
        return 0;
    }
    if (op == "vth") {
        std::snprintf(buf, sizeof(buf), "%.6g\n", threshold_voltage(vsb_v, cfg.cmos));
        std::cout << buf;
        return 0;
    }
    if (op == "ids") {
        const double v_th = threshold_voltage(vsb_v, cfg.cmos);
        const double i =
            vgs_v > v_th
                ? triode_current(vgs_v, vds_v, mobility(t_k, cfg.cmos), cfg.cmos, v_th)
                : subthreshold_current(vgs_v, vds_v, cfg.cmos, v_th);
        std::snprintf(buf, sizeof(buf), "%.6g\n", i / unit::ua);
        std::cout << buf;
        return 0;
    }
    if (op == "mobility") {
        std::snprintf(buf, sizeof(buf), "%.6g\n", mobility(t_k, cfg.cmos));
        std::cout << buf;
        return 0;
    }
    throw usage_error("--op must be wer, tsw, psw, resistance, ic, jc0, vth, ids or mobility");
}

int cmd_mc(const CommonOpts& common, std::uint64_t trials, std::uint64_t seed,
           const std::string& scenario, const std::string& level, int threads) {
    const RunConfig cfg = make_config(common);
    const ScenarioSpec spec = parse_scenario(scenario, level);
    const VariationSpec var = default_variation_spec(cfg.variation);
    const McResult result = run_monte_carlo(spec, trials, seed, var, cfg, threads);

    auto rows = open_out(common, "mc_trials.csv");
    rows << "trial,param_hash,energy_pj,latency_ns,switched\n";
    char line[160];
    for (const TrialRow& row : result.rows) {
        std::snprintf(line, sizeof(line), "%llu,%016llx,%.9g,%.9g,%d\n",
                      static_cast<unsigned long long>(row.trial),
                      static_cast<unsigned long long>(row.param_hash),
                      row.energy / unit::pj, row.latency / unit::ns,
                      row.switched ? 1 : 0);
        rows << line;
    }

    auto summary = open_out(common, "mc_summary.csv");
    summary << "metric,min,max,mean,std\n";
    const auto emit = [&](const char* name, const MetricSummary& m, double scale) {
        std::snprintf(line, sizeof(line), "%s,%.9g,%.9g,%.9g,%.9g\n", name,
                      m.min / scale, m.max / scale, m.mean / scale, m.std_dev / scale);
        summary << line;
    };
    emit("energy_pj", result.summary.energy, unit::pj);
    emit("latency_ns", result.summary.latency, unit::ns);
    emit("wer", result.summary.wer, 1.0);
    summary << "histogram_bin,lo_pj,hi_pj,count\n";
    const Histogram& h = result.summary.energy_hist;
    for (int b = 0; b < kHistogramBins; ++b) {
        const double lo = h.lo + (h.hi - h.lo) * b / kHistogramBins;
        const double hi = h.lo + (h.hi - h.lo) * (b + 1) / kHistogramBins;
        std::snprintf(line, sizeof(line), "%d,%.9g,%.9g,%llu\n", b, lo / unit::pj,
                      hi / unit::pj,
                      static_cast<unsigned long long>(h.counts[b]));
        summary << line;
    }

    std::snprintf(line, sizeof(line),
                  "mc: %llu trials, energy %.3f..%.3f pJ (mean %.3f), seed %llu\n",
                  static_cast<unsigned long long>(result.summary.n_trials),
                  result.summary.energy.min / unit::pj,
                  result.summary.energy.max / unit::pj,
                  result.summary.energy.mean / unit::pj,
                  static_cast<unsigned long long>(seed));
    std::cout << line;
    return 0;
}

int cmd_trace(const CommonOpts& common, const std::string& in_path, std::uint64_t seed) {
    const RunConfig cfg = make_config(common);
    const auto trace = load_trace_file(in_path);
    const RunReport report = simulate_trace(trace, cfg, seed);
    auto out = open_out(common, "trace_report.csv");
    write_report_csv(out, report);
    std::cout << format_report_summary(report);
    return 0;
}

int cmd_image(const CommonOpts& common, const std::string& in_path,
              const std::string& level_name_str, std::uint64_t seed) {
    const RunConfig cfg = make_config(common);
    const QualityLevel level = parse_quality_name(level_name_str);
    Image img = load_pnm_file(in_path);
    if (img.channels == 3) img = grayscale(img);
    const StoredImage stored = store_through_memory(img, level, cfg, seed);

    auto img_out = open_out(common, "degraded.pgm");
    write_pnm(img_out, stored.image);
    auto csv = open_out(common, "quality.csv");
    csv << "level,psnr_db,flipped_bits,energy_pj\n";
    csv << quality_csv_row(stored.report) << "\n";
    std::cout << quality_csv_row(stored.report) << "\n";
    return 0;
}

int cmd_calibrate(const CommonOpts& common, double e_pj, double t_ns, double e_basic_pj,
                  double t_basic_ns, double asymmetry) {
    const RunConfig cfg = make_config(common);
    CalibrationTargets targets;
    targets.e_write1_exact = e_pj * unit::pj;
    targets.t_write1_exact = t_ns * unit::ns;
    targets.e_basic = e_basic_pj * unit::pj;
    targets.t_basic = t_basic_ns * unit::ns;
    targets.asymmetry = asymmetry;
    const CalibrationResult result = calibrate(targets, cfg);
    const std::string report = format_calibration_report(result, targets);
    auto out = open_out(common, "calibrated_driver.cfg");
    out << report;
    std::cout << report;
    return 0;
}

int cmd_gen_trace(const CommonOpts& common, std::size_t writes, double m00, double m01,
                  double m10, double m11, std::uint64_t seed,
                  const std::string& out_name) {
    (void)make_config(common); // validates config/overrides even though unused
    const TransitionMix mix{m00, m01, m10, m11};
    const auto trace = generate_synthetic_trace(writes, mix, seed);
    auto out = open_out(common, out_name);
    write_trace(out, trace);
    std::cout << trace.size() << " records written to " << out_name << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"approximate STT-RAM write-circuit simulator"};
    app.require_subcommand(1);

    CommonOpts common;

    // device
    auto* device = app.add_subcommand("device", "evaluate device formulas or run sweeps");
    add_common(device, common);
    std::string dev_op = "wer", dev_model = "exp";
    double tw_ns = 10.0, tsw_ns = 0.0;
    std::optional<double> iw_ua;
    std::string sweep_path;
    double sweep_from = 0.0, sweep_to = 0.0;
    int sweep_steps = 1;
    std::string scenario = "write1", level = "q11";
    device->add_option("--op", dev_op, "wer|tsw|psw|resistance|ic|jc0|vth|ids|mobility");
    device->add_option("--model", dev_model, "wer model: thermal|llg|exp");
    device->add_option("--tw-ns", tw_ns, "pulse width, ns");
    device->add_option("--tsw-ns", tsw_ns, "mean switching time, ns (exp model shortcut)");
    device->add_option("--iw-ua", iw_ua, "write current, uA");
    double vsb_v = 0.0, vgs_v = 0.9, vds_v = 0.05, t_k = 300.0;
    device->add_option("--vsb-v", vsb_v, "body bias, V");
    device->add_option("--vgs-v", vgs_v, "gate-source voltage, V");
    device->add_option("--vds-v", vds_v, "drain-source voltage, V");
    device->add_option("--t-k", t_k, "temperature, K");
    device->add_option("--sweep", sweep_path, "parameter path to sweep (e.g. driver.vddh)");
    device->add_option("--from", sweep_from, "sweep start value (SI units)");
    device->add_option("--to", sweep_to, "sweep end value (SI units)");
    device->add_option("--steps", sweep_steps, "sweep point count");
    device->add_option("--scenario", scenario, "write1|write0");
    device->add_option("--level", level, "quality level q00..q11");

    // mc
    auto* mc = app.add_subcommand("mc", "Monte Carlo process-variation study");
    add_common(mc, common);
    std::uint64_t trials = 1000, seed = 1;
    int threads = 1;
    mc->add_option("--trials", trials, "number of trials");
    mc->add_option("--seed", seed, "random seed");
    mc->add_option("--scenario", scenario, "write1|write0");
    mc->add_option("--level", level, "quality level q00..q11");
    mc->add_option("--threads", threads, "worker threads (results are thread-count invariant)");

    // trace
    auto* trace = app.add_subcommand("trace", "trace-driven memory simulation");
    add_common(trace, common);
    std::string trace_in;
    trace->add_option("--in", trace_in, "trace file")->required();
    trace->add_option("--seed", seed, "random seed");

    // image
    auto* image = app.add_subcommand("image", "store an image through approximate memory");
    add_common(image, common);
    std::string image_in;
    image->add_option("--in", image_in, "PGM (P5) or PPM (P6) input")->required();
    image->add_option("--level", level, "quality level q00..q11");
    image->add_option("--seed", seed, "random seed");

    // calibrate
    auto* cal = app.add_subcommand("calibrate", "solve driver constants for the anchor targets");
    add_common(cal, common);
    double e_pj = 337.2, t_ns = 6.9, e_basic_pj = 1046.0, t_basic_ns = 19.0,
           asymmetry = 2.5;
    cal->add_option("--energy-pj", e_pj, "exact write-1 energy target, pJ");
    cal->add_option("--latency-ns", t_ns, "exact write-1 latency target, ns");
    cal->add_option("--basic-energy-pj", e_basic_pj, "basic profile energy target, pJ");
    cal->add_option("--basic-latency-ns", t_basic_ns, "basic profile latency target, ns");
    cal->add_option("--asymmetry", asymmetry, "write-1 over write-0 energy ratio");

    // gen-trace
    auto* gen = app.add_subcommand("gen-trace", "generate a synthetic trace");
    add_common(gen, common);
    std::size_t writes = 10000;
    double m00 = 0.2, m01 = 0.8, m10 = 0.0, m11 = 0.0;
    std::string gen_out = "synthetic.trc";
    gen->add_option("--writes", writes, "number of write records");
    gen->add_option("--m00", m00, "0->0 transition share");
    gen->add_option("--m01", m01, "0->1 transition share");
    gen->add_option("--m10", m10, "1->0 transition share");
    gen->add_option("--m11", m11, "1->1 transition share");
    gen->add_option("--seed", seed, "random seed");
    gen->add_option("--file", gen_out, "output trace file name");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (device->parsed())
            return cmd_device(common, dev_op, dev_model, tw_ns, tsw_ns, iw_ua, vsb_v,
                              vgs_v, vds_v, t_k, sweep_path, sweep_from, sweep_to,
                              sweep_steps, scenario, level);
        if (mc->parsed()) return cmd_mc(common, trials, seed, scenario, level, threads);
        if (trace->parsed()) return cmd_trace(common, trace_in, seed);
        if (image->parsed()) return cmd_image(common, image_in, level, seed);
        if (cal->parsed())
            return cmd_calibrate(common, e_pj, t_ns, e_basic_pj, t_basic_ns, asymmetry);
        if (gen->parsed())
            return cmd_gen_trace(common, writes, m00, m01, m10, m11, seed, gen_out);
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const calibration_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const regime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
