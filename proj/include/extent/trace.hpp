#ifndef EXTENT_TRACE_HPP
#define EXTENT_TRACE_HPP

#include <array>
#include <cstdint>
#include <deque>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "extent/config.hpp"
#include "extent/driver.hpp"

namespace extent {

enum class TraceOp : std::uint8_t { Read, Write };

struct TraceRecord {
    TraceOp op = TraceOp::Read;
    std::uint64_t address = 0;
    std::uint64_t data = 0; // writes only
    std::optional<QualityLevel> priority;
};

// Line-oriented trace grammar:
//   W <hex-addr> <hex-64bit-data> [<2-bit priority: 00|01|10|11>]
//   R <hex-addr>
//   # comment
std::vector<TraceRecord> parse_trace(std::istream& in);
std::vector<TraceRecord> load_trace_file(const std::string& path);
void write_trace(std::ostream& out, const std::vector<TraceRecord>& records);

// Target fractions over the four per-bit transitions; must sum to one.
struct TransitionMix {
    double m00 = 0.0;
    double m01 = 0.0;
    double m10 = 0.0;
    double m11 = 0.0;
};

// Synthetic write-only trace whose realized per-bit transition fractions
// match the mix (within 1% for n_writes >= 1e4, assuming a zero-initialized
// store). Each emitted word is transition-pure; one-state addresses are set
// up on demand from a small recycled pool.
std::vector<TraceRecord> generate_synthetic_trace(std::size_t n_writes,
                                                  const TransitionMix& mix,
                                                  std::uint64_t seed);

// Per-block cache of the last declared quality level, FIFO eviction.
class ExtentTable {
public:
    explicit ExtentTable(std::size_t capacity) : capacity_(capacity) {}

    std::optional<QualityLevel> lookup(std::uint64_t block) const;
    void insert(std::uint64_t block, QualityLevel level);
    std::size_t size() const { return map_.size(); }
    std::size_t capacity() const { return capacity_; }

private:
    std::size_t capacity_;
    std::unordered_map<std::uint64_t, QualityLevel> map_;
    std::deque<std::uint64_t> fifo_;
};

// Explicit tag wins and updates the table; otherwise a table hit; otherwise
// the configured default.
QualityLevel quality_decode(const TraceRecord& rec, ExtentTable& table,
                            QualityLevel default_level, int block_bytes);

struct TransitionCounts {
    std::uint64_t t00 = 0, t01 = 0, t10 = 0, t11 = 0;
    std::uint64_t total() const { return t00 + t01 + t10 + t11; }
    double frac00() const { return ratio(t00); }
    double frac01() const { return ratio(t01); }
    double frac10() const { return ratio(t10); }
    double frac11() const { return ratio(t11); }

private:
    double ratio(std::uint64_t n) const {
        const std::uint64_t t = total();
        return t == 0 ? 0.0 : static_cast<double>(n) / static_cast<double>(t);
    }
};

// Deterministic initial word for a random-initialized store.
std::uint64_t store_init_word(StoreInit init, std::uint64_t seed, std::uint64_t address);

// Replays the intended store evolution (writes land fully) and counts the
// four per-bit transition types.
TransitionCounts transition_stats(const std::vector<TraceRecord>& trace,
                                  StoreInit init = StoreInit::Zero,
                                  std::uint64_t seed = 0);

struct RunReport {
    std::uint64_t writes = 0;
    std::uint64_t reads = 0;
    std::array<std::uint64_t, 4> level_writes = {0, 0, 0, 0}; // by QualityLevel
    TransitionCounts transitions;
    std::uint64_t skipped_bits = 0;
    std::uint64_t switched_bits = 0;
    std::uint64_t failed_bits = 0;
    double energy_written = 0.0; // J, executed bit writes
    double latency_total = 0.0;  // s, sum of per-word latencies
    double e_sense = 0.0;        // J, copied from the config for totals

    // Per-direction tallies of executed bit writes.
    double e_write1 = 0.0, e_write0 = 0.0;
    double lat1_sum = 0.0, lat0_sum = 0.0;
    std::uint64_t n_write1 = 0, n_write0 = 0;
    std::uint64_t fail1 = 0, fail0 = 0;

    double total_energy() const {
        return energy_written + static_cast<double>(skipped_bits) * e_sense;
    }
    std::uint64_t attempted_bits() const { return transitions.t01 + transitions.t10; }
    double effective_wer() const {
        const std::uint64_t n = attempted_bits();
        return n == 0 ? 0.0 : static_cast<double>(failed_bits) / static_cast<double>(n);
    }
};

RunReport simulate_trace(const std::vector<TraceRecord>& trace, const RunConfig& cfg,
                         std::uint64_t seed);

void write_report_csv(std::ostream& out, const RunReport& report);
std::string format_report_summary(const RunReport& report);

// Per-write (per executed cell write) averages used for baseline comparison.
struct PerWriteFigures {
    double energy = 0.0;  // J
    double latency = 0.0; // s
};

PerWriteFigures write1_figures(const RunReport& report);

struct BaselineRow {
    std::string name;
    double energy = 0.0;  // J per write
    double latency = 0.0; // s per write
};

std::vector<BaselineRow> default_baselines();

struct BaselineImprovement {
    std::string name;
    double energy_pct = 0.0;  // (1 - ours/baseline) * 100
    double latency_pct = 0.0;
};

// Requires at least the basic, ref18, ref21 and ref40 rows.
std::vector<BaselineImprovement> compare_baselines(const PerWriteFigures& ours,
                                                   const std::vector<BaselineRow>& baselines);

} // namespace extent

#endif
