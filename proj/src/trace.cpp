#include "extent/trace.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "extent/errors.hpp"
#include "extent/rng.hpp"
#include "extent/units.hpp"

namespace extent {

namespace {

struct Token {
    std::string text;
    int column = 0;
};

std::vector<Token> tokenize(const std::string& line) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i >= line.size()) break;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        tokens.push_back(Token{line.substr(start, i - start), static_cast<int>(start + 1)});
    }
    return tokens;
}

std::uint64_t parse_hex(const Token& tok, int lineno, const char* what) {
    const std::string& s = tok.text;
    std::size_t pos = 0;
    std::uint64_t v = 0;
    try {
        v = std::stoull(s, &pos, 16);
    } catch (const std::exception&) {
        throw parse_error(std::string("invalid ") + what + " '" + s + "'", lineno, tok.column);
    }
    if (pos != s.size())
        throw parse_error(std::string("invalid ") + what + " '" + s + "'", lineno, tok.column);
    return v;
}

} // namespace

std::vector<TraceRecord> parse_trace(std::istream& in) {
    std::vector<TraceRecord> records;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto tokens = tokenize(line);
        if (tokens.empty() || tokens[0].text[0] == '#') continue;

        const std::string& op = tokens[0].text;
        TraceRecord rec;
        if (op == "W") {
            if (tokens.size() < 3 || tokens.size() > 4)
                throw parse_error("write record needs address, data and an optional priority",
                                  lineno, tokens[0].column);
            rec.op = TraceOp::Write;
            rec.address = parse_hex(tokens[1], lineno, "address");
            rec.data = parse_hex(tokens[2], lineno, "data");
            if (tokens.size() == 4) {
                try {
                    rec.priority = parse_quality_tag(tokens[3].text);
                } catch (const usage_error&) {
                    throw parse_error("invalid priority '" + tokens[3].text + "'", lineno,
                                      tokens[3].column);
                }
            }
        } else if (op == "R") {
            if (tokens.size() != 2)
                throw parse_error("read record takes exactly one address", lineno,
                                  tokens[0].column);
            rec.op = TraceOp::Read;
            rec.address = parse_hex(tokens[1], lineno, "address");
        } else {
            throw parse_error("unknown record type '" + op + "'", lineno, tokens[0].column);
        }
        records.push_back(rec);
    }
    return records;
}

std::vector<TraceRecord> load_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open trace file '" + path + "'");
    return parse_trace(in);
}

void write_trace(std::ostream& out, const std::vector<TraceRecord>& records) {
    char buf[80];
    for (const TraceRecord& rec : records) {
        if (rec.op == TraceOp::Read) {
            std::snprintf(buf, sizeof(buf), "R 0x%llx\n",
                          static_cast<unsigned long long>(rec.address));
            out << buf;
        } else {
            std::snprintf(buf, sizeof(buf), "W 0x%llx 0x%016llx",
                          static_cast<unsigned long long>(rec.address),
                          static_cast<unsigned long long>(rec.data));
            out << buf;
            if (rec.priority) out << ' ' << to_string(*rec.priority);
            out << '\n';
        }
    }
}

std::vector<TraceRecord> generate_synthetic_trace(std::size_t n_writes,
                                                  const TransitionMix& mix,
                                                  std::uint64_t seed) {
    const double sum = mix.m00 + mix.m01 + mix.m10 + mix.m11;
    if (std::abs(sum - 1.0) > 1e-9)
        throw usage_error("transition mix fractions must sum to 1");
    if (mix.m00 < 0 || mix.m01 < 0 || mix.m10 < 0 || mix.m11 < 0)
        throw usage_error("transition mix fractions must be non-negative");
    if (n_writes == 0) return {};
    // Every 1->0 consumes a one-state word that only a prior 0->1 can supply;
    // an excess of 1->0 demand cannot be met from a zero-initialized store.
    if (mix.m10 > mix.m01 + 0.005)
        throw usage_error("transition mix infeasible: 1->0 share exceeds 0->1 share");

    // Stratified type counts (largest remainder), then a shuffled schedule.
    const std::array<double, 4> target = {mix.m00, mix.m01, mix.m10, mix.m11};
    std::array<std::size_t, 4> count = {0, 0, 0, 0};
    std::array<double, 4> remainder = {0, 0, 0, 0};
    std::size_t assigned = 0;
    for (int i = 0; i < 4; ++i) {
        const double exact = target[i] * static_cast<double>(n_writes);
        count[i] = static_cast<std::size_t>(exact);
        remainder[i] = exact - static_cast<double>(count[i]);
        assigned += count[i];
    }
    while (assigned < n_writes) {
        int best = 0;
        for (int i = 1; i < 4; ++i)
            if (remainder[i] > remainder[best]) best = i;
        ++count[best];
        remainder[best] = -1.0;
        ++assigned;
    }

    std::vector<int> schedule;
    schedule.reserve(n_writes);
    for (int type = 0; type < 4; ++type)
        schedule.insert(schedule.end(), count[type], type);
    Rng rng(seed);
    for (std::size_t i = schedule.size(); i > 1; --i) {
        const std::size_t j = rng.next_u64() % i;
        std::swap(schedule[i - 1], schedule[j]);
    }

    constexpr std::uint64_t kOnes = ~0ull;
    std::vector<TraceRecord> trace;
    trace.reserve(n_writes + 4);
    std::deque<std::uint64_t> zero_pool;
    std::deque<std::uint64_t> ones_pool;
    std::uint64_t next_fresh = 0x1000;
    const auto fresh = [&next_fresh] {
        const std::uint64_t a = next_fresh;
        next_fresh += 8;
        return a;
    };
    const auto emit = [&trace](std::uint64_t addr, std::uint64_t data) {
        trace.push_back(TraceRecord{TraceOp::Write, addr, data, std::nullopt});
    };
    const auto ensure_ones = [&] {
        if (ones_pool.empty()) {
            // Bootstrap a one-state word; the extra 0->1 transitions are the
            // unavoidable setup cost and stay far below the 1% tolerance.
            const std::uint64_t a = zero_pool.empty() ? fresh() : zero_pool.front();
            if (!zero_pool.empty()) zero_pool.pop_front();
            emit(a, kOnes);
            ones_pool.push_back(a);
        }
    };

    for (int type : schedule) {
        switch (type) {
        case 0: { // 0->0
            const std::uint64_t a = zero_pool.empty() ? fresh() : zero_pool.front();
            if (!zero_pool.empty()) {
                zero_pool.pop_front();
                zero_pool.push_back(a);
            } else {
                zero_pool.push_back(a);
            }
            emit(a, 0);
            break;
        }
        case 1: { // 0->1
            std::uint64_t a;
            if (!zero_pool.empty()) {
                a = zero_pool.front();
                zero_pool.pop_front();
            } else {
                a = fresh();
            }
            emit(a, kOnes);
            ones_pool.push_back(a);
            break;
        }
        case 2: { // 1->0
            ensure_ones();
            const std::uint64_t a = ones_pool.front();
            ones_pool.pop_front();
            emit(a, 0);
            zero_pool.push_back(a);
            break;
        }
        case 3: { // 1->1
            ensure_ones();
            const std::uint64_t a = ones_pool.front();
            ones_pool.pop_front();
            ones_pool.push_back(a);
            emit(a, kOnes);
            break;
        }
        }
    }
    return trace;
}

std::optional<QualityLevel> ExtentTable::lookup(std::uint64_t block) const {
    const auto it = map_.find(block);
    if (it == map_.end()) return std::nullopt;
    return it->second;
}

void ExtentTable::insert(std::uint64_t block, QualityLevel level) {
    const auto it = map_.find(block);
    if (it != map_.end()) {
        it->second = level; // refresh keeps the original FIFO position
        return;
    }
    if (map_.size() >= capacity_ && !fifo_.empty()) {
        map_.erase(fifo_.front());
        fifo_.pop_front();
    }
    map_.emplace(block, level);
    fifo_.push_back(block);
}

QualityLevel quality_decode(const TraceRecord& rec, ExtentTable& table,
                            QualityLevel default_level, int block_bytes) {
    if (rec.op != TraceOp::Write)
        throw usage_error("quality decode applies to write records only");
    const std::uint64_t block = rec.address / static_cast<std::uint64_t>(block_bytes);
    if (rec.priority) {
        table.insert(block, *rec.priority);
        return *rec.priority;
    }
    if (const auto hit = table.lookup(block)) return *hit;
    return default_level;
}

std::uint64_t store_init_word(StoreInit init, std::uint64_t seed, std::uint64_t address) {
    if (init == StoreInit::Zero) return 0;
    std::uint64_t x = seed ^ (address * 0x9e3779b97f4a7c15ULL);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

TransitionCounts transition_stats(const std::vector<TraceRecord>& trace, StoreInit init,
                                  std::uint64_t seed) {
    TransitionCounts counts;
    std::unordered_map<std::uint64_t, std::uint64_t> store;
    for (const TraceRecord& rec : trace) {
        if (rec.op != TraceOp::Write) continue;
        auto [it, inserted] = store.try_emplace(rec.address, 0);
        if (inserted) it->second = store_init_word(init, seed, rec.address);
        const std::uint64_t old = it->second;
        const std::uint64_t nw = rec.data;
        const int ones_old_and_new = std::popcount(old & nw);
        const int ones_old_only = std::popcount(old & ~nw);
        const int ones_new_only = std::popcount(~old & nw);
        counts.t11 += ones_old_and_new;
        counts.t10 += ones_old_only;
        counts.t01 += ones_new_only;
        counts.t00 += 64 - ones_old_and_new - ones_old_only - ones_new_only;
        it->second = nw;
    }
    return counts;
}

RunReport simulate_trace(const std::vector<TraceRecord>& trace, const RunConfig& cfg,
                         std::uint64_t seed) {
    RunReport report;
    report.e_sense = cfg.driver.e_sense;
    ExtentTable table(cfg.trace.table_capacity);
    std::unordered_map<std::uint64_t, std::uint64_t> store;
    Rng rng(seed);

    for (const TraceRecord& rec : trace) {
        if (rec.op == TraceOp::Read) {
            ++report.reads;
            continue;
        }
        ++report.writes;
        const QualityLevel level =
            quality_decode(rec, table, cfg.trace.default_level, cfg.trace.block_bytes);
        ++report.level_writes[static_cast<int>(level)];

        auto [it, inserted] = store.try_emplace(rec.address, 0);
        if (inserted) it->second = store_init_word(cfg.trace.store_init, seed, rec.address);
        const std::uint64_t old = it->second;
        const std::uint64_t nw = rec.data;

        const int ones_old_and_new = std::popcount(old & nw);
        const int ones_old_only = std::popcount(old & ~nw);
        const int ones_new_only = std::popcount(~old & nw);
        report.transitions.t11 += ones_old_and_new;
        report.transitions.t10 += ones_old_only;
        report.transitions.t01 += ones_new_only;
        report.transitions.t00 += 64 - ones_old_and_new - ones_old_only - ones_new_only;

        const WordWrite w =
            write_word(old, nw, level, cfg.driver, cfg.mtj, cfg.write, rng);
        it->second = w.word;

        report.skipped_bits += w.skipped;
        report.switched_bits += w.switched;
        report.failed_bits += w.failed;
        report.energy_written += w.energy_write;
        report.latency_total += w.latency;
        report.e_write1 += w.e_write1;
        report.e_write0 += w.e_write0;
        report.lat1_sum += w.lat1_sum;
        report.lat0_sum += w.lat0_sum;
        report.n_write1 += w.n_write1;
        report.n_write0 += w.n_write0;
        report.fail1 += w.fail1;
        report.fail0 += w.fail0;
    }
    return report;
}

namespace {

std::string csv_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

} // namespace

void write_report_csv(std::ostream& out, const RunReport& r) {
    out << "metric,value\n";
    out << "writes," << r.writes << "\n";
    out << "reads," << r.reads << "\n";
    out << "writes_q00," << r.level_writes[0] << "\n";
    out << "writes_q01," << r.level_writes[1] << "\n";
    out << "writes_q10," << r.level_writes[2] << "\n";
    out << "writes_q11," << r.level_writes[3] << "\n";
    out << "bits_00," << r.transitions.t00 << "\n";
    out << "bits_01," << r.transitions.t01 << "\n";
    out << "bits_10," << r.transitions.t10 << "\n";
    out << "bits_11," << r.transitions.t11 << "\n";
    out << "skipped_bits," << r.skipped_bits << "\n";
    out << "switched_bits," << r.switched_bits << "\n";
    out << "failed_bits," << r.failed_bits << "\n";
    out << "energy_total_pj," << csv_num(r.total_energy() / unit::pj) << "\n";
    out << "energy_written_pj," << csv_num(r.energy_written / unit::pj) << "\n";
    out << "latency_total_ns," << csv_num(r.latency_total / unit::ns) << "\n";
    out << "effective_wer," << csv_num(r.effective_wer()) << "\n";
    if (r.n_write1 > 0) {
        out << "mean_write1_energy_pj,"
            << csv_num(r.e_write1 / static_cast<double>(r.n_write1) / unit::pj) << "\n";
        out << "mean_write1_latency_ns,"
            << csv_num(r.lat1_sum / static_cast<double>(r.n_write1) / unit::ns) << "\n";
    }
    if (r.n_write0 > 0) {
        out << "mean_write0_energy_pj,"
            << csv_num(r.e_write0 / static_cast<double>(r.n_write0) / unit::pj) << "\n";
        out << "mean_write0_latency_ns,"
            << csv_num(r.lat0_sum / static_cast<double>(r.n_write0) / unit::ns) << "\n";
    }
}

std::string format_report_summary(const RunReport& r) {
    std::ostringstream out;
    out << "trace: " << r.writes << " writes, " << r.reads << " reads\n";
    out << "bits:  " << r.switched_bits << " switched, " << r.failed_bits
        << " failed, " << r.skipped_bits << " skipped\n";
    char line[160];
    std::snprintf(line, sizeof(line),
                  "energy: %.3f pJ total (%.3f pJ writes, %.3f pJ sense)\n",
                  r.total_energy() / unit::pj, r.energy_written / unit::pj,
                  static_cast<double>(r.skipped_bits) * r.e_sense / unit::pj);
    out << line;
    std::snprintf(line, sizeof(line), "latency: %.3f ns accumulated\n",
                  r.latency_total / unit::ns);
    out << line;
    std::snprintf(line, sizeof(line), "effective WER: %.6g over %llu attempted transitions\n",
                  r.effective_wer(),
                  static_cast<unsigned long long>(r.attempted_bits()));
    out << line;
    return out.str();
}

PerWriteFigures write1_figures(const RunReport& report) {
    if (report.n_write1 == 0)
        throw usage_error("report holds no executed write-1 operations");
    PerWriteFigures f;
    f.energy = report.e_write1 / static_cast<double>(report.n_write1);
    f.latency = report.lat1_sum / static_cast<double>(report.n_write1);
    return f;
}

std::vector<BaselineRow> default_baselines() {
    return {
        {"basic", 1046.0 * unit::pj, 19.0 * unit::ns},
        {"ref18", 503.6 * unit::pj, 2.2 * unit::ns},
        {"ref21", 393.3 * unit::pj, 7.3 * unit::ns},
        {"ref40", 356.9 * unit::pj, 7.8 * unit::ns},
    };
}

std::vector<BaselineImprovement> compare_baselines(const PerWriteFigures& ours,
                                                   const std::vector<BaselineRow>& baselines) {
    for (const char* required : {"basic", "ref18", "ref21", "ref40"}) {
        const bool found = std::any_of(baselines.begin(), baselines.end(),
                                       [required](const BaselineRow& row) {
                                           return row.name == required;
                                       });
        if (!found)
            throw usage_error(std::string("baseline table misses required row '") +
                              required + "'");
    }
    std::vector<BaselineImprovement> out;
    out.reserve(baselines.size());
    for (const BaselineRow& row : baselines) {
        if (!(row.energy > 0.0) || !(row.latency > 0.0))
            throw usage_error("baseline '" + row.name + "' has a non-positive figure");
        BaselineImprovement imp;
        imp.name = row.name;
        imp.energy_pct = (1.0 - ours.energy / row.energy) * 100.0;
        imp.latency_pct = (1.0 - ours.latency / row.latency) * 100.0;
        out.push_back(imp);
    }
    return out;
}

} // namespace extent
