#include "extent/image.hpp"

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
#include "extent/write_engine.hpp"

namespace extent {

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_header_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
            continue;
        }
        if (std::isspace(c)) continue;
        break;
    }
    if (c == EOF) throw parse_error("truncated image header", 1, 1);
    tok.push_back(static_cast<char>(c));
    while ((c = in.get()) != EOF && !std::isspace(c)) tok.push_back(static_cast<char>(c));
    return tok;
}

int header_int(std::istream& in, const char* what) {
    const std::string tok = next_header_token(in);
    try {
        const int v = std::stoi(tok);
        if (v <= 0) throw std::invalid_argument("non-positive");
        return v;
    } catch (const std::exception&) {
        throw parse_error(std::string("invalid ") + what + " '" + tok + "'", 1, 1);
    }
}

} // namespace

Image read_pnm(std::istream& in) {
    const std::string magic = next_header_token(in);
    Image img;
    if (magic == "P5") img.channels = 1;
    else if (magic == "P6") img.channels = 3;
    else throw parse_error("unsupported image magic '" + magic + "'", 1, 1);

    img.width = header_int(in, "width");
    img.height = header_int(in, "height");
    const int maxval = header_int(in, "maxval");
    if (maxval != 255) throw parse_error("only maxval 255 is supported", 1, 1);

    img.samples.resize(img.sample_count());
    in.read(reinterpret_cast<char*>(img.samples.data()),
            static_cast<std::streamsize>(img.samples.size()));
    if (static_cast<std::size_t>(in.gcount()) != img.samples.size())
        throw parse_error("truncated image payload", 1, 1);
    return img;
}

Image load_pnm_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw usage_error("cannot open image file '" + path + "'");
    return read_pnm(in);
}

void write_pnm(std::ostream& out, const Image& img) {
    if (img.channels != 1 && img.channels != 3)
        throw usage_error("image must have 1 or 3 channels");
    out << (img.channels == 1 ? "P5" : "P6") << "\n"
        << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.samples.data()),
              static_cast<std::streamsize>(img.samples.size()));
}

void save_pnm_file(const std::string& path, const Image& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw usage_error("cannot write image file '" + path + "'");
    write_pnm(out, img);
}

Image grayscale(const Image& img) {
    if (img.channels != 3)
        throw usage_error("grayscale conversion needs a 3-channel image");
    Image out;
    out.width = img.width;
    out.height = img.height;
    out.channels = 1;
    out.samples.resize(out.sample_count());
    const std::size_t pixels = out.samples.size();
    for (std::size_t i = 0; i < pixels; ++i) {
        const unsigned sum = img.samples[3 * i] + img.samples[3 * i + 1] +
                             img.samples[3 * i + 2];
        out.samples[i] = static_cast<std::uint8_t>(sum / 3);
    }
    return out;
}

StoredImage store_through_memory(const Image& img, QualityLevel level,
                                 const RunConfig& cfg, std::uint64_t seed) {
    StoredImage out;
    out.image = img;
    out.report.level = level;
    out.report.seed = seed;

    Rng rng(seed);
    const std::size_t n_bytes = img.samples.size();
    double energy = 0.0;
    std::uint64_t skipped = 0;

    for (std::size_t base = 0; base < n_bytes; base += 8) {
        std::uint64_t word = 0;
        const std::size_t take = std::min<std::size_t>(8, n_bytes - base);
        for (std::size_t b = 0; b < take; ++b)
            word |= static_cast<std::uint64_t>(img.samples[base + b]) << (8 * b);
        const WordWrite w =
            write_word(0, word, level, cfg.driver, cfg.mtj, cfg.write, rng);
        energy += w.energy_write;
        skipped += w.skipped;
        for (std::size_t b = 0; b < take; ++b)
            out.image.samples[base + b] =
                static_cast<std::uint8_t>((w.word >> (8 * b)) & 0xffu);
    }
    out.report.energy =
        energy + static_cast<double>(skipped) * cfg.driver.e_sense;

    std::uint64_t flipped = 0;
    for (std::size_t i = 0; i < n_bytes; ++i) {
        std::uint8_t diff = img.samples[i] ^ out.image.samples[i];
        while (diff) {
            flipped += diff & 1u;
            diff >>= 1;
        }
    }
    out.report.flipped_bits = flipped;
    out.report.psnr_db = psnr(img, out.image);
    return out;
}

std::optional<double> psnr(const Image& reference, const Image& test) {
    if (reference.width != test.width || reference.height != test.height ||
        reference.channels != test.channels)
        throw usage_error("psnr: image dimensions differ");
    const std::size_t n = reference.samples.size();
    if (n == 0) throw usage_error("psnr: empty image");
    double sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = static_cast<double>(reference.samples[i]) -
                         static_cast<double>(test.samples[i]);
        sq += d * d;
    }
    const double mse = sq / static_cast<double>(n);
    if (mse == 0.0) return std::nullopt;
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

std::string quality_csv_row(const QualityReport& report) {
    char buf[128];
    if (report.psnr_db) {
        std::snprintf(buf, sizeof(buf), "%s,%.4f,%llu,%.6f", level_name(report.level),
                      *report.psnr_db,
                      static_cast<unsigned long long>(report.flipped_bits),
                      report.energy / unit::pj);
    } else {
        std::snprintf(buf, sizeof(buf), "%s,exact,%llu,%.6f", level_name(report.level),
                      static_cast<unsigned long long>(report.flipped_bits),
                      report.energy / unit::pj);
    }
    return buf;
}

} // namespace extent
