#ifndef EXTENT_IMAGE_HPP
#define EXTENT_IMAGE_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "extent/config.hpp"

namespace extent {

// 8-bit raster, row-major; 1 channel (grayscale) or 3 (RGB).
struct Image {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<std::uint8_t> samples;

    std::size_t sample_count() const {
        return static_cast<std::size_t>(width) * height * channels;
    }
};

// Binary PGM (P5) / PPM (P6), maxval 255, bit-exact round trip.
Image read_pnm(std::istream& in);
Image load_pnm_file(const std::string& path);
void write_pnm(std::ostream& out, const Image& img);
void save_pnm_file(const std::string& path, const Image& img);

// Channel mean, floored; requires a 3-channel input.
Image grayscale(const Image& img);

struct QualityReport {
    std::optional<double> psnr_db; // absent means bit-exact
    std::uint64_t flipped_bits = 0;
    QualityLevel level = QualityLevel::Q00;
    std::uint64_t seed = 0;
    double energy = 0.0; // J
};

// Writes the image's bytes through the approximate memory at the given
// quality level (8 pixels per 64-bit word, little endian, zero-initialized
// store) and reads back the possibly degraded copy.
struct StoredImage {
    Image image;
    QualityReport report;
};

StoredImage store_through_memory(const Image& img, QualityLevel level,
                                 const RunConfig& cfg, std::uint64_t seed);

// Peak signal-to-noise ratio; empty optional when the images are identical.
std::optional<double> psnr(const Image& reference, const Image& test);

// CSV row: level,psnr_db,flipped_bits,energy_pj ("exact" for a bit-exact pass).
std::string quality_csv_row(const QualityReport& report);

} // namespace extent

#endif
