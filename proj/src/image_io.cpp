#include "snowroad/image_io.hpp"

#include <png.h>

#include <array>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>

namespace snowroad {
namespace {

namespace fs = std::filesystem;

constexpr std::array<std::uint8_t, 8> kPngSignature = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

std::vector<std::uint8_t> read_file(const fs::path& path) {
    std::error_code ec;
    if (!fs::is_regular_file(path, ec)) {
        fail(ErrorCode::FileNotFound, "no such file: " + path.string());
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& path, const std::string& header, std::span<const std::uint8_t> payload) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    out.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
    if (!out) fail(ErrorCode::IoError, "write failed for " + path.string());
}

bool has_png_extension(const fs::path& path) {
    auto ext = path.extension().string();
    for (auto& ch : ext) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return ext == ".png";
}

bool is_png(const std::vector<std::uint8_t>& bytes) {
    return bytes.size() >= kPngSignature.size() &&
           std::equal(kPngSignature.begin(), kPngSignature.end(), bytes.begin());
}

struct Pnm {
    int channels = 0;
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> payload;
};

class PnmHeaderReader {
public:
    PnmHeaderReader(const std::vector<std::uint8_t>& bytes, const fs::path& path)
        : bytes_(bytes), path_(path) {}

    int next_int() {
        skip_space_and_comments();
        if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
            fail(ErrorCode::CorruptData, "malformed PNM header in " + path_.string());
        }
        long value = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + (bytes_[pos_++] - '0');
            if (value > 1'000'000) fail(ErrorCode::CorruptData, "PNM dimension too large in " + path_.string());
        }
        return static_cast<int>(value);
    }

    // Exactly one whitespace byte separates maxval from the raster.
    std::size_t payload_offset() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
            fail(ErrorCode::CorruptData, "missing raster separator in " + path_.string());
        }
        return pos_ + 1;
    }

    void skip(std::size_t n) { pos_ += n; }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    const std::vector<std::uint8_t>& bytes_;
    const fs::path& path_;
    std::size_t pos_ = 0;
};

Pnm parse_pnm(const std::vector<std::uint8_t>& bytes, const fs::path& path) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '6' && bytes[1] != '5')) {
        fail(ErrorCode::UnsupportedFormat, "not a P6/P5/PNG file: " + path.string());
    }
    Pnm pnm;
    pnm.channels = bytes[1] == '6' ? 3 : 1;
    PnmHeaderReader reader(bytes, path);
    reader.skip(2);
    pnm.width = reader.next_int();
    pnm.height = reader.next_int();
    const int maxval = reader.next_int();
    if (pnm.width < 1 || pnm.height < 1) {
        fail(ErrorCode::CorruptData, "PNM with empty raster: " + path.string());
    }
    if (maxval != 255) {
        fail(ErrorCode::UnsupportedFormat, "only maxval 255 is supported: " + path.string());
    }
    const std::size_t offset = reader.payload_offset();
    const std::size_t need = static_cast<std::size_t>(pnm.width) * pnm.height * pnm.channels;
    if (bytes.size() < offset || bytes.size() - offset < need) {
        fail(ErrorCode::CorruptData, "truncated raster in " + path.string() + ": expected " +
                                         std::to_string(need) + " bytes, found " +
                                         std::to_string(bytes.size() > offset ? bytes.size() - offset : 0));
    }
    pnm.payload.assign(bytes.begin() + static_cast<std::ptrdiff_t>(offset),
                       bytes.begin() + static_cast<std::ptrdiff_t>(offset + need));
    return pnm;
}

// Decodes to 1 or 3 channels; the channel count follows the file's color type.
Pnm decode_png(const std::vector<std::uint8_t>& bytes, const fs::path& path) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
        fail(ErrorCode::CorruptData, "bad PNG " + path.string() + ": " + image.message);
    }
    if (image.format & (PNG_FORMAT_FLAG_ALPHA | PNG_FORMAT_FLAG_LINEAR)) {
        png_image_free(&image);
        fail(ErrorCode::UnsupportedFormat, "PNG with alpha or 16-bit samples: " + path.string());
    }
    Pnm out;
    out.channels = (image.format & PNG_FORMAT_FLAG_COLOR) ? 3 : 1;
    image.format = out.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    out.width = static_cast<int>(image.width);
    out.height = static_cast<int>(image.height);
    out.payload.resize(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, out.payload.data(), 0, nullptr)) {
        fail(ErrorCode::CorruptData, "bad PNG " + path.string() + ": " + image.message);
    }
    return out;
}

Pnm decode_any(const fs::path& path) {
    auto bytes = read_file(path);
    return is_png(bytes) ? decode_png(bytes, path) : parse_pnm(bytes, path);
}

void write_png(const fs::path& path, int width, int height, bool color, std::span<const std::uint8_t> data) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(width);
    image.height = static_cast<png_uint_32>(height);
    image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&image, path.string().c_str(), 0, data.data(), 0, nullptr)) {
        fail(ErrorCode::IoError, "cannot write PNG " + path.string() + ": " + image.message);
    }
}

std::string pnm_header(char kind, int width, int height) {
    return std::string("P") + kind + "\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
}

}  // namespace

RgbImage load_image(const fs::path& path) {
    auto pnm = decode_any(path);
    if (pnm.channels == 3) return RgbImage(pnm.width, pnm.height, std::move(pnm.payload));
    RgbImage img(pnm.width, pnm.height);
    auto dst = img.data();
    for (std::size_t i = 0; i < pnm.payload.size(); ++i) {
        dst[3 * i] = dst[3 * i + 1] = dst[3 * i + 2] = pnm.payload[i];
    }
    return img;
}

GrayImage load_gray(const fs::path& path) {
    auto pnm = decode_any(path);
    if (pnm.channels == 1) return GrayImage(pnm.width, pnm.height, std::move(pnm.payload));
    return to_gray(RgbImage(pnm.width, pnm.height, std::move(pnm.payload)));
}

void save_image(const RgbImage& img, const fs::path& path) {
    if (has_png_extension(path)) {
        write_png(path, img.width(), img.height(), true, img.data());
    } else {
        write_file(path, pnm_header('6', img.width(), img.height()), img.data());
    }
}

void save_image(const GrayImage& img, const fs::path& path) {
    if (has_png_extension(path)) {
        write_png(path, img.width(), img.height(), false, img.data());
    } else {
        write_file(path, pnm_header('5', img.width(), img.height()), img.data());
    }
}

void save_image(const BinaryMask& mask, const fs::path& path) {
    save_image(mask_to_gray(mask), path);
}

void save_image(const HsvImage& img, const fs::path& path) {
    std::vector<std::uint8_t> copy(img.data().begin(), img.data().end());
    save_image(RgbImage(img.width(), img.height(), std::move(copy)), path);
}

}  // namespace snowroad
