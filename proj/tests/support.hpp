#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "snowroad/error.hpp"
#include "snowroad/image.hpp"

namespace test_support {

// Code of the snowroad::Error thrown by f, or -1 when nothing is thrown.
template <typename F>
int error_code_of(F&& f) {
    try {
        f();
    } catch (const snowroad::Error& e) {
        return static_cast<int>(e.code());
    }
    return -1;
}

inline int code(snowroad::ErrorCode c) { return static_cast<int>(c); }

// Fresh, empty directory under the system temp dir; removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::mt19937_64 rng(std::random_device{}());
        path_ = std::filesystem::temp_directory_path() / ("snowroad_" + tag + "_" + std::to_string(rng()));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline snowroad::BinaryMask random_mask(std::mt19937_64& rng, int w, int h, double density = 0.5) {
    std::bernoulli_distribution coin(density);
    snowroad::BinaryMask m(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) m.set(x, y, coin(rng));
    }
    return m;
}

inline snowroad::RgbImage random_rgb(std::mt19937_64& rng, int w, int h) {
    std::uniform_int_distribution<int> byte(0, 255);
    snowroad::RgbImage img(w, h);
    for (auto& v : img.data()) v = static_cast<std::uint8_t>(byte(rng));
    return img;
}

}  // namespace test_support
