#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace st {

/// Raised when a caller breaks an operation's stated precondition.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Row-major 2-D raster. Row index first everywhere in this library.
template <typename T>
class Raster {
public:
    using value_type = T;

    Raster() = default;

    Raster(int width, int height, T fill = T{}) : width_(width), height_(height)
    {
        check_dims(width, height);
        data_.assign(static_cast<std::size_t>(width) * height, fill);
    }

    Raster(int width, int height, std::vector<T> data)
        : width_(width), height_(height), data_(std::move(data))
    {
        check_dims(width, height);
        if (data_.size() != static_cast<std::size_t>(width) * height)
            throw ContractViolation("raster data length does not match width*height");
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    bool contains(int r, int c) const noexcept
    {
        return r >= 0 && c >= 0 && r < height_ && c < width_;
    }

    T& operator()(int r, int c) noexcept { return data_[index(r, c)]; }
    const T& operator()(int r, int c) const noexcept { return data_[index(r, c)]; }

    T& at(int r, int c)
    {
        if (!contains(r, c))
            throw ContractViolation("pixel (" + std::to_string(r) + "," + std::to_string(c) +
                                    ") outside raster");
        return data_[index(r, c)];
    }
    const T& at(int r, int c) const { return const_cast<Raster&>(*this).at(r, c); }

    const std::vector<T>& data() const noexcept { return data_; }
    std::vector<T>& data() noexcept { return data_; }

    friend bool operator==(const Raster&, const Raster&) = default;

private:
    static void check_dims(int width, int height)
    {
        if (width < 1 || height < 1)
            throw ContractViolation("raster dimensions must be >= 1");
    }

    std::size_t index(int r, int c) const noexcept
    {
        return static_cast<std::size_t>(r) * width_ + c;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

/// Intensity image with values in [0, 255]. The constructors validate the
/// range; writers through operator() are trusted to stay inside it.
class GrayImage : public Raster<double> {
public:
    GrayImage() = default;
    GrayImage(int width, int height, double fill = 0.0);
    GrayImage(int width, int height, std::vector<double> data);

    /// Throws ContractViolation if any value is non-finite or outside [0, 255].
    void validate() const;
};

/// Ternary output of the ST transform: every value in {-1, 0, +1}.
using TernaryImage = Raster<std::int8_t>;

/// Binary mask, 0 or 1 per pixel.
using EdgeMask = Raster<std::uint8_t>;

using LabelMap = Raster<std::int32_t>;

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    friend bool operator==(const Rgb&, const Rgb&) = default;
};

using RgbImage = Raster<Rgb>;

struct Pixel {
    int r = 0;
    int c = 0;
    friend bool operator==(const Pixel&, const Pixel&) = default;
    friend auto operator<=>(const Pixel&, const Pixel&) = default;
};

} // namespace st
