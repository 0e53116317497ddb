#pragma once

#include <vector>

#include "st/image.hpp"

namespace st {

/// Padded summed-area table: sums(r, c) is the sum of source pixels in rows
/// [0, r) and columns [0, c), so row 0 and column 0 are zero.
///
/// Accumulation is in double, which is exact for any 8-bit image below
/// 2^53 / 255 pixels.
class IntegralImage {
public:
    IntegralImage() = default;
    explicit IntegralImage(const GrayImage& img);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    /// Table entry, 0 <= r <= height, 0 <= c <= width.
    double sums(int r, int c) const noexcept
    {
        return table_[static_cast<std::size_t>(r) * (width_ + 1) + c];
    }

    double total() const noexcept { return sums(height_, width_); }

    /// Sum over the inclusive rectangle [r0, r1] x [c0, c1].
    double box_sum(int r0, int c0, int r1, int c1) const;

    /// Mean over the (2d+1)^2 window centred on (r, c); this is m(I, d).
    double box_mean(int r, int c, int d) const;

    /// True when the full (2d+1)^2 window centred on (r, c) is inside the image.
    bool window_fits(int r, int c, int d) const noexcept
    {
        return d >= 0 && r - d >= 0 && c - d >= 0 && r + d < height_ && c + d < width_;
    }

    // Unchecked variants for inner loops whose bounds are established by the caller.
    double box_sum_unchecked(int r0, int c0, int r1, int c1) const noexcept
    {
        return sums(r1 + 1, c1 + 1) - sums(r0, c1 + 1) - sums(r1 + 1, c0) + sums(r0, c0);
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> table_;
};

IntegralImage build_integral(const GrayImage& img);

} // namespace st
