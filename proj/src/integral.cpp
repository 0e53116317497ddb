#include "st/integral.hpp"

#include <cmath>
#include <string>

namespace st {

GrayImage::GrayImage(int width, int height, double fill) : Raster<double>(width, height, fill)
{
    validate();
}

GrayImage::GrayImage(int width, int height, std::vector<double> data)
    : Raster<double>(width, height, std::move(data))
{
    validate();
}

void GrayImage::validate() const
{
    for (double v : data()) {
        if (!std::isfinite(v) || v < 0.0 || v > 255.0)
            throw ContractViolation("gray image value outside [0, 255]: " + std::to_string(v));
    }
}

IntegralImage::IntegralImage(const GrayImage& img)
    : width_(img.width()), height_(img.height()),
      table_(static_cast<std::size_t>(img.width() + 1) * (img.height() + 1), 0.0)
{
    const std::size_t stride = static_cast<std::size_t>(width_) + 1;
    for (int r = 0; r < height_; ++r) {
        double row_sum = 0.0;
        const double* above = &table_[static_cast<std::size_t>(r) * stride];
        double* out = &table_[static_cast<std::size_t>(r + 1) * stride];
        for (int c = 0; c < width_; ++c) {
            row_sum += img(r, c);
            out[c + 1] = above[c + 1] + row_sum;
        }
    }
}

double IntegralImage::box_sum(int r0, int c0, int r1, int c1) const
{
    if (r0 < 0 || c0 < 0 || r0 > r1 || c0 > c1 || r1 >= height_ || c1 >= width_)
        throw ContractViolation("box_sum rectangle [" + std::to_string(r0) + "," +
                                std::to_string(r1) + "]x[" + std::to_string(c0) + "," +
                                std::to_string(c1) + "] outside " + std::to_string(height_) +
                                "x" + std::to_string(width_) + " image");
    return box_sum_unchecked(r0, c0, r1, c1);
}

double IntegralImage::box_mean(int r, int c, int d) const
{
    if (!window_fits(r, c, d))
        throw ContractViolation("box_mean window of half-size " + std::to_string(d) +
                                " at (" + std::to_string(r) + "," + std::to_string(c) +
                                ") exceeds image bounds");
    const double side = 2.0 * d + 1.0;
    return box_sum_unchecked(r - d, c - d, r + d, c + d) / (side * side);
}

IntegralImage build_integral(const GrayImage& img)
{
    return IntegralImage(img);
}

} // namespace st
