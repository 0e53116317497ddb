#pragma once

#include <span>
#include <string>
#include <vector>

#include "st/image.hpp"
#include "st/integral.hpp"

namespace st {

/// Parameters of one ST scale. Defaults are the stereo-matching values.
struct StParams {
    int d = 12;       ///< half-window; the local mean covers (2d+1)^2 pixels
    double k1 = 4.0;  ///< threshold above the mean for +1
    double k2 = 4.0;  ///< threshold below the mean for -1

    /// Throws ContractViolation unless d >= 1, k1 > 0 and k2 > 0.
    void validate() const;
    /// Throws ContractViolation unless the window fits an image of this size.
    void validate_for(int width, int height) const;
};

enum class Orientation { Left, Right, Up, Down };

/// Ternary quantisation of the difference from the local mean:
/// +1 where I - m(I,d) > k1, -1 where I - m(I,d) < -k2, 0 otherwise.
/// Pixels whose full window does not fit (a border band of width d) are 0.
TernaryImage st_transform(const GrayImage& img, const StParams& p);

/// Same, reusing a prebuilt integral image of `img`.
TernaryImage st_transform(const GrayImage& img, const IntegralImage& ii, const StParams& p);

/// Multi-scale transform, scales ordered finest first. Each pixel takes the
/// first nonzero single-scale response, so fine detail dominates.
TernaryImage st_transform_multiscale(const GrayImage& img, std::span<const StParams> scales);

/// Oriented transform. For each orientation the mean is taken over the
/// (d+1) x (2d+1) half window that starts at the pixel and extends d steps in
/// that direction. Each oriented difference is quantised with (k1, k2) and the
/// nonzero responses are combined by majority; ties and all-zero give 0.
TernaryImage st_transform_asymmetric(const GrayImage& img, const StParams& p,
                                     std::span<const Orientation> orientations);

/// Inclusive half-window rectangle used for `o` at (r, c).
struct Rect {
    int r0, c0, r1, c1;
};
Rect half_window(int r, int c, int d, Orientation o) noexcept;

const char* to_string(Orientation o) noexcept;
/// Parses "left", "right", "up" or "down"; throws ContractViolation otherwise.
Orientation parse_orientation(const std::string& name);

} // namespace st
