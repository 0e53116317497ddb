#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "st/image.hpp"

namespace st {

// ---------------------------------------------------------------------------
// Regions of constant quantisation
// ---------------------------------------------------------------------------

struct Run {
    int row = 0;
    int col = 0;     ///< first column
    int length = 0;
    friend bool operator==(const Run&, const Run&) = default;
};

struct BoundingBox {
    int min_r = 0, min_c = 0, max_r = 0, max_c = 0;
    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct Region {
    std::int32_t label = 0;  ///< 1-based, dense
    std::int8_t quant = 0;
    long area = 0;
    BoundingBox bbox;
    double centroid_r = 0.0;
    double centroid_c = 0.0;
    std::vector<Run> runs;   ///< row-major run-length encoding of the member pixels
};

struct RegionLabelling {
    LabelMap labels;
    std::vector<Region> regions;  ///< regions[i].label == i + 1
};

/// 4-connected components of equal ternary value. Labels are assigned in
/// raster order of each component's first pixel.
RegionLabelling label_regions(const TernaryImage& t);

// ---------------------------------------------------------------------------
// Edges
// ---------------------------------------------------------------------------

enum class Polarity : std::int8_t { Dark = -1, Light = 1 };

const char* to_string(Polarity p) noexcept;
Polarity parse_polarity(const std::string& name);

/// Boundary pixels of `polarity` regions (a 4-neighbour with another value)
/// that have a pixel of the opposite polarity within Chebyshev distance
/// `proximity`. Neighbours outside the image do not make a pixel a boundary.
EdgeMask extract_edges(const TernaryImage& t, Polarity polarity, int proximity = 2);

/// Keeps mask pixels whose larger absolute central difference (horizontal or
/// vertical, half the span across the pixel) of `img` is at least `gmin`.
/// Differences at the image border use the replicated edge pixel.
EdgeMask gradient_filter(const EdgeMask& mask, const GrayImage& img, double gmin);

// ---------------------------------------------------------------------------
// Chains and corners
// ---------------------------------------------------------------------------

struct EdgeChain {
    Polarity polarity = Polarity::Dark;
    std::vector<Pixel> points;
    bool closed = false;
};

/// Splits the mask into 8-connected chains. Steps follow essential links only:
/// a diagonal step is skipped when a shared 4-neighbour is also in the mask, so
/// 4-connected outlines are walked pixel by pixel. Pixels with more than two
/// essential neighbours are junctions and terminate chains. Seeds are taken in
/// raster order; every mask pixel lands in exactly one chain.
std::vector<EdgeChain> trace_chains(const EdgeMask& mask, Polarity polarity = Polarity::Dark);

struct Corner {
    Pixel position;
    double turning_angle = 0.0;  ///< signed, radians, in [-pi, pi]
    int chain_id = 0;
    int index_in_chain = 0;
};

inline constexpr double kDefaultCornerThetaMin = 0.52359877559829887;  // pi / 6

/// Signed angle from p(i) - p(i-w) to p(i+w) - p(i), in image (x = column,
/// y = row) coordinates.
double turning_angle(const Pixel& prev, const Pixel& here, const Pixel& next) noexcept;

/// Corners are indices whose |turning angle| is a strict maximum over the
/// +/- w index neighbourhood and at least theta_min. An exact tie inside the
/// neighbourhood goes to the raster-first pixel; the result does not depend on
/// chain direction. Two-pixel plateaus occur at diagonally cut outline
/// corners. Closed chains wrap; open chains skip indices within w of an end.
/// Chains shorter than 2w+1 give none.
std::vector<Corner> detect_corners(const std::vector<EdgeChain>& chains, int w = 4,
                                   double theta_min = kDefaultCornerThetaMin);

} // namespace st
