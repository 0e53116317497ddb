#pragma once

// Brute-force references used by the tests. None of these touch the
// integral image or any other code path under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "st/image.hpp"
#include "st/transform.hpp"

namespace st::oracle {

inline GrayImage random_image(std::mt19937_64& rng, int w, int h, int lo = 0, int hi = 255)
{
    std::uniform_int_distribution<int> dist(lo, hi);
    GrayImage img(w, h, 0.0);
    for (auto& v : img.data()) v = dist(rng);
    return img;
}

/// Random noise smoothed with a box filter, so neighbouring displacements
/// are correlated the way real texture is. Values stay integral.
inline GrayImage smooth_texture(std::mt19937_64& rng, int w, int h, int radius = 2)
{
    const GrayImage noise = random_image(rng, w, h);
    GrayImage out(w, h, 0.0);
    double lo = 1e9, hi = -1e9;
    std::vector<double> tmp(noise.size());
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double s = 0.0;
            int n = 0;
            for (int i = -radius; i <= radius; ++i)
                for (int j = -radius; j <= radius; ++j)
                    if (noise.contains(r + i, c + j)) {
                        s += noise(r + i, c + j);
                        ++n;
                    }
            tmp[static_cast<std::size_t>(r) * w + c] = s / n;
            lo = std::min(lo, s / n);
            hi = std::max(hi, s / n);
        }
    }
    for (std::size_t i = 0; i < tmp.size(); ++i)
        out.data()[i] = std::round(255.0 * (tmp[i] - lo) / (hi - lo));
    return out;
}

inline TernaryImage random_ternary(std::mt19937_64& rng, int w, int h)
{
    std::uniform_int_distribution<int> dist(-1, 1);
    TernaryImage t(w, h, 0);
    for (auto& v : t.data()) v = static_cast<std::int8_t>(dist(rng));
    return t;
}

inline double direct_sum(const GrayImage& img, int r0, int c0, int r1, int c1)
{
    double s = 0.0;
    for (int r = r0; r <= r1; ++r)
        for (int c = c0; c <= c1; ++c) s += img(r, c);
    return s;
}

inline double direct_mean(const GrayImage& img, int r, int c, int d)
{
    const double n = (2.0 * d + 1.0) * (2.0 * d + 1.0);
    return direct_sum(img, r - d, c - d, r + d, c + d) / n;
}

inline std::int8_t quantise(double k, double k1, double k2)
{
    return k > k1 ? 1 : (k < -k2 ? -1 : 0);
}

/// Per-pixel direct-mean ST transform.
inline TernaryImage reference_transform(const GrayImage& img, const StParams& p)
{
    TernaryImage out(img.width(), img.height(), 0);
    for (int r = p.d; r < img.height() - p.d; ++r)
        for (int c = p.d; c < img.width() - p.d; ++c)
            out(r, c) = quantise(img(r, c) - direct_mean(img, r, c, p.d), p.k1, p.k2);
    return out;
}

/// Direct half-window quantisation for one orientation.
inline TernaryImage reference_half_window(const GrayImage& img, const StParams& p, Orientation o)
{
    const int d = p.d;
    TernaryImage out(img.width(), img.height(), 0);
    for (int r = d; r < img.height() - d; ++r) {
        for (int c = d; c < img.width() - d; ++c) {
            int r0 = r - d, r1 = r + d, c0 = c - d, c1 = c + d;
            switch (o) {
            case Orientation::Left: c1 = c; break;
            case Orientation::Right: c0 = c; break;
            case Orientation::Up: r1 = r; break;
            case Orientation::Down: r0 = r; break;
            }
            const double n = double(r1 - r0 + 1) * (c1 - c0 + 1);
            out(r, c) = quantise(img(r, c) - direct_sum(img, r0, c0, r1, c1) / n, p.k1, p.k2);
        }
    }
    return out;
}

/// Recursive flood fill, 4-connectivity, labels in raster order.
inline void flood(const TernaryImage& t, LabelMap& labels, int r, int c, std::int8_t q,
                  std::int32_t label)
{
    if (!t.contains(r, c) || labels(r, c) != 0 || t(r, c) != q) return;
    labels(r, c) = label;
    flood(t, labels, r + 1, c, q, label);
    flood(t, labels, r - 1, c, q, label);
    flood(t, labels, r, c + 1, q, label);
    flood(t, labels, r, c - 1, q, label);
}

inline LabelMap flood_fill_labels(const TernaryImage& t)
{
    LabelMap labels(t.width(), t.height(), 0);
    std::int32_t next = 0;
    for (int r = 0; r < t.height(); ++r)
        for (int c = 0; c < t.width(); ++c)
            if (labels(r, c) == 0) flood(t, labels, r, c, t(r, c), ++next);
    return labels;
}

/// Two images crop-shifted out of one larger texture so that
/// second(r + dr, c + dc) == first(r, c).
struct ShiftedPair {
    GrayImage first;
    GrayImage second;
};

inline ShiftedPair shifted_pair(const GrayImage& big, int w, int h, int dr, int dc, int margin)
{
    GrayImage a(w, h, 0.0), b(w, h, 0.0);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            a(r, c) = big(r + margin, c + margin);
            b(r, c) = big(r + margin - dr, c + margin - dc);
        }
    }
    return {a, b};
}

} // namespace st::oracle
