#include "st/transform.hpp"

#include <string>

namespace st {

namespace {

std::int8_t quantise(double diff, double k1, double k2) noexcept
{
    if (diff > k1) return 1;
    if (diff < -k2) return -1;
    return 0;
}

} // namespace

void StParams::validate() const
{
    if (d < 1) throw ContractViolation("ST half-window d must be >= 1");
    if (!(k1 > 0.0)) throw ContractViolation("ST threshold k1 must be > 0");
    if (!(k2 > 0.0)) throw ContractViolation("ST threshold k2 must be > 0");
}

void StParams::validate_for(int width, int height) const
{
    validate();
    const long side = 2L * d + 1;
    if (side > width || side > height)
        throw ContractViolation("ST window " + std::to_string(side) + "x" + std::to_string(side) +
                                " larger than " + std::to_string(width) + "x" +
                                std::to_string(height) + " image");
}

TernaryImage st_transform(const GrayImage& img, const StParams& p)
{
    p.validate_for(img.width(), img.height());
    return st_transform(img, IntegralImage(img), p);
}

TernaryImage st_transform(const GrayImage& img, const IntegralImage& ii, const StParams& p)
{
    p.validate_for(img.width(), img.height());
    if (ii.width() != img.width() || ii.height() != img.height())
        throw ContractViolation("integral image does not match source dimensions");

    const int d = p.d;
    const double area = (2.0 * d + 1.0) * (2.0 * d + 1.0);
    TernaryImage out(img.width(), img.height(), 0);
    for (int r = d; r + d < img.height(); ++r) {
        for (int c = d; c + d < img.width(); ++c) {
            const double mean = ii.box_sum_unchecked(r - d, c - d, r + d, c + d) / area;
            out(r, c) = quantise(img(r, c) - mean, p.k1, p.k2);
        }
    }
    return out;
}

TernaryImage st_transform_multiscale(const GrayImage& img, std::span<const StParams> scales)
{
    if (scales.empty()) throw ContractViolation("multi-scale ST needs at least one scale");
    for (const auto& s : scales) s.validate_for(img.width(), img.height());

    const IntegralImage ii(img);
    TernaryImage out = st_transform(img, ii, scales.front());
    for (std::size_t i = 1; i < scales.size(); ++i) {
        const TernaryImage coarser = st_transform(img, ii, scales[i]);
        auto& dst = out.data();
        const auto& src = coarser.data();
        for (std::size_t k = 0; k < dst.size(); ++k)
            if (dst[k] == 0) dst[k] = src[k];
    }
    return out;
}

Rect half_window(int r, int c, int d, Orientation o) noexcept
{
    switch (o) {
    case Orientation::Left: return {r - d, c - d, r + d, c};
    case Orientation::Right: return {r - d, c, r + d, c + d};
    case Orientation::Up: return {r - d, c - d, r, c + d};
    case Orientation::Down: return {r, c - d, r + d, c + d};
    }
    return {r, c, r, c};
}

TernaryImage st_transform_asymmetric(const GrayImage& img, const StParams& p,
                                     std::span<const Orientation> orientations)
{
    if (orientations.empty())
        throw ContractViolation("asymmetric ST needs at least one orientation");
    p.validate_for(img.width(), img.height());

    const IntegralImage ii(img);
    const int d = p.d;
    const double area = (d + 1.0) * (2.0 * d + 1.0);
    TernaryImage out(img.width(), img.height(), 0);
    for (int r = d; r + d < img.height(); ++r) {
        for (int c = d; c + d < img.width(); ++c) {
            int votes = 0;
            for (Orientation o : orientations) {
                const Rect w = half_window(r, c, d, o);
                const double mean = ii.box_sum_unchecked(w.r0, w.c0, w.r1, w.c1) / area;
                votes += quantise(img(r, c) - mean, p.k1, p.k2);
            }
            out(r, c) = static_cast<std::int8_t>((votes > 0) - (votes < 0));
        }
    }
    return out;
}

const char* to_string(Orientation o) noexcept
{
    switch (o) {
    case Orientation::Left: return "left";
    case Orientation::Right: return "right";
    case Orientation::Up: return "up";
    case Orientation::Down: return "down";
    }
    return "?";
}

Orientation parse_orientation(const std::string& name)
{
    if (name == "left") return Orientation::Left;
    if (name == "right") return Orientation::Right;
    if (name == "up") return Orientation::Up;
    if (name == "down") return Orientation::Down;
    throw ContractViolation("unknown orientation '" + name + "'");
}

} // namespace st
