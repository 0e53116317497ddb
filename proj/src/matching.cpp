#include "st/matching.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace st {

void MatchParams::validate() const
{
    if (dim < 1) throw ContractViolation("match dim must be >= 1");
    if (max_r < 0 || max_c < 0) throw ContractViolation("search radii must be >= 0");
    if (row_stride < 1 || col_stride < 1) throw ContractViolation("strides must be >= 1");
    if (!(texture_min >= 0.0)) throw ContractViolation("texture_min must be >= 0");
    if (!(sad_max > 0.0)) throw ContractViolation("sad_max must be > 0");
}

double MatchParams::sentinel() const noexcept
{
    if (legacy_sentinel) return 7000.0;
    const double s = side();
    return 2.0 * s * s + 1.0;
}

const char* to_string(Metric m) noexcept
{
    return m == Metric::Sad ? "sad" : "zncc";
}

Pixel Surface::best() const
{
    Pixel arg{0, 0};
    bool found = false;
    double best_score = 0.0;
    for (int dr = -max_r; dr <= max_r; ++dr) {
        for (int dc = -max_c; dc <= max_c; ++dc) {
            if (!is_valid(dr, dc)) continue;
            const double v = at(dr, dc);
            const bool better = metric == Metric::Sad ? v < best_score : v > best_score;
            if (!found || better) {
                best_score = v;
                arg = {dr, dc};
                found = true;
            }
        }
    }
    if (!found) throw ContractViolation("surface has no valid displacement");
    return arg;
}

namespace {

bool patch_fits(int width, int height, int r, int c, int dim) noexcept
{
    return r - dim >= 0 && c - dim >= 0 && r + dim < height && c + dim < width;
}

template <typename Image>
void require_patch(const Image& img, Pixel center, int dim, const char* what)
{
    if (!patch_fits(img.width(), img.height(), center.r, center.c, dim))
        throw ContractViolation(std::string(what) + ": patch of half-size " + std::to_string(dim) +
                                " at (" + std::to_string(center.r) + "," +
                                std::to_string(center.c) + ") outside image");
}

double window_texture(const TernaryImage& t, int r, int c, int dim) noexcept
{
    long n = 0;
    for (int i = r - dim; i <= r + dim; ++i) {
        const std::int8_t* row = &t(i, c - dim);
        for (int j = 0; j < 2 * dim + 1; ++j) n += row[j] != 0;
    }
    return static_cast<double>(n);
}

long window_sad(const TernaryImage& a, int ra, int ca, const TernaryImage& b, int rb, int cb,
                int dim) noexcept
{
    const int side = 2 * dim + 1;
    long total = 0;
    for (int i = 0; i < side; ++i) {
        const std::int8_t* pa = &a(ra - dim + i, ca - dim);
        const std::int8_t* pb = &b(rb - dim + i, cb - dim);
        for (int j = 0; j < side; ++j) total += std::abs(pa[j] - pb[j]);
    }
    return total;
}

} // namespace

TernaryImage extract_patch(const TernaryImage& t, int r, int c, int dim)
{
    if (dim < 0) throw ContractViolation("extract_patch: dim must be >= 0");
    require_patch(t, {r, c}, dim, "extract_patch");
    const int side = 2 * dim + 1;
    TernaryImage out(side, side, 0);
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j) out(i, j) = t(r - dim + i, c - dim + j);
    return out;
}

double texture_score(std::span<const std::int8_t> patch) noexcept
{
    long n = 0;
    for (auto v : patch) n += std::abs(v);
    return static_cast<double>(n);
}

double texture_score(const TernaryImage& patch) noexcept
{
    return texture_score(std::span<const std::int8_t>(patch.data()));
}

double sad(std::span<const std::int8_t> a, std::span<const std::int8_t> b)
{
    if (a.size() != b.size()) throw ContractViolation("sad: patch sizes differ");
    long total = 0;
    for (std::size_t i = 0; i < a.size(); ++i) total += std::abs(a[i] - b[i]);
    return static_cast<double>(total);
}

double sad(const TernaryImage& a, const TernaryImage& b)
{
    if (a.width() != b.width() || a.height() != b.height())
        throw ContractViolation("sad: patch dimensions differ");
    return sad(std::span<const std::int8_t>(a.data()), std::span<const std::int8_t>(b.data()));
}

Surface sad_surface(const TernaryImage& t1, const TernaryImage& t2, Pixel center,
                    const MatchParams& p)
{
    p.validate();
    require_patch(t1, center, p.dim, "sad_surface");

    Surface s{p.max_r, p.max_c, Metric::Sad, {}, {}};
    s.grid.assign(static_cast<std::size_t>(s.rows()) * s.cols(), p.sentinel());
    s.valid.assign(s.grid.size(), 0);
    for (int dr = -p.max_r; dr <= p.max_r; ++dr) {
        for (int dc = -p.max_c; dc <= p.max_c; ++dc) {
            const int r2 = center.r + dr, c2 = center.c + dc;
            if (!patch_fits(t2.width(), t2.height(), r2, c2, p.dim)) continue;
            s.grid[s.index(dr, dc)] =
                static_cast<double>(window_sad(t1, center.r, center.c, t2, r2, c2, p.dim));
            s.valid[s.index(dr, dc)] = 1;
        }
    }
    return s;
}

double zncc(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size() || a.empty()) throw ContractViolation("zncc: patch sizes differ");
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa <= 0.0 || sbb <= 0.0) return 0.0;
    const double v = sab / std::sqrt(saa * sbb);
    return std::clamp(v, -1.0, 1.0);
}

Surface zncc_surface(const GrayImage& img1, const GrayImage& img2, Pixel center,
                     const MatchParams& p)
{
    p.validate();
    require_patch(img1, center, p.dim, "zncc_surface");

    const int side = p.side();
    std::vector<double> a, b;
    a.reserve(static_cast<std::size_t>(side) * side);
    for (int i = -p.dim; i <= p.dim; ++i)
        for (int j = -p.dim; j <= p.dim; ++j) a.push_back(img1(center.r + i, center.c + j));

    Surface s{p.max_r, p.max_c, Metric::Zncc, {}, {}};
    s.grid.assign(static_cast<std::size_t>(s.rows()) * s.cols(), -1.0);
    s.valid.assign(s.grid.size(), 0);
    for (int dr = -p.max_r; dr <= p.max_r; ++dr) {
        for (int dc = -p.max_c; dc <= p.max_c; ++dc) {
            const int r2 = center.r + dr, c2 = center.c + dc;
            if (!patch_fits(img2.width(), img2.height(), r2, c2, p.dim)) continue;
            b.clear();
            for (int i = -p.dim; i <= p.dim; ++i)
                for (int j = -p.dim; j <= p.dim; ++j) b.push_back(img2(r2 + i, c2 + j));
            s.grid[s.index(dr, dc)] = zncc(a, b);
            s.valid[s.index(dr, dc)] = 1;
        }
    }
    return s;
}

std::vector<BlockMatch> block_match(const TernaryImage& t1, const TernaryImage& t2,
                                    const MatchParams& p)
{
    p.validate();
    if (t1.width() != t2.width() || t1.height() != t2.height())
        throw ContractViolation("block_match: images differ in size");

    const int h = t1.height();
    const int w = t1.width();
    const int dim = p.dim;
    std::vector<BlockMatch> matches;
    for (int r = dim + 1; r <= h - dim - 3; r += p.row_stride) {
        for (int c = dim + 1; c <= w - dim - 3; c += p.col_stride) {
            if (window_texture(t1, r, c, dim) <= p.texture_min) continue;

            long best = 0;
            Pixel best_dst{};
            bool found = false;
            for (int r2 = r - p.max_r; r2 <= r + p.max_r; ++r2) {
                for (int c2 = c - p.max_c; c2 <= c + p.max_c; ++c2) {
                    if (!patch_fits(w, h, r2, c2, dim)) continue;
                    const long v = window_sad(t1, r, c, t2, r2, c2, dim);
                    if (!found || v < best) {
                        best = v;
                        best_dst = {r2, c2};
                        found = true;
                    }
                }
            }
            if (found && static_cast<double>(best) < p.sad_max)
                matches.push_back({{r, c}, best_dst, static_cast<double>(best)});
        }
    }
    return matches;
}

} // namespace st
