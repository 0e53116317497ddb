#include "st/features.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>

#include "st/integral.hpp"

namespace st {

RegionLabelling label_regions(const TernaryImage& t)
{
    const int w = t.width();
    const int h = t.height();
    RegionLabelling out{LabelMap(w, h, 0), {}};
    LabelMap& labels = out.labels;

    std::vector<Pixel> stack;
    std::int32_t next = 0;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (labels(r, c) != 0) continue;
            const std::int8_t q = t(r, c);
            const std::int32_t label = ++next;
            labels(r, c) = label;
            stack.push_back({r, c});
            while (!stack.empty()) {
                const Pixel p = stack.back();
                stack.pop_back();
                constexpr std::array<Pixel, 4> steps{{{0, 1}, {1, 0}, {0, -1}, {-1, 0}}};
                for (const auto& s : steps) {
                    const int rr = p.r + s.r, cc = p.c + s.c;
                    if (t.contains(rr, cc) && labels(rr, cc) == 0 && t(rr, cc) == q) {
                        labels(rr, cc) = label;
                        stack.push_back({rr, cc});
                    }
                }
            }
        }
    }

    auto& regions = out.regions;
    regions.resize(static_cast<std::size_t>(next));
    std::vector<double> sum_r(regions.size(), 0.0), sum_c(regions.size(), 0.0);
    for (std::size_t i = 0; i < regions.size(); ++i) {
        regions[i].label = static_cast<std::int32_t>(i + 1);
        regions[i].bbox = {h, w, -1, -1};
    }
    for (int r = 0; r < h; ++r) {
        int c = 0;
        while (c < w) {
            const std::int32_t label = labels(r, c);
            int end = c + 1;
            while (end < w && labels(r, end) == label) ++end;
            const int len = end - c;
            Region& reg = regions[static_cast<std::size_t>(label - 1)];
            reg.quant = t(r, c);
            reg.area += len;
            reg.runs.push_back({r, c, len});
            reg.bbox.min_r = std::min(reg.bbox.min_r, r);
            reg.bbox.max_r = std::max(reg.bbox.max_r, r);
            reg.bbox.min_c = std::min(reg.bbox.min_c, c);
            reg.bbox.max_c = std::max(reg.bbox.max_c, end - 1);
            sum_r[label - 1] += static_cast<double>(r) * len;
            // sum of c .. end-1
            sum_c[label - 1] += (static_cast<double>(c) + (end - 1)) * len / 2.0;
            c = end;
        }
    }
    for (std::size_t i = 0; i < regions.size(); ++i) {
        const double a = static_cast<double>(regions[i].area);
        regions[i].centroid_r = sum_r[i] / a;
        regions[i].centroid_c = sum_c[i] / a;
    }
    return out;
}

const char* to_string(Polarity p) noexcept
{
    return p == Polarity::Dark ? "dark" : "light";
}

Polarity parse_polarity(const std::string& name)
{
    if (name == "dark") return Polarity::Dark;
    if (name == "light") return Polarity::Light;
    throw ContractViolation("unknown polarity '" + name + "'");
}

EdgeMask extract_edges(const TernaryImage& t, Polarity polarity, int proximity)
{
    if (proximity < 1) throw ContractViolation("edge proximity must be >= 1");
    const int w = t.width();
    const int h = t.height();
    const auto self = static_cast<std::int8_t>(polarity);
    const auto other = static_cast<std::int8_t>(-self);

    // Opposite-polarity indicator sums for the proximity test.
    GrayImage opposite(w, h, 0.0);
    for (std::size_t i = 0; i < t.size(); ++i)
        opposite.data()[i] = t.data()[i] == other ? 1.0 : 0.0;
    const IntegralImage counts(opposite);

    EdgeMask mask(w, h, 0);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (t(r, c) != self) continue;
            const bool boundary = (c + 1 < w && t(r, c + 1) != self) ||
                                  (c > 0 && t(r, c - 1) != self) ||
                                  (r + 1 < h && t(r + 1, c) != self) ||
                                  (r > 0 && t(r - 1, c) != self);
            if (!boundary) continue;
            const int r0 = std::max(0, r - proximity), r1 = std::min(h - 1, r + proximity);
            const int c0 = std::max(0, c - proximity), c1 = std::min(w - 1, c + proximity);
            if (counts.box_sum_unchecked(r0, c0, r1, c1) > 0.0) mask(r, c) = 1;
        }
    }
    return mask;
}

EdgeMask gradient_filter(const EdgeMask& mask, const GrayImage& img, double gmin)
{
    if (mask.width() != img.width() || mask.height() != img.height())
        throw ContractViolation("gradient_filter: mask and image dimensions differ");
    if (!(gmin >= 0.0)) throw ContractViolation("gradient_filter: gmin must be >= 0");

    const int w = img.width();
    const int h = img.height();
    EdgeMask out(w, h, 0);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (!mask(r, c)) continue;
            const double gx = (img(r, std::min(c + 1, w - 1)) - img(r, std::max(c - 1, 0))) / 2.0;
            const double gy = (img(std::min(r + 1, h - 1), c) - img(std::max(r - 1, 0), c)) / 2.0;
            if (std::max(std::abs(gx), std::abs(gy)) >= gmin) out(r, c) = 1;
        }
    }
    return out;
}

namespace {

// 4-neighbours first so outlines are followed pixel by pixel.
constexpr std::array<Pixel, 8> kSteps{
    {{0, 1}, {1, 0}, {0, -1}, {-1, 0}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};

class ChainTracer {
public:
    explicit ChainTracer(const EdgeMask& mask)
        : mask_(mask), visited_(mask.width(), mask.height(), 0)
    {
    }

    std::vector<EdgeChain> run(Polarity polarity)
    {
        std::vector<EdgeChain> chains;
        for (int r = 0; r < mask_.height(); ++r)
            for (int c = 0; c < mask_.width(); ++c)
                if (on({r, c}) && !visited_(r, c)) chains.push_back(trace({r, c}, polarity));
        return chains;
    }

private:
    bool on(const Pixel& p) const { return mask_.contains(p.r, p.c) && mask_(p.r, p.c); }

    bool essential(const Pixel& p, const Pixel& step) const
    {
        if (!on({p.r + step.r, p.c + step.c})) return false;
        if (step.r == 0 || step.c == 0) return true;
        return !on({p.r + step.r, p.c}) && !on({p.r, p.c + step.c});
    }

    bool linked(const Pixel& a, const Pixel& b) const
    {
        const Pixel step{b.r - a.r, b.c - a.c};
        if (std::abs(step.r) > 1 || std::abs(step.c) > 1 || (step.r == 0 && step.c == 0))
            return false;
        return essential(a, step);
    }

    int degree(const Pixel& p) const
    {
        int n = 0;
        for (const auto& s : kSteps) n += essential(p, s);
        return n;
    }

    void walk(Pixel cur, std::vector<Pixel>& out)
    {
        for (;;) {
            bool moved = false;
            for (const auto& s : kSteps) {
                const Pixel next{cur.r + s.r, cur.c + s.c};
                if (essential(cur, s) && !visited_(next.r, next.c)) {
                    visited_(next.r, next.c) = 1;
                    out.push_back(next);
                    cur = next;
                    moved = true;
                    break;
                }
            }
            if (!moved || degree(cur) > 2) return;
        }
    }

    EdgeChain trace(const Pixel& seed, Polarity polarity)
    {
        EdgeChain chain{polarity, {seed}, false};
        visited_(seed.r, seed.c) = 1;
        const bool seed_junction = degree(seed) > 2;
        walk(seed, chain.points);
        if (seed_junction) return chain;

        const Pixel& last = chain.points.back();
        if (chain.points.size() >= 4 && degree(last) <= 2 && linked(last, seed)) {
            chain.closed = true;
            return chain;
        }

        std::vector<Pixel> back;
        walk(seed, back);
        if (!back.empty()) {
            std::reverse(back.begin(), back.end());
            back.insert(back.end(), chain.points.begin(), chain.points.end());
            chain.points = std::move(back);
        }
        return chain;
    }

    const EdgeMask& mask_;
    Raster<std::uint8_t> visited_;
};

} // namespace

std::vector<EdgeChain> trace_chains(const EdgeMask& mask, Polarity polarity)
{
    return ChainTracer(mask).run(polarity);
}

double turning_angle(const Pixel& prev, const Pixel& here, const Pixel& next) noexcept
{
    const double ax = here.c - prev.c, ay = here.r - prev.r;
    const double bx = next.c - here.c, by = next.r - here.r;
    return std::atan2(ax * by - ay * bx, ax * bx + ay * by);
}

std::vector<Corner> detect_corners(const std::vector<EdgeChain>& chains, int w, double theta_min)
{
    if (w < 1) throw ContractViolation("corner arc half-span w must be >= 1");

    std::vector<Corner> corners;
    for (std::size_t id = 0; id < chains.size(); ++id) {
        const auto& pts = chains[id].points;
        const int n = static_cast<int>(pts.size());
        const bool closed = chains[id].closed;
        if (n < 2 * w + 1) continue;

        auto wrap = [n](int i) { return ((i % n) + n) % n; };
        auto defined = [&](int i) { return closed || (i >= w && i < n - w); };

        std::vector<double> mag(static_cast<std::size_t>(n), 0.0);
        std::vector<double> angle(static_cast<std::size_t>(n), 0.0);
        for (int i = 0; i < n; ++i) {
            if (!defined(i)) continue;
            angle[i] = turning_angle(pts[wrap(i - w)], pts[i], pts[wrap(i + w)]);
            mag[i] = std::abs(angle[i]);
        }

        for (int i = 0; i < n; ++i) {
            if (!defined(i) || mag[i] < theta_min) continue;
            bool strict_max = true;
            for (int k = -w; k <= w && strict_max; ++k) {
                if (k == 0) continue;
                const int j = closed ? wrap(i + k) : i + k;
                if (j < 0 || j >= n || !defined(j) || j == i) continue;
                if (mag[j] > mag[i] || (mag[j] == mag[i] && pts[j] < pts[i]))
                    strict_max = false;
            }
            if (strict_max)
                corners.push_back({pts[i], angle[i], static_cast<int>(id), i});
        }
    }
    return corners;
}

} // namespace st
