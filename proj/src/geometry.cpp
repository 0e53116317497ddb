#include "st/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace st {

Homography::Homography(const Eigen::Matrix3d& m)
{
    if (!m.allFinite()) throw ContractViolation("homography has non-finite entries");
    const double norm = m.norm();
    if (norm == 0.0) throw ContractViolation("homography is the zero matrix");
    // Relative determinant: scale free, so only genuinely singular maps are rejected.
    if (std::abs(m.determinant()) <= 1e-14 * norm * norm * norm)
        throw ContractViolation("homography is singular");
    if (std::abs(m(2, 2)) > 1e-12 * norm)
        m_ = m / m(2, 2);
    else
        m_ = m / norm;
}

Homography Homography::translation(double tx, double ty)
{
    Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
    m(0, 2) = tx;
    m(1, 2) = ty;
    return Homography(m);
}

Homography Homography::inverse() const
{
    return Homography(m_.inverse());
}

Point2 apply_homography(const Homography& h, Point2 pt)
{
    const Eigen::Vector3d q = h.matrix() * Eigen::Vector3d(pt.x, pt.y, 1.0);
    if (q.z() == 0.0 || !std::isfinite(q.x() / q.z()) || !std::isfinite(q.y() / q.z()))
        throw DegeneratePoint("point maps to infinity under homography");
    return {q.x() / q.z(), q.y() / q.z()};
}

double reprojection_error(const Homography& h, Point2 src, Point2 dst) noexcept
{
    const Eigen::Vector3d q = h.matrix() * Eigen::Vector3d(src.x, src.y, 1.0);
    if (q.z() == 0.0) return std::numeric_limits<double>::infinity();
    const double dx = q.x() / q.z() - dst.x;
    const double dy = q.y() / q.z() - dst.y;
    const double e = std::hypot(dx, dy);
    return std::isfinite(e) ? e : std::numeric_limits<double>::infinity();
}

namespace {

// Similarity taking the points to centroid 0 and mean distance sqrt(2).
Eigen::Matrix3d normalising_transform(const std::vector<Point2>& pts)
{
    double cx = 0.0, cy = 0.0;
    for (const auto& p : pts) {
        cx += p.x;
        cy += p.y;
    }
    cx /= static_cast<double>(pts.size());
    cy /= static_cast<double>(pts.size());
    double mean_dist = 0.0;
    for (const auto& p : pts) mean_dist += std::hypot(p.x - cx, p.y - cy);
    mean_dist /= static_cast<double>(pts.size());
    if (!(mean_dist > 0.0) || !std::isfinite(mean_dist))
        throw EstimationFailure("coincident points in homography estimate");

    const double s = std::sqrt(2.0) / mean_dist;
    Eigen::Matrix3d t;
    t << s, 0.0, -s * cx, 0.0, s, -s * cy, 0.0, 0.0, 1.0;
    return t;
}

bool collinear(const Point2& a, const Point2& b, const Point2& c)
{
    const double ux = b.x - a.x, uy = b.y - a.y;
    const double vx = c.x - a.x, vy = c.y - a.y;
    const double cross = ux * vy - uy * vx;
    return std::abs(cross) <= 1e-10 * std::hypot(ux, uy) * std::hypot(vx, vy);
}

bool degenerate_sample(const std::array<Point2, 4>& pts)
{
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            for (int k = j + 1; k < 4; ++k)
                if (collinear(pts[i], pts[j], pts[k])) return true;
    return false;
}

struct Score {
    std::vector<std::size_t> inliers;
    double mean_error = 0.0;
};

Score score(const Homography& h, const std::vector<Point2>& src, const std::vector<Point2>& dst,
            double threshold)
{
    Score s;
    double total = 0.0;
    for (std::size_t i = 0; i < src.size(); ++i) {
        const double e = reprojection_error(h, src[i], dst[i]);
        if (e < threshold) {
            s.inliers.push_back(i);
            total += e;
        }
    }
    s.mean_error = s.inliers.empty() ? 0.0 : total / static_cast<double>(s.inliers.size());
    return s;
}

} // namespace

Homography solve_homography_dlt(const std::vector<Point2>& src, const std::vector<Point2>& dst)
{
    if (src.size() != dst.size()) throw ContractViolation("DLT point lists differ in length");
    if (src.size() < 4) throw EstimationFailure("DLT needs at least 4 correspondences");

    const Eigen::Matrix3d t1 = normalising_transform(src);
    const Eigen::Matrix3d t2 = normalising_transform(dst);

    const auto n = static_cast<Eigen::Index>(src.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, 9);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Vector3d p = t1 * Eigen::Vector3d(src[i].x, src[i].y, 1.0);
        const Eigen::Vector3d q = t2 * Eigen::Vector3d(dst[i].x, dst[i].y, 1.0);
        const double x = p.x(), y = p.y(), u = q.x(), v = q.y();
        a.row(2 * i) << -x, -y, -1.0, 0.0, 0.0, 0.0, u * x, u * y, u;
        a.row(2 * i + 1) << 0.0, 0.0, 0.0, -x, -y, -1.0, v * x, v * y, v;
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    // A second (near) null vector means the points do not pin down H.
    if (sv.size() >= 8 && sv(7) <= 1e-12 * sv(0))
        throw EstimationFailure("degenerate point configuration");
    const Eigen::VectorXd h = svd.matrixV().col(8);

    Eigen::Matrix3d hn;
    hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
    const Eigen::Matrix3d m = t2.inverse() * hn * t1;
    try {
        return Homography(m);
    } catch (const ContractViolation& e) {
        throw EstimationFailure(std::string("DLT produced an invalid homography: ") + e.what());
    }
}

HomographyFit fit_homography(const std::vector<Point2>& src, const std::vector<Point2>& dst,
                             const RansacParams& params)
{
    if (src.size() != dst.size()) throw ContractViolation("point lists differ in length");
    if (src.size() < 4) throw EstimationFailure("homography needs at least 4 matches");
    if (params.iterations < 1) throw ContractViolation("RANSAC iterations must be >= 1");
    if (!(params.threshold > 0.0)) throw ContractViolation("RANSAC threshold must be > 0");

    const auto n = src.size();
    bool have_best = false;
    Homography best_h;
    Score best;

    for (int it = 0; it < params.iterations; ++it) {
        std::seed_seq seq{static_cast<std::uint32_t>(params.seed),
                          static_cast<std::uint32_t>(params.seed >> 32),
                          static_cast<std::uint32_t>(it)};
        std::mt19937_64 rng(seq);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);

        std::array<std::size_t, 4> idx{};
        for (int k = 0; k < 4; ++k) {
            bool fresh = false;
            while (!fresh) {
                idx[k] = pick(rng);
                fresh = std::find(idx.begin(), idx.begin() + k, idx[k]) == idx.begin() + k;
            }
        }
        std::array<Point2, 4> s{}, d{};
        for (int k = 0; k < 4; ++k) {
            s[k] = src[idx[k]];
            d[k] = dst[idx[k]];
        }
        if (degenerate_sample(s) || degenerate_sample(d)) continue;

        Homography h;
        try {
            h = solve_homography_dlt({s.begin(), s.end()}, {d.begin(), d.end()});
        } catch (const EstimationFailure&) {
            continue;
        }
        Score sc = score(h, src, dst, params.threshold);
        const bool better = !have_best || sc.inliers.size() > best.inliers.size() ||
                            (sc.inliers.size() == best.inliers.size() &&
                             sc.mean_error < best.mean_error);
        if (better) {
            best_h = h;
            best = std::move(sc);
            have_best = true;
        }
    }
    if (!have_best || best.inliers.size() < 4)
        throw EstimationFailure("no non-degenerate homography hypothesis with 4 inliers");

    std::vector<Point2> in_src, in_dst;
    for (auto i : best.inliers) {
        in_src.push_back(src[i]);
        in_dst.push_back(dst[i]);
    }
    try {
        const Homography refit = solve_homography_dlt(in_src, in_dst);
        Score sc = score(refit, src, dst, params.threshold);
        if (sc.inliers.size() >= 4) {
            best_h = refit;
            best = std::move(sc);
        }
    } catch (const EstimationFailure&) {
        // keep the winning minimal-sample hypothesis
    }
    return {best_h, std::move(best.inliers), best.mean_error};
}

HomographyFit fit_homography(const std::vector<BlockMatch>& matches, const RansacParams& params)
{
    std::vector<Point2> src, dst;
    src.reserve(matches.size());
    dst.reserve(matches.size());
    for (const auto& m : matches) {
        src.push_back({static_cast<double>(m.src.c), static_cast<double>(m.src.r)});
        dst.push_back({static_cast<double>(m.dst.c), static_cast<double>(m.dst.r)});
    }
    return fit_homography(src, dst, params);
}

double sample_bilinear(const GrayImage& img, double x, double y) noexcept
{
    const int w = img.width();
    const int h = img.height();
    if (!(x >= 0.0 && y >= 0.0 && x <= w - 1 && y <= h - 1)) return 0.0;
    const int x0 = std::min(static_cast<int>(x), std::max(w - 2, 0));
    const int y0 = std::min(static_cast<int>(y), std::max(h - 2, 0));
    const int x1 = std::min(x0 + 1, w - 1);
    const int y1 = std::min(y0 + 1, h - 1);
    const double fx = x - x0, fy = y - y0;
    const double top = img(y0, x0) * (1.0 - fx) + img(y0, x1) * fx;
    const double bottom = img(y1, x0) * (1.0 - fx) + img(y1, x1) * fx;
    return top * (1.0 - fy) + bottom * fy;
}

GrayImage warp_to_reference(const GrayImage& img2, const Homography& h, int width, int height)
{
    GrayImage out(width, height, 0.0);
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            const Eigen::Vector3d q = h.matrix() * Eigen::Vector3d(c, r, 1.0);
            if (q.z() == 0.0) continue;
            const double v = sample_bilinear(img2, q.x() / q.z(), q.y() / q.z());
            out(r, c) = std::clamp(v, 0.0, 255.0);
        }
    }
    return out;
}

RgbImage warp_overlay(const GrayImage& img1, const GrayImage& img2, const Homography& h)
{
    const GrayImage warped = warp_to_reference(img2, h, img1.width(), img1.height());
    auto to8 = [](double v) {
        return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
    };
    RgbImage out(img1.width(), img1.height());
    for (int r = 0; r < img1.height(); ++r)
        for (int c = 0; c < img1.width(); ++c)
            out(r, c) = {to8(img1(r, c)), to8(warped(r, c)), to8(img1(r, c))};
    return out;
}

} // namespace st
