#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "st/image.hpp"
#include "st/matching.hpp"

namespace st {

/// A point mapped to infinity (zero homogeneous coordinate).
class DegeneratePoint : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// No usable homography could be estimated from the correspondences.
class EstimationFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Point2 {
    double x = 0.0;  ///< column
    double y = 0.0;  ///< row
};

/// Invertible 3x3 projective map. Stored with H(2,2) = 1 when that entry is
/// nonzero, otherwise scaled to unit Frobenius norm.
class Homography {
public:
    Homography() : m_(Eigen::Matrix3d::Identity()) {}
    /// Throws ContractViolation for a singular or non-finite matrix.
    explicit Homography(const Eigen::Matrix3d& m);

    static Homography translation(double tx, double ty);

    const Eigen::Matrix3d& matrix() const noexcept { return m_; }
    Homography inverse() const;

private:
    Eigen::Matrix3d m_;
};

/// Maps (x, y) through H; throws DegeneratePoint when the result is at infinity.
Point2 apply_homography(const Homography& h, Point2 pt);

struct RansacParams {
    double threshold = 3.0;  ///< inlier reprojection distance, pixels
    int iterations = 1000;
    std::uint64_t seed = 0;
};

struct HomographyFit {
    Homography h;                       ///< maps src (x = c, y = r) to dst
    std::vector<std::size_t> inliers;   ///< indices into the input matches
    double mean_inlier_error = 0.0;
};

/// Normalised DLT on >= 4 correspondences (algebraic least squares).
/// Throws EstimationFailure on a degenerate configuration.
Homography solve_homography_dlt(const std::vector<Point2>& src, const std::vector<Point2>& dst);

/// RANSAC over minimal 4-point samples, each solved by normalised DLT. The
/// hypothesis with the most inliers wins (ties: lower mean inlier error), and
/// is refit on all of its inliers. Iteration i draws its sample from a stream
/// seeded by (seed, i), so the result depends only on the inputs and seed.
HomographyFit fit_homography(const std::vector<BlockMatch>& matches, const RansacParams& params);
HomographyFit fit_homography(const std::vector<Point2>& src, const std::vector<Point2>& dst,
                             const RansacParams& params);

/// Distance between H(src) and dst; infinity for points mapped to infinity.
double reprojection_error(const Homography& h, Point2 src, Point2 dst) noexcept;

/// Bilinear sample with zero fill outside [0, w-1] x [0, h-1].
double sample_bilinear(const GrayImage& img, double x, double y) noexcept;

/// img2 resampled into img1's frame: out(p) = img2(H p).
GrayImage warp_to_reference(const GrayImage& img2, const Homography& h, int width, int height);

/// Colour overlay: img1 in red and blue, img2 warped into img1's frame in green.
RgbImage warp_overlay(const GrayImage& img1, const GrayImage& img2, const Homography& h);

} // namespace st
