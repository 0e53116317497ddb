#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "st/image.hpp"

namespace st {

/// Block matcher settings. Defaults are tuned to roughly VGA stereo pairs.
struct MatchParams {
    int dim = 40;             ///< patch half-size; patches are (2*dim+1)^2
    int max_r = 16;           ///< vertical search radius
    int max_c = 16;           ///< horizontal search radius
    int row_stride = 100;
    int col_stride = 50;
    double texture_min = 1050.0;
    double sad_max = 6000.0;
    /// Use 7000 as the out-of-range surface score instead of 2*(2*dim+1)^2 + 1.
    bool legacy_sentinel = false;

    void validate() const;
    int side() const noexcept { return 2 * dim + 1; }
    /// Score stored for displacements whose patch does not fit.
    double sentinel() const noexcept;
};

struct BlockMatch {
    Pixel src;
    Pixel dst;
    double score = 0.0;
};

enum class Metric { Sad, Zncc };

const char* to_string(Metric m) noexcept;

/// Score grid over displacements [-max_r, max_r] x [-max_c, max_c].
/// Displacements whose patch leaves the second image hold the out-of-range
/// value: the sentinel for SAD, -1 for ZNCC.
struct Surface {
    int max_r = 0;
    int max_c = 0;
    Metric metric = Metric::Sad;
    std::vector<double> grid;
    std::vector<std::uint8_t> valid;

    int rows() const noexcept { return 2 * max_r + 1; }
    int cols() const noexcept { return 2 * max_c + 1; }
    std::size_t index(int dr, int dc) const noexcept
    {
        return static_cast<std::size_t>(dr + max_r) * cols() + (dc + max_c);
    }
    double at(int dr, int dc) const noexcept { return grid[index(dr, dc)]; }
    bool is_valid(int dr, int dc) const noexcept { return valid[index(dr, dc)] != 0; }

    /// Best displacement: minimum for SAD, maximum for ZNCC, first in raster
    /// order on ties; only valid entries are considered.
    Pixel best() const;
};

/// Copy of the (2*dim+1)^2 patch centred on (r, c).
TernaryImage extract_patch(const TernaryImage& t, int r, int c, int dim);

/// Number of nonzero ternary values.
double texture_score(std::span<const std::int8_t> patch) noexcept;
double texture_score(const TernaryImage& patch) noexcept;

/// Sum of absolute differences; throws ContractViolation on a size mismatch.
double sad(std::span<const std::int8_t> a, std::span<const std::int8_t> b);
double sad(const TernaryImage& a, const TernaryImage& b);

Surface sad_surface(const TernaryImage& t1, const TernaryImage& t2, Pixel center,
                    const MatchParams& p);

/// Zero-mean normalised cross-correlation of intensity patches. A patch with
/// zero variance scores 0.
Surface zncc_surface(const GrayImage& img1, const GrayImage& img2, Pixel center,
                     const MatchParams& p);

/// Zero-mean normalised cross-correlation of two equal-size patches.
double zncc(std::span<const double> a, std::span<const double> b);

/// Grid-sampled ternary block matching from t1 into t2. Candidate rows are
/// dim+1, dim+1+row_stride, ... up to height-dim-3 (likewise columns). A
/// candidate is searched when its texture score exceeds texture_min, and it is
/// accepted when its minimum SAD is below sad_max. Output is in candidate
/// raster order.
std::vector<BlockMatch> block_match(const TernaryImage& t1, const TernaryImage& t2,
                                    const MatchParams& p);

} // namespace st
