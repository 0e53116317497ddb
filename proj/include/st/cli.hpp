#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "st/features.hpp"
#include "st/geometry.hpp"
#include "st/image_io.hpp"
#include "st/matching.hpp"
#include "st/transform.hpp"

namespace st::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kBadImage = 2,
    kBadParams = 3,
    kHomographyFailed = 4,
};

/// Entry point shared by the `st` executable and the tests. `args` excludes
/// the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Parsers for the list-valued flags. All throw ContractViolation.
std::vector<StParams> parse_scales(const std::string& text);
std::vector<Orientation> parse_orientations(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);
Pixel parse_pixel(const std::string& text);

struct BenchRow {
    int d = 0;
    double mean_seconds = 0.0;
    double pixels_per_second = 0.0;
};

/// Times build_integral + st_transform over `repeat` runs per d, after one
/// untimed warm-up run.
std::vector<BenchRow> bench_transform(const GrayImage& img, const std::vector<int>& ds, int repeat,
                                      double k1, double k2);
std::string bench_csv(const std::vector<BenchRow>& rows);

// Visualisations.
RgbImage render_regions(const RegionLabelling& regions);
RgbImage render_corners(const GrayImage& img, const EdgeMask& edges,
                        const std::vector<Corner>& corners);
RgbImage render_matches(const TernaryImage& t1, const TernaryImage& t2,
                        const std::vector<BlockMatch>& matches);
/// Linear greyscale heatmap of the valid entries. SAD is negated first, so in
/// both metrics brighter means a better match.
Gray8 render_surface(const Surface& s);

// Machine-readable dumps (JSON documents, CSV grids).
inline constexpr int kSchemaVersion = 1;
std::string regions_json(const std::string& input, const StParams& p,
                         const RegionLabelling& regions);
std::string edges_json(const std::string& input, const StParams& p, Polarity polarity,
                       int proximity, double gmin, const EdgeMask& mask,
                       const std::vector<EdgeChain>& chains);
std::string corners_json(const std::string& input, const StParams& p, Polarity polarity, int w,
                         double theta_min, const std::vector<EdgeChain>& chains,
                         const std::vector<Corner>& corners);
std::string matches_json(const std::string& input1, const std::string& input2, const StParams& st,
                         const MatchParams& mp, const std::vector<BlockMatch>& matches,
                         const HomographyFit* fit);
std::string surface_csv(const Surface& s);

} // namespace st::cli
