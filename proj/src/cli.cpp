#include "st/cli.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

namespace st::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

/// Flag values that do not fit their type's invariants.
class ParamError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) parts.push_back(cur);
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

int to_int(const std::string& s)
{
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(s, &used);
    } catch (const std::exception&) {
        throw ContractViolation("not an integer: '" + s + "'");
    }
    if (used != s.size()) throw ContractViolation("not an integer: '" + s + "'");
    return v;
}

double to_double(const std::string& s)
{
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ContractViolation("not a number: '" + s + "'");
    }
    if (used != s.size()) throw ContractViolation("not a number: '" + s + "'");
    return v;
}

std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Drawing -----------------------------------------------------------------

void put(RgbImage& img, int r, int c, Rgb colour)
{
    if (img.contains(r, c)) img(r, c) = colour;
}

void draw_line(RgbImage& img, Pixel a, Pixel b, Rgb colour)
{
    int r = a.r, c = a.c;
    const int dr = std::abs(b.r - a.r), dc = std::abs(b.c - a.c);
    const int sr = a.r < b.r ? 1 : -1, sc = a.c < b.c ? 1 : -1;
    int err = dc - dr;
    for (;;) {
        put(img, r, c, colour);
        if (r == b.r && c == b.c) break;
        const int e2 = 2 * err;
        if (e2 > -dr) {
            err -= dr;
            c += sc;
        }
        if (e2 < dc) {
            err += dc;
            r += sr;
        }
    }
}

void draw_cross(RgbImage& img, Pixel p, int arm, Rgb colour)
{
    for (int k = -arm; k <= arm; ++k) {
        put(img, p.r + k, p.c + k, colour);
        put(img, p.r + k, p.c - k, colour);
    }
}

void draw_plus(RgbImage& img, Pixel p, int arm, Rgb colour)
{
    for (int k = -arm; k <= arm; ++k) {
        put(img, p.r + k, p.c, colour);
        put(img, p.r, p.c + k, colour);
    }
}

std::uint8_t clamp8(double v)
{
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

constexpr std::array<Rgb, 12> kRegionColours{{
    {230, 25, 75},  {60, 180, 75},  {255, 225, 25}, {0, 130, 200},
    {245, 130, 48}, {145, 30, 180}, {70, 240, 240}, {240, 50, 230},
    {210, 245, 60}, {250, 190, 212}, {0, 128, 128}, {170, 110, 40},
}};

json params_json(const StParams& p)
{
    return json{{"d", p.d}, {"k1", p.k1}, {"k2", p.k2}};
}

json pixel_json(const Pixel& p)
{
    return json::array({p.r, p.c});
}

json chains_json(const std::vector<EdgeChain>& chains)
{
    json arr = json::array();
    for (std::size_t i = 0; i < chains.size(); ++i) {
        json pts = json::array();
        for (const auto& p : chains[i].points) pts.push_back(pixel_json(p));
        arr.push_back(json{{"id", i},
                           {"polarity", to_string(chains[i].polarity)},
                           {"closed", chains[i].closed},
                           {"points", std::move(pts)}});
    }
    return arr;
}

// Subcommand plumbing ------------------------------------------------------

struct Common {
    std::string out_dir = ".";
    int d = 12;
    double k1 = 4.0;
    double k2 = 4.0;
    std::uint64_t seed = 0;
    bool png = false;

    StParams st() const { return {d, k1, k2}; }
};

void add_common(CLI::App* sub, Common& c)
{
    sub->add_option("--out", c.out_dir, "Output directory")->capture_default_str();
    sub->add_option("--d", c.d, "Half-window of the local mean")->capture_default_str();
    sub->add_option("--k1", c.k1, "Threshold above the local mean")->capture_default_str();
    sub->add_option("--k2", c.k2, "Threshold below the local mean")->capture_default_str();
    sub->add_option("--seed", c.seed, "Random seed")->capture_default_str();
    sub->add_flag("--png", c.png, "Write PNG instead of PGM/PPM");
}

std::string stem_of(const std::string& path)
{
    return fs::path(path).stem().string();
}

std::string name_of(const std::string& path)
{
    return fs::path(path).filename().string();
}

fs::path output_path(const Common& c, const std::string& input, const std::string& suffix,
                     bool image, bool colour = false)
{
    std::string ext;
    if (image) ext = c.png ? ".png" : (colour ? ".ppm" : ".pgm");
    return fs::path(c.out_dir) / (stem_of(input) + suffix + ext);
}

void prepare_out_dir(const Common& c)
{
    std::error_code ec;
    fs::create_directories(c.out_dir, ec);
    if (!fs::is_directory(c.out_dir)) throw ImageIoError("cannot create output directory " + c.out_dir);
}

/// Unreadable or invalid input image.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

GrayImage load(const std::string& path)
{
    try {
        return read_gray(path);
    } catch (const ImageIoError& e) {
        throw InputError(e.what());
    } catch (const ContractViolation& e) {
        throw InputError(path + ": " + e.what());
    }
}

void check_st(const StParams& p, const GrayImage& img)
{
    try {
        p.validate_for(img.width(), img.height());
    } catch (const ContractViolation& e) {
        throw ParamError(e.what());
    }
}

void check_st(const StParams& p)
{
    try {
        p.validate();
    } catch (const ContractViolation& e) {
        throw ParamError(e.what());
    }
}

} // namespace

// Parsers ----------------------------------------------------------------------

std::vector<StParams> parse_scales(const std::string& text)
{
    std::vector<StParams> scales;
    for (const auto& item : split(text, ',')) {
        const auto fields = split(item, ':');
        if (fields.size() != 3)
            throw ContractViolation("scale '" + item + "' is not of the form d:k1:k2");
        StParams p{to_int(fields[0]), to_double(fields[1]), to_double(fields[2])};
        p.validate();
        scales.push_back(p);
    }
    if (scales.empty()) throw ContractViolation("empty scale list");
    return scales;
}

std::vector<Orientation> parse_orientations(const std::string& text)
{
    std::vector<Orientation> out;
    for (const auto& item : split(text, ',')) out.push_back(parse_orientation(item));
    if (out.empty()) throw ContractViolation("empty orientation list");
    return out;
}

std::vector<int> parse_int_list(const std::string& text)
{
    std::vector<int> out;
    for (const auto& item : split(text, ',')) out.push_back(to_int(item));
    if (out.empty()) throw ContractViolation("empty list");
    return out;
}

Pixel parse_pixel(const std::string& text)
{
    const auto fields = split(text, ',');
    if (fields.size() != 2) throw ContractViolation("expected R,C but got '" + text + "'");
    return {to_int(fields[0]), to_int(fields[1])};
}

// Benchmark ------------------------------------------------------------------

std::vector<BenchRow> bench_transform(const GrayImage& img, const std::vector<int>& ds, int repeat,
                                      double k1, double k2)
{
    if (repeat < 1) throw ContractViolation("bench repeat must be >= 1");
    using clock = std::chrono::steady_clock;
    std::vector<BenchRow> rows;
    const double pixels = static_cast<double>(img.size());
    for (int d : ds) {
        const StParams p{d, k1, k2};
        p.validate_for(img.width(), img.height());
        long checksum = 0;
        checksum += st_transform(img, p).data()[img.size() / 2];
        double total = 0.0;
        for (int i = 0; i < repeat; ++i) {
            const auto t0 = clock::now();
            const TernaryImage t = st_transform(img, IntegralImage(img), p);
            const auto t1 = clock::now();
            checksum += t.data()[img.size() / 2];
            total += std::chrono::duration<double>(t1 - t0).count();
        }
        const double mean = total / repeat;
        rows.push_back({d, mean, mean > 0.0 ? pixels / mean : 0.0});
        (void)checksum;
    }
    return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows)
{
    std::string out = "d,mean_seconds,pixels_per_second\n";
    for (const auto& r : rows)
        out += std::to_string(r.d) + "," + format_number(r.mean_seconds) + "," +
               format_number(r.pixels_per_second) + "\n";
    return out;
}

// Rendering ------------------------------------------------------------------

RgbImage render_regions(const RegionLabelling& regions)
{
    const auto& labels = regions.labels;
    RgbImage out(labels.width(), labels.height());
    for (std::size_t i = 0; i < labels.size(); ++i)
        out.data()[i] = kRegionColours[static_cast<std::size_t>(labels.data()[i]) % 12];
    return out;
}

RgbImage render_corners(const GrayImage& img, const EdgeMask& edges,
                        const std::vector<Corner>& corners)
{
    RgbImage out(img.width(), img.height());
    for (std::size_t i = 0; i < img.size(); ++i) {
        const auto v = clamp8(img.data()[i]);
        out.data()[i] = edges.data()[i] ? Rgb{0, 200, 255} : Rgb{v, v, v};
    }
    for (const auto& c : corners) draw_plus(out, c.position, 3, {255, 0, 0});
    return out;
}

RgbImage render_matches(const TernaryImage& t1, const TernaryImage& t2,
                        const std::vector<BlockMatch>& matches)
{
    RgbImage out(t1.width(), t1.height());
    for (std::size_t i = 0; i < t1.size(); ++i) {
        const int a = t1.data()[i], b = t2.data()[i];
        const auto rb = static_cast<std::uint8_t>(a * 60 + 38);
        out.data()[i] = {rb, static_cast<std::uint8_t>(b * 20 + 68), rb};
    }
    for (const auto& m : matches) draw_line(out, m.src, m.dst, {255, 255, 0});
    for (const auto& m : matches) {
        draw_cross(out, m.src, 3, {255, 0, 255});
        draw_plus(out, m.dst, 3, {0, 255, 0});
    }
    return out;
}

Gray8 render_surface(const Surface& s)
{
    const double sign = s.metric == Metric::Sad ? -1.0 : 1.0;
    double lo = 0.0, hi = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < s.grid.size(); ++i) {
        if (!s.valid[i]) continue;
        const double v = sign * s.grid[i];
        lo = any ? std::min(lo, v) : v;
        hi = any ? std::max(hi, v) : v;
        any = true;
    }
    Gray8 out(s.cols(), s.rows(), 0);
    for (std::size_t i = 0; i < s.grid.size(); ++i) {
        if (!s.valid[i]) continue;
        const double v = sign * s.grid[i];
        out.data()[i] = hi > lo ? clamp8(255.0 * (v - lo) / (hi - lo)) : 255;
    }
    return out;
}

// Dumps -------------------------------------------------------------------------

std::string regions_json(const std::string& input, const StParams& p,
                         const RegionLabelling& regions)
{
    json arr = json::array();
    for (const auto& r : regions.regions) {
        json runs = json::array();
        for (const auto& run : r.runs) runs.push_back(json::array({run.row, run.col, run.length}));
        arr.push_back(json{{"label", r.label},
                           {"quant", r.quant},
                           {"area", r.area},
                           {"bbox", json::array({r.bbox.min_r, r.bbox.min_c, r.bbox.max_r,
                                                 r.bbox.max_c})},
                           {"centroid", json::array({r.centroid_r, r.centroid_c})},
                           {"runs", std::move(runs)}});
    }
    const json doc{{"schema_version", kSchemaVersion},
                   {"kind", "regions"},
                   {"input", input},
                   {"width", regions.labels.width()},
                   {"height", regions.labels.height()},
                   {"params", params_json(p)},
                   {"region_count", regions.regions.size()},
                   {"regions", std::move(arr)}};
    return doc.dump(1) + "\n";
}

std::string edges_json(const std::string& input, const StParams& p, Polarity polarity,
                       int proximity, double gmin, const EdgeMask& mask,
                       const std::vector<EdgeChain>& chains)
{
    long count = 0;
    for (auto v : mask.data()) count += v != 0;
    json params = params_json(p);
    params["proximity"] = proximity;
    params["gmin"] = gmin;
    const json doc{{"schema_version", kSchemaVersion},
                   {"kind", "edges"},
                   {"input", input},
                   {"width", mask.width()},
                   {"height", mask.height()},
                   {"polarity", to_string(polarity)},
                   {"params", std::move(params)},
                   {"edge_pixel_count", count},
                   {"chains", chains_json(chains)}};
    return doc.dump(1) + "\n";
}

std::string corners_json(const std::string& input, const StParams& p, Polarity polarity, int w,
                         double theta_min, const std::vector<EdgeChain>& chains,
                         const std::vector<Corner>& corners)
{
    json params = params_json(p);
    params["w"] = w;
    params["theta_min"] = theta_min;
    json arr = json::array();
    for (const auto& c : corners)
        arr.push_back(json{{"position", pixel_json(c.position)},
                           {"turning_angle", c.turning_angle},
                           {"chain_id", c.chain_id},
                           {"index_in_chain", c.index_in_chain}});
    const json doc{{"schema_version", kSchemaVersion},
                   {"kind", "corners"},
                   {"input", input},
                   {"polarity", to_string(polarity)},
                   {"params", std::move(params)},
                   {"chain_count", chains.size()},
                   {"corner_count", corners.size()},
                   {"corners", std::move(arr)}};
    return doc.dump(1) + "\n";
}

std::string matches_json(const std::string& input1, const std::string& input2, const StParams& st,
                         const MatchParams& mp, const std::vector<BlockMatch>& matches,
                         const HomographyFit* fit)
{
    json params = params_json(st);
    params["dim"] = mp.dim;
    params["max_r"] = mp.max_r;
    params["max_c"] = mp.max_c;
    params["row_stride"] = mp.row_stride;
    params["col_stride"] = mp.col_stride;
    params["texture_min"] = mp.texture_min;
    params["sad_max"] = mp.sad_max;
    json arr = json::array();
    for (const auto& m : matches)
        arr.push_back(
            json{{"src", pixel_json(m.src)}, {"dst", pixel_json(m.dst)}, {"score", m.score}});
    json doc{{"schema_version", kSchemaVersion},
             {"kind", "matches"},
             {"input1", input1},
             {"input2", input2},
             {"params", std::move(params)},
             {"match_count", matches.size()},
             {"matches", std::move(arr)}};
    if (fit) {
        json rows = json::array();
        for (int r = 0; r < 3; ++r)
            rows.push_back(json::array(
                {fit->h.matrix()(r, 0), fit->h.matrix()(r, 1), fit->h.matrix()(r, 2)}));
        doc["homography"] = json{{"matrix", std::move(rows)},
                                 {"inliers", fit->inliers},
                                 {"mean_inlier_error", fit->mean_inlier_error}};
    }
    return doc.dump(1) + "\n";
}

std::string surface_csv(const Surface& s)
{
    std::string out = "dr";
    for (int dc = -s.max_c; dc <= s.max_c; ++dc) out += "," + std::to_string(dc);
    out += "\n";
    for (int dr = -s.max_r; dr <= s.max_r; ++dr) {
        out += std::to_string(dr);
        for (int dc = -s.max_c; dc <= s.max_c; ++dc)
            out += "," + (s.is_valid(dr, dc) ? format_number(s.at(dr, dc)) : std::string());
        out += "\n";
    }
    return out;
}

// Commands ----------------------------------------------------------------------

namespace {

struct TransformArgs {
    std::string input;
    std::string scales;
    std::string asym;
};

int cmd_transform(const Common& c, const TransformArgs& a, std::ostream& out)
{
    std::vector<StParams> scales;
    std::vector<Orientation> orientations;
    try {
        if (!a.scales.empty()) scales = parse_scales(a.scales);
        if (!a.asym.empty()) orientations = parse_orientations(a.asym);
    } catch (const ContractViolation& e) {
        throw ParamError(e.what());
    }
    check_st(c.st());
    const GrayImage img = load(a.input);

    TernaryImage t;
    if (!scales.empty()) {
        for (const auto& s : scales) check_st(s, img);
        t = st_transform_multiscale(img, scales);
    } else if (!orientations.empty()) {
        check_st(c.st(), img);
        t = st_transform_asymmetric(img, c.st(), orientations);
    } else {
        check_st(c.st(), img);
        t = st_transform(img, c.st());
    }
    prepare_out_dir(c);
    const auto path = output_path(c, a.input, ".st", true);
    write_image(path, encode_ternary(t));
    out << path.string() << "\n";
    return kOk;
}

struct FeatureArgs {
    std::string input;
    std::string polarity = "dark";
    int proximity = 2;
    double gmin = 0.0;
    int w = 4;
    double theta_min = kDefaultCornerThetaMin;
};

struct EdgeStage {
    GrayImage img;
    Polarity polarity;
    EdgeMask mask;
    std::vector<EdgeChain> chains;
};

EdgeStage run_edges(const Common& c, const FeatureArgs& a)
{
    Polarity polarity{};
    try {
        polarity = parse_polarity(a.polarity);
    } catch (const ContractViolation& e) {
        throw ParamError(e.what());
    }
    if (a.proximity < 1) throw ParamError("--proximity must be >= 1");
    if (!(a.gmin >= 0.0)) throw ParamError("--gmin must be >= 0");
    check_st(c.st());
    GrayImage img = load(a.input);
    check_st(c.st(), img);

    const TernaryImage t = st_transform(img, c.st());
    EdgeMask mask = gradient_filter(extract_edges(t, polarity, a.proximity), img, a.gmin);
    auto chains = trace_chains(mask, polarity);
    return {std::move(img), polarity, std::move(mask), std::move(chains)};
}

int cmd_regions(const Common& c, const FeatureArgs& a, std::ostream& out)
{
    check_st(c.st());
    const GrayImage img = load(a.input);
    check_st(c.st(), img);
    const RegionLabelling regions = label_regions(st_transform(img, c.st()));
    prepare_out_dir(c);
    const auto viz = output_path(c, a.input, ".regions", true, true);
    const auto dump = output_path(c, a.input, ".regions.json", false);
    write_image(viz, render_regions(regions));
    write_file_atomic(dump, regions_json(name_of(a.input), c.st(), regions));
    out << viz.string() << "\n" << dump.string() << "\n";
    return kOk;
}

int cmd_edges(const Common& c, const FeatureArgs& a, std::ostream& out)
{
    const EdgeStage e = run_edges(c, a);
    prepare_out_dir(c);
    Gray8 mask8(e.mask.width(), e.mask.height(), 0);
    for (std::size_t i = 0; i < e.mask.size(); ++i) mask8.data()[i] = e.mask.data()[i] ? 255 : 0;
    const auto viz = output_path(c, a.input, ".edges", true);
    const auto dump = output_path(c, a.input, ".edges.json", false);
    write_image(viz, mask8);
    write_file_atomic(dump, edges_json(name_of(a.input), c.st(), e.polarity, a.proximity, a.gmin,
                                       e.mask, e.chains));
    out << viz.string() << "\n" << dump.string() << "\n";
    return kOk;
}

int cmd_corners(const Common& c, const FeatureArgs& a, std::ostream& out)
{
    if (a.w < 1) throw ParamError("--w must be >= 1");
    if (!(a.theta_min >= 0.0) || a.theta_min > std::numbers::pi)
        throw ParamError("--theta-min must be in [0, pi]");
    const EdgeStage e = run_edges(c, a);
    const auto corners = detect_corners(e.chains, a.w, a.theta_min);
    prepare_out_dir(c);
    const auto viz = output_path(c, a.input, ".corners", true, true);
    const auto dump = output_path(c, a.input, ".corners.json", false);
    write_image(viz, render_corners(e.img, e.mask, corners));
    write_file_atomic(dump, corners_json(name_of(a.input), c.st(), e.polarity, a.w, a.theta_min,
                                         e.chains, corners));
    out << viz.string() << "\n" << dump.string() << "\n";
    return kOk;
}

struct MatchArgs {
    std::string input1;
    std::string input2;
    MatchParams mp;
    bool rectify = false;
    std::string surface;
    double ransac_threshold = 3.0;
    int ransac_iterations = 1000;
};

int cmd_match(const Common& c, const MatchArgs& a, std::ostream& out, std::ostream& err)
{
    try {
        a.mp.validate();
    } catch (const ContractViolation& e) {
        throw ParamError(e.what());
    }
    if (a.ransac_iterations < 1) throw ParamError("--ransac-iters must be >= 1");
    if (!(a.ransac_threshold > 0.0)) throw ParamError("--ransac-threshold must be > 0");
    std::optional<Pixel> surface_center;
    if (!a.surface.empty()) {
        try {
            surface_center = parse_pixel(a.surface);
        } catch (const ContractViolation& e) {
            throw ParamError(e.what());
        }
    }
    check_st(c.st());

    const GrayImage img1 = load(a.input1);
    const GrayImage img2 = load(a.input2);
    if (img1.width() != img2.width() || img1.height() != img2.height())
        throw ParamError("input images differ in size");
    check_st(c.st(), img1);
    if (surface_center) {
        const auto [r, col] = *surface_center;
        if (r - a.mp.dim < 0 || col - a.mp.dim < 0 || r + a.mp.dim >= img1.height() ||
            col + a.mp.dim >= img1.width())
            throw ParamError("--surface patch does not fit in the first image");
    }

    const TernaryImage t1 = st_transform(img1, c.st());
    const TernaryImage t2 = st_transform(img2, c.st());
    const auto matches = block_match(t1, t2, a.mp);

    prepare_out_dir(c);
    const auto list = output_path(c, a.input1, ".matches.json", false);
    const auto viz = output_path(c, a.input1, ".matches", true, true);

    std::optional<HomographyFit> fit;
    std::string fit_error;
    if (a.rectify) {
        try {
            fit = fit_homography(matches, RansacParams{a.ransac_threshold, a.ransac_iterations,
                                                       c.seed});
        } catch (const EstimationFailure& e) {
            fit_error = e.what();
        }
    }

    write_file_atomic(list, matches_json(name_of(a.input1), name_of(a.input2), c.st(), a.mp,
                                         matches, fit ? &*fit : nullptr));
    write_image(viz, render_matches(t1, t2, matches));
    out << list.string() << "\n" << viz.string() << "\n";

    if (surface_center) {
        const Surface sad = sad_surface(t1, t2, *surface_center, a.mp);
        const Surface zn = zncc_surface(img1, img2, *surface_center, a.mp);
        const std::array<std::pair<const Surface*, std::string>, 2> surfaces{
            {{&sad, ".surface_sad"}, {&zn, ".surface_zncc"}}};
        for (const auto& [s, suffix] : surfaces) {
            const auto csv = output_path(c, a.input1, suffix + ".csv", false);
            const auto heat = output_path(c, a.input1, suffix, true);
            write_file_atomic(csv, surface_csv(*s));
            write_image(heat, render_surface(*s));
            out << csv.string() << "\n" << heat.string() << "\n";
        }
    }

    if (a.rectify) {
        if (!fit) {
            err << "st match: homography estimation failed: " << fit_error << "\n";
            return kHomographyFailed;
        }
        const auto rect = output_path(c, a.input1, ".rectified", true, true);
        write_image(rect, warp_overlay(img1, img2, fit->h));
        out << rect.string() << "\n";
    }
    return kOk;
}

struct BenchArgs {
    std::string input;
    std::string d_list = "6,12,24";
    int repeat = 5;
};

int cmd_bench(const Common& c, const BenchArgs& a, std::ostream& out)
{
    if (a.repeat < 1) throw ParamError("--repeat must be >= 1");
    std::vector<int> ds;
    try {
        ds = parse_int_list(a.d_list);
        for (int d : ds) StParams{d, c.k1, c.k2}.validate();
    } catch (const ContractViolation& e) {
        throw ParamError(e.what());
    }
    const GrayImage img = load(a.input);
    for (int d : ds) check_st(StParams{d, c.k1, c.k2}, img);

    const auto rows = bench_transform(img, ds, a.repeat, c.k1, c.k2);
    const std::string csv = bench_csv(rows);
    prepare_out_dir(c);
    const auto path = output_path(c, a.input, ".bench.csv", false);
    write_file_atomic(path, csv);
    out << csv;
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"ST transform feature extraction and matching", "st"};
    app.require_subcommand(1);

    Common common;
    TransformArgs ta;
    FeatureArgs fa;
    MatchArgs ma;
    BenchArgs ba;

    auto* transform = app.add_subcommand("transform", "Write the ST transform as a ternary image");
    add_common(transform, common);
    transform->add_option("input", ta.input, "Input image")->required();
    transform->add_option("--scales", ta.scales, "Multi-scale list d:k1:k2,... finest first");
    transform->add_option("--asym", ta.asym, "Oriented half-window means: left,right,up,down");

    auto add_feature = [&](const char* name, const char* help) {
        auto* sub = app.add_subcommand(name, help);
        add_common(sub, common);
        sub->add_option("input", fa.input, "Input image")->required();
        return sub;
    };
    auto* regions = add_feature("regions", "Regions of constant quantisation");
    auto* edges = add_feature("edges", "Polarity edges of the ST transform");
    auto* corners = add_feature("corners", "Curvature maxima along edge chains");
    for (auto* sub : {edges, corners}) {
        sub->add_option("--polarity", fa.polarity, "dark or light")->capture_default_str();
        sub->add_option("--proximity", fa.proximity, "Opposite-polarity search radius")
            ->capture_default_str();
        sub->add_option("--gmin", fa.gmin, "Minimum central-difference gradient")
            ->capture_default_str();
    }
    corners->add_option("--w", fa.w, "Arc half-span in chain steps")->capture_default_str();
    corners->add_option("--theta-min", fa.theta_min, "Minimum |turning angle|, radians")
        ->capture_default_str();

    auto* match = app.add_subcommand("match", "Ternary block matching between two images");
    add_common(match, common);
    match->add_option("input1", ma.input1, "First image")->required();
    match->add_option("input2", ma.input2, "Second image")->required();
    match->add_option("--dim", ma.mp.dim, "Patch half-size")->capture_default_str();
    match->add_option("--max-r", ma.mp.max_r, "Vertical search radius")->capture_default_str();
    match->add_option("--max-c", ma.mp.max_c, "Horizontal search radius")->capture_default_str();
    match->add_option("--row-stride", ma.mp.row_stride)->capture_default_str();
    match->add_option("--col-stride", ma.mp.col_stride)->capture_default_str();
    match->add_option("--texture-min", ma.mp.texture_min)->capture_default_str();
    match->add_option("--sad-max", ma.mp.sad_max)->capture_default_str();
    match->add_flag("--legacy-sentinel", ma.mp.legacy_sentinel,
                    "Out-of-range surface score 7000");
    match->add_flag("--rectify", ma.rectify, "Fit a homography and write the warped overlay");
    match->add_option("--surface", ma.surface, "Write SAD/ZNCC surfaces centred at R,C");
    match->add_option("--ransac-threshold", ma.ransac_threshold)->capture_default_str();
    match->add_option("--ransac-iters", ma.ransac_iterations)->capture_default_str();

    auto* bench = app.add_subcommand("bench", "Time the transform across window sizes");
    add_common(bench, common);
    bench->add_option("input", ba.input, "Input image")->required();
    bench->add_option("--d-list", ba.d_list, "Comma-separated half-windows")->capture_default_str();
    bench->add_option("--repeat", ba.repeat, "Timed runs per d")->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "st: " << e.what() << "\n";
        return kBadParams;
    }

    try {
        if (transform->parsed()) return cmd_transform(common, ta, out);
        if (regions->parsed()) return cmd_regions(common, fa, out);
        if (edges->parsed()) return cmd_edges(common, fa, out);
        if (corners->parsed()) return cmd_corners(common, fa, out);
        if (match->parsed()) return cmd_match(common, ma, out, err);
        if (bench->parsed()) return cmd_bench(common, ba, out);
    } catch (const ParamError& e) {
        err << "st: invalid parameters: " << e.what() << "\n";
        return kBadParams;
    } catch (const InputError& e) {
        err << "st: " << e.what() << "\n";
        return kBadImage;
    } catch (const std::exception& e) {
        err << "st: " << e.what() << "\n";
        return kFailure;
    }
    return kBadParams;
}

} // namespace st::cli
