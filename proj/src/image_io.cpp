#include "st/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include <png.h>

namespace st {

namespace fs = std::filesystem;

namespace {

std::vector<std::uint8_t> read_bytes(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ImageIoError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint8_t luma(double r, double g, double b)
{
    return static_cast<std::uint8_t>(
        std::clamp(std::lround(0.299 * r + 0.587 * g + 0.114 * b), 0L, 255L));
}

// Netpbm header tokens, skipping whitespace and '#' comments.
class PnmReader {
public:
    PnmReader(const std::vector<std::uint8_t>& bytes, std::string name)
        : bytes_(bytes), name_(std::move(name))
    {
    }

    long next_int()
    {
        skip_space();
        if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) fail("malformed header");
        long v = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            v = v * 10 + (bytes_[pos_++] - '0');
            if (v > 1'000'000'000L) fail("header value too large");
        }
        return v;
    }

    // Exactly one whitespace byte separates the header from raster data.
    void end_header()
    {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) fail("malformed header");
        ++pos_;
    }

    std::size_t pos() const { return pos_; }
    [[noreturn]] void fail(const std::string& why) const
    {
        throw ImageIoError(name_ + ": " + why);
    }

private:
    void skip_space()
    {
        while (pos_ < bytes_.size()) {
            if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    const std::vector<std::uint8_t>& bytes_;
    std::string name_;
    std::size_t pos_ = 2;
};

GrayImage decode_pnm(const std::vector<std::uint8_t>& bytes, const std::string& name)
{
    const char kind = static_cast<char>(bytes[1]);
    const bool colour = kind == '3' || kind == '6';
    const bool ascii = kind == '2' || kind == '3';
    PnmReader rd(bytes, name);
    const long w = rd.next_int();
    const long h = rd.next_int();
    const long maxval = rd.next_int();
    if (w < 1 || h < 1) rd.fail("zero-sized image");
    if (maxval < 1 || maxval > 255) rd.fail("only 8-bit images are supported");
    const std::size_t channels = colour ? 3 : 1;
    const std::size_t count = static_cast<std::size_t>(w) * h * channels;

    std::vector<double> samples(count);
    if (ascii) {
        rd.end_header();
        std::istringstream in(std::string(bytes.begin() + static_cast<long>(rd.pos()), bytes.end()));
        for (auto& s : samples) {
            long v = 0;
            if (!(in >> v) || v < 0 || v > maxval) rd.fail("bad ASCII sample");
            s = static_cast<double>(v);
        }
    } else {
        rd.end_header();
        if (bytes.size() - rd.pos() < count) rd.fail("truncated raster");
        for (std::size_t i = 0; i < count; ++i) samples[i] = bytes[rd.pos() + i];
    }
    const double scale = 255.0 / static_cast<double>(maxval);

    std::vector<double> out(static_cast<std::size_t>(w) * h);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (colour) {
            out[i] = luma(samples[3 * i] * scale, samples[3 * i + 1] * scale,
                          samples[3 * i + 2] * scale);
        } else {
            out[i] = maxval == 255 ? samples[i] : std::round(samples[i] * scale);
        }
    }
    return GrayImage(static_cast<int>(w), static_cast<int>(h), std::move(out));
}

GrayImage decode_png(const std::vector<std::uint8_t>& bytes, const std::string& name)
{
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()))
        throw ImageIoError(name + ": " + image.message);
    image.format = PNG_FORMAT_RGB;
    std::vector<std::uint8_t> rgb(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, rgb.data(), 0, nullptr)) {
        png_image_free(&image);
        throw ImageIoError(name + ": " + image.message);
    }
    const int w = static_cast<int>(image.width);
    const int h = static_cast<int>(image.height);
    std::vector<double> out(static_cast<std::size_t>(w) * h);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = luma(rgb[3 * i], rgb[3 * i + 1], rgb[3 * i + 2]);
    return GrayImage(w, h, std::move(out));
}

std::vector<std::uint8_t> encode_png_raw(const std::uint8_t* pixels, int w, int h, bool colour)
{
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(w);
    image.height = static_cast<png_uint_32>(h);
    image.format = colour ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;

    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&image, nullptr, &size, 0, pixels, 0, nullptr))
        throw ImageIoError(std::string("PNG encode failed: ") + image.message);
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&image, out.data(), &size, 0, pixels, 0, nullptr))
        throw ImageIoError(std::string("PNG encode failed: ") + image.message);
    out.resize(size);
    return out;
}

std::string lower_extension(const fs::path& path)
{
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return ext;
}

} // namespace

GrayImage read_gray(const fs::path& path)
{
    const auto bytes = read_bytes(path);
    const std::string name = path.string();
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] >= '2' && bytes[1] <= '6' &&
        bytes[1] != '4')
        return decode_pnm(bytes, name);
    if (bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0) return decode_png(bytes, name);
    throw ImageIoError(name + ": unrecognised image format");
}

std::vector<std::uint8_t> encode_pgm(const Gray8& img)
{
    const std::string header = "P5\n" + std::to_string(img.width()) + " " +
                               std::to_string(img.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), img.data().begin(), img.data().end());
    return out;
}

std::vector<std::uint8_t> encode_ppm(const RgbImage& img)
{
    const std::string header = "P6\n" + std::to_string(img.width()) + " " +
                               std::to_string(img.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(out.size() + img.size() * 3);
    for (const auto& px : img.data()) {
        out.push_back(px.r);
        out.push_back(px.g);
        out.push_back(px.b);
    }
    return out;
}

std::vector<std::uint8_t> encode_png(const Gray8& img)
{
    return encode_png_raw(img.data().data(), img.width(), img.height(), false);
}

std::vector<std::uint8_t> encode_png(const RgbImage& img)
{
    std::vector<std::uint8_t> flat;
    flat.reserve(img.size() * 3);
    for (const auto& px : img.data()) {
        flat.push_back(px.r);
        flat.push_back(px.g);
        flat.push_back(px.b);
    }
    return encode_png_raw(flat.data(), img.width(), img.height(), true);
}

void write_file_atomic(const fs::path& path, const std::vector<std::uint8_t>& bytes)
{
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ImageIoError("cannot write " + tmp.string());
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        if (!out) throw ImageIoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw ImageIoError("cannot rename into " + path.string());
    }
}

void write_file_atomic(const fs::path& path, const std::string& text)
{
    write_file_atomic(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

void write_image(const fs::path& path, const Gray8& img)
{
    const auto ext = lower_extension(path);
    write_file_atomic(path, ext == ".png" ? encode_png(img) : encode_pgm(img));
}

void write_image(const fs::path& path, const RgbImage& img)
{
    const auto ext = lower_extension(path);
    write_file_atomic(path, ext == ".png" ? encode_png(img) : encode_ppm(img));
}

Gray8 encode_ternary(const TernaryImage& t)
{
    Gray8 out(t.width(), t.height(), 128);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto v = t.data()[i];
        out.data()[i] = v < 0 ? 0 : (v > 0 ? 255 : 128);
    }
    return out;
}

TernaryImage decode_ternary(const Gray8& img)
{
    TernaryImage out(img.width(), img.height(), 0);
    for (std::size_t i = 0; i < img.size(); ++i) {
        switch (img.data()[i]) {
        case 0: out.data()[i] = -1; break;
        case 128: out.data()[i] = 0; break;
        case 255: out.data()[i] = 1; break;
        default: throw ContractViolation("byte is not a ternary code");
        }
    }
    return out;
}

Gray8 to_gray8(const GrayImage& img)
{
    Gray8 out(img.width(), img.height(), 0);
    for (std::size_t i = 0; i < img.size(); ++i)
        out.data()[i] =
            static_cast<std::uint8_t>(std::clamp(std::lround(img.data()[i]), 0L, 255L));
    return out;
}

GrayImage from_gray8(const Gray8& img)
{
    return GrayImage(img.width(), img.height(),
                     std::vector<double>(img.data().begin(), img.data().end()));
}

} // namespace st
