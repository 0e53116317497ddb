#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "st/image_io.hpp"

namespace fs = std::filesystem;

namespace st {
namespace {

class ImageIo : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() /
               ("st_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    void write_text(const fs::path& p, const std::string& s)
    {
        std::ofstream(p, std::ios::binary) << s;
    }

    fs::path dir_;
};

Gray8 random_gray8(int w, int h, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> dist(0, 255);
    Gray8 img(w, h, 0);
    for (auto& v : img.data()) v = static_cast<std::uint8_t>(dist(rng));
    return img;
}

TEST_F(ImageIo, PgmRoundTrip)
{
    const Gray8 img = random_gray8(17, 9, 1);
    write_image(dir_ / "a.pgm", img);
    EXPECT_EQ(to_gray8(read_gray(dir_ / "a.pgm")), img);
}

TEST_F(ImageIo, PngRoundTrip)
{
    const Gray8 img = random_gray8(23, 14, 2);
    write_image(dir_ / "a.png", img);
    EXPECT_EQ(to_gray8(read_gray(dir_ / "a.png")), img);
}

TEST_F(ImageIo, ColourReducedToLuma)
{
    RgbImage rgb(2, 1);
    rgb(0, 0) = {255, 0, 0};
    rgb(0, 1) = {10, 200, 30};
    write_image(dir_ / "c.ppm", rgb);
    write_image(dir_ / "c.png", rgb);
    for (const char* name : {"c.ppm", "c.png"}) {
        const GrayImage g = read_gray(dir_ / name);
        EXPECT_EQ(g(0, 0), 76.0) << name;  // round(76.245)
        EXPECT_EQ(g(0, 1), 124.0) << name;  // round(3.0 + 117.4 + 3.42)
    }
}

TEST_F(ImageIo, AsciiFormats)
{
    write_text(dir_ / "p2.pgm", "P2\n# comment\n3 2\n255\n0 1 2\n3 4 255\n");
    const GrayImage g = read_gray(dir_ / "p2.pgm");
    ASSERT_EQ(g.width(), 3);
    ASSERT_EQ(g.height(), 2);
    EXPECT_EQ(g(1, 2), 255.0);
    EXPECT_EQ(g(0, 1), 1.0);

    write_text(dir_ / "p3.ppm", "P3 1 1 255 100 100 100\n");
    EXPECT_EQ(read_gray(dir_ / "p3.ppm")(0, 0), 100.0);
}

TEST_F(ImageIo, MalformedInputsThrow)
{
    EXPECT_THROW(read_gray(dir_ / "missing.pgm"), ImageIoError);
    write_text(dir_ / "junk.pgm", "hello world");
    EXPECT_THROW(read_gray(dir_ / "junk.pgm"), ImageIoError);
    write_text(dir_ / "short.pgm", std::string("P5\n4 4\n255\n") + "abc");
    EXPECT_THROW(read_gray(dir_ / "short.pgm"), ImageIoError);
    write_text(dir_ / "deep.pgm", "P2\n1 1\n65535\n1000\n");
    EXPECT_THROW(read_gray(dir_ / "deep.pgm"), ImageIoError);
    write_text(dir_ / "bad.png", "\x89PNG\r\n\x1a\nnot really");
    EXPECT_THROW(read_gray(dir_ / "bad.png"), ImageIoError);
}

TEST_F(ImageIo, AtomicWriteLeavesNoTemporary)
{
    write_file_atomic(dir_ / "x.txt", std::string("payload"));
    EXPECT_TRUE(fs::exists(dir_ / "x.txt"));
    EXPECT_FALSE(fs::exists(dir_ / "x.txt.tmp"));
    EXPECT_THROW(write_file_atomic(dir_ / "no" / "such" / "dir.txt", std::string("x")),
                 ImageIoError);
}

TEST(TernaryEncoding, ExactValuesAndInverse)
{
    TernaryImage t(3, 1, 0);
    t(0, 0) = -1;
    t(0, 2) = 1;
    const Gray8 g = encode_ternary(t);
    EXPECT_EQ(g(0, 0), 0);
    EXPECT_EQ(g(0, 1), 128);
    EXPECT_EQ(g(0, 2), 255);
    EXPECT_EQ(decode_ternary(g), t);
    Gray8 bad(1, 1, 127);
    EXPECT_THROW(decode_ternary(bad), ContractViolation);
}

TEST(Gray8Conversion, RoundsAndClamps)
{
    const GrayImage img(3, 1, {0.4, 127.5, 254.6});
    const Gray8 g = to_gray8(img);
    EXPECT_EQ(g(0, 0), 0);
    EXPECT_EQ(g(0, 1), 128);
    EXPECT_EQ(g(0, 2), 255);
}

} // namespace
} // namespace st
