#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "clusterseg/pgm.hpp"
#include "test_util.hpp"

namespace clusterseg {
namespace {

TEST(DecodePgm, AsciiSinglePixel) {
  const GrayImage img = decode_pgm("P2\n1 1\n255\n7\n");
  EXPECT_EQ(img, GrayImage(1, 1, std::vector<double>{7}));
}

TEST(DecodePgm, BinaryPassthrough) {
  const std::string data = std::string("P5\n2 2\n255\n") + std::string("\x00\xff\x80\x40", 4);
  const GrayImage img = decode_pgm(data);
  EXPECT_EQ(flatten(img), (std::vector<double>{0, 255, 128, 64}));
}

TEST(DecodePgm, CommentsAndLowMaxvalAreNotRescaled) {
  const GrayImage img = decode_pgm("P2\n# made by hand\n3 1 # width height\n15\n0 7 15\n");
  EXPECT_EQ(flatten(img), (std::vector<double>{0, 7, 15}));
}

TEST(DecodePgm, Errors) {
  EXPECT_THROW(decode_pgm("P6\n1 1\n255\n\x01"), PgmError);
  EXPECT_THROW(decode_pgm("P5\n1\n"), PgmError);
  EXPECT_THROW(decode_pgm("P2\n1 1\n65535\n7\n"), PgmError);
  EXPECT_THROW(decode_pgm("P5\n2 2\n255\n\x01\x02"), PgmError);
  EXPECT_THROW(decode_pgm("P2\n2 1\n255\n7\n"), PgmError);
  EXPECT_THROW(decode_pgm("P2\n1 1\n100\n101\n"), PgmError);
  EXPECT_THROW(decode_pgm("P5x1 1 255 a"), PgmError);
}

TEST(LoadImage, MissingFile) { EXPECT_THROW(load_image("/nonexistent/dir/none.pgm"), PgmError); }

TEST(SaveImage, UnwritablePath) {
  EXPECT_THROW(save_image(GrayImage(1, 1, 0.0), "/nonexistent/dir/out.pgm"), PgmError);
}

TEST(EncodePgm, BitExactHeader) {
  EXPECT_EQ(encode_pgm(GrayImage(1, 1, std::vector<double>{7})), std::string("P5\n1 1\n255\n\x07", 12));
  const std::string two = encode_pgm(GrayImage(2, 1, std::vector<double>{0, 255}));
  EXPECT_EQ(two, std::string("P5\n2 1\n255\n\x00\xff", 13));
}

TEST(EncodePgm, RoundsHalfToEven) {
  const std::string s = encode_pgm(GrayImage(3, 1, std::vector<double>{2.5, 3.5, 0.4}));
  EXPECT_EQ(s.substr(s.size() - 3), std::string("\x02\x04\x00", 3));
}

TEST(PgmRoundTrip, LoadOfSaveIsIdentity) {
  const auto dir = testing::scratch_dir("pgm_roundtrip");
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 30; ++i) {
    const GrayImage img = testing::random_image(rng, 1 + rng() % 40, 1 + rng() % 40);
    const auto path = dir / ("img" + std::to_string(i) + ".pgm");
    save_image(img, path);
    ASSERT_EQ(load_image(path), img);
  }
}

TEST(PgmRoundTrip, SaveOfLoadIsCanonicalP5) {
  // P2 input with comments and irregular spacing re-encodes to canonical P5.
  const auto dir = testing::scratch_dir("pgm_canonical");
  std::mt19937_64 rng(99);
  for (int i = 0; i < 10; ++i) {
    const GrayImage img = testing::random_image(rng, 1 + rng() % 9, 1 + rng() % 9);
    std::string p2 = "P2 # ascii\n" + std::to_string(img.width()) + "   " + std::to_string(img.height()) + "\n255\n";
    for (double v : img.pixels()) p2 += std::to_string(static_cast<int>(v)) + ((rng() & 1) ? "\n" : "  ");
    const auto in = dir / "in.pgm";
    const auto out = dir / "out.pgm";
    std::ofstream(in, std::ios::binary) << p2;
    save_image(load_image(in), out);
    std::ifstream f(out, std::ios::binary);
    const std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    ASSERT_EQ(bytes, encode_pgm(img));
  }
}

}  // namespace
}  // namespace clusterseg
