#include <cstring>
#include <filesystem>
#include <sstream>

#include "sdct/matrix_io.hpp"
#include "test_common.hpp"

using namespace sdct;
using testutil::code_of;

TEST(MatrixIo, StreamRoundTripIsBitwise) {
  const Matrix m = testutil::gaussian(7, 13, 3);
  std::stringstream ss;
  write_matrix(ss, m);
  EXPECT_EQ(ss.str().size(), 16u + 7u * 13u * 8u);
  EXPECT_EQ(read_matrix(ss), m);
}

TEST(MatrixIo, HeaderLayout) {
  Matrix m(2, 3);
  m << 1, 2, 3, 4, 5, 6;
  std::stringstream ss;
  write_matrix(ss, m);
  const std::string bytes = ss.str();
  EXPECT_EQ(bytes.substr(0, 4), "SDCT");
  const auto u32 = [&](std::size_t off) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(bytes[off + i]);
    return v;
  };
  EXPECT_EQ(u32(4), 2u);
  EXPECT_EQ(u32(8), 3u);
  EXPECT_EQ(u32(12), 0u);
  // Column-major: second stored value is m(1, 0) = 4.
  double second;
  std::memcpy(&second, bytes.data() + 16 + 8, 8);
  EXPECT_EQ(second, 4.0);
}

TEST(MatrixIo, RejectsBadMagic) {
  std::stringstream ss(std::string("XXXX") + std::string(12, '\0'));
  EXPECT_EQ(code_of([&] { read_matrix(ss); }), ErrorCode::io_error);
}

TEST(MatrixIo, RejectsTruncatedPayload) {
  std::stringstream full;
  write_matrix(full, Matrix::Ones(3, 3));
  std::stringstream cut(full.str().substr(0, 40));
  EXPECT_EQ(code_of([&] { read_matrix(cut); }), ErrorCode::io_error);
}

TEST(MatrixIo, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "sdct_matrix_io_test.bin";
  const Matrix m = testutil::gaussian(4, 5, 9);
  save_matrix(path, m);
  EXPECT_EQ(load_matrix(path), m);
  std::filesystem::remove(path);
  EXPECT_EQ(code_of([&] { load_matrix(path); }), ErrorCode::io_error);
}

TEST(MatrixIo, CsvRows) {
  Matrix m(2, 2);
  m << 0.5, -1, 2, 3;
  std::stringstream ss;
  write_matrix_csv(ss, m);
  EXPECT_EQ(ss.str(), "0.5,-1\n2,3\n");
}
