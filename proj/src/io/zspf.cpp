#include "zspose/io/zspf.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace zspose {

namespace {

constexpr char kMagic[4] = {'Z', 'S', 'P', 'F'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& out, std::uint32_t v) {
  unsigned char bytes[4] = {static_cast<unsigned char>(v & 0xff),
                            static_cast<unsigned char>((v >> 8) & 0xff),
                            static_cast<unsigned char>((v >> 16) & 0xff),
                            static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

std::uint32_t read_u32(std::istream& in) {
  unsigned char bytes[4];
  in.read(reinterpret_cast<char*>(bytes), 4);
  return static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
         (static_cast<std::uint32_t>(bytes[2]) << 16) |
         (static_cast<std::uint32_t>(bytes[3]) << 24);
}

}  // namespace

void save_feature_file(const std::string& path, const Eigen::MatrixXd& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(kMagic, 4);
  write_u32(out, kVersion);
  write_u32(out, static_cast<std::uint32_t>(rows.rows()));
  write_u32(out, static_cast<std::uint32_t>(rows.cols()));
  std::vector<float> buf(static_cast<std::size_t>(rows.rows()) * rows.cols());
  for (Eigen::Index r = 0; r < rows.rows(); ++r)
    for (Eigen::Index c = 0; c < rows.cols(); ++c)
      buf[static_cast<std::size_t>(r) * rows.cols() + c] = static_cast<float>(rows(r, c));
  // float32 payload is written as-is; this code targets little-endian hosts
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (!out) throw std::runtime_error("short write to " + path);
}

Eigen::MatrixXd load_feature_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error(path + ": not a ZSPF feature file");
  const std::uint32_t version = read_u32(in);
  if (version != kVersion)
    throw std::runtime_error(path + ": unsupported feature file version " +
                             std::to_string(version));
  const std::uint32_t rows = read_u32(in);
  const std::uint32_t dim = read_u32(in);
  std::vector<float> buf(static_cast<std::size_t>(rows) * dim);
  in.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (!in) throw std::runtime_error(path + ": truncated feature file");
  Eigen::MatrixXd m(rows, dim);
  for (std::uint32_t r = 0; r < rows; ++r)
    for (std::uint32_t c = 0; c < dim; ++c)
      m(r, c) = buf[static_cast<std::size_t>(r) * dim + c];
  return m;
}

}  // namespace zspose
