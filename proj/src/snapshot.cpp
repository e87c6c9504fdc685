#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>

#include "quadsim/policy.hpp"

namespace quadsim {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f32(std::vector<std::uint8_t>& out, double v) {
  put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
}

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  std::uint32_t u32() {
    if (pos_ + 4 > bytes_.size()) throw std::runtime_error("snapshot: truncated data");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  double f32() { return static_cast<double>(std::bit_cast<float>(u32())); }
  bool at_end() const { return pos_ == bytes_.size(); }

 private:
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_snapshot(const PolicyNet& net) {
  std::vector<std::uint8_t> out(std::begin(kSnapshotMagic), std::end(kSnapshotMagic));
  put_u32(out, kSnapshotVersion);
  const auto& sizes = net.mean.sizes();
  put_u32(out, static_cast<std::uint32_t>(sizes.size()));
  for (int s : sizes) put_u32(out, static_cast<std::uint32_t>(s));
  for (int l = 0; l < net.mean.num_layers(); ++l) {
    const MatrixXd& w = net.mean.weight(l);
    for (int r = 0; r < w.rows(); ++r) {
      for (int c = 0; c < w.cols(); ++c) put_f32(out, w(r, c));
    }
    const VectorXd& b = net.mean.bias(l);
    for (int r = 0; r < b.size(); ++r) put_f32(out, b[r]);
  }
  for (int i = 0; i < net.log_std.size(); ++i) put_f32(out, net.log_std[i]);
  return out;
}

PolicyNet decode_snapshot(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kSnapshotMagic, 4) != 0) {
    throw std::runtime_error("snapshot: bad magic");
  }
  const std::vector<std::uint8_t> body(bytes.begin() + 4, bytes.end());
  Reader in(body);
  const std::uint32_t version = in.u32();
  if (version != kSnapshotVersion) {
    throw std::runtime_error("snapshot: unsupported version " + std::to_string(version));
  }
  const std::uint32_t n = in.u32();
  if (n < 2 || n > 64) throw std::runtime_error("snapshot: bad layer count");
  std::vector<int> sizes;
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::uint32_t s = in.u32();
    if (s == 0 || s > (1u << 20)) throw std::runtime_error("snapshot: bad layer size");
    sizes.push_back(static_cast<int>(s));
  }
  PolicyNet net(sizes, 0.0);
  for (int l = 0; l < net.mean.num_layers(); ++l) {
    MatrixXd& w = net.mean.weight(l);
    for (int r = 0; r < w.rows(); ++r) {
      for (int c = 0; c < w.cols(); ++c) w(r, c) = in.f32();
    }
    VectorXd& b = net.mean.bias(l);
    for (int r = 0; r < b.size(); ++r) b[r] = in.f32();
  }
  for (int i = 0; i < net.log_std.size(); ++i) net.log_std[i] = in.f32();
  if (!in.at_end()) throw std::runtime_error("snapshot: trailing bytes");
  return net;
}

void save_snapshot(const std::string& path, const PolicyNet& net) {
  const auto bytes = encode_snapshot(net);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

PolicyNet load_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_snapshot(bytes);
}

}  // namespace quadsim
