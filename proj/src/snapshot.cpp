#include "bfsi/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

namespace bfsi {
namespace {

constexpr char kMagic[8] = {'B', 'F', 'S', 'I', 'S', 'N', 'A', 'P'};
constexpr std::uint16_t kVersion = 1;

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    buf_.insert(buf_.end(), c, c + n);
  }
  template <class U>
  void uint(U v) {
    for (std::size_t k = 0; k < sizeof(U); ++k) buf_.push_back(static_cast<unsigned char>(v >> (8 * k)));
  }
  void f64(double v) { uint(std::bit_cast<std::uint64_t>(v)); }
  const std::vector<unsigned char>& data() const { return buf_; }

 private:
  std::vector<unsigned char> buf_;
};

class Reader {
 public:
  explicit Reader(std::vector<unsigned char> buf) : buf_(std::move(buf)) {}
  const unsigned char* take(std::size_t n) {
    if (buf_.size() - pos_ < n) throw SnapshotError("snapshot is truncated");
    const unsigned char* p = buf_.data() + pos_;
    pos_ += n;
    return p;
  }
  template <class U>
  U uint() {
    const unsigned char* p = take(sizeof(U));
    U v = 0;
    for (std::size_t k = 0; k < sizeof(U); ++k) v |= static_cast<U>(static_cast<U>(p[k]) << (8 * k));
    return v;
  }
  double f64() { return std::bit_cast<double>(uint<std::uint64_t>()); }
  bool at_end() const { return pos_ == buf_.size(); }

 private:
  std::vector<unsigned char> buf_;
  std::size_t pos_ = 0;
};

std::uint8_t region_tag(Region r) { return r == Region::Fluid ? 0 : r == Region::Solid ? 1 : 2; }

Region tag_region(std::uint8_t t) {
  switch (t) {
    case 0: return Region::Fluid;
    case 1: return Region::Solid;
    case 2: return Region::Whole;
  }
  throw SnapshotError("snapshot has an unknown region tag");
}

}  // namespace

const ScalarField& Snapshot::field(const std::string& name) const {
  for (const auto& [n, f] : fields)
    if (n == name) return f;
  throw SnapshotError("snapshot has no field '" + name + "'");
}

State Snapshot::to_state(const Grid& g) const {
  if (g.spec.Nx != domain.Nx || g.spec.Ny_f != domain.Ny_f || g.spec.Ny_s != domain.Ny_s)
    throw SnapshotError("snapshot grid does not match");
  State s;
  s.t = t;
  s.v.c[0] = field("v_x");
  s.v.c[1] = field("v_y");
  s.d = field("d");
  s.w.c[0] = field("w_x");
  s.w.c[1] = field("w_y");
  s.p = field("p");
  return s;
}

void write_snapshot(const State& s, const Grid& g, const std::string& path) {
  const std::pair<const char*, const ScalarField*> fields[] = {{"v_x", &s.v.c[0]}, {"v_y", &s.v.c[1]}, {"d", &s.d},
                                                               {"w_x", &s.w.c[0]}, {"w_y", &s.w.c[1]}, {"p", &s.p}};
  Writer w;
  w.bytes(kMagic, sizeof kMagic);
  w.uint<std::uint16_t>(kVersion);
  w.uint<std::uint32_t>(static_cast<std::uint32_t>(g.spec.Nx));
  w.uint<std::uint32_t>(static_cast<std::uint32_t>(g.spec.Ny_f));
  w.uint<std::uint32_t>(static_cast<std::uint32_t>(g.spec.Ny_s));
  w.f64(g.spec.L);
  w.f64(s.t);
  w.uint<std::uint32_t>(static_cast<std::uint32_t>(std::size(fields)));
  for (const auto& [name, f] : fields) {
    if (f->nx != g.nx() || f->rows != g.rows(f->region)) throw SnapshotError(std::string("field ") + name + " does not match the grid");
    const std::size_t len = std::strlen(name);
    w.uint<std::uint16_t>(static_cast<std::uint16_t>(len));
    w.bytes(name, len);
    w.uint<std::uint8_t>(region_tag(f->region));
  }
  for (const auto& [name, f] : fields)
    for (double v : f->values) w.f64(v);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SnapshotError("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(w.data().data()), static_cast<std::streamsize>(w.data().size()));
  if (!out) throw SnapshotError("write to " + path + " failed");
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError("cannot open " + path);
  Reader r(std::vector<unsigned char>(std::istreambuf_iterator<char>(in), {}));
  if (std::memcmp(r.take(sizeof kMagic), kMagic, sizeof kMagic) != 0) throw SnapshotError("not a snapshot (bad magic)");
  if (r.uint<std::uint16_t>() != kVersion) throw SnapshotError("unsupported snapshot version");
  Snapshot snap;
  snap.domain.Nx = static_cast<int>(r.uint<std::uint32_t>());
  snap.domain.Ny_f = static_cast<int>(r.uint<std::uint32_t>());
  snap.domain.Ny_s = static_cast<int>(r.uint<std::uint32_t>());
  snap.domain.L = r.f64();
  snap.t = r.f64();
  Grid g;
  try {
    g = build_grid(snap.domain);
  } catch (const GeometryError& e) {
    throw SnapshotError(std::string("snapshot header: ") + e.what());
  }
  const std::uint32_t count = r.uint<std::uint32_t>();
  std::vector<std::pair<std::string, Region>> dir;
  for (std::uint32_t k = 0; k < count; ++k) {
    const std::uint16_t len = r.uint<std::uint16_t>();
    const unsigned char* p = r.take(len);
    std::string name(reinterpret_cast<const char*>(p), len);
    dir.emplace_back(std::move(name), tag_region(r.uint<std::uint8_t>()));
  }
  for (const auto& [name, region] : dir) {
    ScalarField f(g, region);
    for (double& v : f.values) v = r.f64();
    snap.fields.emplace_back(name, std::move(f));
  }
  if (!r.at_end()) throw SnapshotError("snapshot has trailing bytes");
  return snap;
}

}  // namespace bfsi
