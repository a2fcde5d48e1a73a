// Binary cache for enumerated blocks, plus a CSV exporter.  The format is
// fixed-width little-endian: every rational is stored as an i64 num/den
// pair, which the arc grid snapping guarantees for block endpoints; a
// value that does not fit is reported instead of silently truncated.
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "vlab/approx.hpp"

namespace vlab {

namespace {

constexpr char kMagic[4] = {'V', 'L', 'A', 'B'};
constexpr std::uint16_t kVersion = 1;

void put_bytes(std::ostream& os, const void* p, std::size_t n) {
  os.write(static_cast<const char*>(p), (std::streamsize)n);
}

template <class T>
void put(std::ostream& os, T v) {
  put_bytes(os, &v, sizeof v);
}

void put_i64(std::ostream& os, std::int64_t v) { put(os, v); }

std::int64_t to_i64(const Int& z, const char* what) {
  if (!z.fits_slong_p())
    throw resource_error(std::string("block cache: ") + what + " exceeds 64 bits");
  return (std::int64_t)z.get_si();
}

void put_rat(std::ostream& os, const Rat& r, const char* what) {
  put_i64(os, to_i64(r.get_num(), what));
  put_i64(os, to_i64(r.get_den(), what));
}

struct Reader {
  std::istream& is;
  const std::string& path;

  void take(void* p, std::size_t n) {
    is.read(static_cast<char*>(p), (std::streamsize)n);
    if (!is) throw std::runtime_error("block cache: truncated or unreadable file " + path);
  }
  template <class T>
  T get() {
    T v;
    take(&v, sizeof v);
    return v;
  }
  Rat get_rat() {
    const std::int64_t num = get<std::int64_t>();
    const std::int64_t den = get<std::int64_t>();
    if (den <= 0) throw std::runtime_error("block cache: corrupt rational in " + path);
    Rat r(Int((long)num), Int((long)den));
    r.canonicalize();
    return r;
  }
};

}  // namespace

void save_block(const DyadicBlock& block, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("block cache: cannot open " + tmp + " for writing");
    put_bytes(os, kMagic, 4);
    put(os, kVersion);
    put(os, (std::uint8_t)(block.primitive_only ? 1 : 0));
    put(os, (std::int32_t)block.k);
    put_rat(os, block.I_lo, "interval endpoint");
    put_rat(os, block.I_hi, "interval endpoint");
    put_rat(os, block.lambda, "lambda");
    put(os, (std::uint64_t)block.members.size());
    put(os, block.rho_plus);
    for (const auto& m : block.members) {
      for (int i = 0; i < 4; ++i) put_i64(os, to_i64(m.q[i], "member coordinate"));
      put_rat(os, m.arc_lo, "arc endpoint");
      put_rat(os, m.arc_hi, "arc endpoint");
      put(os, m.diam_up);
    }
    os.flush();
    if (!os) throw std::runtime_error("block cache: write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("block cache: cannot move " + tmp + " into place");
  }
}

DyadicBlock load_block(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("block cache: cannot open " + path);
  Reader rd{is, path};

  char magic[4];
  rd.take(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("block cache: bad magic in " + path);
  const auto version = rd.get<std::uint16_t>();
  if (version != kVersion)
    throw std::runtime_error("block cache: unsupported version in " + path);

  DyadicBlock block;
  const auto flags = rd.get<std::uint8_t>();
  block.primitive_only = (flags & 1) != 0;
  block.k = rd.get<std::int32_t>();
  block.I_lo = rd.get_rat();
  block.I_hi = rd.get_rat();
  block.lambda = rd.get_rat();
  const auto count = rd.get<std::uint64_t>();
  block.rho_plus = rd.get<double>();
  if (block.k < 0 || block.k > 62 || count > (std::uint64_t)1 << 40)
    throw std::runtime_error("block cache: implausible header in " + path);
  block.members.reserve((std::size_t)count);
  for (std::uint64_t n = 0; n < count; ++n) {
    ApproximantVector m;
    long c[4];
    for (long& ci : c) ci = (long)rd.get<std::int64_t>();
    m.q = IntVec4::of(c[0], c[1], c[2], c[3]);
    m.arc_lo = rd.get_rat();
    m.arc_hi = rd.get_rat();
    m.diam_up = rd.get<double>();
    block.members.push_back(std::move(m));
  }
  is.peek();
  if (!is.eof()) throw std::runtime_error("block cache: trailing bytes in " + path);
  return block;
}

std::string block_cache_name(const Rat& I_lo, const Rat& I_hi, const Rat& lambda,
                             int k, bool primitive_only) {
  auto enc = [](const Rat& r) {
    std::string s = rat_string(r);
    for (char& ch : s) {
      if (ch == '/') ch = '-';
    }
    return s;
  };
  std::ostringstream os;
  os << "block_I" << enc(I_lo) << '_' << enc(I_hi) << "_lam" << enc(lambda) << "_k" << k;
  if (primitive_only) os << "_prim";
  os << ".vlab";
  return os.str();
}

void export_csv(const DyadicBlock& block, const std::string& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("block csv: cannot open " + path);
  os << "q0,q1,q2,q3,arc_lo,arc_hi,diam_up\n";
  for (const auto& m : block.members) {
    os << rat_string(Rat(m.q[0])) << ',' << rat_string(Rat(m.q[1])) << ','
       << rat_string(Rat(m.q[2])) << ',' << rat_string(Rat(m.q[3])) << ','
       << decimal_string(m.arc_lo, 30) << ',' << decimal_string(m.arc_hi, 30) << ','
       << m.diam_up << '\n';
  }
  if (!os) throw std::runtime_error("block csv: write failed for " + path);
}

}  // namespace vlab
