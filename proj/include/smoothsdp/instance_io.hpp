#pragma once

// Instance files.
//
// Data file (text, UTF-8):
//   smoothsdp-matrices 1
//   matrix <name> <rows> <cols>
//   <rows lines of <cols> space-separated doubles, row-major>
//   ... repeated per matrix
// Doubles are written in shortest round-trip form, so a reload is bit-identical.
//
// Manifest (key=value per line): kind (maxeig | spca), n, m, beta or rho, eps
// (when given), v (spiked), seed, family, data (data file name relative to the
// manifest), hash.
// A maxeig instance stores matrices c, A1..Am and b (1 x m); spca stores C.

#include "smoothsdp/affine_operator.hpp"

#include <bit>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace smoothsdp {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NamedMatrix {
  std::string name;
  Matrix value;
};

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw FormatError("cannot parse number '" + std::string(s) + "'");
  return v;
}

/// FNV-1a over names, shapes and the bit patterns of all entries.
inline std::uint64_t content_hash(const std::vector<NamedMatrix>& mats) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      h ^= (word >> (8 * i)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& m : mats) {
    for (unsigned char ch : m.name) feed(ch);
    feed(static_cast<std::uint64_t>(m.value.rows()));
    feed(static_cast<std::uint64_t>(m.value.cols()));
    for (Index i = 0; i < m.value.rows(); ++i)
      for (Index j = 0; j < m.value.cols(); ++j) feed(std::bit_cast<std::uint64_t>(m.value(i, j)));
  }
  return h;
}

inline std::string hash_hex(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

inline void write_matrices(std::ostream& os, const std::vector<NamedMatrix>& mats) {
  os << "smoothsdp-matrices 1\n";
  for (const auto& m : mats) {
    os << "matrix " << m.name << ' ' << m.value.rows() << ' ' << m.value.cols() << '\n';
    for (Index i = 0; i < m.value.rows(); ++i) {
      for (Index j = 0; j < m.value.cols(); ++j) {
        if (j) os << ' ';
        os << format_double(m.value(i, j));
      }
      os << '\n';
    }
  }
}

inline std::vector<NamedMatrix> read_matrices(std::istream& is) {
  std::string magic;
  int version = 0;
  if (!(is >> magic >> version) || magic != "smoothsdp-matrices" || version != 1)
    throw FormatError("not a smoothsdp matrix file");
  std::vector<NamedMatrix> out;
  std::string tag;
  while (is >> tag) {
    if (tag != "matrix") throw FormatError("expected 'matrix', got '" + tag + "'");
    NamedMatrix m;
    Index rows = 0, cols = 0;
    if (!(is >> m.name >> rows >> cols) || rows < 0 || cols < 0) throw FormatError("bad matrix header");
    m.value.resize(rows, cols);
    std::string tok;
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) {
        if (!(is >> tok)) throw FormatError("truncated matrix '" + m.name + "'");
        m.value(i, j) = parse_double(tok);
      }
    out.push_back(std::move(m));
  }
  return out;
}

using Manifest = std::map<std::string, std::string>;

inline void write_manifest(std::ostream& os, const Manifest& mf) {
  for (const auto& [k, v] : mf) os << k << '=' << v << '\n';
}

inline Manifest read_manifest(std::istream& is) {
  Manifest mf;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw FormatError("manifest line without '=': " + line);
    mf[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return mf;
}

struct StoredInstance {
  Manifest manifest;
  std::vector<NamedMatrix> matrices;

  const Matrix& matrix(const std::string& name) const {
    for (const auto& m : matrices)
      if (m.name == name) return m.value;
    throw FormatError("instance has no matrix '" + name + "'");
  }
  const std::string& get(const std::string& key) const {
    const auto it = manifest.find(key);
    if (it == manifest.end()) throw FormatError("manifest has no key '" + key + "'");
    return it->second;
  }
  std::uint64_t hash() const { return content_hash(matrices); }
};

/// Writes <base>.mat and <base>.manifest; returns the manifest path.
inline std::filesystem::path save_instance(const std::filesystem::path& base, StoredInstance inst) {
  std::filesystem::path data = base;
  data += ".mat";
  std::filesystem::path manifest = base;
  manifest += ".manifest";
  {
    std::ofstream os(data);
    if (!os) throw FormatError("cannot write " + data.string());
    write_matrices(os, inst.matrices);
  }
  inst.manifest["data"] = data.filename().string();
  inst.manifest["hash"] = hash_hex(inst.hash());
  std::ofstream os(manifest);
  if (!os) throw FormatError("cannot write " + manifest.string());
  write_manifest(os, inst.manifest);
  return manifest;
}

inline StoredInstance load_instance(const std::filesystem::path& manifest_path) {
  std::ifstream mf(manifest_path);
  if (!mf) throw FormatError("cannot open " + manifest_path.string());
  StoredInstance inst;
  inst.manifest = read_manifest(mf);
  const std::filesystem::path data = manifest_path.parent_path() / inst.get("data");
  std::ifstream is(data);
  if (!is) throw FormatError("cannot open " + data.string());
  inst.matrices = read_matrices(is);
  if (const auto it = inst.manifest.find("hash"); it != inst.manifest.end() && it->second != hash_hex(inst.hash()))
    throw FormatError("instance hash mismatch for " + data.string());
  return inst;
}

inline std::vector<NamedMatrix> operator_matrices(const AffineOperator& op) {
  std::vector<NamedMatrix> mats;
  mats.push_back({"c", op.offset().matrix()});
  for (Index i = 0; i < op.dual_dim(); ++i)
    mats.push_back({"A" + std::to_string(i + 1), op.components()[static_cast<std::size_t>(i)].matrix()});
  mats.push_back({"b", op.b().transpose()});
  return mats;
}

inline AffineOperator operator_from(const StoredInstance& inst) {
  const Index m = std::stol(inst.get("m"));
  std::vector<SymMatrix> comps;
  for (Index i = 0; i < m; ++i) comps.emplace_back(inst.matrix("A" + std::to_string(i + 1)));
  return AffineOperator(std::move(comps), SymMatrix(inst.matrix("c")), inst.matrix("b").transpose());
}

}  // namespace smoothsdp
