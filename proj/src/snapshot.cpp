#include "pmlcnls/snapshot.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include "json.hpp"
#include "pmlcnls/errors.hpp"

namespace pmlcnls {

namespace {

using nlohmann::json;

constexpr std::array<char, 8> kMagic = {'C', 'N', 'L', 'S', 'S', 'N', 'A', 'P'};

template <class T>
void put_le(std::string& out, T v) {
  std::array<unsigned char, sizeof(T)> b;
  std::memcpy(b.data(), &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
  out.append(reinterpret_cast<const char*>(b.data()), b.size());
}

template <class T>
T get_le(const char* p) {
  std::array<unsigned char, sizeof(T)> b;
  std::memcpy(b.data(), p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
  T v;
  std::memcpy(&v, b.data(), sizeof(T));
  return v;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const SnapshotData& d) {
  const auto& s = d.state;
  const auto& g = s.grid();
  const auto& l = s.layout();
  json h;
  h["components"] = s.n_components();
  h["time"] = d.time;
  h["layout"] = {{"lx", l.lx}, {"ly", l.ly}, {"delta_x", l.delta_x}, {"delta_y", l.delta_y}};
  h["grid"] = {{"nx", g.nx}, {"ny", g.ny}, {"dx", g.dx}, {"dy", g.dy},
               {"layer_x", g.layer_x}, {"layer_y", g.layer_y}};
  if (d.coeffs) {
    h["coefficients"] = {{"alpha_x", d.coeffs->alpha_x()}, {"alpha_y", d.coeffs->alpha_y()},
                         {"beta", d.coeffs->beta()},       {"gamma", d.coeffs->gamma()},
                         {"eps_q", d.coeffs->eps_q()}};
  }
  h["attributes"] = d.attributes;
  const std::string header = h.dump();

  std::string out(kMagic.begin(), kMagic.end());
  put_le<std::uint32_t>(out, kSnapshotVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(header.size()));
  out += header;
  out.reserve(out.size() + s.data().size() * 16);
  for (const cplx& v : s.data()) {
    put_le<double>(out, v.real());
    put_le<double>(out, v.imag());
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open '" + path.string() + "' for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw ConfigError("failed writing '" + path.string() + "'");
}

SnapshotData read_snapshot(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open snapshot '" + path.string() + "'");
  const std::string buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (buf.size() < 16 || std::memcmp(buf.data(), kMagic.data(), kMagic.size()) != 0) {
    throw ConfigError("snapshot: bad magic in '" + path.string() + "'");
  }
  const auto version = get_le<std::uint32_t>(buf.data() + 8);
  if (version != kSnapshotVersion) throw ConfigError("snapshot: unsupported version");
  const auto hlen = get_le<std::uint32_t>(buf.data() + 12);
  if (buf.size() < 16 + static_cast<std::size_t>(hlen)) throw ConfigError("snapshot: truncated header");

  SnapshotData d;
  try {
    const json h = json::parse(buf.substr(16, hlen));
    const auto& jl = h.at("layout");
    const auto& jg = h.at("grid");
    DomainLayout layout{jl.at("lx"), jl.at("ly"), jl.at("delta_x"), jl.at("delta_y")};
    GridSpec grid{jg.at("nx"), jg.at("ny"), jg.at("dx"), jg.at("dy"), jg.at("layer_x"), jg.at("layer_y")};
    d.state = ComplexState(layout, grid, h.at("components").get<int>());
    d.time = h.at("time");
    if (h.contains("coefficients")) {
      const auto& c = h["coefficients"];
      d.coeffs = CnlsCoefficients(c.at("alpha_x"), c.at("alpha_y"), c.at("beta"), c.at("gamma"),
                                  c.at("eps_q"));
    }
    if (h.contains("attributes")) d.attributes = h["attributes"].get<std::map<std::string, double>>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("snapshot: bad header: ") + e.what());
  }
  const std::size_t payload = d.state.data().size() * 16;
  if (buf.size() != 16 + hlen + payload) throw ConfigError("snapshot: payload length mismatch");
  const char* p = buf.data() + 16 + hlen;
  for (auto& v : d.state.data()) {
    v = {get_le<double>(p), get_le<double>(p + 8)};
    p += 16;
  }
  return d;
}

}  // namespace pmlcnls
