#include "scatlab/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "scatlab/errors.hpp"

namespace scatlab {
namespace {

using nlohmann::json;

std::filesystem::path with_ext(const std::filesystem::path& base, const char* ext) {
  std::filesystem::path p = base;
  p += ext;
  return p;
}

void write_values(const std::filesystem::path& path, const std::vector<cplx>& values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  std::vector<unsigned char> buf(values.size() * 8);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const float parts[2] = {static_cast<float>(values[i].real()), static_cast<float>(values[i].imag())};
    for (int p = 0; p < 2; ++p) {
      const auto bits = std::bit_cast<std::uint32_t>(parts[p]);
      for (int b = 0; b < 4; ++b) buf[i * 8 + p * 4 + b] = static_cast<unsigned char>((bits >> (8 * b)) & 0xffu);
    }
  }
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

std::vector<cplx> read_values(const std::filesystem::path& path, std::size_t count) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::vector<unsigned char> buf(count * 8);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (static_cast<std::size_t>(in.gcount()) != buf.size()) {
    throw Error(ErrorKind::Io, path.string() + " is shorter than its sidecar declares");
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorKind::Io, path.string() + " is longer than its sidecar declares");
  }
  std::vector<cplx> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    float parts[2];
    for (int p = 0; p < 2; ++p) {
      std::uint32_t bits = 0;
      for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(buf[i * 8 + p * 4 + b]) << (8 * b);
      parts[p] = std::bit_cast<float>(bits);
    }
    values[i] = {parts[0], parts[1]};
  }
  return values;
}

void write_sidecar(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
}

json read_sidecar(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  try {
    json j = json::parse(in);
    if (j.at("format") != "complex64" || j.at("byte_order") != "little") {
      throw Error(ErrorKind::Io, path.string() + ": unsupported format");
    }
    return j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Io, path.string() + ": " + e.what());
  }
}

}  // namespace

void write_field(const std::filesystem::path& base, const SpacetimeField& u) {
  const Grid& g = u.grid;
  json shape = json::array({g.M + 1});
  for (std::size_t a = 0; a < g.n; ++a) shape.push_back(g.N);
  json j = {{"format", "complex64"},
            {"byte_order", "little"},
            {"kind", "spacetime"},
            {"shape", shape},
            {"grid", {{"n", g.n}, {"L", g.L}, {"N", g.N}, {"t0", g.t0}, {"t1", g.t1}, {"M", g.M}}}};
  write_values(with_ext(base, ".c64"), u.values);
  write_sidecar(with_ext(base, ".json"), j);
}

SpacetimeField read_field(const std::filesystem::path& base) {
  const json j = read_sidecar(with_ext(base, ".json"));
  try {
    if (j.at("kind") != "spacetime") throw Error(ErrorKind::Io, "sidecar does not describe a spacetime field");
    const json& gj = j.at("grid");
    Grid g;
    g.n = gj.at("n").get<std::size_t>();
    g.L = gj.at("L").get<double>();
    g.N = gj.at("N").get<std::size_t>();
    g.t0 = gj.at("t0").get<double>();
    g.t1 = gj.at("t1").get<double>();
    g.M = gj.at("M").get<std::size_t>();
    g.validate();
    SpacetimeField u(g);
    u.values = read_values(with_ext(base, ".c64"), u.values.size());
    return u;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Io, std::string("malformed field sidecar: ") + e.what());
  }
}

void write_data(const std::filesystem::path& base, const DataFunction& f) {
  const DataGrid& dg = f.grid;
  json shape = json::array();
  for (std::size_t a = 0; a < dg.n; ++a) shape.push_back(dg.Np);
  json j = {{"format", "complex64"},
            {"byte_order", "little"},
            {"kind", "data"},
            {"shape", shape},
            {"grid", {{"n", dg.n}, {"points", dg.Np}, {"dzeta", dg.dzeta}}}};
  write_values(with_ext(base, ".c64"), f.values);
  write_sidecar(with_ext(base, ".json"), j);
}

DataFunction read_data(const std::filesystem::path& base) {
  const json j = read_sidecar(with_ext(base, ".json"));
  try {
    if (j.at("kind") != "data") throw Error(ErrorKind::Io, "sidecar does not describe a data function");
    const json& gj = j.at("grid");
    DataGrid dg{gj.at("n").get<std::size_t>(), gj.at("points").get<std::size_t>(), gj.at("dzeta").get<double>()};
    if (dg.n < 1 || dg.Np < 1 || !(dg.dzeta > 0.0)) throw Error(ErrorKind::Io, "invalid data grid in sidecar");
    DataFunction f(dg);
    f.values = read_values(with_ext(base, ".c64"), f.values.size());
    return f;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Io, std::string("malformed data sidecar: ") + e.what());
  }
}

}  // namespace scatlab
