#include "fracheat/field_io.hpp"

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

namespace fracheat {

namespace {

constexpr char kMagic[4] = {'F', 'H', 'F', '1'};

template <class T>
void put(std::ofstream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

}  // namespace

void write_field_binary(const Field& f, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw FieldIoError("cannot open " + path.string() + " for writing");
  os.write(kMagic, 4);
  put<std::int32_t>(os, f.grid.dim);
  put<std::int32_t>(os, f.grid.points);
  put<double>(os, f.grid.extent);
  put<double>(os, f.time);
  const auto stamp = std::chrono::duration_cast<std::chrono::seconds>(
                         std::chrono::system_clock::now().time_since_epoch())
                         .count();
  put<std::int64_t>(os, static_cast<std::int64_t>(stamp));
  os.write(reinterpret_cast<const char*>(f.values.data()),
           static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (!os) throw FieldIoError("write failed for " + path.string());
}

Field read_field_binary(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FieldIoError("cannot open " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) throw FieldIoError("bad field header in " + path.string());
  const int dim = get<std::int32_t>(is);
  const int m = get<std::int32_t>(is);
  const double L = get<double>(is);
  const double t = get<double>(is);
  (void)get<std::int64_t>(is);
  Field f(build_grid(dim, L, m));
  f.time = t;
  is.read(reinterpret_cast<char*>(f.values.data()),
          static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (!is) throw FieldIoError("truncated field data in " + path.string());
  return f;
}

void write_field_csv(const Field& f, const std::filesystem::path& path) {
  std::FILE* out = std::fopen(path.c_str(), "w");
  if (!out) throw FieldIoError("cannot open " + path.string() + " for writing");
  const Grid& g = f.grid;
  std::fprintf(out, "# dim=%d M=%d L=%.17g time=%.17g\n", g.dim, g.points, g.extent, f.time);
  if (g.dim == 1) {
    std::fprintf(out, "x,u\n");
    for (int i = 0; i < g.points; ++i) std::fprintf(out, "%.17g,%.17g\n", g.coord(i), f.at(i));
  } else {
    std::fprintf(out, "x,y,u\n");
    for (int i = 0; i < g.points; ++i)
      for (int j = 0; j < g.points; ++j)
        std::fprintf(out, "%.17g,%.17g,%.17g\n", g.coord(i), g.coord(j), f.at(i, j));
  }
  if (std::fclose(out) != 0) throw FieldIoError("write failed for " + path.string());
}

Field read_field_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw FieldIoError("cannot open " + path.string());
  std::string line;
  std::getline(is, line);
  int dim = 0, m = 0;
  double L = 0.0, t = 0.0;
  if (std::sscanf(line.c_str(), "# dim=%d M=%d L=%lf time=%lf", &dim, &m, &L, &t) != 4)
    throw FieldIoError("bad CSV header in " + path.string());
  Field f(build_grid(dim, L, m));
  f.time = t;
  std::getline(is, line);
  for (std::size_t n = 0; n < f.values.size(); ++n) {
    if (!std::getline(is, line)) throw FieldIoError("truncated CSV " + path.string());
    const auto pos = line.rfind(',');
    f.values[n] = std::stod(line.substr(pos + 1));
  }
  return f;
}

}  // namespace fracheat
