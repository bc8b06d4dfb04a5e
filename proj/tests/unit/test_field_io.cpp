#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <fracheat/field_io.hpp>

using namespace fracheat;

TEST_CASE("binary and csv round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "fracheat_io_test";
  std::filesystem::create_directories(dir);
  for (int dim : {1, 2}) {
    Field f(build_grid(dim, 7.5, 64));
    for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = 0.1 * i - 3.0;
    f.time = 0.375;
    write_field_binary(f, dir / "f.bin");
    const Field b = read_field_binary(dir / "f.bin");
    CHECK(b.grid == f.grid);
    CHECK(b.time == f.time);
    CHECK(b.values == f.values);
    write_field_csv(f, dir / "f.csv");
    const Field c = read_field_csv(dir / "f.csv");
    CHECK(c.grid == f.grid);
    for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(c.values[i] == doctest::Approx(f.values[i]).epsilon(1e-14));
  }
  std::ofstream(dir / "bad.bin") << "XXXX";
  CHECK_THROWS_AS(read_field_binary(dir / "bad.bin"), FieldIoError);
  CHECK_THROWS_AS(read_field_binary(dir / "missing.bin"), FieldIoError);
  std::filesystem::remove_all(dir);
}
