#pragma once

#include <filesystem>
#include <stdexcept>

#include "fracheat/spectral.hpp"

namespace fracheat {

class FieldIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Binary layout: "FHF1", int32 dim, int32 M, f64 L, f64 time, int64 unix stamp,
// then M^dim f64 samples row-major (little endian, host order).
void write_field_binary(const Field& f, const std::filesystem::path& path);
Field read_field_binary(const std::filesystem::path& path);

// CSV: "# dim=.. M=.. L=.. time=.." then x[,y],u per node, row-major.
void write_field_csv(const Field& f, const std::filesystem::path& path);
Field read_field_csv(const std::filesystem::path& path);

}  // namespace fracheat
