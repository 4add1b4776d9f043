#pragma once

// Weight-matrix bundles: a directory holding manifest.json plus one raw
// little-endian row-major binary per layer.

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace htsr {

using Matrix = Eigen::MatrixXd;

enum class Normalization { kNone, kTraceM };

std::string_view to_string(Normalization n);
Normalization parse_normalization(std::string_view text);

enum class DType { kF32, kF64 };

std::string_view to_string(DType t);
std::size_t dtype_size(DType t);

struct LayerEntry {
  std::string name;
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  DType dtype = DType::kF64;
  std::string file;  // relative to the bundle directory
  std::string layout = "row-major";
  std::string endianness = "little";
};

struct BundleManifest {
  int format_version = 1;
  std::vector<LayerEntry> layers;
};

/// An oriented layer weight matrix (rows N >= cols M), always held in f64.
struct WeightMatrix {
  std::string name;
  Matrix values;
  bool transposed = false;
  Normalization normalization = Normalization::kNone;

  std::int64_t n_rows() const { return values.rows(); }
  std::int64_t n_cols() const { return values.cols(); }
};

/// Parses and validates manifest.json. Does not touch the layer files.
BundleManifest read_manifest(const std::filesystem::path& bundle_dir);

/// Loads every layer of a bundle in manifest order, oriented, normalization
/// none. Throws kFormat, kCorruptBundle or kData.
std::vector<WeightMatrix> load_bundle(const std::filesystem::path& bundle_dir);

/// Writes matrices exactly as stored (no re-orientation). Creates the
/// directory if needed and overwrites an existing manifest.
void write_bundle(const std::filesystem::path& bundle_dir,
                  std::span<const WeightMatrix> layers,
                  DType dtype = DType::kF64);

/// Transposes when rows < cols so that N >= M.
WeightMatrix orient(Matrix raw, std::string name = {});

/// Idempotent on an already oriented matrix.
WeightMatrix orient(const WeightMatrix& w);

/// trace-m rescales W by c = sqrt(M N / ||W||_F^2), so the eigenvalues of
/// X = W^T W / N sum to M.
WeightMatrix normalize(const WeightMatrix& w, Normalization mode);

}  // namespace htsr
