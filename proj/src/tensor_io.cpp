#include "htsr/tensor_io.hpp"

#include "htsr/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <set>

namespace htsr {
namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(Normalization n) {
  return n == Normalization::kTraceM ? "trace-m" : "none";
}

Normalization parse_normalization(std::string_view text) {
  if (text == "none") return Normalization::kNone;
  if (text == "trace-m") return Normalization::kTraceM;
  fail(ErrorCode::kData, "unknown normalization '" + std::string(text) + "'");
}

std::string_view to_string(DType t) { return t == DType::kF32 ? "f32" : "f64"; }

std::size_t dtype_size(DType t) { return t == DType::kF32 ? 4 : 8; }

namespace {

constexpr const char* kManifestName = "manifest.json";

template <typename U>
U byteswap_if_big(U v) {
  if constexpr (std::endian::native == std::endian::big) {
    U out = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      out = (out << 8) | ((v >> (8 * i)) & 0xFF);
    }
    return out;
  }
  return v;
}

DType parse_dtype(const std::string& s, const std::string& layer) {
  if (s == "f32") return DType::kF32;
  if (s == "f64") return DType::kF64;
  fail(ErrorCode::kFormat, "layer '" + layer + "': unsupported dtype '" + s + "'");
}

std::vector<char> read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) fail(ErrorCode::kCorruptBundle, "cannot open " + p.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Matrix decode(const std::vector<char>& bytes, const LayerEntry& e) {
  Matrix m(e.rows, e.cols);
  std::size_t offset = 0;
  for (std::int64_t r = 0; r < e.rows; ++r) {
    for (std::int64_t c = 0; c < e.cols; ++c) {
      double v;
      if (e.dtype == DType::kF64) {
        std::uint64_t raw;
        std::memcpy(&raw, bytes.data() + offset, 8);
        v = std::bit_cast<double>(byteswap_if_big(raw));
        offset += 8;
      } else {
        std::uint32_t raw;
        std::memcpy(&raw, bytes.data() + offset, 4);
        v = static_cast<double>(std::bit_cast<float>(byteswap_if_big(raw)));
        offset += 4;
      }
      if (!std::isfinite(v)) {
        fail(ErrorCode::kData, "layer '" + e.name + "' has a non-finite entry at (" +
                                   std::to_string(r) + ", " + std::to_string(c) + ")");
      }
      m(r, c) = v;
    }
  }
  return m;
}

}  // namespace

BundleManifest read_manifest(const fs::path& bundle_dir) {
  const fs::path mpath = bundle_dir / kManifestName;
  if (!fs::is_regular_file(mpath)) {
    fail(ErrorCode::kFormat, "missing " + mpath.string());
  }
  json j;
  try {
    std::ifstream in(mpath);
    j = json::parse(in);
  } catch (const json::exception& ex) {
    fail(ErrorCode::kFormat, mpath.string() + ": " + ex.what());
  }

  BundleManifest manifest;
  try {
    manifest.format_version = j.at("format_version").get<int>();
    if (manifest.format_version != 1) {
      fail(ErrorCode::kFormat,
           "unsupported format_version " + std::to_string(manifest.format_version));
    }
    std::set<std::string> names;
    for (const auto& jl : j.at("layers")) {
      LayerEntry e;
      e.name = jl.at("name").get<std::string>();
      const auto& shape = jl.at("shape");
      if (!shape.is_array() || shape.size() != 2) {
        fail(ErrorCode::kFormat, "layer '" + e.name + "': shape must be [rows, cols]");
      }
      e.rows = shape[0].get<std::int64_t>();
      e.cols = shape[1].get<std::int64_t>();
      if (e.rows <= 0 || e.cols <= 0) {
        fail(ErrorCode::kFormat, "layer '" + e.name + "': shape must be positive");
      }
      e.dtype = parse_dtype(jl.at("dtype").get<std::string>(), e.name);
      e.file = jl.at("file").get<std::string>();
      e.layout = jl.value("layout", std::string("row-major"));
      e.endianness = jl.value("endianness", std::string("little"));
      if (e.layout != "row-major") {
        fail(ErrorCode::kFormat, "layer '" + e.name + "': layout must be row-major");
      }
      if (e.endianness != "little") {
        fail(ErrorCode::kFormat, "layer '" + e.name + "': endianness must be little");
      }
      if (!names.insert(e.name).second) {
        fail(ErrorCode::kFormat, "duplicate layer name '" + e.name + "'");
      }
      if (!fs::is_regular_file(bundle_dir / e.file)) {
        fail(ErrorCode::kFormat, "layer '" + e.name + "': missing data file " + e.file);
      }
      manifest.layers.push_back(std::move(e));
    }
  } catch (const json::exception& ex) {
    fail(ErrorCode::kFormat, mpath.string() + ": " + ex.what());
  }
  return manifest;
}

std::vector<WeightMatrix> load_bundle(const fs::path& bundle_dir) {
  const BundleManifest manifest = read_manifest(bundle_dir);
  std::vector<WeightMatrix> out;
  out.reserve(manifest.layers.size());
  for (const auto& e : manifest.layers) {
    const fs::path p = bundle_dir / e.file;
    const auto expected = static_cast<std::uintmax_t>(e.rows * e.cols) * dtype_size(e.dtype);
    if (fs::file_size(p) != expected) {
      fail(ErrorCode::kCorruptBundle,
           "layer '" + e.name + "': expected " + std::to_string(expected) + " bytes, found " +
               std::to_string(fs::file_size(p)));
    }
    out.push_back(orient(decode(read_file(p), e), e.name));
  }
  return out;
}

void write_bundle(const fs::path& bundle_dir, std::span<const WeightMatrix> layers,
                  DType dtype) {
  fs::create_directories(bundle_dir);
  json manifest;
  manifest["format_version"] = 1;
  manifest["layers"] = json::array();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const WeightMatrix& w = layers[i];
    const std::string file = "layer_" + std::to_string(i) + ".bin";
    std::vector<char> bytes;
    bytes.reserve(static_cast<std::size_t>(w.values.size()) * dtype_size(dtype));
    for (std::int64_t r = 0; r < w.values.rows(); ++r) {
      for (std::int64_t c = 0; c < w.values.cols(); ++c) {
        char buf[8];
        if (dtype == DType::kF64) {
          const auto raw = byteswap_if_big(std::bit_cast<std::uint64_t>(w.values(r, c)));
          std::memcpy(buf, &raw, 8);
          bytes.insert(bytes.end(), buf, buf + 8);
        } else {
          const auto raw =
              byteswap_if_big(std::bit_cast<std::uint32_t>(static_cast<float>(w.values(r, c))));
          std::memcpy(buf, &raw, 4);
          bytes.insert(bytes.end(), buf, buf + 4);
        }
      }
    }
    std::ofstream out(bundle_dir / file, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(ErrorCode::kData, "failed writing " + (bundle_dir / file).string());

    manifest["layers"].push_back({{"name", w.name.empty() ? file : w.name},
                                  {"shape", {w.values.rows(), w.values.cols()}},
                                  {"dtype", std::string(to_string(dtype))},
                                  {"file", file},
                                  {"layout", "row-major"},
                                  {"endianness", "little"}});
  }
  std::ofstream out(bundle_dir / kManifestName, std::ios::trunc);
  out << manifest.dump(2) << '\n';
  if (!out) fail(ErrorCode::kData, "failed writing manifest in " + bundle_dir.string());
}

WeightMatrix orient(Matrix raw, std::string name) {
  if (raw.rows() == 0 || raw.cols() == 0) {
    fail(ErrorCode::kData, "empty matrix" + (name.empty() ? "" : " '" + name + "'"));
  }
  WeightMatrix w;
  w.name = std::move(name);
  if (raw.rows() < raw.cols()) {
    w.values = raw.transpose();
    w.transposed = true;
  } else {
    w.values = std::move(raw);
  }
  return w;
}

WeightMatrix orient(const WeightMatrix& w) {
  WeightMatrix out = orient(w.values, w.name);
  out.transposed = out.transposed != w.transposed;
  out.normalization = w.normalization;
  return out;
}

WeightMatrix normalize(const WeightMatrix& w, Normalization mode) {
  WeightMatrix out = w;
  if (mode == Normalization::kNone) return out;
  const double fro2 = w.values.squaredNorm();
  if (!(fro2 > 0.0)) {
    fail(ErrorCode::kDegenerateMatrix, "cannot trace-m normalize all-zero matrix '" + w.name + "'");
  }
  const double n = static_cast<double>(w.n_rows());
  const double m = static_cast<double>(w.n_cols());
  out.values *= std::sqrt(m * n / fro2);
  out.normalization = mode;
  return out;
}

}  // namespace htsr
