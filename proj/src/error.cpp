#include "htsr/error.hpp"

namespace htsr {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kFormat: return "format";
    case ErrorCode::kCorruptBundle: return "corrupt-bundle";
    case ErrorCode::kData: return "data";
    case ErrorCode::kDegenerateMatrix: return "degenerate-matrix";
    case ErrorCode::kNumeric: return "numeric";
    case ErrorCode::kEmptySpectrum: return "empty-spectrum";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kInfiniteAlpha: return "infinite-alpha";
    case ErrorCode::kTooFewEigenvalues: return "too-few-eigenvalues";
    case ErrorCode::kDegenerateSpectrum: return "degenerate-spectrum";
    case ErrorCode::kSupport: return "support";
    case ErrorCode::kSingularSpectrum: return "singular-spectrum";
    case ErrorCode::kContract: return "contract";
    case ErrorCode::kEmptyEcs: return "empty-ecs";
  }
  return "unknown";
}

void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(to_string(code)) + ": " + what);
}

}  // namespace htsr
