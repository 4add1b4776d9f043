#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace htsr {

enum class ErrorCode {
  kFormat,              // malformed or missing manifest
  kCorruptBundle,       // byte length does not match declared shape
  kData,                // non-finite entries, empty matrix, bad input values
  kDegenerateMatrix,    // all-zero matrix where a scale is required
  kNumeric,             // decomposition or quadrature failure
  kEmptySpectrum,       // no positive eigenvalues to bin
  kDomain,              // argument outside the mathematical domain
  kInfiniteAlpha,       // MLE denominator is zero
  kTooFewEigenvalues,   // power-law fit refused
  kDegenerateSpectrum,  // no usable tail candidate
  kSupport,             // Green's function evaluated on the support
  kSingularSpectrum,    // inverse-MP sampler hit a near-zero eigenvalue
  kContract,            // inputs computed under different normalizations
  kEmptyEcs,            // no eigenvalue reaches the projection threshold
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace htsr
