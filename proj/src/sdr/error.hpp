#pragma once

#include <stdexcept>
#include <string>

namespace sdr {

enum class ErrorCode {
  InvalidArgument,  // bad raw inputs (non-finite values, malformed data)
  Dimension,        // shape mismatch or d > p
  Rank,             // rank-deficient input where full rank is required
  Config,           // invalid configuration (H out of range, bad grids, ...)
  Estimation,       // estimator could not produce a result (e.g. empty support)
  Io,               // file read/write failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace sdr
