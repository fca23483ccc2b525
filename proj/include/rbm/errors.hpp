#pragma once

#include <stdexcept>
#include <string>

namespace rbm {

enum class Errc {
  ParallelLines,
  NotOnBoundary,
  CornerPoint,
  CoincidentPoints,
  AngleOutOfRange,
  ZeroRadius,
  ClockOutOfRange,
  StartOutsideDomain,
  StartOnBoundary,
  AsymmetricStart,
  MirrorParallelBoundary,
  WrongDomain,
  ParameterOutOfRange,
  OutsideWedgeW,
  OutsideWedgeWprime,
  VertexSingularity,
  RangeError,
  DegenerateInput,
  EmptyMeasure,
  GridMismatch,
  IndexOutOfRange,
  InvalidConfig,
  IoError,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace rbm
