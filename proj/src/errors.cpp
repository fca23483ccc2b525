#include "rbm/errors.hpp"

namespace rbm {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::ParallelLines: return "ParallelLines";
    case Errc::NotOnBoundary: return "NotOnBoundary";
    case Errc::CornerPoint: return "CornerPoint";
    case Errc::CoincidentPoints: return "CoincidentPoints";
    case Errc::AngleOutOfRange: return "AngleOutOfRange";
    case Errc::ZeroRadius: return "ZeroRadius";
    case Errc::ClockOutOfRange: return "ClockOutOfRange";
    case Errc::StartOutsideDomain: return "StartOutsideDomain";
    case Errc::StartOnBoundary: return "StartOnBoundary";
    case Errc::AsymmetricStart: return "AsymmetricStart";
    case Errc::MirrorParallelBoundary: return "MirrorParallelBoundary";
    case Errc::WrongDomain: return "WrongDomain";
    case Errc::ParameterOutOfRange: return "ParameterOutOfRange";
    case Errc::OutsideWedgeW: return "OutsideWedgeW";
    case Errc::OutsideWedgeWprime: return "OutsideWedgeWprime";
    case Errc::VertexSingularity: return "VertexSingularity";
    case Errc::RangeError: return "RangeError";
    case Errc::DegenerateInput: return "DegenerateInput";
    case Errc::EmptyMeasure: return "EmptyMeasure";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace rbm
