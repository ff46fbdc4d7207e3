#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace esseen {

enum class Errc {
  NonFiniteInput,
  ProbSumMismatch,
  EmptySupport,
  BadParam,
  ZeroScale,
  ZeroVariance,
  MeanNotZero,
  VarianceNotNormalized,
  SupportOverflow,
  OutOfRange,
  LogBranchViolation,
  GridTooCoarse,
  AliasRisk,
  QuadratureFailure,
  QuadratureDepthExceeded,
  EmptyGrid,
  Unsupported,
  IoError,
};

constexpr std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::NonFiniteInput: return "NonFiniteInput";
    case Errc::ProbSumMismatch: return "ProbSumMismatch";
    case Errc::EmptySupport: return "EmptySupport";
    case Errc::BadParam: return "BadParam";
    case Errc::ZeroScale: return "ZeroScale";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::MeanNotZero: return "MeanNotZero";
    case Errc::VarianceNotNormalized: return "VarianceNotNormalized";
    case Errc::SupportOverflow: return "SupportOverflow";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::LogBranchViolation: return "LogBranchViolation";
    case Errc::GridTooCoarse: return "GridTooCoarse";
    case Errc::AliasRisk: return "AliasRisk";
    case Errc::QuadratureFailure: return "QuadratureFailure";
    case Errc::QuadratureDepthExceeded: return "QuadratureDepthExceeded";
    case Errc::EmptyGrid: return "EmptyGrid";
    case Errc::Unsupported: return "Unsupported";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace esseen
