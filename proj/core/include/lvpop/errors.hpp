#ifndef LVPOP_ERRORS_HPP
#define LVPOP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lvpop {

// Stable error names; the CLI maps these onto its exit-code contract.
enum class Errc {
  NonZeroDiagonal,
  ProbabilityOutOfRange,
  IsolatedType,
  DuplicateRule,
  UnknownBuiltin,
  NotLvKind,
  NotRps,
  ZeroPopulation,
  EmptyPopulation,
  AbsorbingState,
  LpInfeasible,
  NumericallyIllConditioned,
  StepSizeTooLarge,
  FixedPoint,
  NoReturnWithinBound,
  UnabsorbedTrials,
  BadProtocolFile,
  BadGraphFile,
  BadConfig,
  IoFailure,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(errc_name(code)) +
                           (detail.empty() ? "" : ": " + detail)),
        code_(code) {}
  explicit Error(Errc code) : Error(code, "") {}

  Errc code() const { return code_; }

  // I/O-class failures exit with a distinct code in the CLI.
  bool is_io() const {
    return code_ == Errc::BadProtocolFile || code_ == Errc::BadGraphFile ||
           code_ == Errc::BadConfig || code_ == Errc::IoFailure;
  }

 private:
  Errc code_;
};

}  // namespace lvpop

#endif
