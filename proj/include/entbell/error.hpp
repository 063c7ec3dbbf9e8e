#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace entbell {

enum class ErrorCode {
  InvalidScenario,
  NotNormalized,
  NegativeProbability,
  MismatchedScenario,
  WeightsNotNormalized,
  IndexOutOfRange,
  IncompatibleScenario,
  AsymmetricScenario,
  UnsupportedScenario,
  NotADistribution,
  NonPositiveOrder,
  SignallingInput,
  WrongInputCount,
  OrderNotAboveOne,
  EmptyGenerators,
  EpsOutOfRange,
  ParseError,
  UnknownTarget,
  UnknownName,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace entbell
