#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace recourse {

enum class ErrorCode {
  // data model and classifier
  MissingColumn,
  BadLevel,
  EmptyDataset,
  SchemaInvalid,
  SchemaMismatch,
  ScalerNotFitted,
  SingleClassDataset,
  NonFiniteLoss,
  ParseError,
  IoError,
  InvalidArgument,
  // counterfactual search
  NoCounterfactualFound,
  CandidateBudgetExceeded,
  // prototypes
  ClassAbsent,
  MTooLarge,
  EmptyPrototypeSet,
  // directive search
  NotActionableFeature,
  InvalidAction,
  NoChildren,
  AlreadyExpanded,
  TerminalNode,
  NoDirectiveFound,
  // scenario corpus and rendering
  CorpusInvalid,
  ArtifactSchemaMismatch,
  // study harness
  CorpusTooSmall,
  UnknownSession,
  OutOfPlanTask,
  DuplicateResponse,
  AnswerOutOfRange,
  InvalidChoice,
  Unauthorized,
  // statistics
  ZeroTotal,
  IncompleteMatrix,
  DegenerateBlocks,
  NoResponses,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library. `detail` carries structured context
/// (offending value, line number, ...) that the HTTP layer forwards verbatim.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string detail = {})
      : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace recourse
