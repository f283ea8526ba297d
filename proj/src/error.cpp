#include "recourse/error.hpp"

namespace recourse {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::BadLevel: return "BadLevel";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::SchemaInvalid: return "SchemaInvalid";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::ScalerNotFitted: return "ScalerNotFitted";
    case ErrorCode::SingleClassDataset: return "SingleClassDataset";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NoCounterfactualFound: return "NoCounterfactualFound";
    case ErrorCode::CandidateBudgetExceeded: return "CandidateBudgetExceeded";
    case ErrorCode::ClassAbsent: return "ClassAbsent";
    case ErrorCode::MTooLarge: return "MTooLarge";
    case ErrorCode::EmptyPrototypeSet: return "EmptyPrototypeSet";
    case ErrorCode::NotActionableFeature: return "NotActionableFeature";
    case ErrorCode::InvalidAction: return "InvalidAction";
    case ErrorCode::NoChildren: return "NoChildren";
    case ErrorCode::AlreadyExpanded: return "AlreadyExpanded";
    case ErrorCode::TerminalNode: return "TerminalNode";
    case ErrorCode::NoDirectiveFound: return "NoDirectiveFound";
    case ErrorCode::CorpusInvalid: return "CorpusInvalid";
    case ErrorCode::ArtifactSchemaMismatch: return "ArtifactSchemaMismatch";
    case ErrorCode::CorpusTooSmall: return "CorpusTooSmall";
    case ErrorCode::UnknownSession: return "UnknownSession";
    case ErrorCode::OutOfPlanTask: return "OutOfPlanTask";
    case ErrorCode::DuplicateResponse: return "DuplicateResponse";
    case ErrorCode::AnswerOutOfRange: return "AnswerOutOfRange";
    case ErrorCode::InvalidChoice: return "InvalidChoice";
    case ErrorCode::Unauthorized: return "Unauthorized";
    case ErrorCode::ZeroTotal: return "ZeroTotal";
    case ErrorCode::IncompleteMatrix: return "IncompleteMatrix";
    case ErrorCode::DegenerateBlocks: return "DegenerateBlocks";
    case ErrorCode::NoResponses: return "NoResponses";
  }
  return "Unknown";
}

}  // namespace recourse
