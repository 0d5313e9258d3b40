#include "mutascan/error.hpp"

namespace mutascan {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidSymbol: return "InvalidSymbol";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::SequencelessHeader: return "SequencelessHeader";
    case ErrorCode::InvalidHeader: return "InvalidHeader";
    case ErrorCode::AllAmbiguous: return "AllAmbiguous";
    case ErrorCode::PositionOutOfRange: return "PositionOutOfRange";
    case ErrorCode::EmptyDatabase: return "EmptyDatabase";
    case ErrorCode::QueryTooShort: return "QueryTooShort";
    case ErrorCode::SizeCapExceeded: return "SizeCapExceeded";
    case ErrorCode::EmptySequence: return "EmptySequence";
    case ErrorCode::OverlappingMutations: return "OverlappingMutations";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::CorruptFile: return "CorruptFile";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::NoDatabaseAccepted: return "NoDatabaseAccepted";
    case ErrorCode::NoHitsInDatabase: return "NoHitsInDatabase";
    case ErrorCode::MultiRecordPatientFile: return "MultiRecordPatientFile";
    case ErrorCode::MissingModelAndTrainingData: return "MissingModelAndTrainingData";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace mutascan
