#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mutascan {

enum class ErrorCode {
  // seqio
  EmptyInput,
  InvalidSymbol,
  DuplicateId,
  SequencelessHeader,
  InvalidHeader,
  // seqstats
  AllAmbiguous,
  PositionOutOfRange,
  // homology
  EmptyDatabase,
  QueryTooShort,
  // align
  SizeCapExceeded,
  EmptySequence,
  OverlappingMutations,
  // neural
  DimensionMismatch,
  EmptyDataset,
  CorruptFile,
  VersionMismatch,
  // pipeline
  NoDatabaseAccepted,
  NoHitsInDatabase,
  MultiRecordPatientFile,
  MissingModelAndTrainingData,
  IoFailure,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mutascan
