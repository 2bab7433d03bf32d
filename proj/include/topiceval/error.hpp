#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace topiceval {

enum class ErrorCode {
  InvalidArgument,
  EmptyCorpus,
  EmptyDocument,
  EmptyWordSet,
  UnknownWord,
  WrongEstimationMode,
  TopicTooSmall,
  WordNotInCorpus,
  ZeroVector,
  InfiniteDivergence,
  InvalidDistribution,
  TooFewTopics,
  NegativeInput,
  BadMagic,
  BadHeader,
  TruncatedFile,
  ChecksumMismatch,
  NonFiniteValue,
  EmptyEmbeddings,
  TooFewPoints,
  NoClusters,
  MisalignedInputs,
  EmptyScores,
  EmptyRecords,
  UnreadableInput,
  UnknownFormat,
  MissingColumn,
  MissingEmbeddingFile,
  BadConfig,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure the library reports carries one of the codes above; the CLI
// maps them onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace topiceval
