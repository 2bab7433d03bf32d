#include "topiceval/error.hpp"

namespace topiceval {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::EmptyDocument: return "EmptyDocument";
    case ErrorCode::EmptyWordSet: return "EmptyWordSet";
    case ErrorCode::UnknownWord: return "UnknownWord";
    case ErrorCode::WrongEstimationMode: return "WrongEstimationMode";
    case ErrorCode::TopicTooSmall: return "TopicTooSmall";
    case ErrorCode::WordNotInCorpus: return "WordNotInCorpus";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::InfiniteDivergence: return "InfiniteDivergence";
    case ErrorCode::InvalidDistribution: return "InvalidDistribution";
    case ErrorCode::TooFewTopics: return "TooFewTopics";
    case ErrorCode::NegativeInput: return "NegativeInput";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::BadHeader: return "BadHeader";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::EmptyEmbeddings: return "EmptyEmbeddings";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::NoClusters: return "NoClusters";
    case ErrorCode::MisalignedInputs: return "MisalignedInputs";
    case ErrorCode::EmptyScores: return "EmptyScores";
    case ErrorCode::EmptyRecords: return "EmptyRecords";
    case ErrorCode::UnreadableInput: return "UnreadableInput";
    case ErrorCode::UnknownFormat: return "UnknownFormat";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::MissingEmbeddingFile: return "MissingEmbeddingFile";
    case ErrorCode::BadConfig: return "BadConfig";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace topiceval
