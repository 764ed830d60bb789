// Copyright 2026 vidlang authors
// Error taxonomy shared across the library.
//
// Licensed under the Apache License, Version 2.0

#pragma once

#include <stdexcept>
#include <string>

namespace vidlang {

// Stable error codes. Library functions throw Error with one of these codes;
// callers that need to branch on failure kind should match the code, not the
// message text.
enum class ErrorCode {
  // model_core
  EmptyText,
  TooManyFrames,
  InvalidInput,
  BadToken,
  DegenerateEmbedding,
  BadConfig,
  // objectives
  InvalidSimilarity,
  BadTemperature,
  NoNegativeAvailable,
  InvalidLogit,
  NothingToMask,
  EmptyMaskSet,
  InvalidLoss,
  // trainer
  DivergedStep,
  NoData,
  VersionMismatch,
  CorruptArchive,
  // data pipeline / eval
  NotEnoughFrames,
  DuplicateLabel,
  UnknownLabel,
  IoError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyText: return "EmptyText";
    case ErrorCode::TooManyFrames: return "TooManyFrames";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::BadToken: return "BadToken";
    case ErrorCode::DegenerateEmbedding: return "DegenerateEmbedding";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::InvalidSimilarity: return "InvalidSimilarity";
    case ErrorCode::BadTemperature: return "BadTemperature";
    case ErrorCode::NoNegativeAvailable: return "NoNegativeAvailable";
    case ErrorCode::InvalidLogit: return "InvalidLogit";
    case ErrorCode::NothingToMask: return "NothingToMask";
    case ErrorCode::EmptyMaskSet: return "EmptyMaskSet";
    case ErrorCode::InvalidLoss: return "InvalidLoss";
    case ErrorCode::DivergedStep: return "DivergedStep";
    case ErrorCode::NoData: return "NoData";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::CorruptArchive: return "CorruptArchive";
    case ErrorCode::NotEnoughFrames: return "NotEnoughFrames";
    case ErrorCode::DuplicateLabel: return "DuplicateLabel";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace vidlang
