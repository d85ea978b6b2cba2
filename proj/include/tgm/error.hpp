#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tgm {

/// Precondition failures raised by builder operations. Validation problems
/// are never thrown; they are collected in a ViolationReport instead.
enum class ErrorCode {
  InvalidLabel,
  DuplicateTypeLabel,
  ReservedLabel,
  DanglingReference,
  DuplicateNodeType,
  DuplicateEdgeType,
  LabelClash,
  EmptyEndpointSets,
  MultiplicityMismatch,
  EmptyList,
  InvalidSchema,
  UnknownNode,
  UnknownEdgeType,
  InvalidPartition,
  UnknownLabel,
  ManifestInvalid,
  UnsupportedXsdFeature,
  MalformedInput,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tgm
