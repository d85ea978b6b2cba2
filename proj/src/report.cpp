#include "tgm/report.hpp"

#include <algorithm>

#include "tgm/error.hpp"

namespace tgm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidLabel: return "InvalidLabel";
    case ErrorCode::DuplicateTypeLabel: return "DuplicateTypeLabel";
    case ErrorCode::ReservedLabel: return "ReservedLabel";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::DuplicateNodeType: return "DuplicateNodeType";
    case ErrorCode::DuplicateEdgeType: return "DuplicateEdgeType";
    case ErrorCode::LabelClash: return "LabelClash";
    case ErrorCode::EmptyEndpointSets: return "EmptyEndpointSets";
    case ErrorCode::MultiplicityMismatch: return "MultiplicityMismatch";
    case ErrorCode::EmptyList: return "EmptyList";
    case ErrorCode::InvalidSchema: return "InvalidSchema";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::UnknownEdgeType: return "UnknownEdgeType";
    case ErrorCode::InvalidPartition: return "InvalidPartition";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::ManifestInvalid: return "ManifestInvalid";
    case ErrorCode::UnsupportedXsdFeature: return "UnsupportedXsdFeature";
    case ErrorCode::MalformedInput: return "MalformedInput";
  }
  return "Unknown";
}

std::string_view to_string(ViolationCode code) {
  switch (code) {
    case ViolationCode::DanglingReference: return "DanglingReference";
    case ViolationCode::NonFiniteType: return "NonFiniteType";
    case ViolationCode::AnyTypeUsed: return "AnyTypeUsed";
    case ViolationCode::DuplicateFieldName: return "DuplicateFieldName";
    case ViolationCode::DuplicateAlternative: return "DuplicateAlternative";
    case ViolationCode::InvalidBounds: return "InvalidBounds";
    case ViolationCode::LiteralMismatch: return "LiteralMismatch";
    case ViolationCode::TypeViolation: return "TypeViolation";
    case ViolationCode::UndeclaredEndpoint: return "UndeclaredEndpoint";
    case ViolationCode::EmptyEndpointSets: return "EmptyEndpointSets";
    case ViolationCode::MultiplicityMismatch: return "MultiplicityMismatch";
    case ViolationCode::MinExceedsMax: return "MinExceedsMax";
    case ViolationCode::UnresolvedConstraint: return "UnresolvedConstraint";
    case ViolationCode::InvalidGroup: return "InvalidGroup";
    case ViolationCode::UnknownTypeLabel: return "UnknownTypeLabel";
    case ViolationCode::UnknownElement: return "UnknownElement";
    case ViolationCode::UndefinedPlaceholder: return "UndefinedPlaceholder";
    case ViolationCode::DuplicateSymbol: return "DuplicateSymbol";
    case ViolationCode::EndpointMismatch: return "EndpointMismatch";
    case ViolationCode::DanglingEndpoint: return "DanglingEndpoint";
    case ViolationCode::CardinalityViolation: return "CardinalityViolation";
    case ViolationCode::ConstraintViolation: return "ConstraintViolation";
    case ViolationCode::DeleteLeavesDangling: return "DeleteLeavesDangling";
    case ViolationCode::InstanceCycle: return "InstanceCycle";
    case ViolationCode::FkTargetMissing: return "FkTargetMissing";
    case ViolationCode::DuplicatePrimaryKey: return "DuplicatePrimaryKey";
    case ViolationCode::TypeMismatch: return "TypeMismatch";
    case ViolationCode::DocumentSchemaMismatch: return "DocumentSchemaMismatch";
  }
  return "Unknown";
}

std::size_t ViolationReport::error_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(entries_.begin(), entries_.end(),
                                                [](const Violation& v) { return v.severity == Severity::Error; }));
}

std::size_t ViolationReport::count(ViolationCode code) const noexcept {
  return static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(), [code](const Violation& v) { return v.code == code; }));
}

std::vector<Violation> ViolationReport::sorted() const {
  std::vector<Violation> out = entries_;
  std::stable_sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
    const auto ca = to_string(a.code);
    const auto cb = to_string(b.code);
    if (ca != cb) return ca < cb;
    if (a.subject != b.subject) return a.subject < b.subject;
    return a.detail < b.detail;
  });
  return out;
}

}  // namespace tgm
