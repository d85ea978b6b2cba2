#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tgm {

enum class Severity { Error, Warning };

enum class ViolationCode {
  // type registry
  DanglingReference,
  NonFiniteType,
  AnyTypeUsed,
  DuplicateFieldName,
  DuplicateAlternative,
  InvalidBounds,
  LiteralMismatch,
  TypeViolation,
  // schema
  UndeclaredEndpoint,
  EmptyEndpointSets,
  MultiplicityMismatch,
  MinExceedsMax,
  UnresolvedConstraint,
  InvalidGroup,
  // instance graph
  UnknownTypeLabel,
  UnknownElement,
  UndefinedPlaceholder,
  DuplicateSymbol,
  EndpointMismatch,
  DanglingEndpoint,
  CardinalityViolation,
  ConstraintViolation,
  DeleteLeavesDangling,
  InstanceCycle,
  // importers
  FkTargetMissing,
  DuplicatePrimaryKey,
  TypeMismatch,
  DocumentSchemaMismatch,
};

std::string_view to_string(ViolationCode code);

struct Violation {
  ViolationCode code;
  std::string subject;
  std::string detail;
  Severity severity = Severity::Error;

  bool operator==(const Violation&) const = default;
};

/// Exhaustive list of problems found by a validation pass. Warnings are kept
/// alongside errors but do not make a report fail.
class ViolationReport {
 public:
  void add(ViolationCode code, std::string subject, std::string detail,
           Severity severity = Severity::Error) {
    entries_.push_back({code, std::move(subject), std::move(detail), severity});
  }
  void add(Violation v) { entries_.push_back(std::move(v)); }
  void merge(const ViolationReport& other) {
    entries_.insert(entries_.end(), other.entries_.begin(), other.entries_.end());
  }

  bool empty() const noexcept { return entries_.empty(); }
  std::size_t size() const noexcept { return entries_.size(); }
  bool ok() const noexcept { return error_count() == 0; }
  std::size_t error_count() const noexcept;
  std::size_t warning_count() const noexcept { return size() - error_count(); }
  std::size_t count(ViolationCode code) const noexcept;
  bool has(ViolationCode code) const noexcept { return count(code) > 0; }

  const std::vector<Violation>& entries() const noexcept { return entries_; }
  std::vector<Violation> sorted() const;

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

 private:
  std::vector<Violation> entries_;
};

using ValidationReport = ViolationReport;

}  // namespace tgm
