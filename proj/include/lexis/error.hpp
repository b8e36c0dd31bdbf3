#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lexis {

enum class Errc {
  MalformedId,
  InvalidPhase,
  MissingMetadata,
  DuplicateDocument,
  EmptyDocument,
  ParseError,
  IoError,
  StemmingUnsupported,
  EmptyCorpus,
  InvalidConfig,
  TopicOutOfRange,
  DegenerateDesign,
  EmptySubcorpus,
  InvalidCounts,
  RelationsUnavailable,
  InvalidPattern,
  InvalidFilter,
  MalformedLexicon,
  OverlappingDomains,
  ModelCorpusMismatch,
  MissingModel,
  MalformedContainer,
};

std::string_view to_string(Errc code) noexcept;

// Every data-level failure in the library is reported through this type; the
// code is stable and is what the CLI and HTTP layers map onto exit/status codes.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace lexis
