#include "lexis/error.hpp"

namespace lexis {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::MalformedId: return "MalformedId";
    case Errc::InvalidPhase: return "InvalidPhase";
    case Errc::MissingMetadata: return "MissingMetadata";
    case Errc::DuplicateDocument: return "DuplicateDocument";
    case Errc::EmptyDocument: return "EmptyDocument";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
    case Errc::StemmingUnsupported: return "StemmingUnsupported";
    case Errc::EmptyCorpus: return "EmptyCorpus";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::TopicOutOfRange: return "TopicOutOfRange";
    case Errc::DegenerateDesign: return "DegenerateDesign";
    case Errc::EmptySubcorpus: return "EmptySubcorpus";
    case Errc::InvalidCounts: return "InvalidCounts";
    case Errc::RelationsUnavailable: return "RelationsUnavailable";
    case Errc::InvalidPattern: return "InvalidPattern";
    case Errc::InvalidFilter: return "InvalidFilter";
    case Errc::MalformedLexicon: return "MalformedLexicon";
    case Errc::OverlappingDomains: return "OverlappingDomains";
    case Errc::ModelCorpusMismatch: return "ModelCorpusMismatch";
    case Errc::MissingModel: return "MissingModel";
    case Errc::MalformedContainer: return "MalformedContainer";
  }
  return "Unknown";
}

}  // namespace lexis
