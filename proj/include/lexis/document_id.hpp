#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace lexis {

enum class Month { January = 1, February, March, April, May, June, July, August,
                   September, October, November, December };

std::string_view month_name(Month m) noexcept;
std::optional<Month> parse_month(std::string_view name);

// Metadata carried by a document's identifier, e.g. "phase1_week1_february_27b":
// the lockdown phase, the week counted from the start of data collection, the
// publication day and a letter telling apart articles from the same day.
struct DocumentId {
  int phase = 1;
  int week = 1;
  Month month = Month::January;
  int day = 1;
  std::optional<char> seq;

  // Canonical form: day zero-padded to two digits, month lowercase.
  std::string str() const;

  friend auto operator<=>(const DocumentId&, const DocumentId&) = default;
};

// Throws Error{MalformedId} when the shape is wrong and Error{InvalidPhase}
// when the phase is not 1 or 2.
DocumentId parse_document_id(std::string_view raw);

std::optional<DocumentId> try_parse_document_id(std::string_view raw) noexcept;

}  // namespace lexis
