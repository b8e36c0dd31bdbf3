#include "lexis/document_id.hpp"

#include <array>
#include <charconv>
#include <regex>

#include <fmt/format.h>

#include "lexis/error.hpp"
#include "lexis/text.hpp"

namespace lexis {
namespace {

constexpr std::array<std::string_view, 12> kMonths = {
    "january", "february", "march",     "april",   "may",      "june",
    "july",    "august",   "september", "october", "november", "december"};

int to_int(const std::string& digits) {
  int value = 0;
  std::from_chars(digits.data(), digits.data() + digits.size(), value);
  return value;
}

}  // namespace

std::string_view month_name(Month m) noexcept { return kMonths[static_cast<int>(m) - 1]; }

std::optional<Month> parse_month(std::string_view name) {
  const std::string lowered = text::to_lower(name);
  for (std::size_t i = 0; i < kMonths.size(); ++i) {
    if (kMonths[i] == lowered) return static_cast<Month>(i + 1);
  }
  return std::nullopt;
}

std::string DocumentId::str() const {
  std::string out = fmt::format("phase{}_week{}_{}_{:02d}", phase, week, month_name(month), day);
  if (seq) out.push_back(*seq);
  return out;
}

DocumentId parse_document_id(std::string_view raw) {
  static const std::regex shape(R"(phase(\d+)_week(\d+)_([A-Za-z]+)_(\d{1,2})([A-Za-z])?)",
                                std::regex::ECMAScript | std::regex::icase);
  const std::string input(raw);
  std::smatch m;
  if (!std::regex_match(input, m, shape)) {
    throw Error(Errc::MalformedId, fmt::format("malformed document id '{}'", input));
  }
  DocumentId id;
  id.phase = to_int(m[1].str());
  if (m[1].length() > 3 || (id.phase != 1 && id.phase != 2)) {
    throw Error(Errc::InvalidPhase, fmt::format("document id '{}': phase must be 1 or 2", input));
  }
  id.week = m[2].length() > 4 ? 0 : to_int(m[2].str());
  if (id.week < 1) {
    throw Error(Errc::MalformedId, fmt::format("document id '{}': week must be positive", input));
  }
  const auto month = parse_month(m[3].str());
  if (!month) {
    throw Error(Errc::MalformedId, fmt::format("document id '{}': unknown month", input));
  }
  id.month = *month;
  id.day = to_int(m[4].str());
  if (id.day < 1 || id.day > 31) {
    throw Error(Errc::MalformedId, fmt::format("document id '{}': day out of range", input));
  }
  if (m[5].matched) id.seq = text::to_lower(m[5].str())[0];
  return id;
}

std::optional<DocumentId> try_parse_document_id(std::string_view raw) noexcept {
  try {
    return parse_document_id(raw);
  } catch (...) {
    return std::nullopt;
  }
}

}  // namespace lexis
