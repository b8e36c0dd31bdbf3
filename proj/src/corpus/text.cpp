#include "lexis/text.hpp"

#include <cstdint>

namespace lexis::text {
namespace {

constexpr char32_t kInvalid = 0xFFFD;

// Decodes one code point starting at `pos`, advancing it. Malformed
// sequences consume a single byte and yield U+FFFD.
char32_t decode(std::string_view s, std::size_t& pos) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  int extra = 0;
  char32_t cp = 0;
  if (b0 < 0x80) {
    ++pos;
    return b0;
  } else if ((b0 & 0xE0) == 0xC0) {
    extra = 1;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    extra = 2;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    extra = 3;
    cp = b0 & 0x07;
  } else {
    ++pos;
    return kInvalid;
  }
  if (pos + extra >= s.size()) {
    ++pos;
    return kInvalid;
  }
  for (int i = 1; i <= extra; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) {
      ++pos;
      return kInvalid;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  pos += extra + 1;
  return cp;
}

void encode(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

char32_t lower(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + 0x20;
  if (c < 0xC0) return c;
  if (c <= 0xDE) return c == 0xD7 ? c : c + 0x20;
  if (c >= 0x100 && c <= 0x17F) {
    if (c == 0x178) return 0xFF;
    const bool odd_upper = (c >= 0x139 && c <= 0x148) || (c >= 0x179 && c <= 0x17E);
    const bool even_upper = (c <= 0x12F) || (c >= 0x132 && c <= 0x137) || (c >= 0x14A && c <= 0x177);
    if (odd_upper && (c % 2 == 1)) return c + 1;
    if (even_upper && (c % 2 == 0)) return c + 1;
    return c;
  }
  if (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) return c + 0x20;
  if (c >= 0x410 && c <= 0x42F) return c + 0x20;
  if (c >= 0x400 && c <= 0x40F) return c + 0x50;
  return c;
}

bool is_space(char32_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v' ||
         c == 0xA0 || (c >= 0x2000 && c <= 0x200B) || c == 0x202F || c == 0x205F ||
         c == 0x3000 || c == 0xFEFF;
}

bool is_digit(char32_t c) { return c >= '0' && c <= '9'; }

bool is_apostrophe(char32_t c) { return c == '\'' || c == 0x2019; }

bool is_letter(char32_t c) {
  if (c < 0x80) return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  if (c == kInvalid) return false;
  if (c < 0xC0) return c == 0xAA || c == 0xB5 || c == 0xBA;
  if (c == 0xD7 || c == 0xF7) return false;
  if (c >= 0x2000 && c <= 0x2BFF) return false;  // punctuation, symbols, arrows
  if (c >= 0x3000 && c <= 0x303F) return false;
  if (c >= 0xFE30 && c <= 0xFE6F) return false;
  if (c >= 0xFF00 && c <= 0xFF20) return false;
  if (c >= 0x1F000) return false;  // emoji and pictographs
  return !is_space(c);
}

bool ends_sentence(char32_t c) { return c == '.' || c == '!' || c == '?' || c == 0x2026; }

}  // namespace

std::string to_lower(std::string_view utf8) {
  std::string out;
  out.reserve(utf8.size());
  std::size_t pos = 0;
  while (pos < utf8.size()) {
    const std::size_t start = pos;
    const char32_t cp = decode(utf8, pos);
    if (cp == kInvalid) {
      out.append(utf8.substr(start, pos - start));
    } else {
      encode(lower(cp), out);
    }
  }
  return out;
}

bool is_numeric(std::string_view token) {
  bool digit = false;
  for (char c : token) {
    if (c >= '0' && c <= '9') {
      digit = true;
    } else if (c != '.' && c != ',') {
      return false;
    }
  }
  return digit;
}

bool is_punctuation(std::string_view token) {
  std::size_t pos = 0;
  while (pos < token.size()) {
    const char32_t cp = decode(token, pos);
    if (is_letter(cp) || is_digit(cp)) return false;
  }
  return !token.empty();
}

std::vector<std::vector<std::string>> segment(std::string_view utf8) {
  struct Cp {
    char32_t c;
    std::size_t begin;
    std::size_t end;
  };
  std::vector<Cp> cps;
  cps.reserve(utf8.size());
  for (std::size_t pos = 0; pos < utf8.size();) {
    const std::size_t begin = pos;
    const char32_t c = decode(utf8, pos);
    cps.push_back({c, begin, pos});
  }

  std::vector<std::vector<std::string>> sentences;
  std::vector<std::string> current;
  auto flush = [&] {
    if (!current.empty()) sentences.push_back(std::move(current));
    current.clear();
  };
  auto slice = [&](std::size_t from, std::size_t to) {
    return std::string(utf8.substr(cps[from].begin, cps[to - 1].end - cps[from].begin));
  };

  std::size_t i = 0;
  int newlines = 0;
  while (i < cps.size()) {
    const char32_t c = cps[i].c;
    if (is_space(c)) {
      if (c == '\n') {
        if (++newlines >= 2) flush();
      }
      ++i;
      continue;
    }
    newlines = 0;
    if (is_letter(c) || is_digit(c)) {
      std::size_t j = i;
      while (j < cps.size()) {
        const char32_t d = cps[j].c;
        if (is_letter(d) || is_digit(d)) {
          ++j;
        } else if ((d == '.' || d == ',') && j > i && is_digit(cps[j - 1].c) &&
                   j + 1 < cps.size() && is_digit(cps[j + 1].c)) {
          j += 2;
        } else {
          break;
        }
      }
      if (j < cps.size() && is_apostrophe(cps[j].c) && is_letter(cps[j - 1].c) &&
          j + 1 < cps.size() && is_letter(cps[j + 1].c)) {
        current.push_back(slice(i, j + 1));
        i = j + 1;
      } else {
        current.push_back(slice(i, j));
        i = j;
      }
      continue;
    }
    current.push_back(slice(i, i + 1));
    ++i;
    if (ends_sentence(c)) {
      // Keep runs such as "?!" or "..." together in one sentence.
      while (i < cps.size() && ends_sentence(cps[i].c)) {
        current.push_back(slice(i, i + 1));
        ++i;
      }
      flush();
    }
  }
  flush();
  return sentences;
}

}  // namespace lexis::text
