#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace lexis::csv {

// RFC 4180 reader: quoted fields may contain separators, quotes ("") and
// newlines. Returns one vector per record; a trailing empty line is ignored.
std::vector<std::vector<std::string>> read(std::istream& in, char sep = ',');

// Quotes the field only when it contains the separator, a quote or a newline.
std::string escape(std::string_view field, char sep = ',');

void write_row(std::ostream& out, const std::vector<std::string>& fields, char sep = ',');

}  // namespace lexis::csv
