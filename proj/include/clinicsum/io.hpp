#pragma once

#include <string>

namespace clinicsum {

std::string read_text_file(const std::string& path);

// Write via a sibling temp file and rename, so readers never observe a
// partially written file.
void atomic_write_file(const std::string& path, const std::string& content);

// Minimal CSV quoting: wraps in quotes when the field contains a comma,
// quote, or newline; embedded quotes doubled.
std::string csv_escape(const std::string& field);

} // namespace clinicsum
