#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace stylebench::util {

// True iff the byte sequence is well-formed UTF-8 (rejects overlongs,
// surrogates and values above U+10FFFF).
bool is_valid_utf8(std::string_view s);

// Strips one trailing '\r' (files may be CRLF).
std::string_view strip_cr(std::string_view line);

// Splits on '\n'. The final fragment after the last newline is kept only if
// non-empty, so a conventional trailing newline does not create a unit.
std::vector<std::string> split_lines(std::string_view text);

std::string to_lower_ascii(std::string_view s);

// Whitespace-delimited tokens with non-alphanumeric edges stripped and
// ASCII-lowercased; tokens that end up empty are dropped.
std::vector<std::string> words(std::string_view text);

}  // namespace stylebench::util
