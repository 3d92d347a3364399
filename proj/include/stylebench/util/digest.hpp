#pragma once

#include <string>
#include <string_view>

namespace stylebench::util {

// Lowercase hex SHA-256 of the exact input bytes.
std::string sha256_hex(std::string_view data);

}  // namespace stylebench::util
