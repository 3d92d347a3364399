#pragma once

#include <json.hpp>

#include <filesystem>
#include <vector>

namespace stylebench::util {

std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);
void write_jsonl(const std::filesystem::path& path, const std::vector<nlohmann::json>& records);

// Whole-file helpers.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);
// Write to a sibling temp file, then rename; readers never see partial content.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace stylebench::util
