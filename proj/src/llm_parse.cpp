#include "stylebench/llm.hpp"

#include <json.hpp>

#include <cctype>
#include <optional>
#include <string>
#include <string_view>

namespace stylebench::llm {

namespace {

struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;  // one past the closing brace
};

// Finds the first balanced {...} region starting at or after `from`,
// honoring JSON string literals and escapes so braces inside strings do not
// count. Returns nullopt when no balanced region remains.
std::optional<Span> next_balanced_object(std::string_view text, std::size_t from) {
    while (from < text.size()) {
        std::size_t open = text.find('{', from);
        if (open == std::string_view::npos) {
            return std::nullopt;
        }
        int depth = 0;
        bool in_string = false;
        bool escaped = false;
        for (std::size_t i = open; i < text.size(); ++i) {
            char c = text[i];
            if (in_string) {
                if (escaped) {
                    escaped = false;
                } else if (c == '\\') {
                    escaped = true;
                } else if (c == '"') {
                    in_string = false;
                }
                continue;
            }
            if (c == '"') {
                in_string = true;
            } else if (c == '{') {
                ++depth;
            } else if (c == '}') {
                if (--depth == 0) {
                    return Span{open, i + 1};
                }
            }
        }
        // Unbalanced from this opening brace; try the next one.
        from = open + 1;
    }
    return std::nullopt;
}

std::string_view trimmed(std::string_view text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) {
        ++begin;
    }
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) {
        --end;
    }
    return text.substr(begin, end - begin);
}

std::vector<int> binary_vector(const nlohmann::json& changes) {
    if (!changes.is_array()) {
        throw ParseError(ParseErrorKind::non_binary, "\"changes\" is not an array");
    }
    std::vector<int> out;
    out.reserve(changes.size());
    for (const auto& value : changes) {
        if (!value.is_number_integer() && !value.is_number_unsigned()) {
            throw ParseError(ParseErrorKind::non_binary,
                             "\"changes\" contains a non-integer element: " + value.dump());
        }
        auto v = value.get<long long>();
        if (v != 0 && v != 1) {
            throw ParseError(ParseErrorKind::non_binary,
                             "\"changes\" contains a value outside {0,1}: " +
                                 std::to_string(v));
        }
        out.push_back(static_cast<int>(v));
    }
    return out;
}

}  // namespace

ParsedChanges parse_changes(const std::string& response, std::size_t expected_len, bool strict) {
    const std::string_view text = response;
    const std::string_view core = trimmed(text);

    std::size_t from = 0;
    while (true) {
        auto span = next_balanced_object(text, from);
        if (!span) {
            throw ParseError(ParseErrorKind::no_document,
                             "no JSON object with a \"changes\" key found in response");
        }
        std::string_view doc = text.substr(span->begin, span->end - span->begin);
        nlohmann::json parsed = nlohmann::json::parse(doc, nullptr, false);
        if (parsed.is_discarded() || !parsed.is_object() || !parsed.contains("changes")) {
            from = span->begin + 1;
            continue;
        }

        ParsedChanges result;
        result.changes = binary_vector(parsed["changes"]);
        const bool extracted = doc != core;

        if (result.changes.size() != expected_len) {
            if (strict) {
                throw ParseError(ParseErrorKind::length_mismatch,
                                 "expected " + std::to_string(expected_len) +
                                     " change values, got " +
                                     std::to_string(result.changes.size()));
            }
            if (result.changes.size() < expected_len) {
                result.changes.resize(expected_len, 0);
                result.repair_kind = "padded";
            } else {
                result.changes.resize(expected_len);
                result.repair_kind = "truncated";
            }
            result.repaired = true;
        } else if (extracted) {
            result.repair_kind = "extracted_from_fence";
        }
        return result;
    }
}

}  // namespace stylebench::llm
