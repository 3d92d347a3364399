#include "stylebench/llm.hpp"

#include "stylebench/util/digest.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace stylebench::llm {

namespace {

// The instruction block is frozen byte-for-byte (including the trailing space
// after "format: " and the "lenght" misspelling below): cached responses and
// recorded run digests depend on it, so edits must be deliberate.
constexpr const char kInstructionBlock[] =
    "You are an expert in authorship attribution. You notice changes in writing style, topic "
    "and especially in tone and sentiment and use this information to complete your task.\n"
    "Your task is to analyze a sequence of sentences and determine a binary sequence "
    "indicating where the author changes at sentence boundaries (1 = change, 0 = no change).\n"
    "The input is a json formatted list of sentences, which can include quotes, which are "
    "escaped with backslashes.\n"
    "There is always at least one change present.\n"
    "Return your response in the following JSON format: \n"
    "{ \"changes\": [<0s and 1s indicating sentence-boundary changes>] }\n"
    "\n"
    "Example 1:\n"
    "Input: [\"Sentence one.\", \"Sentence two.\", \"Sentence three.\", \"Sentence four.\"]\n"
    "Output: { \"changes\": [0, 1, 0] }\n"
    "\n"
    "Example 2:\n"
    "Input: [\"This is written by author A.\", \"Another sentence by author A.\", "
    "\"Alright... now, a new author starts.\", \"Yet another author change here.\"]\n"
    "Output: { \"changes\": [0, 1, 1] }\n"
    "\n"
    "Now analyze the following text:";

constexpr const char kEpilogueCount[] = "There should be exactly ";
constexpr const char kEpilogueLength[] = " sentences resulting in a changes array of lenght ";
constexpr const char kEpilogueHint[] =
    ". \n\nKeep in mind, that the sentences originate from reddit, so consecutive sentences, "
    "that agree with each other do not always have the same author, if the tone or style "
    "changes. Still, consider that they may follow each other but always assume around ";
constexpr const char kEpilogueClose[] = " changes.";

constexpr const char kFeatureChecklist[] =
    " Analyze the writing styles of the input texts, disregarding the differences in topic "
    "and content. Base your decision on linguistic features such as: phrasal verbs; modal "
    "verbs punctuation; rare words; affixes; quantities; humor; sarcasm; typographical "
    "errors; misspellings.";

std::string replace_all(std::string text, const std::string& from, const std::string& to) {
    std::size_t pos = 0;
    while ((pos = text.find(from, pos)) != std::string::npos) {
        text.replace(pos, from.size(), to);
        pos += to.size();
    }
    return text;
}

// Rewrites the template's unit word for paragraph-level problems. The replace
// is case-sensitive on purpose: instruction text uses lowercase "sentence(s)"
// while the capitalized words inside the worked examples stay untouched.
std::string for_granularity(const char* fragment, corpus::Granularity granularity) {
    std::string text = fragment;
    if (granularity == corpus::Granularity::paragraph) {
        text = replace_all(std::move(text), "sentence", "paragraph");
    }
    return text;
}

std::string units_as_json_list(const std::vector<std::string>& units) {
    std::string out = "[";
    for (std::size_t i = 0; i < units.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += nlohmann::json(units[i]).dump();
    }
    out += "]";
    return out;
}

}  // namespace

std::string build_prompt(const std::vector<std::string>& units, const PromptConfig& config) {
    if (units.size() < 2) {
        throw std::invalid_argument("prompt requires at least two units");
    }
    const int hint = config.injected_author_count.value_or(config.assumed_changes_hint);

    std::string prompt = for_granularity(kInstructionBlock, config.granularity);
    prompt += "\n";
    prompt += units_as_json_list(units);
    prompt += "\n\n";
    prompt += for_granularity(kEpilogueCount, config.granularity);
    prompt += std::to_string(units.size());
    prompt += for_granularity(kEpilogueLength, config.granularity);
    prompt += std::to_string(units.size() - 1);
    prompt += for_granularity(kEpilogueHint, config.granularity);
    prompt += std::to_string(hint);
    prompt += for_granularity(kEpilogueClose, config.granularity);
    if (config.include_feature_list) {
        prompt += for_granularity(kFeatureChecklist, config.granularity);
    }
    return prompt;
}

std::string prompt_digest(const PromptConfig& config) {
    std::string material;
    for (const char* fragment : {kInstructionBlock, kEpilogueCount, kEpilogueLength,
                                 kEpilogueHint, kEpilogueClose, kFeatureChecklist}) {
        material += for_granularity(fragment, config.granularity);
        material += '\x1f';
    }
    material += "granularity=" + corpus::to_string(config.granularity);
    material += ";hint=" + std::to_string(config.assumed_changes_hint);
    material += ";injected=" + (config.injected_author_count
                                    ? std::to_string(*config.injected_author_count)
                                    : std::string("none"));
    material += ";features=" + std::string(config.include_feature_list ? "1" : "0");
    return util::sha256_hex(material);
}

}  // namespace stylebench::llm
