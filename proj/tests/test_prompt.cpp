#include <doctest.h>

#include "stylebench/llm.hpp"
#include "stylebench/util/jsonl.hpp"

#include "support.hpp"

using namespace stylebench;

namespace {

const std::vector<std::string> kUnits{
    "He said \"hello\" and left.",
    "It's C:\\temp all over again.",
    "Why though?",
    "No idea, mate.",
};

}  // namespace

TEST_SUITE("prompt") {

TEST_CASE("sentence prompt is byte-identical to the frozen rendering") {
    llm::PromptConfig config;  // defaults: sentence, hint 3, feature list on
    const std::string prompt = llm::build_prompt(kUnits, config);
    const std::string golden = util::read_file(testsupport::fixture("golden_prompt_sentence.txt"));
    CHECK(prompt == golden);
}

TEST_CASE("paragraph prompt with injected count is byte-identical") {
    llm::PromptConfig config;
    config.granularity = corpus::Granularity::paragraph;
    config.injected_author_count = 5;
    const std::string prompt = llm::build_prompt(kUnits, config);
    const std::string golden = util::read_file(testsupport::fixture("golden_prompt_paragraph.txt"));
    CHECK(prompt == golden);
}

TEST_CASE("template details the scorer depends on") {
    llm::PromptConfig config;
    auto p = llm::build_prompt(kUnits, config);

    // the historic misspelling is part of the frozen contract
    CHECK(p.find("changes array of lenght 3") != std::string::npos);
    // trailing space after the format line survives
    CHECK(p.find("JSON format: \n") != std::string::npos);
    // exact unit count and boundary count for this problem
    CHECK(p.find("exactly 4 sentences") != std::string::npos);
    // default hint
    CHECK(p.find("always assume around 3 changes.") != std::string::npos);
    // units serialized as a JSON list with escaped quotes and backslashes
    CHECK(p.find("[\"He said \\\"hello\\\" and left.\", "
                 "\"It's C:\\\\temp all over again.\", \"Why though?\", "
                 "\"No idea, mate.\"]") != std::string::npos);
    // feature checklist present by default, absent when disabled
    CHECK(p.find("phrasal verbs; modal verbs punctuation") != std::string::npos);
    llm::PromptConfig no_features;
    no_features.include_feature_list = false;
    auto q = llm::build_prompt(kUnits, no_features);
    CHECK(q.find("phrasal verbs") == std::string::npos);
    CHECK(q.size() < p.size());
    // the bare prompt still ends with the hint sentence
    CHECK(q.rfind(" changes.") == q.size() - 9);
}

TEST_CASE("paragraph rewrite touches instructions but not worked examples") {
    llm::PromptConfig config;
    config.granularity = corpus::Granularity::paragraph;
    auto p = llm::build_prompt(kUnits, config);
    CHECK(p.find("sequence of paragraphs") != std::string::npos);
    CHECK(p.find("paragraph boundaries") != std::string::npos);
    CHECK(p.find("exactly 4 paragraphs") != std::string::npos);
    // lowercase "sentence" must be gone everywhere
    CHECK(p.find("sentence") == std::string::npos);
    // the capitalized example sentences survive the rewrite
    CHECK(p.find("\"Sentence one.\"") != std::string::npos);
    CHECK(p.find("\"Sentence four.\"") != std::string::npos);
}

TEST_CASE("hint precedence: injected count overrides the static hint") {
    llm::PromptConfig config;
    config.assumed_changes_hint = 3;
    config.injected_author_count = 7;
    auto p = llm::build_prompt(kUnits, config);
    CHECK(p.find("always assume around 7 changes.") != std::string::npos);
    CHECK(p.find("around 3 changes") == std::string::npos);

    config.injected_author_count.reset();
    config.assumed_changes_hint = 2;
    auto q = llm::build_prompt(kUnits, config);
    CHECK(q.find("always assume around 2 changes.") != std::string::npos);
}

TEST_CASE("prompt counts follow the unit list") {
    llm::PromptConfig config;
    std::vector<std::string> two{"One unit.", "Another unit."};
    auto p = llm::build_prompt(two, config);
    CHECK(p.find("exactly 2 sentences") != std::string::npos);
    CHECK(p.find("array of lenght 1.") != std::string::npos);

    CHECK_THROWS_AS(llm::build_prompt({"only one"}, config), std::invalid_argument);
    CHECK_THROWS_AS(llm::build_prompt({}, config), std::invalid_argument);
}

TEST_CASE("prompt digest tracks configuration, not units") {
    llm::PromptConfig a;
    llm::PromptConfig b;
    CHECK(llm::prompt_digest(a) == llm::prompt_digest(b));

    b.assumed_changes_hint = 4;
    CHECK(llm::prompt_digest(a) != llm::prompt_digest(b));

    llm::PromptConfig c;
    c.granularity = corpus::Granularity::paragraph;
    CHECK(llm::prompt_digest(a) != llm::prompt_digest(c));

    llm::PromptConfig d;
    d.injected_author_count = 3;
    CHECK(llm::prompt_digest(a) != llm::prompt_digest(d));

    llm::PromptConfig e;
    e.include_feature_list = false;
    CHECK(llm::prompt_digest(a) != llm::prompt_digest(e));

    // digest is a hex sha256
    CHECK(llm::prompt_digest(a).size() == 64);
}

}  // TEST_SUITE
