#include <doctest.h>

#include "stylebench/corpus.hpp"
#include "stylebench/semantics.hpp"
#include "stylebench/util/digest.hpp"

#include "support.hpp"

#include <cmath>
#include <fstream>

using namespace stylebench;

namespace {

corpus::Problem toy_problem() {
    corpus::Problem p;
    p.id = "toy";
    p.units = {"alpha beta gamma", "alpha beta delta", "zebra quokka yak"};
    return p;
}

}  // namespace

TEST_SUITE("semantics") {

TEST_CASE("cosine matches hand values and rejects bad input") {
    CHECK(semantics::cosine({1.0, 0.0}, {1.0, 0.0}) == doctest::Approx(1.0));
    CHECK(semantics::cosine({1.0, 0.0}, {0.0, 1.0}) == doctest::Approx(0.0));
    CHECK(semantics::cosine({1.0, 0.0}, {-1.0, 0.0}) == doctest::Approx(-1.0));
    CHECK(semantics::cosine({1.0, 0.0}, {0.6, 0.8}) == doctest::Approx(0.6));
    CHECK(semantics::cosine({1.0, 1.0}, {1.0, 0.0}) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    // scale invariance
    CHECK(semantics::cosine({2.0, 4.0, 6.0}, {1.0, 2.0, 3.0}) == doctest::Approx(1.0));
    // clamped against rounding: never outside [-1, 1]
    std::vector<double> v{0.1234567, 0.7654321, 0.555};
    CHECK(semantics::cosine(v, v) <= 1.0);

    CHECK_THROWS_AS(semantics::cosine({1.0}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(semantics::cosine({0.0, 0.0}, {1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("fallback embedder is deterministic, normalized, and hash-stable") {
    semantics::FallbackEmbedder emb;
    CHECK(emb.id() == "fallback:trigram256");

    auto vs = emb.embed({"abc", "abc", "абв"});
    REQUIRE(vs.size() == 3);
    for (const auto& v : vs) {
        CHECK(v.dim() == semantics::FallbackEmbedder::kDim);
        CHECK(v.provider_id == "fallback:trigram256");
        double norm = 0.0;
        for (double x : v.values) norm += x * x;
        CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(vs[0].values == vs[1].values);
    CHECK(vs[0].values != vs[2].values);
    CHECK(vs[0].unit_digest == util::sha256_hex("abc"));

    // "abc" is a single trigram: exactly one bucket carries all the mass,
    // at FNV-1a64("abc") mod 256 = 75.
    int nonzero = 0;
    for (std::size_t i = 0; i < vs[0].values.size(); ++i)
        if (vs[0].values[i] != 0.0) {
            ++nonzero;
            CHECK(i == 75);
            CHECK(vs[0].values[i] == doctest::Approx(1.0));
        }
    CHECK(nonzero == 1);

    // strings shorter than 3 bytes hash as a single gram, not zero vectors
    auto shorties = emb.embed({"a", "ab"});
    for (const auto& v : shorties) {
        double norm = 0.0;
        for (double x : v.values) norm += x * x;
        CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
    }

    // similar strings land closer than unrelated ones
    auto sim = emb.embed({"the quick brown fox", "the quick brown fix", "parliamentary procedure"});
    CHECK(semantics::cosine(sim[0], sim[1]) > semantics::cosine(sim[0], sim[2]));
}

TEST_CASE("precomputed embedder serves the fixture vectors by digest") {
    semantics::PrecomputedEmbedder emb(testsupport::fixture("vectors_toy.txt"));
    CHECK(emb.id() == "precomputed");
    auto p = toy_problem();
    auto vs = semantics::embed(p, emb);
    REQUIRE(vs.size() == 3);
    CHECK(vs[0].values == std::vector<double>{1.0, 0.0, 0.0, 0.0});
    CHECK(vs[1].values == std::vector<double>{1.0, 0.0, 0.0, 0.0});
    CHECK(vs[2].values == std::vector<double>{0.0, 1.0, 0.0, 0.0});

    CHECK_THROWS_WITH_AS(emb.embed({"not in the file"}), doctest::Contains("no entry"),
                         std::runtime_error);
    CHECK_THROWS_AS(semantics::PrecomputedEmbedder(testsupport::fixture("does_not_exist.txt")),
                    std::runtime_error);
}

TEST_CASE("precomputed embedder rejects malformed vector files") {
    testsupport::TempDir tmp;
    auto bad = tmp / "bad.txt";
    {
        std::ofstream out(bad);
        out << "deadbeef 3 0.1 0.2\n";  // dim says 3, only 2 components
    }
    CHECK_THROWS_WITH_AS(semantics::PrecomputedEmbedder{bad}, doctest::Contains(":1"),
                         std::runtime_error);
}

TEST_CASE("profile matches the hand-worked example") {
    auto p = toy_problem();
    semantics::PrecomputedEmbedder emb(testsupport::fixture("vectors_toy.txt"));
    auto vs = semantics::embed(p, emb);

    corpus::TruthAnnotation truth;
    truth.problem_id = "toy";
    truth.author_count = 2;
    truth.changes = {0, 1};

    auto prof = semantics::profile(p, vs, &truth);
    CHECK(prof.problem_id == "toy");
    REQUIRE(prof.adjacent_sims.size() == 2);
    CHECK(prof.adjacent_sims[0] == doctest::Approx(1.0));
    CHECK(prof.adjacent_sims[1] == doctest::Approx(0.0));
    CHECK(prof.avg_adjacent == doctest::Approx(0.5));
    // pairs: (0,1)=1, (0,2)=0, (1,2)=0 -> mean 1/3
    CHECK(prof.avg_all_pairs == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(prof.mean_pairwise_distance == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    // the only true switch is boundary 1 with similarity 0
    REQUIRE(prof.avg_switch_pairs.has_value());
    CHECK(*prof.avg_switch_pairs == doctest::Approx(0.0));

    // without truth there is no switch average
    auto no_truth = semantics::profile(p, vs);
    CHECK_FALSE(no_truth.avg_switch_pairs.has_value());

    // truth without any switch: also absent
    corpus::TruthAnnotation flat;
    flat.problem_id = "toy";
    flat.author_count = 1;
    flat.changes = {0, 0};
    CHECK_FALSE(semantics::profile(p, vs, &flat).avg_switch_pairs.has_value());
}

TEST_CASE("profile identities hold on the mini corpus with fallback vectors") {
    auto ds = corpus::load_dataset(testsupport::fixture("corpus_mini"), corpus::Difficulty::easy,
                                   corpus::Split::train, corpus::Granularity::sentence);
    semantics::FallbackEmbedder emb;
    for (const auto& [problem, truth] : ds.problems) {
        auto vs = semantics::embed(problem, emb);
        auto prof = semantics::profile(problem, vs, &truth);

        REQUIRE(prof.adjacent_sims.size() == problem.units.size() - 1);
        // distance is the exact complement of the all-pairs mean
        CHECK(prof.mean_pairwise_distance ==
              doctest::Approx(1.0 - prof.avg_all_pairs).epsilon(1e-12));
        // adjacent mean really is the mean of the reported sims
        double acc = 0.0;
        for (double s : prof.adjacent_sims) acc += s;
        CHECK(prof.avg_adjacent ==
              doctest::Approx(acc / prof.adjacent_sims.size()).epsilon(1e-12));
        for (double s : prof.adjacent_sims) {
            CHECK(s >= -1.0);
            CHECK(s <= 1.0);
        }
        // switch mean present iff the truth marks a switch; equal to the
        // mean of sims at switch boundaries
        if (truth.change_count() > 0) {
            REQUIRE(prof.avg_switch_pairs.has_value());
            double sw = 0.0;
            int k = 0;
            for (std::size_t b = 0; b < truth.changes.size(); ++b)
                if (truth.changes[b] == 1) {
                    sw += prof.adjacent_sims[b];
                    ++k;
                }
            CHECK(*prof.avg_switch_pairs == doctest::Approx(sw / k).epsilon(1e-12));
        } else {
            CHECK_FALSE(prof.avg_switch_pairs.has_value());
        }
    }
}

TEST_CASE("profile rejects inconsistent shapes") {
    auto p = toy_problem();
    semantics::FallbackEmbedder emb;
    auto vs = semantics::embed(p, emb);
    vs.pop_back();
    CHECK_THROWS_AS(semantics::profile(p, vs), std::invalid_argument);

    corpus::Problem single;
    single.id = "s";
    single.units = {"only one"};
    CHECK_THROWS_AS(semantics::profile(single, emb.embed(single.units)),
                    std::invalid_argument);

    corpus::TruthAnnotation wrong;
    wrong.problem_id = "toy";
    wrong.changes = {0, 1, 1};  // wrong length
    auto full = semantics::embed(p, emb);
    CHECK_THROWS_AS(semantics::profile(p, full, &wrong), std::invalid_argument);
}

}  // TEST_SUITE
