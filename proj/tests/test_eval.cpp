#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "clinicsum/errors.hpp"
#include "clinicsum/eval.hpp"
#include "clinicsum/text.hpp"

using namespace clinicsum;

namespace {

// Exponential-time LCS by subsequence enumeration; the independent check for
// the DP implementation.
std::size_t lcs_brute_force(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::size_t best = 0;
    const std::size_t n = a.size();
    for (std::size_t mask = 0; mask < (1u << n); ++mask) {
        std::vector<std::string> sub;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                sub.push_back(a[i]);
            }
        }
        std::size_t j = 0;
        for (const auto& token : b) {
            if (j < sub.size() && token == sub[j]) {
                ++j;
            }
        }
        if (j == sub.size()) {
            best = std::max(best, sub.size());
        }
    }
    return best;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) {
            out += ' ';
        }
        out += t;
    }
    return out;
}

} // namespace

TEST_CASE("rouge_n: identity and hand-enumerated cases") {
    const auto identity = rouge_n("the cat sat", "the cat sat", 1);
    CHECK(identity.precision == 1.0);
    CHECK(identity.recall == 1.0);
    CHECK(identity.f1 == 1.0);

    const auto unigram = rouge_n("the cat sat", "the cat", 1);
    CHECK(unigram.precision == doctest::Approx(0.6667).epsilon(1e-4));
    CHECK(unigram.recall == doctest::Approx(1.0));
    CHECK(unigram.f1 == doctest::Approx(0.8).epsilon(1e-4));

    const auto bigram = rouge_n("a b c", "a b d", 2);
    CHECK(bigram.precision == doctest::Approx(0.5));
    CHECK(bigram.recall == doctest::Approx(0.5));
    CHECK(bigram.f1 == doctest::Approx(0.5));
}

TEST_CASE("rouge_n: clipping and empty edges") {
    // "a a a" vs "a": overlap is clipped to the reference count.
    const auto clipped = rouge_n("a a a", "a", 1);
    CHECK(clipped.precision == doctest::Approx(1.0 / 3.0));
    CHECK(clipped.recall == doctest::Approx(1.0));

    const auto empty = rouge_n("", "abc", 1);
    CHECK(empty.precision == 0.0);
    CHECK(empty.recall == 0.0);
    CHECK(empty.f1 == 0.0);

    // Texts shorter than n have no n-grams.
    const auto short_text = rouge_n("one", "one", 2);
    CHECK(short_text.f1 == 0.0);
}

TEST_CASE("rouge_l: identity, hand DP case, disjoint") {
    const auto identity = rouge_l("same text here", "same text here");
    CHECK(identity.f1 == 1.0);

    const auto crossed = rouge_l("the cat sat on mat", "the cat on the mat");
    CHECK(crossed.precision == doctest::Approx(0.8));
    CHECK(crossed.recall == doctest::Approx(0.8));
    CHECK(crossed.f1 == doctest::Approx(0.8));

    const auto disjoint = rouge_l("alpha beta", "gamma delta");
    CHECK(disjoint.precision == 0.0);
    CHECK(disjoint.recall == 0.0);
    CHECK(disjoint.f1 == 0.0);
}

TEST_CASE("rouge variants are symmetric with P and R exchanged") {
    std::mt19937_64 rng(37);
    const std::vector<std::string> vocab = {"a", "b", "c", "d"};
    for (int iter = 0; iter < 100; ++iter) {
        auto random_text = [&] {
            std::vector<std::string> tokens;
            const std::size_t len = rng() % 7;
            for (std::size_t i = 0; i < len; ++i) {
                tokens.push_back(vocab[rng() % vocab.size()]);
            }
            return join_tokens(tokens);
        };
        const std::string x = random_text();
        const std::string y = random_text();
        for (std::size_t n : {1u, 2u}) {
            const auto xy = rouge_n(x, y, n);
            const auto yx = rouge_n(y, x, n);
            CHECK(xy.precision == doctest::Approx(yx.recall).epsilon(1e-12));
            CHECK(xy.recall == doctest::Approx(yx.precision).epsilon(1e-12));
            CHECK(xy.f1 == doctest::Approx(yx.f1).epsilon(1e-12));
        }
        const auto lxy = rouge_l(x, y);
        const auto lyx = rouge_l(y, x);
        CHECK(lxy.precision == doctest::Approx(lyx.recall).epsilon(1e-12));
        CHECK(lxy.f1 == doctest::Approx(lyx.f1).epsilon(1e-12));
    }
}

TEST_CASE("rouge_l LCS matches brute-force subsequence enumeration") {
    std::mt19937_64 rng(41);
    const std::vector<std::string> vocab = {"a", "b"};
    for (int iter = 0; iter < 300; ++iter) {
        std::vector<std::string> a, b;
        const std::size_t la = 1 + rng() % 8;
        const std::size_t lb = 1 + rng() % 8;
        for (std::size_t i = 0; i < la; ++i) {
            a.push_back(vocab[rng() % 2]);
        }
        for (std::size_t i = 0; i < lb; ++i) {
            b.push_back(vocab[rng() % 2]);
        }
        const auto score = rouge_l(join_tokens(a), join_tokens(b));
        const double expected_lcs = static_cast<double>(lcs_brute_force(a, b));
        CHECK(score.precision == doctest::Approx(expected_lcs / static_cast<double>(a.size())));
        CHECK(score.recall == doctest::Approx(expected_lcs / static_cast<double>(b.size())));
    }
}

TEST_CASE("embed_score: identity, symmetry, brute-force equality") {
    TestEmbedder embedder(32);

    const auto identity = embed_score("cough and fever", "cough and fever", embedder);
    CHECK(identity.f1 == doctest::Approx(1.0).epsilon(1e-6));

    std::mt19937_64 rng(43);
    const std::vector<std::string> vocab = {"cough", "fever", "pain", "scan", "rest", "fluid"};
    auto random_text = [&] {
        std::vector<std::string> tokens;
        const std::size_t len = 1 + rng() % 6;
        for (std::size_t i = 0; i < len; ++i) {
            tokens.push_back(vocab[rng() % vocab.size()]);
        }
        return join_tokens(tokens);
    };
    for (int iter = 0; iter < 20; ++iter) {
        const std::string c = random_text();
        const std::string r = random_text();
        const auto cr = embed_score(c, r, embedder);
        const auto rc = embed_score(r, c, embedder);
        CHECK(cr.precision == doctest::Approx(rc.recall).epsilon(1e-12));
        CHECK(cr.recall == doctest::Approx(rc.precision).epsilon(1e-12));

        // All-pairs cosine matrix reference.
        const auto c_tokens = word_tokens(c);
        const auto r_tokens = word_tokens(r);
        std::vector<EmbeddingVector> cv, rv;
        for (const auto& t : c_tokens) {
            cv.push_back(embed_one(embedder, t));
        }
        for (const auto& t : r_tokens) {
            rv.push_back(embed_one(embedder, t));
        }
        double p = 0.0;
        for (const auto& a : cv) {
            double best = -1.0;
            for (const auto& b : rv) {
                best = std::max(best, cosine(a, b));
            }
            p += best;
        }
        p /= static_cast<double>(cv.size());
        CHECK(cr.precision == doctest::Approx(p).epsilon(1e-9));
    }
}

TEST_CASE("token_report: documented cases and mean property") {
    WhitespaceTokenizer tokenizer;
    const auto empty_text = token_report({""}, tokenizer);
    CHECK(empty_text.counts == std::vector<std::size_t>{0});
    CHECK(empty_text.mean == 0.0);

    const auto two = token_report({"a b", "c"}, tokenizer);
    CHECK(two.counts == std::vector<std::size_t>{2, 1});
    CHECK(two.mean == doctest::Approx(1.5));
    CHECK(two.max == 2);
    CHECK(two.min == 1);

    std::mt19937_64 rng(47);
    for (int iter = 0; iter < 20; ++iter) {
        std::vector<std::string> texts;
        const std::size_t n = 1 + rng() % 10;
        for (std::size_t i = 0; i < n; ++i) {
            texts.push_back(std::string("w ") + std::to_string(rng() % 100));
        }
        const auto report = token_report(texts, tokenizer);
        std::size_t sum = 0;
        for (auto c : report.counts) {
            sum += c;
        }
        CHECK(report.mean ==
              doctest::Approx(static_cast<double>(sum) / static_cast<double>(n)).epsilon(1e-12));
    }
}

namespace {

std::vector<ReviewItem> make_items(std::size_t n) {
    std::vector<ReviewItem> items;
    for (std::size_t i = 0; i < n; ++i) {
        ReviewItem item;
        item.item_id = "item-" + std::to_string(i);
        item.conversation = "conversation " + std::to_string(i);
        item.summary_x = "from-x " + std::to_string(i);
        item.summary_y = "from-y " + std::to_string(i);
        item.ground_truth = "truth " + std::to_string(i);
        items.push_back(std::move(item));
    }
    return items;
}

} // namespace

TEST_CASE("make_review_sheet: deterministic, invertible, roughly balanced") {
    const auto items = make_items(1000);
    const auto [sheet_a, key_a] = make_review_sheet(items, "cs", "gpt", 99);
    const auto [sheet_b, key_b] = make_review_sheet(items, "cs", "gpt", 99);

    REQUIRE(sheet_a.rows.size() == items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
        CHECK(sheet_a.rows[i].summary_a == sheet_b.rows[i].summary_a);
        CHECK(key_a.rows[i].a_system == key_b.rows[i].a_system);
    }

    std::size_t x_as_a = 0;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto& row = sheet_a.rows[i];
        const auto& k = key_a.rows[i];
        // Sheet hides systems, key restores them.
        if (k.a_system == "cs") {
            ++x_as_a;
            CHECK(row.summary_a == items[i].summary_x);
            CHECK(row.summary_b == items[i].summary_y);
        } else {
            CHECK(row.summary_a == items[i].summary_y);
            CHECK(row.summary_b == items[i].summary_x);
        }
        CHECK(row.conversation == items[i].conversation);
        CHECK(row.ground_truth == items[i].ground_truth);
    }
    const double frequency = static_cast<double>(x_as_a) / 1000.0;
    CHECK(frequency >= 0.45);
    CHECK(frequency <= 0.55);

    const auto [sheet_c, key_c] = make_review_sheet(items, "cs", "gpt", 100);
    bool any_difference = false;
    for (std::size_t i = 0; i < items.size(); ++i) {
        any_difference |= key_c.rows[i].a_system != key_a.rows[i].a_system;
    }
    CHECK(any_difference);
}

namespace {

// Key + per-rater (cs, gpt, tie) counts over shared items.
struct RaterCounts {
    std::string rater;
    std::size_t cs, gpt, ties;
};

std::pair<std::vector<PreferenceRecord>, ReviewKey> table_from_counts(
    const std::vector<RaterCounts>& raters, std::size_t n_items) {
    ReviewKey key;
    for (std::size_t i = 0; i < n_items; ++i) {
        key.rows.push_back(KeyRow{"item-" + std::to_string(i), "cs", "gpt"});
    }
    std::vector<PreferenceRecord> records;
    for (const auto& r : raters) {
        REQUIRE(r.cs + r.gpt + r.ties == n_items);
        std::size_t item = 0;
        for (std::size_t i = 0; i < r.cs; ++i, ++item) {
            records.push_back({r.rater, "item-" + std::to_string(item), Choice::A});
        }
        for (std::size_t i = 0; i < r.gpt; ++i, ++item) {
            records.push_back({r.rater, "item-" + std::to_string(item), Choice::B});
        }
        for (std::size_t i = 0; i < r.ties; ++i, ++item) {
            records.push_back({r.rater, "item-" + std::to_string(item), Choice::TIE});
        }
    }
    return {records, key};
}

} // namespace

TEST_CASE("win_rate reproduces the four-reviewer study table") {
    const std::vector<RaterCounts> raters = {
        {"sme1", 7, 6, 7}, {"sme2", 14, 5, 1}, {"sme3", 9, 5, 6}, {"sme4", 9, 8, 3}};
    const auto [records, key] = table_from_counts(raters, 20);
    const auto table = win_rate(records, key);

    REQUIRE(table.per_rater.size() == 4);
    const std::vector<double> expected_cs = {0.54, 0.74, 0.64, 0.53};
    const std::vector<double> expected_gpt = {0.46, 0.26, 0.36, 0.47};
    for (std::size_t i = 0; i < 4; ++i) {
        REQUIRE(table.per_rater[i].rates.at("cs").has_value());
        CHECK(round2(*table.per_rater[i].rates.at("cs")) == doctest::Approx(expected_cs[i]));
        CHECK(round2(*table.per_rater[i].rates.at("gpt")) == doctest::Approx(expected_gpt[i]));
        // Two-system case: rates sum to 1 whenever there was any decisive item.
        CHECK(*table.per_rater[i].rates.at("cs") + *table.per_rater[i].rates.at("gpt") ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(table.total.preferred.at("cs") == 39);
    CHECK(table.total.preferred.at("gpt") == 24);
    CHECK(table.total.ties == 17);
    CHECK(round2(*table.total.rates.at("cs")) == doctest::Approx(0.61));
    CHECK(round2(*table.total.rates.at("gpt")) == doctest::Approx(0.39));
}

TEST_CASE("win_rate: all ties and unknown items") {
    const auto [records, key] = table_from_counts({{"r1", 0, 0, 5}}, 5);
    const auto table = win_rate(records, key);
    CHECK(table.per_rater[0].ties == 5);
    CHECK_FALSE(table.per_rater[0].rates.at("cs").has_value());
    CHECK_FALSE(table.total.rates.at("cs").has_value());

    ReviewKey tiny;
    tiny.rows.push_back(KeyRow{"known", "cs", "gpt"});
    std::vector<PreferenceRecord> bad = {{"r1", "unknown", Choice::A}};
    CHECK_THROWS_AS(win_rate(bad, tiny), KeyError);
}

TEST_CASE("fleiss_kappa: perfect, maximal-disagreement, and error cases") {
    CHECK(fleiss_kappa({{2, 0}, {0, 2}}, 2) == 1.0);
    CHECK(fleiss_kappa({{4, 0, 0}, {0, 4, 0}, {0, 0, 4}}, 4) == 1.0);
    CHECK(fleiss_kappa({{1, 1}, {1, 1}}, 2) == doctest::Approx(-1.0).epsilon(1e-12));

    CHECK_THROWS_AS(fleiss_kappa({}, 2), PreconditionError);
    CHECK_THROWS_AS(fleiss_kappa({{1, 0}}, 1), PreconditionError);
    CHECK_THROWS_AS(fleiss_kappa({{2, 1}}, 2), PreconditionError);
    // Single category used everywhere: chance agreement 1, observed 1.
    CHECK(fleiss_kappa({{3, 0}, {3, 0}}, 3) == 1.0);
}

TEST_CASE("fleiss_kappa near zero for uniformly random tables") {
    std::mt19937_64 rng(53);
    for (int table_iter = 0; table_iter < 20; ++table_iter) {
        std::vector<std::vector<std::size_t>> counts;
        for (int item = 0; item < 200; ++item) {
            std::vector<std::size_t> row(3, 0);
            for (int rater = 0; rater < 4; ++rater) {
                ++row[rng() % 3];
            }
            counts.push_back(std::move(row));
        }
        CHECK(std::abs(fleiss_kappa(counts, 4)) < 0.1);
    }
}

TEST_CASE("krippendorff_alpha_nominal: documented cases") {
    // Perfect agreement over two observed categories.
    CHECK(krippendorff_alpha_nominal({{0, 0}, {1, 1}}) == 1.0);
    // {(A,A), (A,B)} -> 0.
    CHECK(krippendorff_alpha_nominal({{0, 0}, {0, 1}}) == doctest::Approx(0.0).epsilon(1e-12));

    CHECK_THROWS_AS(krippendorff_alpha_nominal({{0}, {1}}), PreconditionError);
    CHECK_THROWS_AS(krippendorff_alpha_nominal({{0, 0}, {0, 0}}), DegenerateAgreementError);

    // Items with fewer than two ratings are excluded, not fatal.
    CHECK(krippendorff_alpha_nominal({{0, 0}, {1, 1}, {2}}) == 1.0);
}

TEST_CASE("krippendorff_alpha_nominal is invariant under category relabeling") {
    std::mt19937_64 rng(59);
    for (int iter = 0; iter < 50; ++iter) {
        std::vector<std::vector<int>> ratings;
        for (int item = 0; item < 30; ++item) {
            std::vector<int> row;
            for (int rater = 0; rater < 3; ++rater) {
                row.push_back(static_cast<int>(rng() % 3));
            }
            ratings.push_back(std::move(row));
        }
        std::vector<int> perm = {2, 0, 1};
        auto relabeled = ratings;
        for (auto& row : relabeled) {
            for (auto& v : row) {
                v = perm[static_cast<std::size_t>(v)];
            }
        }
        const double original = krippendorff_alpha_nominal(ratings);
        const double renamed = krippendorff_alpha_nominal(relabeled);
        CHECK(original == doctest::Approx(renamed).epsilon(1e-12));
    }
}

TEST_CASE("irr_from_choices agrees on perfect and mixed tables") {
    const std::vector<std::vector<Choice>> perfect = {{Choice::A, Choice::A},
                                                      {Choice::B, Choice::B}};
    const auto result = irr_from_choices(perfect);
    CHECK(result.fleiss_kappa == 1.0);
    CHECK(result.krippendorff_alpha == 1.0);

    const std::vector<std::vector<Choice>> mixed = {{Choice::A, Choice::A},
                                                    {Choice::A, Choice::B}};
    CHECK(irr_from_choices(mixed).krippendorff_alpha == doctest::Approx(0.0).epsilon(1e-12));
}
