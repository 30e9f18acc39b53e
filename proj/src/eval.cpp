#include "clinicsum/eval.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <unordered_map>

#include "clinicsum/errors.hpp"
#include "clinicsum/text.hpp"

namespace clinicsum {

namespace {

double harmonic_f1(double p, double r) {
    return (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

std::unordered_map<std::string, std::size_t> ngram_counts(const std::vector<std::string>& tokens,
                                                          std::size_t n) {
    std::unordered_map<std::string, std::size_t> counts;
    if (tokens.size() < n) {
        return counts;
    }
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        std::string gram;
        for (std::size_t j = 0; j < n; ++j) {
            if (j > 0) {
                gram.push_back(' ');
            }
            gram += tokens[i + j];
        }
        ++counts[gram];
    }
    return counts;
}

} // namespace

RougeScore rouge_n(const std::string& candidate, const std::string& reference, std::size_t n) {
    if (n < 1) {
        throw PreconditionError("rouge_n: n must be >= 1");
    }
    const auto cand_tokens = word_tokens(candidate);
    const auto ref_tokens = word_tokens(reference);
    const auto cand_grams = ngram_counts(cand_tokens, n);
    const auto ref_grams = ngram_counts(ref_tokens, n);

    std::size_t cand_total = cand_tokens.size() >= n ? cand_tokens.size() - n + 1 : 0;
    std::size_t ref_total = ref_tokens.size() >= n ? ref_tokens.size() - n + 1 : 0;
    if (cand_total == 0 || ref_total == 0) {
        return {};
    }

    std::size_t overlap = 0;
    for (const auto& [gram, count] : cand_grams) {
        auto it = ref_grams.find(gram);
        if (it != ref_grams.end()) {
            overlap += std::min(count, it->second);
        }
    }

    RougeScore score;
    score.precision = static_cast<double>(overlap) / static_cast<double>(cand_total);
    score.recall = static_cast<double>(overlap) / static_cast<double>(ref_total);
    score.f1 = harmonic_f1(score.precision, score.recall);
    return score;
}

RougeScore rouge_l(const std::string& candidate, const std::string& reference) {
    const auto cand = word_tokens(candidate);
    const auto ref = word_tokens(reference);
    if (cand.empty() || ref.empty()) {
        return {};
    }

    // Classic LCS DP, rolling rows.
    std::vector<std::size_t> prev(ref.size() + 1, 0);
    std::vector<std::size_t> curr(ref.size() + 1, 0);
    for (std::size_t i = 1; i <= cand.size(); ++i) {
        for (std::size_t j = 1; j <= ref.size(); ++j) {
            if (cand[i - 1] == ref[j - 1]) {
                curr[j] = prev[j - 1] + 1;
            } else {
                curr[j] = std::max(prev[j], curr[j - 1]);
            }
        }
        std::swap(prev, curr);
    }
    const double lcs = static_cast<double>(prev[ref.size()]);

    RougeScore score;
    score.precision = lcs / static_cast<double>(cand.size());
    score.recall = lcs / static_cast<double>(ref.size());
    score.f1 = harmonic_f1(score.precision, score.recall);
    return score;
}

RougeScore embed_score(const std::string& candidate, const std::string& reference,
                       EmbeddingProvider& provider) {
    const auto cand_tokens = word_tokens(candidate);
    const auto ref_tokens = word_tokens(reference);
    if (cand_tokens.empty() || ref_tokens.empty()) {
        return {};
    }
    const auto cand_vecs = embed_batch(provider, cand_tokens);
    const auto ref_vecs = embed_batch(provider, ref_tokens);

    auto greedy = [](const std::vector<EmbeddingVector>& from, const std::vector<EmbeddingVector>& to) {
        double sum = 0.0;
        for (const auto& f : from) {
            double best = -1.0;
            for (const auto& t : to) {
                best = std::max(best, dot(f, t));
            }
            sum += best;
        }
        return sum / static_cast<double>(from.size());
    };

    RougeScore score;
    score.precision = greedy(cand_vecs, ref_vecs);
    score.recall = greedy(ref_vecs, cand_vecs);
    score.f1 = harmonic_f1(score.precision, score.recall);
    return score;
}

TokenReport token_report(const std::vector<std::string>& summaries, const Tokenizer& tokenizer) {
    TokenReport report;
    if (summaries.empty()) {
        return report;
    }
    std::size_t total = 0;
    report.min = tokenizer.count(summaries.front());
    for (const auto& text : summaries) {
        const std::size_t count = tokenizer.count(text);
        report.counts.push_back(count);
        total += count;
        report.max = std::max(report.max, count);
        report.min = std::min(report.min, count);
    }
    report.mean = static_cast<double>(total) / static_cast<double>(summaries.size());
    return report;
}

Choice choice_from_string(const std::string& s) {
    if (s == "A" || s == "a") {
        return Choice::A;
    }
    if (s == "B" || s == "b") {
        return Choice::B;
    }
    if (s == "AB" || s == "ab" || s == "A/B" || s == "TIE" || s == "tie") {
        return Choice::TIE;
    }
    throw ParseError("unknown preference choice: " + s);
}

std::string choice_to_string(Choice c) {
    switch (c) {
    case Choice::A:
        return "A";
    case Choice::B:
        return "B";
    case Choice::TIE:
        return "AB";
    }
    return "AB";
}

std::pair<ReviewSheet, ReviewKey> make_review_sheet(const std::vector<ReviewItem>& items,
                                                    const std::string& system_x,
                                                    const std::string& system_y,
                                                    std::uint64_t seed) {
    ReviewSheet sheet;
    ReviewKey key;
    std::mt19937_64 rng(seed);
    for (const auto& item : items) {
        const bool x_is_a = (rng() & 1u) == 0;
        SheetRow row;
        row.item_id = item.item_id;
        row.conversation = item.conversation;
        row.ground_truth = item.ground_truth;
        row.summary_a = x_is_a ? item.summary_x : item.summary_y;
        row.summary_b = x_is_a ? item.summary_y : item.summary_x;
        sheet.rows.push_back(std::move(row));
        key.rows.push_back(KeyRow{item.item_id, x_is_a ? system_x : system_y,
                                  x_is_a ? system_y : system_x});
    }
    return {std::move(sheet), std::move(key)};
}

double round2(double value) {
    return std::round(value * 100.0) / 100.0;
}

WinRateTable win_rate(const std::vector<PreferenceRecord>& records, const ReviewKey& key) {
    std::unordered_map<std::string, const KeyRow*> by_item;
    std::set<std::string> systems;
    for (const auto& row : key.rows) {
        by_item[row.item_id] = &row;
        systems.insert(row.a_system);
        systems.insert(row.b_system);
    }

    std::map<std::string, WinRateRow> rows;
    std::map<std::string, std::size_t> items_per_rater;
    for (const auto& record : records) {
        auto it = by_item.find(record.item_id);
        if (it == by_item.end()) {
            throw KeyError("preference references unknown item: " + record.item_id);
        }
        auto& row = rows[record.rater_id];
        row.rater_id = record.rater_id;
        ++items_per_rater[record.rater_id];
        if (record.choice == Choice::TIE) {
            ++row.ties;
        } else {
            const std::string& system =
                record.choice == Choice::A ? it->second->a_system : it->second->b_system;
            ++row.preferred[system];
        }
    }

    WinRateTable table;
    table.total.rater_id = "total";
    std::map<std::string, double> rate_sums;
    std::map<std::string, std::size_t> rate_counts;
    for (auto& [rater, row] : rows) {
        const std::size_t items = items_per_rater[rater];
        const std::size_t decisive = items - row.ties;
        for (const auto& system : systems) {
            const std::size_t preferred = row.preferred.count(system) ? row.preferred[system] : 0;
            row.preferred[system] = preferred;
            table.total.preferred[system] += preferred;
            if (decisive > 0) {
                const double rate = static_cast<double>(preferred) / static_cast<double>(decisive);
                row.rates[system] = rate;
                rate_sums[system] += rate;
                ++rate_counts[system];
            } else {
                row.rates[system] = std::nullopt;
            }
        }
        table.total.ties += row.ties;
        table.per_rater.push_back(row);
    }
    for (const auto& system : systems) {
        if (rate_counts[system] > 0) {
            table.total.rates[system] =
                rate_sums[system] / static_cast<double>(rate_counts[system]);
        } else {
            table.total.rates[system] = std::nullopt;
        }
    }
    return table;
}

double fleiss_kappa(const std::vector<std::vector<std::size_t>>& counts, std::size_t n_raters) {
    if (counts.empty()) {
        throw PreconditionError("fleiss_kappa: need at least one item");
    }
    if (n_raters < 2) {
        throw PreconditionError("fleiss_kappa: need at least two raters");
    }
    const std::size_t n_categories = counts.front().size();
    const double n = static_cast<double>(n_raters);

    std::vector<double> column_sums(n_categories, 0.0);
    double p_bar = 0.0;
    for (const auto& row : counts) {
        if (row.size() != n_categories) {
            throw PreconditionError("fleiss_kappa: ragged counts matrix");
        }
        std::size_t row_sum = 0;
        double sq = 0.0;
        for (std::size_t j = 0; j < n_categories; ++j) {
            row_sum += row[j];
            sq += static_cast<double>(row[j]) * static_cast<double>(row[j]);
            column_sums[j] += static_cast<double>(row[j]);
        }
        if (row_sum != n_raters) {
            throw PreconditionError("fleiss_kappa: row sum " + std::to_string(row_sum) +
                                    " != n_raters " + std::to_string(n_raters));
        }
        p_bar += (sq - n) / (n * (n - 1.0));
    }
    p_bar /= static_cast<double>(counts.size());

    double p_e = 0.0;
    const double total = n * static_cast<double>(counts.size());
    for (double sum : column_sums) {
        const double p_j = sum / total;
        p_e += p_j * p_j;
    }

    if (p_e >= 1.0) {
        if (p_bar >= 1.0) {
            return 1.0; // every rating in one category, observed agreement perfect
        }
        throw DegenerateAgreementError("fleiss_kappa: chance agreement is 1 but observed is not");
    }
    return (p_bar - p_e) / (1.0 - p_e);
}

double krippendorff_alpha_nominal(const std::vector<std::vector<int>>& ratings_per_item) {
    // Coincidence matrix over pairable ratings (items with >= 2 ratings).
    std::map<int, std::map<int, double>> o;
    std::map<int, double> n_c;
    double n = 0.0;
    bool any_pairable = false;
    for (const auto& ratings : ratings_per_item) {
        const std::size_t m = ratings.size();
        if (m < 2) {
            continue;
        }
        any_pairable = true;
        const double weight = 1.0 / static_cast<double>(m - 1);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                if (i == j) {
                    continue;
                }
                o[ratings[i]][ratings[j]] += weight;
            }
            n_c[ratings[i]] += 1.0;
            n += 1.0;
        }
    }
    if (!any_pairable) {
        throw PreconditionError("krippendorff_alpha: no item has two or more ratings");
    }

    double observed_disagreement = 0.0;
    for (const auto& [c, row] : o) {
        for (const auto& [k, value] : row) {
            if (c != k) {
                observed_disagreement += value;
            }
        }
    }
    observed_disagreement /= n;

    double expected_disagreement = 0.0;
    for (const auto& [c, nc] : n_c) {
        for (const auto& [k, nk] : n_c) {
            if (c != k) {
                expected_disagreement += nc * nk;
            }
        }
    }
    expected_disagreement /= n * (n - 1.0);

    if (expected_disagreement == 0.0) {
        throw DegenerateAgreementError(
            "krippendorff_alpha: all ratings fall in one category, expected disagreement is 0");
    }
    return 1.0 - observed_disagreement / expected_disagreement;
}

IrrResult irr_from_choices(const std::vector<std::vector<Choice>>& choices_per_item) {
    if (choices_per_item.empty()) {
        throw PreconditionError("irr: no items");
    }
    const std::size_t n_raters = choices_per_item.front().size();
    std::vector<std::vector<std::size_t>> counts;
    std::vector<std::vector<int>> ratings;
    for (const auto& choices : choices_per_item) {
        if (choices.size() != n_raters) {
            throw PreconditionError("irr: all items need the same rater count");
        }
        std::vector<std::size_t> row(3, 0);
        std::vector<int> item_ratings;
        for (Choice c : choices) {
            ++row[static_cast<std::size_t>(c)];
            item_ratings.push_back(static_cast<int>(c));
        }
        counts.push_back(std::move(row));
        ratings.push_back(std::move(item_ratings));
    }
    IrrResult result;
    result.fleiss_kappa = fleiss_kappa(counts, n_raters);
    result.krippendorff_alpha = krippendorff_alpha_nominal(ratings);
    return result;
}

} // namespace clinicsum
