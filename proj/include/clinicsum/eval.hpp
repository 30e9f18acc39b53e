#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "clinicsum/embed.hpp"
#include "clinicsum/tokenizer.hpp"

namespace clinicsum {

struct RougeScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Clipped n-gram overlap over lowercased alphanumeric word tokens.
// Empty n-gram sets on either side give an all-zero score.
RougeScore rouge_n(const std::string& candidate, const std::string& reference, std::size_t n);

// Whole-text longest common subsequence over the same token stream.
RougeScore rouge_l(const std::string& candidate, const std::string& reference);

// Greedy-matching embedding similarity: P is the mean over candidate tokens
// of the best cosine against any reference token, R symmetric, F1 harmonic.
// Token vectors come from the provider and are normalized by embed_batch.
RougeScore embed_score(const std::string& candidate, const std::string& reference,
                       EmbeddingProvider& provider);

struct TokenReport {
    std::vector<std::size_t> counts;
    double mean = 0.0;
    std::size_t max = 0;
    std::size_t min = 0;
};

TokenReport token_report(const std::vector<std::string>& summaries, const Tokenizer& tokenizer);

enum class Choice { A, B, TIE };

Choice choice_from_string(const std::string& s); // "A", "B", "AB" (tie)
std::string choice_to_string(Choice c);

struct PreferenceRecord {
    std::string rater_id;
    std::string item_id;
    Choice choice = Choice::TIE;
};

// One comparison item: two system summaries plus the material shown to the
// reviewer alongside them.
struct ReviewItem {
    std::string item_id;
    std::string conversation;
    std::string summary_x;
    std::string summary_y;
    std::string ground_truth;
};

struct SheetRow {
    std::string item_id;
    std::string conversation;
    std::string summary_a;
    std::string summary_b;
    std::string ground_truth;
};

struct KeyRow {
    std::string item_id;
    std::string a_system;
    std::string b_system;
};

struct ReviewSheet {
    std::vector<SheetRow> rows;
};

struct ReviewKey {
    std::vector<KeyRow> rows;
};

// Per item, a seeded coin assigns system X to slot A or B; the sheet hides
// system identities and the key records the assignment. Same seed, same
// assignment.
std::pair<ReviewSheet, ReviewKey> make_review_sheet(const std::vector<ReviewItem>& items,
                                                    const std::string& system_x,
                                                    const std::string& system_y,
                                                    std::uint64_t seed);

struct WinRateRow {
    std::string rater_id;
    std::map<std::string, std::size_t> preferred; // system -> preferred count
    std::size_t ties = 0;
    // preferred / (items - ties); absent when every item was a tie.
    std::map<std::string, std::optional<double>> rates;
};

struct WinRateTable {
    std::vector<WinRateRow> per_rater; // sorted by rater_id
    // Counts are summed across raters; the total rate per system is the
    // unweighted mean of the per-rater rates (raters with only ties are
    // excluded from the mean).
    WinRateRow total;
};

// Maps each A/B choice to its system via the key. Unknown item ids raise
// KeyError. Display rounding is left to callers; exact values are kept.
WinRateTable win_rate(const std::vector<PreferenceRecord>& records, const ReviewKey& key);

double round2(double value);

struct IrrResult {
    double fleiss_kappa = 0.0;
    double krippendorff_alpha = 0.0;
};

// counts: items x categories matrix of rating counts; every row must sum to
// n_raters (>= 2). Returns (p_bar - p_e) / (1 - p_e); a chance agreement of
// 1 is only defined when observed agreement is also 1.
double fleiss_kappa(const std::vector<std::vector<std::size_t>>& counts, std::size_t n_raters);

// Nominal-scale alpha from the coincidence matrix. Items with fewer than 2
// ratings are excluded; if none remain, PreconditionError. All ratings in a
// single category make expected disagreement 0 (DegenerateAgreementError).
double krippendorff_alpha_nominal(const std::vector<std::vector<int>>& ratings_per_item);

// Convenience: both IRR statistics over rater choices per item, using the 3
// categories {A, B, TIE}.
IrrResult irr_from_choices(const std::vector<std::vector<Choice>>& choices_per_item);

} // namespace clinicsum
