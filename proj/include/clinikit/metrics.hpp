#pragma once

// Sentence-level generation metrics over token sequences:
//   bleu    geometric mean of clipped n-gram precisions times the brevity
//           penalty min(1, exp(1 - |ref|/|cand|)), single reference
//   gleu    min(precision, recall) over the pooled multiset of 1..max_n-grams
//   rouge_n clipped n-gram overlap precision/recall/F1
//   rouge_l longest-common-subsequence precision/recall/F1
// All values live in [0,1]; reports multiply by 100.

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "clinikit/tokenize.hpp"

namespace clinikit::metrics {

// Smoothing floor for zero n-gram precisions; sentence-level scoring on short
// replies hits zero higher-order counts constantly.
inline constexpr double kBleuEpsilon = 1e-9;

namespace detail {

inline std::unordered_map<std::string, int> ngram_counts(const TokenSequence& seq, size_t n) {
    std::unordered_map<std::string, int> counts;
    if (n == 0 || seq.size() < n) return counts;
    for (size_t i = 0; i + n <= seq.size(); ++i) {
        std::string key;
        for (size_t j = 0; j < n; ++j) {
            if (j > 0) key.push_back('\x1f');
            key += seq[i + j];
        }
        ++counts[key];
    }
    return counts;
}

inline long clipped_overlap(const std::unordered_map<std::string, int>& cand,
                            const std::unordered_map<std::string, int>& ref) {
    long overlap = 0;
    for (const auto& [gram, count] : cand) {
        auto it = ref.find(gram);
        if (it != ref.end()) overlap += std::min(count, it->second);
    }
    return overlap;
}

inline long total_count(const std::unordered_map<std::string, int>& counts) {
    long total = 0;
    for (const auto& [gram, count] : counts) total += count;
    return total;
}

}  // namespace detail

struct PrfScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

inline PrfScore make_prf(double precision, double recall) {
    PrfScore s{precision, recall, 0.0};
    if (precision + recall > 0.0) s.f1 = 2.0 * precision * recall / (precision + recall);
    return s;
}

inline double bleu(const TokenSequence& candidate, const TokenSequence& reference, size_t max_n) {
    if (max_n < 1) throw std::invalid_argument("bleu: max_n must be >= 1");
    if (candidate.empty()) return 0.0;

    double log_sum = 0.0;
    size_t orders_used = 0;
    for (size_t n = 1; n <= max_n; ++n) {
        auto cand = detail::ngram_counts(candidate, n);
        auto ref = detail::ngram_counts(reference, n);
        long cand_total = detail::total_count(cand);
        long ref_total = detail::total_count(ref);
        if (cand_total == 0 && ref_total == 0) continue;  // order carries no information
        double precision =
            cand_total > 0
                ? static_cast<double>(detail::clipped_overlap(cand, ref)) / cand_total
                : 0.0;
        if (precision <= 0.0) precision = kBleuEpsilon;
        log_sum += std::log(precision);
        ++orders_used;
    }
    if (orders_used == 0) return 0.0;

    double bp = std::min(
        1.0, std::exp(1.0 - static_cast<double>(reference.size()) / candidate.size()));
    return bp * std::exp(log_sum / static_cast<double>(orders_used));
}

inline double gleu(const TokenSequence& candidate, const TokenSequence& reference, size_t max_n) {
    if (max_n < 1) throw std::invalid_argument("gleu: max_n must be >= 1");
    long matches = 0, cand_total = 0, ref_total = 0;
    for (size_t n = 1; n <= max_n; ++n) {
        auto cand = detail::ngram_counts(candidate, n);
        auto ref = detail::ngram_counts(reference, n);
        matches += detail::clipped_overlap(cand, ref);
        cand_total += detail::total_count(cand);
        ref_total += detail::total_count(ref);
    }
    if (cand_total == 0 || ref_total == 0) return 0.0;
    double precision = static_cast<double>(matches) / cand_total;
    double recall = static_cast<double>(matches) / ref_total;
    return std::min(precision, recall);
}

inline PrfScore rouge_n(const TokenSequence& candidate, const TokenSequence& reference, size_t n) {
    if (n < 1) throw std::invalid_argument("rouge_n: n must be >= 1");
    auto ref = detail::ngram_counts(reference, n);
    long ref_total = detail::total_count(ref);
    if (ref_total == 0) return {};
    auto cand = detail::ngram_counts(candidate, n);
    long cand_total = detail::total_count(cand);
    long overlap = detail::clipped_overlap(cand, ref);
    double precision = cand_total > 0 ? static_cast<double>(overlap) / cand_total : 0.0;
    double recall = static_cast<double>(overlap) / ref_total;
    return make_prf(precision, recall);
}

inline size_t lcs_length(const TokenSequence& a, const TokenSequence& b) {
    std::vector<size_t> prev(b.size() + 1, 0), curr(b.size() + 1, 0);
    for (size_t i = 1; i <= a.size(); ++i) {
        for (size_t j = 1; j <= b.size(); ++j) {
            curr[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], curr[j - 1]);
        }
        std::swap(prev, curr);
    }
    return prev[b.size()];
}

inline PrfScore rouge_l(const TokenSequence& candidate, const TokenSequence& reference) {
    if (candidate.empty() || reference.empty()) return {};
    double lcs = static_cast<double>(lcs_length(candidate, reference));
    return make_prf(lcs / candidate.size(), lcs / reference.size());
}

struct MetricReport {
    double bleu_n[4] = {0, 0, 0, 0};  // BLEU-1..4
    double gleu = 0.0;
    PrfScore rouge1, rouge2, rougeL;
};

inline MetricReport score_pair(const TokenSequence& candidate, const TokenSequence& reference) {
    MetricReport r;
    for (size_t n = 1; n <= 4; ++n) r.bleu_n[n - 1] = bleu(candidate, reference, n);
    r.gleu = gleu(candidate, reference, 4);
    r.rouge1 = rouge_n(candidate, reference, 1);
    r.rouge2 = rouge_n(candidate, reference, 2);
    r.rougeL = rouge_l(candidate, reference);
    return r;
}

inline MetricReport score_texts(const std::string& candidate, const std::string& reference) {
    return score_pair(tokenize(candidate), tokenize(reference));
}

// Per-example scores macro-averaged; F1 is the reported ROUGE figure, with
// precision and recall retained in the per-example records.
struct MetricAggregate {
    size_t count = 0;
    double bleu_n[4] = {0, 0, 0, 0};
    double gleu = 0.0;
    double rouge1_f1 = 0.0;
    double rouge2_f1 = 0.0;
    double rougeL_f1 = 0.0;
};

inline MetricAggregate aggregate(const std::vector<MetricReport>& reports) {
    MetricAggregate agg;
    agg.count = reports.size();
    if (reports.empty()) return agg;
    for (const auto& r : reports) {
        for (int n = 0; n < 4; ++n) agg.bleu_n[n] += r.bleu_n[n];
        agg.gleu += r.gleu;
        agg.rouge1_f1 += r.rouge1.f1;
        agg.rouge2_f1 += r.rouge2.f1;
        agg.rougeL_f1 += r.rougeL.f1;
    }
    double inv = 1.0 / static_cast<double>(reports.size());
    for (int n = 0; n < 4; ++n) agg.bleu_n[n] *= inv;
    agg.gleu *= inv;
    agg.rouge1_f1 *= inv;
    agg.rouge2_f1 *= inv;
    agg.rougeL_f1 *= inv;
    return agg;
}

inline void to_json(nlohmann::json& j, const PrfScore& s) {
    j = nlohmann::json{{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
}

inline void to_json(nlohmann::json& j, const MetricReport& r) {
    j = nlohmann::json{{"bleu1", r.bleu_n[0]}, {"bleu2", r.bleu_n[1]}, {"bleu3", r.bleu_n[2]},
                       {"bleu4", r.bleu_n[3]}, {"gleu", r.gleu},       {"rouge1", r.rouge1},
                       {"rouge2", r.rouge2},   {"rougeL", r.rougeL}};
}

inline void to_json(nlohmann::json& j, const MetricAggregate& a) {
    j = nlohmann::json{{"count", a.count},        {"bleu1", a.bleu_n[0]},
                       {"bleu2", a.bleu_n[1]},    {"bleu3", a.bleu_n[2]},
                       {"bleu4", a.bleu_n[3]},    {"gleu", a.gleu},
                       {"rouge1", a.rouge1_f1},   {"rouge2", a.rouge2_f1},
                       {"rougeL", a.rougeL_f1}};
}

}  // namespace clinikit::metrics
