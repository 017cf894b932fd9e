#pragma once

// Maps a free-text generation to one of an exam item's option labels.
// Two stages:
//   1. explicit label mentions ("option X", "选项X", or a label right after a
//      decision cue such as "the answer is" / "答案是"); the LAST mention wins,
//      because chain-of-thought outputs discuss wrong options before
//      concluding.
//   2. otherwise the option whose text has the longest verbatim occurrence in
//      the generation, required to cover at least half of the option text.
// Absence is a result (chosen = none), not an error.

#include <optional>
#include <string>
#include <vector>

#include "clinikit/mcq.hpp"
#include "clinikit/text.hpp"

namespace clinikit::eval {

enum class ExtractMethod { ExplicitLabel, OptionText, None };

inline const char* extract_method_name(ExtractMethod m) {
    switch (m) {
        case ExtractMethod::ExplicitLabel: return "explicit-label";
        case ExtractMethod::OptionText: return "option-text";
        case ExtractMethod::None: return "none";
    }
    return "?";
}

struct ExtractionResult {
    std::optional<char> chosen;
    ExtractMethod method = ExtractMethod::None;
};

namespace detail {

inline bool is_ascii_alnum(char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// Skips whitespace and opening punctuation between a cue and the label.
inline size_t skip_filler(const std::string& text, size_t pos) {
    static const std::vector<std::string> fillers = {" ",  "\t", "\n", ":",  "：", "(",
                                                     "（", "\"", "“",  "'",  "‘",  "*",
                                                     "[",  "【"};
    for (;;) {
        bool advanced = false;
        for (const auto& f : fillers) {
            if (text.compare(pos, f.size(), f) == 0) {
                pos += f.size();
                advanced = true;
                break;
            }
        }
        if (!advanced) return pos;
    }
}

// A standalone label: 'a'..'e' in lowercased text, not glued to a longer word.
inline std::optional<char> label_at(const std::string& lowered, size_t pos) {
    if (pos >= lowered.size()) return std::nullopt;
    char c = lowered[pos];
    if (c < 'a' || c > 'e') return std::nullopt;
    if (pos + 1 < lowered.size() && is_ascii_alnum(lowered[pos + 1])) return std::nullopt;
    return static_cast<char>(c - 'a' + 'A');
}

struct LabelMention {
    size_t pos;
    char label;
};

// Longest common substring in codepoints.
inline size_t longest_common_substring(const std::vector<char32_t>& a,
                                       const std::vector<char32_t>& b) {
    if (a.empty() || b.empty()) return 0;
    std::vector<size_t> prev(b.size() + 1, 0), curr(b.size() + 1, 0);
    size_t best = 0;
    for (size_t i = 1; i <= a.size(); ++i) {
        for (size_t j = 1; j <= b.size(); ++j) {
            curr[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : 0;
            best = std::max(best, curr[j]);
        }
        std::swap(prev, curr);
    }
    return best;
}

}  // namespace detail

inline ExtractionResult extract_choice(const std::string& generated,
                                       const clinikit::prep::McqItem& item) {
    const std::string lowered = lower_ascii(generated);
    const auto labels = item.labels();
    auto label_valid = [&](char l) {
        for (char known : labels)
            if (known == l) return true;
        return false;
    };

    // Stage 1: explicit label mentions; last valid mention wins.
    static const std::vector<std::pair<std::string, bool>> cues = {
        // cue text (lowercase), require word boundary before the cue
        {"option", true},   {"选项", false},   {"answer is", true}, {"answer:", true},
        {"answer：", true}, {"i choose", true}, {"答案是", false},  {"答案为", false},
        {"答案:", false},   {"答案：", false},  {"故选", false},    {"选择", false},
        {"应选", false},    {"选", false},
    };
    std::vector<detail::LabelMention> mentions;
    for (const auto& [cue, boundary] : cues) {
        size_t pos = 0;
        while ((pos = lowered.find(cue, pos)) != std::string::npos) {
            bool ok = !(boundary && pos > 0 && detail::is_ascii_alnum(lowered[pos - 1]));
            if (ok) {
                size_t after = detail::skip_filler(lowered, pos + cue.size());
                if (auto label = detail::label_at(lowered, after); label && label_valid(*label))
                    mentions.push_back({after, *label});
            }
            pos += cue.size();
        }
    }
    if (!mentions.empty()) {
        const detail::LabelMention* last = &mentions.front();
        for (const auto& m : mentions)
            if (m.pos >= last->pos) last = &m;
        return {last->label, ExtractMethod::ExplicitLabel};
    }

    // Stage 2: longest verbatim occurrence of an option's text, >= 50% of it.
    auto gen_cps = to_codepoints(normalize_for_match(generated));
    std::optional<char> best_label;
    size_t best_len = 0;
    for (const auto& opt : item.options) {
        auto opt_cps = to_codepoints(normalize_for_match(opt.text));
        if (opt_cps.empty()) continue;
        size_t len = detail::longest_common_substring(gen_cps, opt_cps);
        if (2 * len < opt_cps.size()) continue;
        if (len > best_len) {
            best_len = len;
            best_label = opt.label;
        }
    }
    if (best_label) return {best_label, ExtractMethod::OptionText};
    return {std::nullopt, ExtractMethod::None};
}

}  // namespace clinikit::eval
