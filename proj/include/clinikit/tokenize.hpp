#pragma once

// CJK-aware tokenizer: each CJK codepoint is its own token, maximal runs of
// other non-whitespace characters form one token, whitespace never appears in
// tokens, and non-CJK tokens are ASCII-lowercased.
//   "肺炎 cough" -> ["肺", "炎", "cough"]
//   "CT检查"     -> ["ct", "检", "查"]

#include <string>
#include <vector>

#include "clinikit/text.hpp"

namespace clinikit::metrics {

struct TokenSequence {
    std::vector<std::string> tokens;

    size_t size() const { return tokens.size(); }
    bool empty() const { return tokens.empty(); }
    const std::string& operator[](size_t i) const { return tokens[i]; }
    bool operator==(const TokenSequence&) const = default;
};

inline TokenSequence tokenize(std::string_view text) {
    TokenSequence seq;
    std::string pending;
    auto flush = [&] {
        if (!pending.empty()) {
            seq.tokens.push_back(lower_ascii(pending));
            pending.clear();
        }
    };
    for (size_t i = 0; i < text.size();) {
        size_t start = i;
        char32_t cp = decode_utf8(text, i);
        if (is_space_cp(cp)) {
            flush();
        } else if (is_cjk_cp(cp)) {
            flush();
            seq.tokens.emplace_back(text.substr(start, i - start));
        } else {
            pending.append(text.substr(start, i - start));
        }
    }
    flush();
    return seq;
}

inline TokenSequence tokens_of(std::initializer_list<const char*> items) {
    TokenSequence seq;
    for (const char* s : items) seq.tokens.emplace_back(s);
    return seq;
}

}  // namespace clinikit::metrics
