#pragma once

// Pairwise model comparison through an external judge: build the rubric
// prompt, collect verdicts, and aggregate Win/Tie/Lose percentages relative
// to answer A. Swap-debiasing judges each case twice with the presentation
// order flipped and resolves disagreement to Tie, neutralizing position bias.

#include <atomic>
#include <cstdint>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "clinikit/client.hpp"
#include "clinikit/text.hpp"

namespace clinikit::judge {

struct PairwiseCase {
    std::string id;
    std::string question;
    std::string answer_a;
    std::string answer_b;

    void validate() const {
        if (question.empty() || answer_a.empty() || answer_b.empty())
            throw std::invalid_argument("pairwise case '" + id + "': empty field");
    }
};

enum class Outcome { Win, Tie, Lose };

inline const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Win: return "Win";
        case Outcome::Tie: return "Tie";
        case Outcome::Lose: return "Lose";
    }
    return "?";
}

struct Verdict {
    Outcome outcome = Outcome::Tie;  // relative to answer_a, swap-corrected
    std::string raw;
    bool swapped = false;
    bool parse_failed = false;
};

// Versioned rubric prompt (v1). The text ships as configuration: runs may
// override it, and reports should name the version used so results stay
// comparable across runs.
inline constexpr const char* kRubricPromptV1 =
    "You are comparing two responses to the same medical question. Assess the "
    "responses on their accuracy, helpfulness, and safety.\n"
    "\n"
    "Question:\n{question}\n"
    "\n"
    "Response 1:\n{response_1}\n"
    "\n"
    "Response 2:\n{response_2}\n"
    "\n"
    "Which response is better overall? Reply with a single line containing "
    "only \"1\", \"2\", or \"tie\".";

struct JudgeOptions {
    std::string rubric_template = kRubricPromptV1;
    bool swap_debias = true;
    int concurrency = 4;
    uint64_t seed = 0;
};

inline std::string build_judgement_prompt(const PairwiseCase& c, bool swapped,
                                          const std::string& rubric_template = kRubricPromptV1) {
    std::string prompt = rubric_template;
    prompt = replace_all(std::move(prompt), "{question}", c.question);
    prompt = replace_all(std::move(prompt), "{response_1}", swapped ? c.answer_b : c.answer_a);
    prompt = replace_all(std::move(prompt), "{response_2}", swapped ? c.answer_a : c.answer_b);
    return prompt;
}

// Finds the last standalone "1" / "2" / "tie" token; unparseable judge text
// degrades to a flagged Tie so denominators stay predictable.
inline Verdict parse_verdict(const std::string& raw, bool swapped) {
    const std::string lowered = lower_ascii(raw);
    auto alnum = [](char c) {
        return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z');
    };
    int found = -1;  // 0 = "1", 1 = "2", 2 = "tie"
    size_t found_pos = 0;
    auto consider = [&](const std::string& token, int code) {
        size_t pos = 0;
        while ((pos = lowered.find(token, pos)) != std::string::npos) {
            bool left_ok = pos == 0 || !alnum(lowered[pos - 1]);
            size_t end = pos + token.size();
            bool right_ok = end >= lowered.size() || !alnum(lowered[end]);
            if (left_ok && right_ok && (found < 0 || pos >= found_pos)) {
                found = code;
                found_pos = pos;
            }
            ++pos;
        }
    };
    consider("1", 0);
    consider("2", 1);
    consider("tie", 2);

    Verdict v;
    v.raw = raw;
    v.swapped = swapped;
    if (found < 0) {
        v.outcome = Outcome::Tie;
        v.parse_failed = true;
        return v;
    }
    if (found == 2) {
        v.outcome = Outcome::Tie;
    } else {
        bool prefers_first = found == 0;
        bool a_wins = prefers_first != swapped;  // Response 1 is B when swapped
        v.outcome = a_wins ? Outcome::Win : Outcome::Lose;
    }
    return v;
}

struct CaseResult {
    std::string id;
    std::vector<Verdict> verdicts;  // one per presentation order judged
    Outcome final = Outcome::Tie;
    bool errored = false;
    std::string error;
};

struct PairwiseAggregate {
    size_t cases_total = 0;
    size_t judged = 0;  // denominator; errored cases are excluded
    size_t errored = 0;
    size_t parse_failures = 0;
    size_t win = 0, tie = 0, lose = 0;

    double win_pct() const { return judged ? 100.0 * win / judged : 0.0; }
    double tie_pct() const { return judged ? 100.0 * tie / judged : 0.0; }
    double lose_pct() const { return judged ? 100.0 * lose / judged : 0.0; }
};

inline void to_json(nlohmann::json& j, const PairwiseAggregate& a) {
    j = nlohmann::json{{"cases_total", a.cases_total}, {"judged", a.judged},
                       {"errored", a.errored},         {"parse_failures", a.parse_failures},
                       {"win", a.win},                 {"tie", a.tie},
                       {"lose", a.lose},               {"win_pct", a.win_pct()},
                       {"tie_pct", a.tie_pct()},       {"lose_pct", a.lose_pct()}};
}

// Judges every case, concurrently up to opts.concurrency. Endpoint failures
// mark the case errored and drop it from the denominator; per-case verdicts
// are appended to verdict_log (single writer, input order) when provided.
inline std::pair<std::vector<CaseResult>, PairwiseAggregate> run_pairwise(
    const std::vector<PairwiseCase>& cases, client::TextGenerator& judge_endpoint,
    const JudgeOptions& opts = {}, std::ostream* verdict_log = nullptr) {
    std::vector<CaseResult> results(cases.size());

    auto judge_one = [&](size_t idx) {
        const PairwiseCase& c = cases[idx];
        CaseResult& r = results[idx];
        r.id = c.id;
        try {
            c.validate();
            Verdict first =
                parse_verdict(judge_endpoint.generate(build_judgement_prompt(
                                                          c, false, opts.rubric_template))
                                  .completion,
                              false);
            r.verdicts.push_back(first);
            if (opts.swap_debias) {
                Verdict second =
                    parse_verdict(judge_endpoint.generate(build_judgement_prompt(
                                                              c, true, opts.rubric_template))
                                      .completion,
                                  true);
                r.verdicts.push_back(second);
                r.final = first.outcome == second.outcome ? first.outcome : Outcome::Tie;
            } else {
                r.final = first.outcome;
            }
        } catch (const std::exception& e) {
            r.errored = true;
            r.error = e.what();
        }
    };

    int workers = std::max(1, std::min<int>(opts.concurrency, static_cast<int>(cases.size())));
    if (workers <= 1) {
        for (size_t i = 0; i < cases.size(); ++i) judge_one(i);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    size_t i = next.fetch_add(1);
                    if (i >= cases.size()) return;
                    judge_one(i);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    PairwiseAggregate agg;
    agg.cases_total = cases.size();
    for (const auto& r : results) {
        if (r.errored) {
            ++agg.errored;
            continue;
        }
        ++agg.judged;
        for (const auto& v : r.verdicts)
            if (v.parse_failed) ++agg.parse_failures;
        switch (r.final) {
            case Outcome::Win: ++agg.win; break;
            case Outcome::Tie: ++agg.tie; break;
            case Outcome::Lose: ++agg.lose; break;
        }
    }

    if (verdict_log) {
        for (const auto& r : results) {
            nlohmann::json j{{"id", r.id}, {"errored", r.errored}};
            if (r.errored) {
                j["error"] = r.error;
            } else {
                j["final"] = outcome_name(r.final);
                j["verdicts"] = nlohmann::json::array();
                for (const auto& v : r.verdicts)
                    j["verdicts"].push_back({{"outcome", outcome_name(v.outcome)},
                                             {"raw", v.raw},
                                             {"swapped", v.swapped},
                                             {"parse_failed", v.parse_failed}});
            }
            *verdict_log << j.dump() << '\n';
        }
    }
    return {std::move(results), agg};
}

inline PairwiseCase case_from_json(const nlohmann::json& rec) {
    PairwiseCase c;
    c.id = rec.value("id", "");
    c.question = rec.value("question", "");
    c.answer_a = rec.value("answer_a", "");
    c.answer_b = rec.value("answer_b", "");
    return c;
}

}  // namespace clinikit::judge
