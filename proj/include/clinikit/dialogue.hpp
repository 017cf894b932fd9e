#pragma once

// Multi-round consultation dialogues and their reduction to instruction
// pairs: pick one assistant turn uniformly at random, use everything before
// it as the prompt and that turn as the response, discarding the rest.

#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "clinikit/instruction.hpp"
#include "clinikit/rng.hpp"

namespace clinikit::prep {

enum class Speaker { User, Assistant };

struct Turn {
    Speaker speaker;
    std::string text;
};

struct Dialogue {
    std::string description;  // condition description block shown before the turns
    std::vector<Turn> turns;
};

// Fixed rendering strings, kept in one place so fixtures are bit-reproducible.
struct DialogueStyle {
    std::string user_prefix = "User: ";
    std::string assistant_prefix = "Assistant: ";
    std::string separator = "\n";
};

inline std::vector<size_t> assistant_turn_indices(const Dialogue& d) {
    std::vector<size_t> idx;
    for (size_t i = 0; i < d.turns.size(); ++i)
        if (d.turns[i].speaker == Speaker::Assistant) idx.push_back(i);
    return idx;
}

// Truncates at the k-th assistant turn (0-based among assistant turns).
inline InstructionPair truncate_dialogue_at(const Dialogue& d, size_t k,
                                            const DialogueStyle& style = {}) {
    auto assistants = assistant_turn_indices(d);
    if (assistants.empty())
        throw std::invalid_argument("truncate_dialogue: dialogue has no assistant turn");
    if (k >= assistants.size())
        throw std::invalid_argument("truncate_dialogue: assistant turn index out of range");
    size_t cut = assistants[k];

    std::string prompt = d.description;
    for (size_t i = 0; i < cut; ++i) {
        if (!prompt.empty()) prompt += style.separator;
        prompt += (d.turns[i].speaker == Speaker::User ? style.user_prefix
                                                       : style.assistant_prefix);
        prompt += d.turns[i].text;
    }
    InstructionPair pair{prompt, d.turns[cut].text, "dialogue"};
    pair.validate();
    return pair;
}

// The truncation point is uniform over assistant turns.
inline InstructionPair truncate_dialogue(const Dialogue& d, uint64_t seed,
                                         const DialogueStyle& style = {}) {
    auto assistants = assistant_turn_indices(d);
    if (assistants.empty())
        throw std::invalid_argument("truncate_dialogue: dialogue has no assistant turn");
    Rng rng(seed);
    return truncate_dialogue_at(d, uniform_index(rng, assistants.size()), style);
}

inline Dialogue dialogue_from_json(const nlohmann::json& rec) {
    Dialogue d;
    d.description = rec.value("description", "");
    if (!rec.contains("turns") || !rec["turns"].is_array() || rec["turns"].empty())
        throw std::runtime_error("dialogue record: missing or empty 'turns'");
    for (const auto& t : rec["turns"]) {
        std::string who = t.at("speaker").get<std::string>();
        if (who != "user" && who != "assistant")
            throw std::runtime_error("dialogue record: speaker must be 'user' or 'assistant'");
        d.turns.push_back(
            {who == "user" ? Speaker::User : Speaker::Assistant, t.at("text").get<std::string>()});
    }
    return d;
}

}  // namespace clinikit::prep
