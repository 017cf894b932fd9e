#pragma once

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace clinikit {

// A prompt/response pair, the unit every data source is reduced to.
// `source` records which pipeline produced it: kg | dialogue | ehr | mcq.
struct InstructionPair {
    std::string prompt;
    std::string response;
    std::string source;

    void validate() const {
        if (prompt.empty()) throw std::invalid_argument("InstructionPair: empty prompt");
        if (response.empty()) throw std::invalid_argument("InstructionPair: empty response");
    }
};

inline void to_json(nlohmann::json& j, const InstructionPair& p) {
    j = nlohmann::json{{"prompt", p.prompt}, {"response", p.response}, {"source", p.source}};
}

inline void from_json(const nlohmann::json& j, InstructionPair& p) {
    j.at("prompt").get_to(p.prompt);
    j.at("response").get_to(p.response);
    j.at("source").get_to(p.source);
}

}  // namespace clinikit
