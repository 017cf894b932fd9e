#pragma once

// Multiple-choice exam items and their prompt rendering:
//   <question>
//   Answer options:
//   Option A <text>
//   ...

#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "clinikit/text.hpp"

namespace clinikit::prep {

struct McqOption {
    char label;  // 'A'..'E'
    std::string text;
};

struct McqItem {
    std::string id;
    std::string question;
    std::vector<McqOption> options;
    char answer = 0;
    std::string category;

    void validate() const {
        if (options.size() < 2 || options.size() > 5)
            throw std::invalid_argument("McqItem: need 2-5 options");
        for (size_t i = 0; i < options.size(); ++i)
            if (options[i].label != static_cast<char>('A' + i))
                throw std::invalid_argument("McqItem: labels must run consecutively from A");
        if (answer < 'A' || answer >= static_cast<char>('A' + options.size()))
            throw std::invalid_argument("McqItem: answer label not among options");
    }

    std::vector<char> labels() const {
        std::vector<char> ls;
        for (const auto& o : options) ls.push_back(o.label);
        return ls;
    }
};

struct McqStyle {
    std::string options_header = "Answer options:";
    std::string option_prefix = "Option ";
    std::string separator = "\n";
};

// Option text is single-line: embedded newlines are normalized to spaces.
inline std::string normalize_option_text(const std::string& text) {
    std::string out = text;
    for (char& c : out)
        if (c == '\n' || c == '\r' || c == '\t') c = ' ';
    return out;
}

inline std::string format_mcq(const McqItem& item, const McqStyle& style = {}) {
    item.validate();
    std::string prompt = item.question + style.separator + style.options_header;
    for (const auto& opt : item.options) {
        prompt += style.separator + style.option_prefix + opt.label + " " +
                  normalize_option_text(opt.text);
    }
    return prompt;
}

inline McqItem mcq_from_json(const nlohmann::json& rec) {
    McqItem item;
    item.id = rec.value("id", "");
    item.question = rec.value("question", "");
    item.category = rec.value("category", "");
    if (!rec.contains("options") || !rec["options"].is_array())
        throw std::runtime_error("mcq record: missing 'options' array");
    for (const auto& o : rec["options"]) {
        std::string label = o.at("label").get<std::string>();
        if (label.size() != 1) throw std::runtime_error("mcq record: label must be one letter");
        item.options.push_back({label[0], o.at("text").get<std::string>()});
    }
    std::string answer = rec.value("answer", "");
    if (answer.size() == 1) item.answer = answer[0];
    item.validate();
    return item;
}

}  // namespace clinikit::prep
