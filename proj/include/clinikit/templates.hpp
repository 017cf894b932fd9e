#pragma once

// Instruction templates: one prompt/response pattern pair per record, keyed
// by relation. Patterns carry {slot} markers named after entity categories;
// the subject slot appears in the prompt, the object slot only in the
// response. For self-typed relations (disease-disease) the first response
// occurrence is the subject and later ones take the objects.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "clinikit/kg.hpp"

namespace clinikit::kg {

struct TemplateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Slot {
    size_t begin = 0;  // byte offset of '{'
    size_t end = 0;    // byte offset one past '}'
    std::string name;
};

inline std::vector<Slot> scan_slots(const std::string& pattern, const std::string& context) {
    std::vector<Slot> slots;
    size_t pos = 0;
    while ((pos = pattern.find('{', pos)) != std::string::npos) {
        size_t close = pattern.find('}', pos + 1);
        if (close == std::string::npos)
            throw TemplateError(context + ": unterminated slot marker");
        slots.push_back({pos, close + 1, trim(pattern.substr(pos + 1, close - pos - 1))});
        pos = close + 1;
    }
    if (pattern.find('}') < (slots.empty() ? std::string::npos : slots.front().begin))
        throw TemplateError(context + ": stray '}' before any slot");
    return slots;
}

struct Template {
    std::string id;
    std::string relation;
    std::string language;  // "en" | "zh" | ...
    std::string prompt_pattern;
    std::string response_pattern;
};

// Validates slot discipline for one template against the schema:
//  - every slot name must belong to the schema vocabulary,
//  - the prompt must mention the subject, never the object value,
//  - the response must mention the subject and bind the object at least once.
inline void validate_template(const Template& t, const Schema& schema) {
    const RelationInfo* rel = schema.find_relation(t.relation);
    if (!rel) throw TemplateError("template '" + t.id + "': unknown relation '" + t.relation + "'");
    if (t.prompt_pattern.empty() || t.response_pattern.empty())
        throw TemplateError("template '" + t.id + "': empty pattern");

    auto prompt_slots = scan_slots(t.prompt_pattern, "template '" + t.id + "' prompt");
    auto response_slots = scan_slots(t.response_pattern, "template '" + t.id + "' response");
    if (prompt_slots.empty() || response_slots.empty())
        throw TemplateError("template '" + t.id + "': patterns must contain at least one slot");

    const bool self_typed = rel->subject_type == rel->object_type;

    bool prompt_has_subject = false;
    for (const auto& s : prompt_slots) {
        auto type = schema.resolve_slot(s.name);
        if (!type)
            throw TemplateError("template '" + t.id + "': slot {" + s.name + "} not in schema");
        if (*type == rel->subject_type)
            prompt_has_subject = true;
        else if (*type != rel->object_type)
            throw TemplateError("template '" + t.id + "': slot {" + s.name +
                                "} in prompt is never bound");
        // Object-category slots in the prompt render as the literal category
        // phrase; the answer value never leaks into the question.
    }
    if (!prompt_has_subject)
        throw TemplateError("template '" + t.id + "': prompt never binds the subject");

    size_t subject_bindings = 0, object_bindings = 0;
    size_t shared_seen = 0;
    for (const auto& s : response_slots) {
        auto type = schema.resolve_slot(s.name);
        if (!type)
            throw TemplateError("template '" + t.id + "': slot {" + s.name + "} not in schema");
        if (self_typed && *type == rel->subject_type) {
            (shared_seen++ == 0 ? subject_bindings : object_bindings)++;
        } else if (*type == rel->subject_type) {
            ++subject_bindings;
        } else if (*type == rel->object_type) {
            ++object_bindings;
        } else {
            throw TemplateError("template '" + t.id + "': slot {" + s.name +
                                "} in response is never bound");
        }
    }
    if (subject_bindings == 0)
        throw TemplateError("template '" + t.id + "': response never binds the subject");
    if (object_bindings == 0)
        throw TemplateError("template '" + t.id + "': response never binds the object");
}

class TemplateSet {
public:
    TemplateSet() = default;

    void add(Template t, const Schema& schema) {
        validate_template(t, schema);
        by_relation_[t.relation].push_back(all_.size());
        all_.push_back(std::move(t));
    }

    size_t size() const { return all_.size(); }
    const std::vector<Template>& all() const { return all_; }

    // Templates for a relation in load order, optionally filtered to one
    // language per run.
    std::vector<const Template*> matching(const std::string& relation,
                                          const std::optional<std::string>& language) const {
        std::vector<const Template*> out;
        auto it = by_relation_.find(relation);
        if (it == by_relation_.end()) return out;
        for (size_t idx : it->second) {
            const Template& t = all_[idx];
            if (!language || t.language == *language) out.push_back(&t);
        }
        return out;
    }

private:
    std::vector<Template> all_;
    std::map<std::string, std::vector<size_t>> by_relation_;
};

// Loads a template document: either a top-level JSON array of template
// records or an object with a "templates" array. Field names are id,
// relation, language, prompt_pattern, response_pattern.
inline TemplateSet load_templates(const nlohmann::json& doc, const Schema& schema) {
    const nlohmann::json* list = nullptr;
    if (doc.is_array()) {
        list = &doc;
    } else if (doc.is_object() && doc.contains("templates") && doc["templates"].is_array()) {
        list = &doc["templates"];
    } else {
        throw TemplateError("template document must be an array or carry a 'templates' array");
    }
    TemplateSet set;
    for (const auto& rec : *list) {
        Template t;
        try {
            rec.at("id").get_to(t.id);
            rec.at("relation").get_to(t.relation);
            rec.at("prompt_pattern").get_to(t.prompt_pattern);
            rec.at("response_pattern").get_to(t.response_pattern);
            t.language = rec.value("language", "en");
        } catch (const nlohmann::json::exception& e) {
            throw TemplateError(std::string("malformed template record: ") + e.what());
        }
        set.add(std::move(t), schema);
    }
    return set;
}

inline TemplateSet load_templates_text(const std::string& text, const Schema& schema) {
    return load_templates(nlohmann::json::parse(text), schema);
}

}  // namespace clinikit::kg
