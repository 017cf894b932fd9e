#pragma once

// Turns (subject, relation)-grouped triples plus templates into instruction
// pairs. One key yields one pair per matching template (all-templates) or one
// pair under a seeded uniform template pick (one-uniform-random).

#include <string>
#include <unordered_map>
#include <vector>

#include "clinikit/instruction.hpp"
#include "clinikit/kg.hpp"
#include "clinikit/rng.hpp"
#include "clinikit/templates.hpp"

namespace clinikit::kg {

enum class Selection { AllTemplates, OneUniformRandom };

struct GenerateOptions {
    Selection selection = Selection::AllTemplates;
    std::optional<std::string> language;  // one language per run when set
    size_t max_objects = 5;
    std::string delimiter = "、";
};

// Multi-valued objects are aggregated into one response, joined by the
// delimiter and capped at max_objects; self-loop triples are kept verbatim.
inline InstructionPair instantiate(const Schema& schema,
                                   const std::vector<KnowledgeTriple>& triples,
                                   const Template& tmpl, size_t max_objects,
                                   const std::string& delimiter) {
    if (triples.empty()) throw std::invalid_argument("instantiate: empty triple list");
    if (max_objects < 1) throw std::invalid_argument("instantiate: max_objects must be >= 1");

    const RelationInfo* rel = schema.find_relation(tmpl.relation);
    if (!rel) throw TemplateError("instantiate: unknown relation '" + tmpl.relation + "'");

    const std::string& subject = triples.front().subject;
    for (const auto& tr : triples) {
        if (tr.subject != subject || tr.relation != tmpl.relation)
            throw std::invalid_argument(
                "instantiate: triples must share subject and the template's relation");
        if (tr.subject_type != rel->subject_type)
            throw std::invalid_argument(std::string("instantiate: slot {") +
                                        entity_type_name(rel->subject_type) + "} expects " +
                                        entity_type_name(rel->subject_type) + ", got " +
                                        entity_type_name(tr.subject_type));
        if (tr.object_type != rel->object_type)
            throw std::invalid_argument(std::string("instantiate: slot {") +
                                        entity_type_name(rel->object_type) + "} expects " +
                                        entity_type_name(rel->object_type) + ", got " +
                                        entity_type_name(tr.object_type));
    }

    std::string object_list;
    for (size_t i = 0; i < triples.size() && i < max_objects; ++i) {
        if (i > 0) object_list += delimiter;
        object_list += triples[i].object;
    }

    const bool self_typed = rel->subject_type == rel->object_type;

    auto substitute = [&](const std::string& pattern, bool is_response) {
        auto slots = scan_slots(pattern, "template '" + tmpl.id + "'");
        std::string out;
        size_t cursor = 0;
        size_t shared_seen = 0;
        for (const auto& s : slots) {
            out.append(pattern, cursor, s.begin - cursor);
            auto type = *schema.resolve_slot(s.name);
            if (!is_response) {
                // Prompt: subject slots take the value, object-category slots
                // stay as the literal category phrase.
                out += (type == rel->subject_type) ? subject : s.name;
            } else if (self_typed && type == rel->subject_type) {
                out += (shared_seen++ == 0) ? subject : object_list;
            } else {
                out += (type == rel->subject_type) ? subject : object_list;
            }
            cursor = s.end;
        }
        out.append(pattern, cursor, std::string::npos);
        return out;
    };

    InstructionPair pair{substitute(tmpl.prompt_pattern, false),
                         substitute(tmpl.response_pattern, true), "kg"};
    pair.validate();
    return pair;
}

struct CorpusReport {
    size_t keys_total = 0;
    size_t pairs_emitted = 0;
    std::vector<std::pair<std::string, std::string>> skipped_keys;  // (subject, relation)
};

// Deterministic given the seed: keys are processed in input-first-seen order
// and each key draws from its own derived RNG stream, so the output does not
// depend on execution order.
inline std::pair<std::vector<InstructionPair>, CorpusReport> generate_corpus(
    const Schema& schema, const std::vector<KnowledgeTriple>& triples, const TemplateSet& templates,
    const GenerateOptions& opts, uint64_t seed) {
    struct KeyGroup {
        std::string subject;
        std::string relation;
        std::vector<KnowledgeTriple> members;
    };
    std::vector<KeyGroup> groups;
    std::unordered_map<std::string, size_t> index;
    for (const auto& tr : triples) {
        std::string key = tr.subject + "\x1f" + tr.relation;
        auto [it, inserted] = index.emplace(key, groups.size());
        if (inserted) groups.push_back({tr.subject, tr.relation, {}});
        groups[it->second].members.push_back(tr);
    }

    std::vector<InstructionPair> corpus;
    CorpusReport report;
    report.keys_total = groups.size();
    for (size_t i = 0; i < groups.size(); ++i) {
        const auto& g = groups[i];
        auto matching = templates.matching(g.relation, opts.language);
        if (matching.empty()) {
            report.skipped_keys.emplace_back(g.subject, g.relation);
            continue;
        }
        if (opts.selection == Selection::AllTemplates) {
            for (const Template* t : matching)
                corpus.push_back(
                    instantiate(schema, g.members, *t, opts.max_objects, opts.delimiter));
        } else {
            Rng rng(derive_seed(seed, i));
            const Template* t = matching[uniform_index(rng, matching.size())];
            corpus.push_back(instantiate(schema, g.members, *t, opts.max_objects, opts.delimiter));
        }
    }
    report.pairs_emitted = corpus.size();
    return {std::move(corpus), std::move(report)};
}

}  // namespace clinikit::kg
