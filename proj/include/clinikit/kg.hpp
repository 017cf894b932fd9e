#pragma once

// Knowledge-graph triples: the entity/relation schema and the line-oriented
// triple parser. A triple is (subject, relation, object) with entity-category
// tags on both ends, e.g. (Pneumonia, disease) --hasSymptom--> (Cough,
// manifestation).

#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clinikit/text.hpp"

namespace clinikit::kg {

enum class EntityType {
    Disease,
    Manifestation,
    BodyPart,
    Equipment,
    Procedure,
    Microorganism,
    Department,
    Test,
    Medication,
    Food,
};

inline const char* entity_type_name(EntityType t) {
    switch (t) {
        case EntityType::Disease: return "disease";
        case EntityType::Manifestation: return "manifestation";
        case EntityType::BodyPart: return "body part";
        case EntityType::Equipment: return "equipment";
        case EntityType::Procedure: return "procedure";
        case EntityType::Microorganism: return "microorganism";
        case EntityType::Department: return "department";
        case EntityType::Test: return "test";
        case EntityType::Medication: return "medication";
        case EntityType::Food: return "food";
    }
    return "?";
}

inline std::optional<EntityType> parse_entity_type(std::string_view tag) {
    std::string t = lower_ascii(trim(tag));
    if (t == "disease") return EntityType::Disease;
    if (t == "manifestation" || t == "symptom") return EntityType::Manifestation;
    if (t == "body part" || t == "body_part") return EntityType::BodyPart;
    if (t == "equipment") return EntityType::Equipment;
    if (t == "procedure" || t == "treatment method") return EntityType::Procedure;
    if (t == "microorganism") return EntityType::Microorganism;
    if (t == "department") return EntityType::Department;
    if (t == "test" || t == "examination item" || t == "test/examination item")
        return EntityType::Test;
    if (t == "medication" || t == "drug" || t == "medication/drug") return EntityType::Medication;
    if (t == "food") return EntityType::Food;
    return std::nullopt;
}

// Slot names accepted in template patterns for each entity category. The
// bilingual names mirror how the instruction templates are written.
inline const std::vector<std::string>& slot_names(EntityType t) {
    static const std::map<EntityType, std::vector<std::string>> names = {
        {EntityType::Disease, {"disease", "疾病"}},
        {EntityType::Manifestation, {"manifestation", "clinical manifestations", "临床表现"}},
        {EntityType::BodyPart, {"body part", "身体部位"}},
        {EntityType::Equipment, {"equipment", "医疗设备"}},
        {EntityType::Procedure, {"procedure", "medical procedures", "医疗程序"}},
        {EntityType::Microorganism, {"microorganism", "微生物"}},
        {EntityType::Department, {"department", "科室"}},
        {EntityType::Test, {"test", "medical examination items", "医学检验项目"}},
        {EntityType::Medication, {"medication", "drug", "药物"}},
        {EntityType::Food, {"food", "食物"}},
    };
    return names.at(t);
}

struct RelationInfo {
    std::string tag;
    EntityType subject_type;
    EntityType object_type;
};

// Declared relation vocabulary. The standard set covers the eight relation
// families the instruction templates address.
class Schema {
public:
    static Schema standard() {
        Schema s;
        s.add({"relatedTo", EntityType::Disease, EntityType::Disease});
        s.add({"hasSymptom", EntityType::Disease, EntityType::Manifestation});
        s.add({"needsExamination", EntityType::Disease, EntityType::Test});
        s.add({"treatsDisease", EntityType::Medication, EntityType::Disease});
        s.add({"treatedBy", EntityType::Disease, EntityType::Procedure});
        s.add({"hasComplication", EntityType::Disease, EntityType::Disease});
        s.add({"interactsWith", EntityType::Medication, EntityType::Medication});
        s.add({"treatsSymptom", EntityType::Medication, EntityType::Manifestation});
        return s;
    }

    void add(RelationInfo info) { relations_[info.tag] = std::move(info); }

    const RelationInfo* find_relation(const std::string& tag) const {
        auto it = relations_.find(tag);
        return it == relations_.end() ? nullptr : &it->second;
    }

    // Resolves a template slot name to its entity category.
    std::optional<EntityType> resolve_slot(std::string_view name) const {
        std::string needle = lower_ascii(trim(name));
        for (EntityType t :
             {EntityType::Disease, EntityType::Manifestation, EntityType::BodyPart,
              EntityType::Equipment, EntityType::Procedure, EntityType::Microorganism,
              EntityType::Department, EntityType::Test, EntityType::Medication, EntityType::Food}) {
            for (const auto& n : slot_names(t)) {
                if (n == needle || n == trim(name)) return t;
            }
        }
        return std::nullopt;
    }

private:
    std::map<std::string, RelationInfo> relations_;
};

struct KnowledgeTriple {
    std::string subject;
    EntityType subject_type;
    std::string relation;
    std::string object;
    EntityType object_type;
};

struct ParseReport {
    struct Rejection {
        size_t line_no;
        std::string line;
        std::string reason;
    };
    size_t accepted = 0;
    std::vector<Rejection> rejections;
};

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line) {
    // Tab-delimited when tabs are present, otherwise '|'-delimited.
    char delim = line.find('\t') != std::string::npos ? '\t' : '|';
    std::vector<std::string> fields;
    size_t start = 0;
    for (;;) {
        size_t pos = line.find(delim, start);
        if (pos == std::string::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return fields;
}

}  // namespace detail

// Parses 5-field records: subject, subject_type, relation, object, object_type.
// Malformed lines are recorded in the report and parsing continues; input
// order and duplicates are preserved.
inline std::pair<std::vector<KnowledgeTriple>, ParseReport> parse_triples(std::istream& in,
                                                                          const Schema& schema) {
    std::vector<KnowledgeTriple> triples;
    ParseReport report;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        auto fields = detail::split_fields(line);
        auto reject = [&](std::string reason) {
            report.rejections.push_back({line_no, line, std::move(reason)});
        };
        if (fields.size() != 5) {
            reject("expected 5 fields, got " + std::to_string(fields.size()));
            continue;
        }
        auto st = parse_entity_type(fields[1]);
        auto ot = parse_entity_type(fields[4]);
        if (!st) { reject("unknown subject type '" + fields[1] + "'"); continue; }
        if (!ot) { reject("unknown object type '" + fields[4] + "'"); continue; }
        if (!schema.find_relation(fields[2])) {
            reject("unknown relation '" + fields[2] + "'");
            continue;
        }
        if (fields[0].empty()) { reject("empty subject"); continue; }
        if (fields[3].empty()) { reject("empty object"); continue; }
        if (fields[0].find_first_of("{}") != std::string::npos ||
            fields[3].find_first_of("{}") != std::string::npos) {
            reject("entity contains a brace");
            continue;
        }
        triples.push_back({fields[0], *st, fields[2], fields[3], *ot});
        ++report.accepted;
    }
    return {std::move(triples), std::move(report)};
}

}  // namespace clinikit::kg
