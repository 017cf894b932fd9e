#pragma once

// Electronic health records: labeled note sections concatenated into a
// prompt, with the gold diagnosis as the response. The disease-group tag is
// reporting metadata and never enters the prompt.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "clinikit/instruction.hpp"

namespace clinikit::prep {

// Declared disease-group set, in report column order.
inline const std::array<std::string, 7>& disease_groups() {
    static const std::array<std::string, 7> groups = {
        "Respiratory", "Digestive", "Urinary", "Psychiatry",
        "Neurology",   "Gynecology", "Hematology"};
    return groups;
}

inline bool is_disease_group(const std::string& g) {
    for (const auto& known : disease_groups())
        if (known == g) return true;
    return false;
}

struct EhrRecord {
    std::string complaint;
    std::string history_exam;
    std::string tests;
    std::string diagnosis;  // gold label
    std::string group;      // disease-group tag (metadata)

    void validate() const {
        if (diagnosis.empty()) throw std::invalid_argument("EhrRecord: empty diagnosis");
        if (!is_disease_group(group))
            throw std::invalid_argument("EhrRecord: unknown disease group '" + group + "'");
    }
};

struct EhrStyle {
    std::string complaint_header = "Complaint: ";
    std::string history_header = "History and examination: ";
    std::string tests_header = "Tests: ";
    std::string separator = "\n";
};

// Every section header is always present, even over an empty body; fields
// are never silently dropped.
inline InstructionPair format_ehr(const EhrRecord& r, const EhrStyle& style = {}) {
    r.validate();
    std::string prompt = style.complaint_header + r.complaint + style.separator +
                         style.history_header + r.history_exam + style.separator +
                         style.tests_header + r.tests;
    InstructionPair pair{prompt, r.diagnosis, "ehr"};
    pair.validate();
    return pair;
}

inline EhrRecord ehr_from_json(const nlohmann::json& rec) {
    EhrRecord r;
    r.complaint = rec.value("complaint", "");
    r.history_exam = rec.value("history_exam", "");
    r.tests = rec.value("tests", "");
    r.diagnosis = rec.value("diagnosis", "");
    r.group = rec.value("group", "");
    r.validate();
    return r;
}

}  // namespace clinikit::prep
