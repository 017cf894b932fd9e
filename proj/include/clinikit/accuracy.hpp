#pragma once

// Per-category accuracy tables for exam answering and diagnosis matching.
// The Average column is the unweighted mean over category accuracies.

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "clinikit/ehr.hpp"
#include "clinikit/extraction.hpp"
#include "clinikit/mcq.hpp"
#include "clinikit/text.hpp"

namespace clinikit::eval {

struct AccuracyRow {
    std::string category;
    size_t correct = 0;
    size_t total = 0;

    double accuracy() const { return total == 0 ? 0.0 : static_cast<double>(correct) / total; }
};

struct AccuracyTable {
    std::vector<AccuracyRow> rows;  // insertion order is render order

    AccuracyRow& row(const std::string& category) {
        for (auto& r : rows)
            if (r.category == category) return r;
        rows.push_back({category, 0, 0});
        return rows.back();
    }

    // Absent (not zero) when there are no rows.
    std::optional<double> average() const {
        if (rows.empty()) return std::nullopt;
        double sum = 0.0;
        for (const auto& r : rows) sum += r.accuracy();
        return sum / static_cast<double>(rows.size());
    }
};

inline void to_json(nlohmann::json& j, const AccuracyTable& t) {
    j = nlohmann::json::object();
    j["rows"] = nlohmann::json::array();
    for (const auto& r : t.rows)
        j["rows"].push_back({{"category", r.category},
                             {"correct", r.correct},
                             {"total", r.total},
                             {"accuracy", r.accuracy()}});
    if (auto avg = t.average())
        j["average"] = *avg;
    else
        j["average"] = nullptr;
}

// chosen = none counts as incorrect so denominators stay equal to the test
// set size. Categories appear in first-seen order.
inline AccuracyTable mcq_accuracy(
    const std::vector<std::pair<clinikit::prep::McqItem, ExtractionResult>>& results) {
    AccuracyTable table;
    for (const auto& [item, extraction] : results) {
        AccuracyRow& row = table.row(item.category);
        ++row.total;
        if (extraction.chosen && *extraction.chosen == item.answer) ++row.correct;
    }
    return table;
}

// True iff the normalized gold label occurs contiguously in the normalized
// generation. Normalization collapses whitespace and case-folds non-CJK text;
// no synonym or ontology matching.
inline bool match_diagnosis(const std::string& generated, const std::string& gold) {
    if (trim(gold).empty()) throw std::invalid_argument("match_diagnosis: empty gold label");
    return contains(normalize_for_match(generated), normalize_for_match(gold));
}

// Rows follow the declared disease-group order.
inline AccuracyTable diag_accuracy(
    const std::vector<std::pair<clinikit::prep::EhrRecord, std::string>>& results) {
    AccuracyTable table;
    for (const auto& group : clinikit::prep::disease_groups()) {
        bool present = false;
        for (const auto& [record, generated] : results)
            if (record.group == group) { present = true; break; }
        if (present) table.row(group);
    }
    for (const auto& [record, generated] : results) {
        AccuracyRow& row = table.row(record.group);
        ++row.total;
        if (match_diagnosis(generated, record.diagnosis)) ++row.correct;
    }
    return table;
}

}  // namespace clinikit::eval
