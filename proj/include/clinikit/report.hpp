#pragma once

// Report tables. Values render as percentages with one decimal; column
// orders are fixed so runs can be compared side by side:
//   metrics   BLEU-1 BLEU-2 BLEU-3 BLEU-4 GLEU ROUGE-1 ROUGE-2 ROUGE-L
//   diagnosis Respiratory Digestive Urinary Psychiatry Neurology Gynecology
//             Hematology Average
//   judge     <label> | Win | Tie | Lose

#include <cstdio>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "clinikit/accuracy.hpp"
#include "clinikit/ehr.hpp"
#include "clinikit/judge.hpp"
#include "clinikit/metrics.hpp"

namespace clinikit::report {

enum class Style { TextTable, Delimited };

inline std::string format_pct(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", fraction * 100.0);
    return buf;
}

// Aligned (or tab-delimited) rows; the first row is the header.
inline std::string render_table(const std::vector<std::vector<std::string>>& rows, Style style) {
    std::string out;
    if (rows.empty()) return out;
    if (style == Style::Delimited) {
        for (const auto& row : rows) {
            for (size_t c = 0; c < row.size(); ++c) out += (c ? "\t" : "") + row[c];
            out += '\n';
        }
        return out;
    }
    std::vector<size_t> widths;
    for (const auto& row : rows) {
        if (widths.size() < row.size()) widths.resize(row.size(), 0);
        for (size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
    }
    for (const auto& row : rows) {
        for (size_t c = 0; c < row.size(); ++c) {
            if (c) out += "  ";
            out += row[c];
            if (c + 1 < row.size()) out.append(widths[c] - row[c].size(), ' ');
        }
        out += '\n';
    }
    return out;
}

inline const std::vector<std::string>& metric_columns() {
    static const std::vector<std::string> cols = {"BLEU-1",  "BLEU-2",  "BLEU-3", "BLEU-4",
                                                  "GLEU",    "ROUGE-1", "ROUGE-2", "ROUGE-L"};
    return cols;
}

inline std::string render_metric_report(const std::vector<std::pair<std::string, metrics::MetricAggregate>>& rows,
                                        Style style = Style::TextTable) {
    std::vector<std::vector<std::string>> table;
    std::vector<std::string> header = {"Run"};
    for (const auto& c : metric_columns()) header.push_back(c);
    table.push_back(header);
    for (const auto& [name, agg] : rows) {
        std::vector<std::string> row = {name};
        for (double v : agg.bleu_n) row.push_back(format_pct(v));
        row.push_back(format_pct(agg.gleu));
        row.push_back(format_pct(agg.rouge1_f1));
        row.push_back(format_pct(agg.rouge2_f1));
        row.push_back(format_pct(agg.rougeL_f1));
        table.push_back(std::move(row));
    }
    return render_table(table, style);
}

// Accuracy table with one column per category plus the unweighted Average.
// category_order forces column order; categories not in it follow in
// insertion order.
inline std::string render_accuracy_report(const eval::AccuracyTable& table,
                                          const std::vector<std::string>& category_order,
                                          Style style = Style::TextTable) {
    std::vector<const eval::AccuracyRow*> ordered;
    for (const auto& want : category_order)
        for (const auto& row : table.rows)
            if (row.category == want) ordered.push_back(&row);
    for (const auto& row : table.rows) {
        bool seen = false;
        for (const auto* r : ordered) seen = seen || r == &row;
        if (!seen) ordered.push_back(&row);
    }

    std::vector<std::string> header, values;
    for (const auto* row : ordered) {
        header.push_back(row->category);
        values.push_back(format_pct(row->accuracy()));
    }
    header.push_back("Average");
    if (auto avg = table.average()) values.push_back(format_pct(*avg));

    std::vector<std::vector<std::string>> rows = {header};
    if (!values.empty()) rows.push_back(values);
    return render_table(rows, style);
}

inline std::string render_diag_report(const eval::AccuracyTable& table,
                                      Style style = Style::TextTable) {
    std::vector<std::string> order(prep::disease_groups().begin(), prep::disease_groups().end());
    return render_accuracy_report(table, order, style);
}

// One comparison row: "<label> | 60.0% | 10.0% | 30.0%".
inline std::string render_judge_report(const std::string& label,
                                       const judge::PairwiseAggregate& agg) {
    std::string out;
    out += label + " | Win | Tie | Lose\n";
    out += label + " | " + format_pct(agg.win_pct() / 100.0) + "% | " +
           format_pct(agg.tie_pct() / 100.0) + "% | " + format_pct(agg.lose_pct() / 100.0) +
           "%\n";
    if (agg.errored > 0 || agg.parse_failures > 0)
        out += "(" + std::to_string(agg.errored) + " errored case(s) excluded, " +
               std::to_string(agg.parse_failures) + " unparseable verdict(s) scored as Tie)\n";
    return out;
}

// ---- JSON-driven rendering for the `report` subcommand -------------------

inline double require_number(const nlohmann::json& j, const std::string& key,
                             const std::string& style_name) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number())
        throw std::runtime_error("report style " + style_name + ": missing column '" + key + "'");
    return it->get<double>();
}

inline eval::AccuracyTable accuracy_table_from_json(const nlohmann::json& j,
                                                    const std::string& style_name) {
    if (!j.contains("rows") || !j["rows"].is_array())
        throw std::runtime_error("report style " + style_name + ": missing column 'rows'");
    eval::AccuracyTable table;
    for (const auto& row : j["rows"]) {
        auto& r = table.row(row.at("category").get<std::string>());
        r.correct = row.value("correct", 0u);
        r.total = row.value("total", 0u);
    }
    return table;
}

// styles: metrics | mcq | diag | judge
inline std::string render_report(const std::string& style_name, const nlohmann::json& results,
                                 Style style = Style::TextTable) {
    if (style_name == "metrics" || style_name == "table2") {
        metrics::MetricAggregate agg;
        agg.bleu_n[0] = require_number(results, "bleu1", style_name);
        agg.bleu_n[1] = require_number(results, "bleu2", style_name);
        agg.bleu_n[2] = require_number(results, "bleu3", style_name);
        agg.bleu_n[3] = require_number(results, "bleu4", style_name);
        agg.gleu = require_number(results, "gleu", style_name);
        agg.rouge1_f1 = require_number(results, "rouge1", style_name);
        agg.rouge2_f1 = require_number(results, "rouge2", style_name);
        agg.rougeL_f1 = require_number(results, "rougeL", style_name);
        return render_metric_report({{results.value("name", "run"), agg}}, style);
    }
    if (style_name == "mcq" || style_name == "table3") {
        return render_accuracy_report(accuracy_table_from_json(results, style_name), {}, style);
    }
    if (style_name == "diag" || style_name == "table5") {
        return render_diag_report(accuracy_table_from_json(results, style_name), style);
    }
    if (style_name == "judge" || style_name == "table6") {
        judge::PairwiseAggregate agg;
        agg.cases_total = results.value("cases_total", 0u);
        agg.judged = results.value("judged", 0u);
        agg.errored = results.value("errored", 0u);
        agg.parse_failures = results.value("parse_failures", 0u);
        if (!results.contains("win") || !results.contains("tie") || !results.contains("lose"))
            throw std::runtime_error("report style judge: missing column 'win'/'tie'/'lose'");
        agg.win = results["win"].get<size_t>();
        agg.tie = results["tie"].get<size_t>();
        agg.lose = results["lose"].get<size_t>();
        return render_judge_report(results.value("label", "Ours v.s. baseline"), agg);
    }
    throw std::runtime_error("unknown report style '" + style_name + "'");
}

}  // namespace clinikit::report
