#include <gtest/gtest.h>

#include <algorithm>

#include "clinikit/accuracy.hpp"
#include "clinikit/extraction.hpp"
#include "clinikit/report.hpp"

using namespace clinikit;
namespace p = clinikit::prep;
namespace e = clinikit::eval;

namespace {

p::McqItem sle_item() {
    p::McqItem item;
    item.id = "mcq-001";
    item.question = "Which of the following blood system changes does not comply with SLE?";
    item.options = {{'A', "Thrombocytopenia"},
                    {'B', "Self cell reduction"},
                    {'C', "Autoimmune hemolytic anemia"},
                    {'D', "Positive Chromatophore anemia"},
                    {'E', "Leukemia like changes"}};
    item.answer = 'E';
    item.category = "Rheumatic immune";
    return item;
}

p::McqItem small_item() {
    p::McqItem item;
    item.question = "Pick one.";
    item.options = {{'A', "red herring"}, {'B', "the correct choice"}, {'C', "another distractor"}};
    item.answer = 'B';
    item.category = "General";
    return item;
}

}  // namespace

// ---------------------------------------------------------------------------
// extract_choice
// ---------------------------------------------------------------------------

TEST(ExtractChoice, ExplicitOptionMention) {
    std::string generated =
        "SLE is an autoimmune disease, whose blood system changes include thrombocytopenia, "
        "autoimmune hemolytic anemia, positive Chromatophore anemia, etc. Leukemia like changes "
        "refer to the presence of a large number of immature cells in the bone marrow, which is "
        "not related to SLE. Therefore, option E does not meet the hematological changes of SLE.";
    auto result = e::extract_choice(generated, sle_item());
    ASSERT_TRUE(result.chosen.has_value());
    EXPECT_EQ(*result.chosen, 'E');
    EXPECT_EQ(result.method, e::ExtractMethod::ExplicitLabel);
}

TEST(ExtractChoice, ChineseOptionMention) {
    auto result = e::extract_choice("类白血病样改变与SLE无关，因此选项E不符合。", sle_item());
    ASSERT_TRUE(result.chosen.has_value());
    EXPECT_EQ(*result.chosen, 'E');
}

TEST(ExtractChoice, GenerationEqualsOptionText) {
    auto result = e::extract_choice("the correct choice", small_item());
    ASSERT_TRUE(result.chosen.has_value());
    EXPECT_EQ(*result.chosen, 'B');
    EXPECT_EQ(result.method, e::ExtractMethod::OptionText);
}

TEST(ExtractChoice, LastExplicitMentionWins) {
    auto result = e::extract_choice("A is wrong; the answer is C", small_item());
    ASSERT_TRUE(result.chosen.has_value());
    EXPECT_EQ(*result.chosen, 'C');
    EXPECT_EQ(result.method, e::ExtractMethod::ExplicitLabel);
}

TEST(ExtractChoice, ExplicitLabelBeatsOptionText) {
    // The generation quotes option B's text but concludes with option A.
    auto result =
        e::extract_choice("\"the correct choice\" sounds tempting, but the answer is A.",
                          small_item());
    ASSERT_TRUE(result.chosen.has_value());
    EXPECT_EQ(*result.chosen, 'A');
    EXPECT_EQ(result.method, e::ExtractMethod::ExplicitLabel);
}

TEST(ExtractChoice, NoSignalMeansNone) {
    auto result = e::extract_choice("I cannot tell from the information given.", small_item());
    EXPECT_FALSE(result.chosen.has_value());
    EXPECT_EQ(result.method, e::ExtractMethod::None);
}

TEST(ExtractChoice, HalfTextRuleRejectsShortFragments) {
    // "choice" alone covers less than half of "the correct choice".
    auto result = e::extract_choice("a choice exists", small_item());
    EXPECT_FALSE(result.chosen.has_value());
}

TEST(ExtractChoice, OptionInsideWordDoesNotCount) {
    // "adoption" contains "option" but not at a word boundary.
    auto result = e::extract_choice("the adoption agency called", small_item());
    EXPECT_FALSE(result.chosen.has_value());
}

TEST(ExtractChoice, LabelOutsideItemIgnored) {
    p::McqItem item;
    item.question = "q";
    item.options = {{'A', "first thing"}, {'B', "second thing"}};
    item.answer = 'A';
    auto result = e::extract_choice("the answer is E", item);
    EXPECT_FALSE(result.chosen.has_value());
}

TEST(ExtractChoice, TotalAndDeterministic) {
    auto item = small_item();
    for (const std::string text : {"", "any text", "answer is b", "选B", "OPTION c"}) {
        auto r1 = e::extract_choice(text, item);
        auto r2 = e::extract_choice(text, item);
        EXPECT_EQ(r1.chosen.has_value(), r2.chosen.has_value());
        if (r1.chosen) EXPECT_EQ(*r1.chosen, *r2.chosen);
    }
}

// ---------------------------------------------------------------------------
// mcq_accuracy
// ---------------------------------------------------------------------------

namespace {

std::pair<p::McqItem, e::ExtractionResult> scored(const std::string& category, char answer,
                                                  std::optional<char> chosen) {
    p::McqItem item;
    item.question = "q";
    item.options = {{'A', "a"}, {'B', "b"}, {'C', "c"}, {'D', "d"}};
    item.answer = answer;
    item.category = category;
    e::ExtractionResult result{chosen, chosen ? e::ExtractMethod::ExplicitLabel
                                              : e::ExtractMethod::None};
    return {item, result};
}

}  // namespace

TEST(McqAccuracy, PerCategoryArithmetic) {
    std::vector<std::pair<p::McqItem, e::ExtractionResult>> results;
    // cat1: 3/4 correct, cat2: 1/2 correct
    for (int i = 0; i < 3; ++i) results.push_back(scored("cat1", 'A', 'A'));
    results.push_back(scored("cat1", 'A', 'B'));
    results.push_back(scored("cat2", 'C', 'C'));
    results.push_back(scored("cat2", 'C', std::nullopt));
    auto table = e::mcq_accuracy(results);
    ASSERT_EQ(table.rows.size(), 2u);
    EXPECT_DOUBLE_EQ(table.rows[0].accuracy(), 0.75);
    EXPECT_DOUBLE_EQ(table.rows[1].accuracy(), 0.5);
    ASSERT_TRUE(table.average().has_value());
    EXPECT_DOUBLE_EQ(*table.average(), 0.625);
}

TEST(McqAccuracy, AllNoneScoresZero) {
    std::vector<std::pair<p::McqItem, e::ExtractionResult>> results;
    for (int i = 0; i < 5; ++i) results.push_back(scored("cat", 'A', std::nullopt));
    auto table = e::mcq_accuracy(results);
    ASSERT_EQ(table.rows.size(), 1u);
    EXPECT_DOUBLE_EQ(table.rows[0].accuracy(), 0.0);
}

TEST(McqAccuracy, EmptyInputHasNoAverage) {
    auto table = e::mcq_accuracy({});
    EXPECT_TRUE(table.rows.empty());
    EXPECT_FALSE(table.average().has_value());
}

TEST(McqAccuracy, TranscribedExamRowAveragesTo376) {
    // Four categories at 26.1%, 40.0%, 36.9%, 47.4% over 1000 items each;
    // the unweighted mean renders as 37.6 at one decimal.
    std::vector<std::pair<p::McqItem, e::ExtractionResult>> results;
    auto add_category = [&](const std::string& name, int correct) {
        for (int i = 0; i < 1000; ++i)
            results.push_back(scored(name, 'A', i < correct ? 'A' : 'B'));
    };
    add_category("Respiratory", 261);
    add_category("Urinary", 400);
    add_category("Digestive", 369);
    add_category("Rheumatic immune", 474);
    auto table = e::mcq_accuracy(results);
    ASSERT_TRUE(table.average().has_value());
    EXPECT_EQ(report::format_pct(*table.average()), "37.6");
}

TEST(McqAccuracy, AddingCorrectResultNeverLowersAccuracy) {
    std::vector<std::pair<p::McqItem, e::ExtractionResult>> results = {
        scored("cat", 'A', 'B'), scored("cat", 'A', 'A')};
    auto before = e::mcq_accuracy(results).rows[0].accuracy();
    results.push_back(scored("cat", 'A', 'A'));
    auto after = e::mcq_accuracy(results).rows[0].accuracy();
    EXPECT_GE(after, before);
}

// ---------------------------------------------------------------------------
// match_diagnosis / diag_accuracy
// ---------------------------------------------------------------------------

TEST(MatchDiagnosis, AppendicitisResponse) {
    std::string generated =
        "Hello, according to your symptoms and examination results, you are diagnosed as "
        "Appendicitis. We suggest that you undergo surgical treatment as soon as possible.";
    EXPECT_TRUE(e::match_diagnosis(generated, "Appendicitis"));
    EXPECT_TRUE(e::match_diagnosis("您好，根据您的检查结果，您被诊断为阑尾炎。", "阑尾炎"));
}

TEST(MatchDiagnosis, ExactEquality) { EXPECT_TRUE(e::match_diagnosis("Pneumonia", "Pneumonia")); }

TEST(MatchDiagnosis, SimilarButDifferentLabelFails) {
    EXPECT_FALSE(e::match_diagnosis("The picture fits diabetes insipidus.", "Type 2 diabetes"));
}

TEST(MatchDiagnosis, NormalizationCollapsesCaseAndWhitespace) {
    EXPECT_TRUE(e::match_diagnosis("diagnosis:  type 2   DIABETES mellitus", "Type 2 Diabetes"));
}

TEST(MatchDiagnosis, EmptyGoldIsError) {
    EXPECT_THROW(e::match_diagnosis("text", "  "), std::invalid_argument);
}

namespace {

p::EhrRecord record_in(const std::string& group, const std::string& diagnosis) {
    return {"c", "h", "t", diagnosis, group};
}

}  // namespace

TEST(DiagAccuracy, SingleGroupAllWrong) {
    std::vector<std::pair<p::EhrRecord, std::string>> results;
    for (int i = 0; i < 5; ++i)
        results.emplace_back(record_in("Urinary", "Cystitis"), "unrelated text");
    auto table = e::diag_accuracy(results);
    ASSERT_EQ(table.rows.size(), 1u);
    EXPECT_DOUBLE_EQ(table.rows[0].accuracy(), 0.0);
}

TEST(DiagAccuracy, TwoGroupsAverage) {
    std::vector<std::pair<p::EhrRecord, std::string>> results = {
        {record_in("Respiratory", "Pneumonia"), "Diagnosis: pneumonia confirmed."},
        {record_in("Digestive", "Gastritis"), "Likely appendicitis."},
    };
    auto table = e::diag_accuracy(results);
    ASSERT_TRUE(table.average().has_value());
    EXPECT_DOUBLE_EQ(*table.average(), 0.5);
}

TEST(DiagAccuracy, RowsFollowDeclaredGroupOrder) {
    std::vector<std::pair<p::EhrRecord, std::string>> results = {
        {record_in("Hematology", "Anemia"), "anemia"},
        {record_in("Respiratory", "Pneumonia"), "pneumonia"},
        {record_in("Urinary", "Cystitis"), "cystitis"},
    };
    auto table = e::diag_accuracy(results);
    ASSERT_EQ(table.rows.size(), 3u);
    EXPECT_EQ(table.rows[0].category, "Respiratory");
    EXPECT_EQ(table.rows[1].category, "Urinary");
    EXPECT_EQ(table.rows[2].category, "Hematology");
}

TEST(DiagAccuracy, EmptyInputEmptyTable) {
    auto table = e::diag_accuracy({});
    EXPECT_TRUE(table.rows.empty());
}

TEST(DiagAccuracy, TranscribedDiagnosisRowAveragesTo809) {
    // 64.3 / 90.1 / 89.9 / 79.2 / 83.6 / 78.6 / 80.7 over 1000 records per
    // group: the unweighted mean renders as 80.9 at one decimal.
    std::vector<std::pair<p::EhrRecord, std::string>> results;
    const std::vector<std::pair<std::string, int>> row = {
        {"Respiratory", 643}, {"Digestive", 901},  {"Urinary", 899},   {"Psychiatry", 792},
        {"Neurology", 836},   {"Gynecology", 786}, {"Hematology", 807}};
    for (const auto& [group, correct] : row) {
        for (int i = 0; i < 1000; ++i)
            results.emplace_back(record_in(group, "Gold"),
                                 i < correct ? "matches Gold" : "no match");
    }
    auto table = e::diag_accuracy(results);
    ASSERT_TRUE(table.average().has_value());
    EXPECT_EQ(report::format_pct(*table.average()), "80.9");
}

// ---------------------------------------------------------------------------
// report rendering conventions
// ---------------------------------------------------------------------------

TEST(Report, DiagColumnOrder) {
    std::vector<std::pair<p::EhrRecord, std::string>> results;
    for (const auto& group : p::disease_groups())
        results.emplace_back(record_in(group, "X"), "X");
    auto table = e::diag_accuracy(results);
    auto text = report::render_diag_report(table);
    std::vector<std::string> expected = {"Respiratory", "Digestive",  "Urinary",
                                         "Psychiatry",  "Neurology",  "Gynecology",
                                         "Hematology",  "Average"};
    size_t pos = 0;
    for (const auto& name : expected) {
        size_t found = text.find(name, pos);
        ASSERT_NE(found, std::string::npos) << name;
        pos = found;
    }
}

TEST(Report, MetricHeaderOrder) {
    auto text = report::render_metric_report({{"run", {}}});
    std::vector<std::string> expected = {"BLEU-1", "BLEU-2",  "BLEU-3",  "BLEU-4",
                                         "GLEU",   "ROUGE-1", "ROUGE-2", "ROUGE-L"};
    size_t pos = 0;
    for (const auto& name : expected) {
        size_t found = text.find(name, pos);
        ASSERT_NE(found, std::string::npos) << name;
        pos = found + name.size();
    }
}

TEST(Report, PercentRounding) {
    EXPECT_EQ(report::format_pct(0.897), "89.7");
    EXPECT_EQ(report::format_pct(0.018), "1.8");
    EXPECT_EQ(report::format_pct(1.0), "100.0");
}

TEST(Report, EmptyResultsRenderHeaderOnly) {
    e::AccuracyTable empty;
    auto text = report::render_accuracy_report(empty, {});
    EXPECT_NE(text.find("Average"), std::string::npos);
    EXPECT_EQ(text.find("100.0"), std::string::npos);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
}
