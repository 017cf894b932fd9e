#include <gtest/gtest.h>

#include <map>
#include <set>

#include "clinikit/dialogue.hpp"
#include "clinikit/ehr.hpp"
#include "clinikit/mcq.hpp"
#include "clinikit/split.hpp"

using namespace clinikit;
namespace p = clinikit::prep;

namespace {

// The consultation fixture: condition description, then assistant/user turns
// ending in a second assistant reply about pre-visit preparation.
p::Dialogue consultation_dialogue() {
    p::Dialogue d;
    d.description =
        "Disease: Suspected Paget's disease of the skin\n"
        "Duration of illness: more than six months.";
    d.turns = {
        {p::Speaker::Assistant,
         "Based on your condition, it is indeed necessary to undergo surgery to remove the "
         "lesion, but the specific surgical situation may require on-site judgment."},
        {p::Speaker::User, "What do you need to prepare before seeing a doctor?"},
        {p::Speaker::Assistant,
         "Before going to the clinic, you need to undergo a skin examination, including "
         "observing skin color, texture, rash size, etc. In addition, you also need to bring "
         "medical records, doctor's prescriptions, etc."},
    };
    return d;
}

}  // namespace

// ---------------------------------------------------------------------------
// truncate_dialogue
// ---------------------------------------------------------------------------

TEST(TruncateDialogue, SingleAssistantTurnHasNoRandomness) {
    p::Dialogue d;
    d.description = "desc";
    d.turns = {{p::Speaker::User, "question"}, {p::Speaker::Assistant, "reply"}};
    for (uint64_t seed : {0ull, 1ull, 99ull}) {
        auto pair = p::truncate_dialogue(d, seed);
        EXPECT_EQ(pair.prompt, "desc\nUser: question");
        EXPECT_EQ(pair.response, "reply");
        EXPECT_EQ(pair.source, "dialogue");
    }
}

TEST(TruncateDialogue, SecondAssistantTurnOfConsultation) {
    auto pair = p::truncate_dialogue_at(consultation_dialogue(), 1);
    EXPECT_EQ(pair.response.rfind(
                  "Before going to the clinic, you need to undergo a skin examination", 0),
              0u);
    // Prior turns appear with speaker prefixes.
    EXPECT_NE(pair.prompt.find("Assistant: Based on your condition"), std::string::npos);
    EXPECT_NE(pair.prompt.find("User: What do you need to prepare"), std::string::npos);
}

TEST(TruncateDialogue, UniformChoiceFrequency) {
    p::Dialogue d;
    d.description = "desc";
    d.turns = {{p::Speaker::Assistant, "turn-0"},
               {p::Speaker::Assistant, "turn-1"},
               {p::Speaker::Assistant, "turn-2"}};
    std::map<std::string, int> counts;
    const int draws = 3000;
    for (int i = 0; i < draws; ++i)
        ++counts[p::truncate_dialogue(d, derive_seed(2024, i)).response];
    for (const auto& [response, count] : counts) {
        double freq = static_cast<double>(count) / draws;
        EXPECT_NEAR(freq, 1.0 / 3.0, 0.05) << response;
    }
}

TEST(TruncateDialogue, NoAssistantTurnIsError) {
    p::Dialogue d;
    d.description = "desc";
    d.turns = {{p::Speaker::User, "hello"}};
    EXPECT_THROW(p::truncate_dialogue(d, 1), std::invalid_argument);
}

TEST(TruncateDialogue, ChosenTurnNeverLeaksIntoPrompt) {
    Rng rng(555);
    for (int trial = 0; trial < 1000; ++trial) {
        p::Dialogue d;
        d.description = "description-" + std::to_string(trial);
        size_t turns = 1 + uniform_index(rng, 6);
        for (size_t t = 0; t < turns; ++t) {
            bool assistant = uniform_index(rng, 2) == 0;
            d.turns.push_back({assistant ? p::Speaker::Assistant : p::Speaker::User,
                               "turn-" + std::to_string(trial) + "-" + std::to_string(t)});
        }
        if (p::assistant_turn_indices(d).empty())
            d.turns.push_back({p::Speaker::Assistant, "turn-final-" + std::to_string(trial)});
        auto pair = p::truncate_dialogue(d, derive_seed(99, trial));
        EXPECT_EQ(pair.prompt.find(pair.response), std::string::npos);
    }
}

// ---------------------------------------------------------------------------
// format_ehr
// ---------------------------------------------------------------------------

TEST(FormatEhr, AbdominalPainRecord) {
    p::EhrRecord r;
    r.complaint = "Abdominal pain for 1 day.";
    r.history_exam = "Abdominal pain, no obvious pattern, vomiting.";
    r.tests = "High urine amylase, abdominal plain film: bowel obstruction.";
    r.diagnosis = "Appendicitis";
    r.group = "Digestive";
    auto pair = p::format_ehr(r);
    EXPECT_NE(pair.prompt.find("Complaint: Abdominal pain for 1 day."), std::string::npos);
    EXPECT_EQ(pair.response, "Appendicitis");
    EXPECT_EQ(pair.source, "ehr");
}

TEST(FormatEhr, EmptyTestsSectionKeepsHeader) {
    p::EhrRecord r;
    r.complaint = "Cough.";
    r.history_exam = "Three days of cough.";
    r.tests = "";
    r.diagnosis = "Bronchitis";
    r.group = "Respiratory";
    auto pair = p::format_ehr(r);
    EXPECT_NE(pair.prompt.find("Tests: "), std::string::npos);
}

TEST(FormatEhr, GroupIsMetadataNotInput) {
    p::EhrRecord a{"c", "h", "t", "Pneumonia", "Respiratory"};
    p::EhrRecord b{"c", "h", "t", "Pneumonia", "Digestive"};
    EXPECT_EQ(p::format_ehr(a).prompt, p::format_ehr(b).prompt);
}

TEST(FormatEhr, DistinctSectionsGiveDistinctPrompts) {
    p::EhrRecord base{"c", "h", "t", "Pneumonia", "Respiratory"};
    auto prompt = p::format_ehr(base).prompt;
    for (auto changed : {p::EhrRecord{"c2", "h", "t", "Pneumonia", "Respiratory"},
                         p::EhrRecord{"c", "h2", "t", "Pneumonia", "Respiratory"},
                         p::EhrRecord{"c", "h", "t2", "Pneumonia", "Respiratory"}}) {
        EXPECT_NE(p::format_ehr(changed).prompt, prompt);
    }
}

TEST(FormatEhr, MissingDiagnosisIsError) {
    p::EhrRecord r{"c", "h", "t", "", "Respiratory"};
    EXPECT_THROW(p::format_ehr(r), std::invalid_argument);
}

TEST(FormatEhr, UnknownGroupIsError) {
    p::EhrRecord r{"c", "h", "t", "Pneumonia", "Cardiology"};
    EXPECT_THROW(p::format_ehr(r), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// format_mcq
// ---------------------------------------------------------------------------

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

}  // namespace

TEST(FormatMcq, OptionLinesMatchLayout) {
    auto prompt = p::format_mcq(sle_item());
    EXPECT_NE(prompt.find("Answer options:"), std::string::npos);
    EXPECT_NE(prompt.find("Option A Thrombocytopenia"), std::string::npos);
    EXPECT_NE(prompt.find("Option E Leukemia like changes"), std::string::npos);
}

TEST(FormatMcq, TwoOptionItemHasExactlyTwoOptionLines) {
    p::McqItem item;
    item.question = "q";
    item.options = {{'A', "yes"}, {'B', "no"}};
    item.answer = 'A';
    auto prompt = p::format_mcq(item);
    size_t count = 0, pos = 0;
    while ((pos = prompt.find("Option ", pos)) != std::string::npos) {
        ++count;
        pos += 7;
    }
    EXPECT_EQ(count, 2u);
}

TEST(FormatMcq, NewlineInOptionTextNormalized) {
    p::McqItem item;
    item.question = "q";
    item.options = {{'A', "line one\nline two"}, {'B', "no"}};
    item.answer = 'A';
    auto prompt = p::format_mcq(item);
    EXPECT_NE(prompt.find("Option A line one line two"), std::string::npos);
}

TEST(McqItem, InvariantViolations) {
    p::McqItem one_option{"", "q", {{'A', "x"}}, 'A', ""};
    EXPECT_THROW(one_option.validate(), std::invalid_argument);
    p::McqItem bad_labels{"", "q", {{'A', "x"}, {'C', "y"}}, 'A', ""};
    EXPECT_THROW(bad_labels.validate(), std::invalid_argument);
    p::McqItem bad_answer{"", "q", {{'A', "x"}, {'B', "y"}}, 'E', ""};
    EXPECT_THROW(bad_answer.validate(), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// split_dataset
// ---------------------------------------------------------------------------

TEST(SplitDataset, TenRecordsAt811) {
    std::vector<int> records(10);
    for (int i = 0; i < 10; ++i) records[i] = i;
    auto split = p::split_dataset(records, {0.8, 0.1, 0.1}, 5);
    EXPECT_EQ(split.train.size(), 8u);
    EXPECT_EQ(split.valid.size(), 1u);
    EXPECT_EQ(split.test.size(), 1u);
}

TEST(SplitDataset, SameSeedSamePartition) {
    std::vector<int> records(25);
    for (int i = 0; i < 25; ++i) records[i] = i;
    auto a = p::split_dataset(records, {0.8, 0.1, 0.1}, 17);
    auto b = p::split_dataset(records, {0.8, 0.1, 0.1}, 17);
    EXPECT_EQ(a.train, b.train);
    EXPECT_EQ(a.valid, b.valid);
    EXPECT_EQ(a.test, b.test);
}

TEST(SplitDataset, FloorRuleSendsRemainderToTrain) {
    std::vector<int> records(7);
    for (int i = 0; i < 7; ++i) records[i] = i;
    auto split = p::split_dataset(records, {0.8, 0.1, 0.1}, 3);
    EXPECT_EQ(split.train.size(), 7u);  // floor(0.7) = 0 for valid and test
    EXPECT_EQ(split.valid.size(), 0u);
    EXPECT_EQ(split.test.size(), 0u);
}

TEST(SplitDataset, EmptyInputYieldsEmptyLists) {
    std::vector<int> records;
    auto split = p::split_dataset(records, {0.8, 0.1, 0.1}, 1);
    EXPECT_TRUE(split.train.empty());
    EXPECT_TRUE(split.valid.empty());
    EXPECT_TRUE(split.test.empty());
}

TEST(SplitDataset, PartitionLosesAndDuplicatesNothing) {
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        size_t n = uniform_index(rng, 40);
        std::vector<int> records(n);
        for (size_t i = 0; i < n; ++i) records[i] = static_cast<int>(i);
        auto split = p::split_dataset(records, {0.6, 0.2, 0.2}, derive_seed(8, trial));
        std::multiset<int> combined;
        for (int v : split.train) combined.insert(v);
        for (int v : split.valid) combined.insert(v);
        for (int v : split.test) combined.insert(v);
        std::multiset<int> expected(records.begin(), records.end());
        EXPECT_EQ(combined, expected);
    }
}

TEST(SplitDataset, InvalidRatiosRejected) {
    std::vector<int> records(3);
    EXPECT_THROW(p::split_dataset(records, {0.8, 0.1, 0.2}, 1), std::invalid_argument);
    EXPECT_THROW(p::split_dataset(records, {1.0, 0.0, 0.0}, 1), std::invalid_argument);
}
