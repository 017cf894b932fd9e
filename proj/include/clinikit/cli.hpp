#pragma once

// Subcommand front-end. Every randomized command takes an explicit seed;
// reruns with the same inputs and seed are byte-identical. Each command ends
// with a run summary so skipped or rejected records are never silent.
//
//   generate-data  triples + templates -> instruction corpus
//   prep           dialogues / EHR records / exam items -> pairs + sidecar
//   eval-metrics   candidate/reference pairs -> BLEU/GLEU/ROUGE
//   eval-mcq       generations vs exam items -> per-category accuracy
//   eval-diag      generations vs EHR records -> per-group accuracy
//   judge          pairwise comparison through a judge endpoint
//   rlhf-demo      toy policy-optimization run, emits a training trace
//   report         render saved results as report tables

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "clinikit/accuracy.hpp"
#include "clinikit/client.hpp"
#include "clinikit/corpus.hpp"
#include "clinikit/dialogue.hpp"
#include "clinikit/ehr.hpp"
#include "clinikit/extraction.hpp"
#include "clinikit/instruction.hpp"
#include "clinikit/jsonl.hpp"
#include "clinikit/judge.hpp"
#include "clinikit/kg.hpp"
#include "clinikit/mcq.hpp"
#include "clinikit/metrics.hpp"
#include "clinikit/report.hpp"
#include "clinikit/rlhf.hpp"
#include "clinikit/split.hpp"
#include "clinikit/templates.hpp"

namespace clinikit::cli {

namespace detail {

inline report::Style parse_style(const std::string& format) {
    if (format == "text" || format == "text-table") return report::Style::TextTable;
    if (format == "tsv" || format == "delimited") return report::Style::Delimited;
    throw std::runtime_error("unknown report format '" + format + "'");
}

inline void emit(const std::string& text, const std::string& out_path, std::ostream& fallback) {
    if (out_path.empty())
        fallback << text;
    else
        write_text_file(out_path, text);
}

// Inserts a split tag before the extension: corpus.jsonl -> corpus.train.jsonl.
inline std::string split_path(const std::string& path, const std::string& tag) {
    auto dot = path.rfind('.');
    auto slash = path.rfind('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + "." + tag;
    return path.substr(0, dot) + "." + tag + path.substr(dot);
}

inline prep::SplitRatios parse_ratios(const std::string& text) {
    prep::SplitRatios r{0, 0, 0};
    if (std::sscanf(text.c_str(), "%lf,%lf,%lf", &r.train, &r.valid, &r.test) != 3)
        throw std::runtime_error("--split expects \"train,valid,test\" ratios");
    r.validate();
    return r;
}

inline std::string record_id(const json& rec, size_t index) {
    if (rec.contains("id") && rec["id"].is_string()) return rec["id"].get<std::string>();
    return "rec-" + std::to_string(index);
}

}  // namespace detail

// ---- generate-data --------------------------------------------------------

struct GenerateDataArgs {
    std::string triples_path;
    std::string templates_path;
    std::string out_path;
    std::string report_path;
    std::string selection = "all";
    std::string language;
    std::string delimiter = "、";
    size_t max_objects = 5;
    uint64_t seed = 0;
};

inline int run_generate_data(const GenerateDataArgs& args, std::ostream& out) {
    auto schema = kg::Schema::standard();
    std::ifstream triples_in(args.triples_path);
    if (!triples_in) throw std::runtime_error("cannot open " + args.triples_path);
    auto [triples, parse_report] = kg::parse_triples(triples_in, schema);

    auto templates = kg::load_templates_text(read_text_file(args.templates_path), schema);

    kg::GenerateOptions opts;
    opts.selection = args.selection == "random" ? kg::Selection::OneUniformRandom
                                                : kg::Selection::AllTemplates;
    if (!args.language.empty()) opts.language = args.language;
    opts.max_objects = args.max_objects;
    opts.delimiter = args.delimiter;

    auto [corpus, corpus_report] = kg::generate_corpus(schema, triples, templates, opts, args.seed);

    std::vector<json> records;
    records.reserve(corpus.size());
    for (const auto& pair : corpus) records.push_back(pair);
    write_jsonl_file(args.out_path, records);

    if (!args.report_path.empty()) {
        json rep;
        rep["accepted_triples"] = parse_report.accepted;
        rep["rejected_lines"] = json::array();
        for (const auto& rej : parse_report.rejections)
            rep["rejected_lines"].push_back(
                {{"line", rej.line_no}, {"text", rej.line}, {"reason", rej.reason}});
        rep["keys_total"] = corpus_report.keys_total;
        rep["pairs_emitted"] = corpus_report.pairs_emitted;
        rep["skipped_keys"] = json::array();
        for (const auto& [subject, relation] : corpus_report.skipped_keys)
            rep["skipped_keys"].push_back({{"subject", subject}, {"relation", relation}});
        write_text_file(args.report_path, rep.dump(2) + "\n");
    }

    out << "generate-data: " << parse_report.accepted << " triple(s) parsed, "
        << parse_report.rejections.size() << " line(s) rejected, " << corpus_report.keys_total
        << " key(s), " << corpus_report.pairs_emitted << " pair(s) written to " << args.out_path
        << ", " << corpus_report.skipped_keys.size() << " key(s) skipped (no template)\n";
    return 0;
}

// ---- prep ------------------------------------------------------------------

struct PrepArgs {
    std::string task;  // dialogue | ehr | mcq
    std::string in_path;
    std::string out_path;
    std::string sidecar_path;
    std::string split;  // "t,v,r" ratios, optional
    uint64_t seed = 0;
};

inline int run_prep(const PrepArgs& args, std::ostream& out) {
    auto inputs = read_jsonl_file(args.in_path);
    std::vector<json> pairs, sidecar;
    size_t errored = 0;
    std::vector<std::string> errors;

    for (size_t i = 0; i < inputs.size(); ++i) {
        const json& rec = inputs[i];
        std::string id = detail::record_id(rec, i);
        try {
            if (args.task == "dialogue") {
                auto d = prep::dialogue_from_json(rec);
                auto pair = prep::truncate_dialogue(d, derive_seed(args.seed, i));
                pairs.push_back({{"id", id},
                                 {"prompt", pair.prompt},
                                 {"response", pair.response},
                                 {"source", pair.source}});
                sidecar.push_back({{"id", id}, {"source", "dialogue"}});
            } else if (args.task == "ehr") {
                auto r = prep::ehr_from_json(rec);
                auto pair = prep::format_ehr(r);
                pairs.push_back({{"id", id},
                                 {"prompt", pair.prompt},
                                 {"response", pair.response},
                                 {"source", pair.source}});
                sidecar.push_back({{"id", id}, {"group", r.group}});
            } else if (args.task == "mcq") {
                auto item = prep::mcq_from_json(rec);
                pairs.push_back({{"id", id}, {"prompt", prep::format_mcq(item)}, {"source", "mcq"}});
                sidecar.push_back({{"id", id},
                                   {"answer", std::string(1, item.answer)},
                                   {"category", item.category}});
            } else {
                throw std::runtime_error("unknown prep task '" + args.task + "'");
            }
        } catch (const std::exception& e) {
            ++errored;
            errors.push_back(id + ": " + e.what());
        }
    }

    write_jsonl_file(args.out_path, pairs);
    if (!args.sidecar_path.empty()) write_jsonl_file(args.sidecar_path, sidecar);

    if (!args.split.empty()) {
        auto ratios = detail::parse_ratios(args.split);
        auto split = prep::split_dataset(pairs, ratios, args.seed);
        write_jsonl_file(detail::split_path(args.out_path, "train"), split.train);
        write_jsonl_file(detail::split_path(args.out_path, "valid"), split.valid);
        write_jsonl_file(detail::split_path(args.out_path, "test"), split.test);
        out << "prep: split " << pairs.size() << " -> " << split.train.size() << "/"
            << split.valid.size() << "/" << split.test.size() << "\n";
    }

    out << "prep: " << pairs.size() << " record(s) converted, " << errored
        << " record(s) rejected\n";
    for (const auto& e : errors) out << "  rejected " << e << "\n";
    return 0;
}

// ---- eval-metrics -----------------------------------------------------------

struct EvalMetricsArgs {
    std::string in_path;          // {id, candidate_text, reference_text}
    std::string per_example_path;
    std::string aggregate_path;
    std::string format = "text";
    std::string name = "run";
};

inline int run_eval_metrics(const EvalMetricsArgs& args, std::ostream& out) {
    auto inputs = read_jsonl_file(args.in_path);
    std::vector<metrics::MetricReport> reports;
    std::vector<json> per_example;
    for (size_t i = 0; i < inputs.size(); ++i) {
        const json& rec = inputs[i];
        std::string id = detail::record_id(rec, i);
        auto r = metrics::score_texts(require_string(rec, "candidate_text", id),
                                      require_string(rec, "reference_text", id));
        reports.push_back(r);
        json j = r;
        j["id"] = id;
        per_example.push_back(std::move(j));
    }
    auto agg = metrics::aggregate(reports);
    if (!args.per_example_path.empty()) write_jsonl_file(args.per_example_path, per_example);
    if (!args.aggregate_path.empty()) {
        json j = agg;
        j["name"] = args.name;
        write_text_file(args.aggregate_path, j.dump(2) + "\n");
    }
    out << report::render_metric_report({{args.name, agg}}, detail::parse_style(args.format));
    out << "eval-metrics: " << reports.size() << " example(s) scored (macro-averaged; "
        << "BLEU smoothing: zero precisions floored at 1e-9)\n";
    return 0;
}

// ---- eval-mcq / eval-diag ---------------------------------------------------

struct EvalMcqArgs {
    std::string items_path;
    std::string generations_path;
    std::string out_path;
    std::string format = "text";
};

inline int run_eval_mcq(const EvalMcqArgs& args, std::ostream& out) {
    auto item_records = read_jsonl_file(args.items_path);
    std::map<std::string, std::string> generations;
    {
        auto gen_records = read_jsonl_file(args.generations_path);
        for (size_t i = 0; i < gen_records.size(); ++i)
            generations[detail::record_id(gen_records[i], i)] =
                require_string(gen_records[i], "generated_text", "generation record");
    }

    std::vector<std::pair<prep::McqItem, eval::ExtractionResult>> results;
    size_t missing = 0;
    for (size_t i = 0; i < item_records.size(); ++i) {
        auto item = prep::mcq_from_json(item_records[i]);
        if (item.id.empty()) item.id = detail::record_id(item_records[i], i);
        auto it = generations.find(item.id);
        std::string text;
        if (it == generations.end())
            ++missing;  // scored as chosen=none, keeping the denominator
        else
            text = it->second;
        results.emplace_back(item, eval::extract_choice(text, item));
    }

    auto table = eval::mcq_accuracy(results);
    if (!args.out_path.empty()) {
        json j = table;
        write_text_file(args.out_path, j.dump(2) + "\n");
    }
    out << report::render_accuracy_report(table, {}, detail::parse_style(args.format));
    out << "eval-mcq: " << results.size() << " item(s) scored, " << missing
        << " without a generation (answer extraction: two-stage heuristic, last explicit "
           "label wins, option-text fallback)\n";
    return 0;
}

struct EvalDiagArgs {
    std::string records_path;
    std::string generations_path;
    std::string out_path;
    std::string format = "text";
};

inline int run_eval_diag(const EvalDiagArgs& args, std::ostream& out) {
    auto ehr_records = read_jsonl_file(args.records_path);
    std::map<std::string, std::string> generations;
    {
        auto gen_records = read_jsonl_file(args.generations_path);
        for (size_t i = 0; i < gen_records.size(); ++i)
            generations[detail::record_id(gen_records[i], i)] =
                require_string(gen_records[i], "generated_text", "generation record");
    }

    std::vector<std::pair<prep::EhrRecord, std::string>> results;
    size_t missing = 0;
    for (size_t i = 0; i < ehr_records.size(); ++i) {
        auto record = prep::ehr_from_json(ehr_records[i]);
        std::string id = detail::record_id(ehr_records[i], i);
        auto it = generations.find(id);
        if (it == generations.end()) ++missing;
        results.emplace_back(record, it == generations.end() ? std::string() : it->second);
    }

    auto table = eval::diag_accuracy(results);
    if (!args.out_path.empty()) {
        json j = table;
        write_text_file(args.out_path, j.dump(2) + "\n");
    }
    out << report::render_diag_report(table, detail::parse_style(args.format));
    out << "eval-diag: " << results.size() << " record(s) scored, " << missing
        << " without a generation (diagnosis match: normalized substring)\n";
    return 0;
}

// ---- judge ------------------------------------------------------------------

struct JudgeArgs {
    std::string cases_path;
    std::string endpoints_path;  // {"judge": {...}, "model_a": {...}, "model_b": {...}}
    std::string replay_path;     // recordings; replaces all endpoints
    std::string record_path;     // recording sink for live endpoints
    std::string rubric_path;     // overrides the built-in rubric template
    std::string verdicts_path;
    std::string aggregate_path;
    std::string label = "Ours v.s. baseline";
    bool swap_debias = true;
    int concurrency = 4;
    uint64_t seed = 0;
};

inline int run_judge(const JudgeArgs& args, std::ostream& out) {
    auto case_records = read_jsonl_file(args.cases_path);
    std::vector<judge::PairwiseCase> cases;
    for (size_t i = 0; i < case_records.size(); ++i) {
        auto c = judge::case_from_json(case_records[i]);
        if (c.id.empty()) c.id = detail::record_id(case_records[i], i);
        cases.push_back(std::move(c));
    }

    std::unique_ptr<client::RecordingSink> sink;
    if (!args.record_path.empty())
        sink = std::make_unique<client::RecordingSink>(args.record_path);

    std::unique_ptr<client::TextGenerator> judge_gen, model_a, model_b;
    if (!args.replay_path.empty()) {
        auto store = client::RecordingStore::load(args.replay_path);
        judge_gen = std::make_unique<client::ReplayGenerator>(store);
        model_a = std::make_unique<client::ReplayGenerator>(store);
        model_b = std::make_unique<client::ReplayGenerator>(std::move(store));
    } else {
        if (args.endpoints_path.empty())
            throw std::runtime_error("judge: need --endpoints or --replay");
        json endpoints = json::parse(read_text_file(args.endpoints_path));
        if (!endpoints.contains("judge"))
            throw std::runtime_error("judge: endpoints config missing 'judge' section");
        judge_gen = std::make_unique<client::HttpEndpoint>(
            client::endpoint_from_json(endpoints["judge"]), sink.get());
        if (endpoints.contains("model_a"))
            model_a = std::make_unique<client::HttpEndpoint>(
                client::endpoint_from_json(endpoints["model_a"]), sink.get());
        if (endpoints.contains("model_b"))
            model_b = std::make_unique<client::HttpEndpoint>(
                client::endpoint_from_json(endpoints["model_b"]), sink.get());
    }

    // Fill in missing candidate answers from the model endpoints.
    size_t generated_answers = 0;
    for (auto& c : cases) {
        if (c.answer_a.empty()) {
            if (!model_a) throw std::runtime_error("case '" + c.id +
                                                   "' lacks answer_a and no model_a endpoint");
            c.answer_a = model_a->generate(c.question).completion;
            ++generated_answers;
        }
        if (c.answer_b.empty()) {
            if (!model_b) throw std::runtime_error("case '" + c.id +
                                                   "' lacks answer_b and no model_b endpoint");
            c.answer_b = model_b->generate(c.question).completion;
            ++generated_answers;
        }
    }

    judge::JudgeOptions opts;
    if (!args.rubric_path.empty()) opts.rubric_template = read_text_file(args.rubric_path);
    opts.swap_debias = args.swap_debias;
    opts.concurrency = args.concurrency;
    opts.seed = args.seed;

    std::ostringstream verdict_log;
    auto [results, agg] = judge::run_pairwise(cases, *judge_gen, opts, &verdict_log);
    if (!args.verdicts_path.empty()) write_text_file(args.verdicts_path, verdict_log.str());
    if (!args.aggregate_path.empty()) {
        json j = agg;
        j["label"] = args.label;
        write_text_file(args.aggregate_path, j.dump(2) + "\n");
    }

    out << report::render_judge_report(args.label, agg);
    out << "judge: " << agg.judged << "/" << agg.cases_total << " case(s) judged, " << agg.errored
        << " errored, " << agg.parse_failures << " unparseable verdict(s), " << generated_answers
        << " answer(s) generated"
        << (opts.swap_debias ? ", swap-debias on (disagreement -> Tie)" : ", single order")
        << "\n";
    return 0;
}

// ---- rlhf-demo --------------------------------------------------------------

inline rlhf::RewardModel reward_from_json(const json& spec, int vocab) {
    rlhf::RewardModel rm(vocab);
    std::string type = spec.value("type", "");
    if (type == "token_count") {
        // Scores occurrences of one token (anywhere after the first position)
        // by weighting every bigram that ends in it.
        int token = spec.at("token").get<int>();
        double weight = spec.value("weight", 1.0);
        for (int first = 0; first < vocab; ++first) rm.weight(first, token) = weight;
    } else if (type == "bigram") {
        for (const auto& entry : spec.at("entries"))
            rm.weight(entry.at("first").get<int>(), entry.at("second").get<int>()) =
                entry.at("weight").get<double>();
        rm.bias() = spec.value("bias", 0.0);
    } else {
        throw std::runtime_error("reward spec: unknown type '" + type + "'");
    }
    return rm;
}

struct RlhfDemoArgs {
    std::string config_path;
    std::string trace_path;
    std::string summary_path;
};

inline int run_rlhf_demo(const RlhfDemoArgs& args, std::ostream& out) {
    json cfg = json::parse(read_text_file(args.config_path));
    int vocab = cfg.at("vocab_size").get<int>();
    int horizon = cfg.at("horizon").get<int>();

    std::vector<rlhf::Tokens> prompts;
    for (const auto& p : cfg.at("prompts")) prompts.push_back(p.get<rlhf::Tokens>());

    rlhf::RewardModel rm = reward_from_json(cfg.at("reward"), vocab);

    const json& ppo = cfg.at("ppo");
    rlhf::PpoConfig pc;
    pc.beta = ppo.at("beta").get<double>();
    pc.learning_rate = ppo.at("learning_rate").get<double>();
    pc.steps = ppo.at("steps").get<int>();
    pc.batch_size = ppo.at("batch_size").get<int>();
    pc.baseline_decay = ppo.at("baseline_decay").get<double>();
    pc.seed = ppo.at("seed").get<uint64_t>();  // seeds are explicit, never wall-clock
    pc.validate();

    auto sampling = cfg.value("sampling", "montecarlo") == "enumerate"
                        ? rlhf::PpoSampling::Enumerate
                        : rlhf::PpoSampling::MonteCarlo;

    rlhf::PolicyModel init(vocab, horizon, rlhf::Role::Sft);
    auto [policy, trace] = rlhf::train_rlhf(init, rm, prompts, pc, sampling);

    if (!args.trace_path.empty()) {
        std::ofstream trace_out(args.trace_path, std::ios::binary);
        if (!trace_out) throw std::runtime_error("cannot open " + args.trace_path);
        trace.write_tsv(trace_out);
    }

    json summary;
    if (!trace.rows.empty()) {
        const auto& first = trace.rows.front();
        const auto& last = trace.rows.back();
        summary = {{"steps", pc.steps},
                   {"initial_mean_rm", first.mean_rm},
                   {"final_mean_rm", last.mean_rm},
                   {"initial_kl_to_sft", first.kl_to_sft},
                   {"final_kl_to_sft", last.kl_to_sft},
                   {"final_kl_to_old", last.kl_to_old}};
        out << "rlhf-demo: " << pc.steps << " step(s); mean reward " << first.mean_rm << " -> "
            << last.mean_rm << ", final KL to reference " << last.kl_to_sft << "\n";
    } else {
        summary = {{"steps", 0}};
        out << "rlhf-demo: 0 steps, policy returned unchanged\n";
    }
    if (!args.summary_path.empty()) write_text_file(args.summary_path, summary.dump(2) + "\n");
    return 0;
}

// ---- report -----------------------------------------------------------------

struct ReportArgs {
    std::string style;
    std::string in_path;
    std::string out_path;
    std::string format = "text";
};

inline int run_report(const ReportArgs& args, std::ostream& out) {
    json results = json::parse(read_text_file(args.in_path));
    std::string text = report::render_report(args.style, results, detail::parse_style(args.format));
    detail::emit(text, args.out_path, out);
    return 0;
}

// ---- dispatch ---------------------------------------------------------------

inline int dispatch(const std::vector<std::string>& args, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
    CLI::App app{"clinikit: instruction-data generation, evaluation, and toy RLHF"};
    app.require_subcommand(1);

    GenerateDataArgs gen;
    auto* gen_cmd = app.add_subcommand("generate-data",
                                       "Instantiate instruction pairs from knowledge triples");
    gen_cmd->add_option("--triples", gen.triples_path, "triple file (5 delimited fields/line)")
        ->required()->check(CLI::ExistingFile);
    gen_cmd->add_option("--templates", gen.templates_path, "template document (JSON)")
        ->required()->check(CLI::ExistingFile);
    gen_cmd->add_option("--out", gen.out_path, "output corpus (JSONL)")->required();
    gen_cmd->add_option("--seed", gen.seed, "RNG seed")->required();
    gen_cmd->add_option("--selection", gen.selection, "all | random")
        ->check(CLI::IsMember({"all", "random"}));
    gen_cmd->add_option("--language", gen.language, "template language filter");
    gen_cmd->add_option("--max-objects", gen.max_objects, "objects aggregated per response");
    gen_cmd->add_option("--delimiter", gen.delimiter, "object list delimiter");
    gen_cmd->add_option("--report", gen.report_path, "write rejection/skip report (JSON)");

    PrepArgs prep_args;
    auto* prep_cmd = app.add_subcommand("prep", "Transform dialogues, EHR records, or exam items");
    prep_cmd->add_option("--task", prep_args.task, "dialogue | ehr | mcq")
        ->required()->check(CLI::IsMember({"dialogue", "ehr", "mcq"}));
    prep_cmd->add_option("--in", prep_args.in_path, "input records (JSONL)")
        ->required()->check(CLI::ExistingFile);
    prep_cmd->add_option("--out", prep_args.out_path, "output records (JSONL)")->required();
    prep_cmd->add_option("--sidecar", prep_args.sidecar_path, "metadata sidecar (JSONL)");
    prep_cmd->add_option("--split", prep_args.split, "train,valid,test ratios");
    prep_cmd->add_option("--seed", prep_args.seed, "RNG seed")->required();

    EvalMetricsArgs met;
    auto* met_cmd = app.add_subcommand("eval-metrics", "Score candidates against references");
    met_cmd->add_option("--in", met.in_path, "records {id, candidate_text, reference_text}")
        ->required()->check(CLI::ExistingFile);
    met_cmd->add_option("--per-example", met.per_example_path, "per-example metrics (JSONL)");
    met_cmd->add_option("--aggregate-out", met.aggregate_path, "aggregate metrics (JSON)");
    met_cmd->add_option("--format", met.format, "text | tsv");
    met_cmd->add_option("--name", met.name, "row label");

    EvalMcqArgs mcq;
    auto* mcq_cmd = app.add_subcommand("eval-mcq", "Exam accuracy via answer extraction");
    mcq_cmd->add_option("--items", mcq.items_path, "exam items with gold answers (JSONL)")
        ->required()->check(CLI::ExistingFile);
    mcq_cmd->add_option("--generations", mcq.generations_path, "records {id, generated_text}")
        ->required()->check(CLI::ExistingFile);
    mcq_cmd->add_option("--out", mcq.out_path, "accuracy table (JSON)");
    mcq_cmd->add_option("--format", mcq.format, "text | tsv");

    EvalDiagArgs diag;
    auto* diag_cmd = app.add_subcommand("eval-diag", "Diagnosis accuracy by disease group");
    diag_cmd->add_option("--records", diag.records_path, "EHR records with gold diagnoses (JSONL)")
        ->required()->check(CLI::ExistingFile);
    diag_cmd->add_option("--generations", diag.generations_path, "records {id, generated_text}")
        ->required()->check(CLI::ExistingFile);
    diag_cmd->add_option("--out", diag.out_path, "accuracy table (JSON)");
    diag_cmd->add_option("--format", diag.format, "text | tsv");

    JudgeArgs jdg;
    auto* jdg_cmd = app.add_subcommand("judge", "Pairwise comparison via a judge endpoint");
    jdg_cmd->add_option("--cases", jdg.cases_path, "cases {id, question, answer_a, answer_b}")
        ->required()->check(CLI::ExistingFile);
    jdg_cmd->add_option("--endpoints", jdg.endpoints_path,
                        "endpoint config JSON with judge/model_a/model_b sections")
        ->check(CLI::ExistingFile);
    jdg_cmd->add_option("--replay", jdg.replay_path, "recordings file; no network access")
        ->check(CLI::ExistingFile);
    jdg_cmd->add_option("--record", jdg.record_path, "append generations to a recording file");
    jdg_cmd->add_option("--rubric", jdg.rubric_path, "rubric template override")
        ->check(CLI::ExistingFile);
    jdg_cmd->add_option("--verdicts-out", jdg.verdicts_path, "per-case verdicts (JSONL)");
    jdg_cmd->add_option("--aggregate-out", jdg.aggregate_path, "aggregate tallies (JSON)");
    jdg_cmd->add_option("--label", jdg.label, "comparison row label");
    jdg_cmd->add_flag("--swap-debias,!--no-swap-debias", jdg.swap_debias,
                      "judge twice with orders swapped; disagreement -> Tie");
    jdg_cmd->add_option("--concurrency", jdg.concurrency, "in-flight judge calls")
        ->check(CLI::PositiveNumber);
    jdg_cmd->add_option("--seed", jdg.seed, "RNG seed")->required();

    RlhfDemoArgs demo;
    auto* demo_cmd = app.add_subcommand("rlhf-demo", "Toy policy optimization run");
    demo_cmd->add_option("--config", demo.config_path, "task + PPO config (JSON)")
        ->required()->check(CLI::ExistingFile);
    demo_cmd->add_option("--trace", demo.trace_path, "training trace (TSV)");
    demo_cmd->add_option("--summary-out", demo.summary_path, "summary (JSON)");

    ReportArgs rep;
    auto* rep_cmd = app.add_subcommand("report", "Render saved results as a table");
    rep_cmd->add_option("--style", rep.style, "table2|metrics, table3|mcq, table5|diag, table6|judge")
        ->required();
    rep_cmd->add_option("--in", rep.in_path, "results file (JSON)")
        ->required()->check(CLI::ExistingFile);
    rep_cmd->add_option("--out", rep.out_path, "write table here instead of stdout");
    rep_cmd->add_option("--format", rep.format, "text | tsv");

    std::vector<const char*> argv;
    argv.push_back("clinikit");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (gen_cmd->parsed()) return run_generate_data(gen, out);
        if (prep_cmd->parsed()) return run_prep(prep_args, out);
        if (met_cmd->parsed()) return run_eval_metrics(met, out);
        if (mcq_cmd->parsed()) return run_eval_mcq(mcq, out);
        if (diag_cmd->parsed()) return run_eval_diag(diag, out);
        if (jdg_cmd->parsed()) return run_judge(jdg, out);
        if (demo_cmd->parsed()) return run_rlhf_demo(demo, out);
        if (rep_cmd->parsed()) return run_report(rep, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << "error: no subcommand\n";
    return 1;
}

}  // namespace clinikit::cli
