#include <atomic>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "clinicsum/config.hpp"
#include "clinicsum/corpus.hpp"
#include "clinicsum/errors.hpp"
#include "clinicsum/eval.hpp"
#include "clinicsum/index.hpp"
#include "clinicsum/infer.hpp"
#include "clinicsum/io.hpp"
#include "clinicsum/retrieve.hpp"
#include "clinicsum/text.hpp"

namespace {

using namespace clinicsum;
using nlohmann::json;

TranscriptFormat parse_format(const std::string& format) {
    if (format == "jsonl") {
        return TranscriptFormat::jsonl;
    }
    if (format == "txt") {
        return TranscriptFormat::txt;
    }
    throw ConfigError("unknown transcript format: " + format);
}

// Runs fn(0..n-1) across up to `jobs` workers. The first failure is
// rethrown after all workers finish; output files stay per-item so partial
// batches never interleave.
void for_each_parallel(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) {
                return;
            }
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> workers;
    const int n_workers = std::min<int>(jobs, static_cast<int>(n));
    workers.reserve(static_cast<std::size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) {
        workers.emplace_back(worker);
    }
    for (auto& t : workers) {
        t.join();
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
}

json rouge_to_json(const RougeScore& score) {
    return json{{"p", score.precision}, {"r", score.recall}, {"f1", score.f1}};
}

json aggregate_to_json(const StatsAggregate& agg) {
    return json{{"count", agg.count}, {"mean", agg.mean}, {"max", agg.max}, {"min", agg.min}};
}

json candidates_to_json(const FusedContext& context, const ChunkIndex& index,
                        std::size_t top_k_final) {
    json audit = json::array();
    for (std::size_t i = 0; i < context.candidates.size(); ++i) {
        const auto& cand = context.candidates[i];
        json entry;
        entry["ord"] = cand.chunk_ord;
        entry["text"] = index.chunks[cand.chunk_ord].text;
        entry["sparse_rank"] = cand.sparse_rank ? json(*cand.sparse_rank) : json(nullptr);
        entry["dense_rank"] = cand.dense_rank ? json(*cand.dense_rank) : json(nullptr);
        entry["sparse_score"] = cand.sparse_score ? json(*cand.sparse_score) : json(nullptr);
        entry["dense_score"] = cand.dense_score ? json(*cand.dense_score) : json(nullptr);
        entry["fused_score"] = cand.fused_score;
        entry["selected"] = i < top_k_final;
        audit.push_back(std::move(entry));
    }
    return audit;
}

std::string output_path(const std::string& out_dir, const std::string& id, const char* suffix) {
    return (std::filesystem::path(out_dir) / (id + suffix)).string();
}

struct CommonArgs {
    std::string in_path;
    std::string format = "jsonl";
    std::string out;
};

struct Cli {
    std::string config_path;
    int jobs = 1;
    std::optional<std::uint64_t> seed;
    AppConfig config;
};

int cmd_index(const Cli& cli, const CommonArgs& args) {
    const auto transcripts = read_transcripts(args.in_path, parse_format(args.format));
    auto provider = cli.config.make_embedding_provider();
    std::mutex log_mutex;
    for_each_parallel(transcripts.size(), cli.jobs, [&](std::size_t i) {
        const auto index = build_index(transcripts[i], *provider, cli.config.k1, cli.config.b);
        const auto path = output_path(args.out, transcripts[i].id, ".index.json");
        save_index(index, path);
        std::lock_guard<std::mutex> lock(log_mutex);
        std::cout << "indexed " << transcripts[i].id << " (" << index.chunks.size() << " chunks) -> "
                  << path << "\n";
    });
    return 0;
}

int cmd_retrieve(const Cli& cli, const CommonArgs& args, bool explain) {
    const auto transcripts = read_transcripts(args.in_path, parse_format(args.format));
    auto provider = cli.config.make_embedding_provider();
    RetrievalQuery base_query;
    base_query.text = cli.config.query;
    base_query.vector = embed_one(*provider, base_query.text);
    std::mutex log_mutex;
    for_each_parallel(transcripts.size(), cli.jobs, [&](std::size_t i) {
        const auto index = build_index(transcripts[i], *provider, cli.config.k1, cli.config.b);
        const auto context = filter_index(index, *provider, base_query, cli.config.fusion);
        json out;
        out["id"] = transcripts[i].id;
        out["query"] = cli.config.query;
        out["text"] = context.concatenated_text;
        json selected = json::array();
        for (const auto& chunk : context.selected) {
            selected.push_back({{"ord", chunk.ord}, {"text", chunk.text}});
        }
        out["selected"] = std::move(selected);
        if (explain) {
            out["audit"] = candidates_to_json(context, index, cli.config.fusion.top_k_final);
        }
        const auto path = output_path(args.out, transcripts[i].id, ".context.json");
        atomic_write_file(path, out.dump(2) + "\n");
        std::lock_guard<std::mutex> lock(log_mutex);
        std::cout << "retrieved " << transcripts[i].id << ": kept " << context.selected.size()
                  << "/" << index.chunks.size() << " chunks -> " << path << "\n";
    });
    return 0;
}

int cmd_summarize(const Cli& cli, const CommonArgs& args) {
    const auto transcripts = read_transcripts(args.in_path, parse_format(args.format));
    auto provider = cli.config.make_embedding_provider();
    auto generator = cli.config.make_generator();
    auto tokenizer = cli.config.make_tokenizer();
    const PipelineOptions options = cli.config.pipeline_options();
    std::mutex log_mutex;
    for_each_parallel(transcripts.size(), cli.jobs, [&](std::size_t i) {
        const auto result = summarize_pipeline(transcripts[i], *provider, *generator, options,
                                               *tokenizer);
        json out;
        out["id"] = transcripts[i].id;
        out["soap"] = {{"subjective", result.summary.subjective},
                       {"objective", result.summary.objective},
                       {"assessment", result.summary.assessment},
                       {"plan", result.summary.plan}};
        out["raw"] = result.raw;
        out["context_tokens"] = result.context_tokens;
        out["transcript_tokens"] = result.transcript_tokens;
        if (!result.missing_sections.empty()) {
            out["missing_sections"] = result.missing_sections;
        }
        const auto path = output_path(args.out, transcripts[i].id, ".summary.json");
        atomic_write_file(path, out.dump(2) + "\n");
        std::lock_guard<std::mutex> lock(log_mutex);
        std::cout << "summarized " << transcripts[i].id << " (context " << result.context_tokens
                  << "/" << result.transcript_tokens << " tokens";
        if (!result.missing_sections.empty()) {
            std::cout << ", missing " << result.missing_sections.size() << " sections";
        }
        std::cout << ") -> " << path << "\n";
    });
    return 0;
}

struct EvalItem {
    std::string id;
    std::string candidate;
    std::string reference;
};

std::vector<EvalItem> read_eval_items(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open file: " + path);
    }
    std::vector<EvalItem> items;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("candidate") || !j.contains("reference")) {
            throw ParseError("expected {\"id\"?, \"candidate\", \"reference\"}", line_no);
        }
        EvalItem item;
        item.id = j.value("id", "item-" + std::to_string(items.size()));
        item.candidate = j["candidate"].get<std::string>();
        item.reference = j["reference"].get<std::string>();
        items.push_back(std::move(item));
    }
    return items;
}

int cmd_evaluate(const Cli& cli, const std::string& in_path, const std::string& out) {
    const auto items = read_eval_items(in_path);
    auto provider = cli.config.make_embedding_provider();
    auto tokenizer = cli.config.make_tokenizer();

    json per_item = json::array();
    RougeScore sum1, sum2, suml, sume;
    double cand_tokens_sum = 0.0;
    double ref_tokens_sum = 0.0;
    for (const auto& item : items) {
        const auto r1 = rouge_n(item.candidate, item.reference, 1);
        const auto r2 = rouge_n(item.candidate, item.reference, 2);
        const auto rl = rouge_l(item.candidate, item.reference);
        const auto es = embed_score(item.candidate, item.reference, *provider);
        const auto cand_tokens = tokenizer->count(item.candidate);
        const auto ref_tokens = tokenizer->count(item.reference);
        per_item.push_back({{"id", item.id},
                            {"rouge1", rouge_to_json(r1)},
                            {"rouge2", rouge_to_json(r2)},
                            {"rougeL", rouge_to_json(rl)},
                            {"embed_score", rouge_to_json(es)},
                            {"tokens", {{"candidate", cand_tokens}, {"reference", ref_tokens}}}});
        auto add = [](RougeScore& acc, const RougeScore& s) {
            acc.precision += s.precision;
            acc.recall += s.recall;
            acc.f1 += s.f1;
        };
        add(sum1, r1);
        add(sum2, r2);
        add(suml, rl);
        add(sume, es);
        cand_tokens_sum += static_cast<double>(cand_tokens);
        ref_tokens_sum += static_cast<double>(ref_tokens);
    }

    json report;
    report["items"] = std::move(per_item);
    const double n = items.empty() ? 1.0 : static_cast<double>(items.size());
    auto mean = [n](const RougeScore& s) {
        return RougeScore{s.precision / n, s.recall / n, s.f1 / n};
    };
    report["aggregate"] = {{"items", items.size()},
                           {"rouge1", rouge_to_json(mean(sum1))},
                           {"rouge2", rouge_to_json(mean(sum2))},
                           {"rougeL", rouge_to_json(mean(suml))},
                           {"embed_score", rouge_to_json(mean(sume))},
                           {"tokens",
                            {{"candidate_mean", cand_tokens_sum / n},
                             {"reference_mean", ref_tokens_sum / n}}}};
    const std::string text = report.dump(2) + "\n";
    if (out.empty()) {
        std::cout << text;
    } else {
        atomic_write_file(out, text);
        std::cout << "evaluated " << items.size() << " pairs -> " << out << "\n";
    }
    return 0;
}

int cmd_stats(const Cli& cli, const CommonArgs& args) {
    auto tokenizer = cli.config.make_tokenizer();
    CorpusStats stats;
    if (args.format == "pairs") {
        stats = corpus_stats(read_pairs(args.in_path), *tokenizer);
    } else {
        stats = corpus_stats(read_transcripts(args.in_path, parse_format(args.format)), *tokenizer);
    }
    json out;
    out["items"] = stats.items;
    out["sentences"] = aggregate_to_json(stats.sentences);
    out["words"] = aggregate_to_json(stats.words);
    out["chars"] = aggregate_to_json(stats.chars);
    out["vocab"] = aggregate_to_json(stats.vocab);
    out["tokens"] = aggregate_to_json(stats.tokens);
    const std::string text = out.dump(2) + "\n";
    if (args.out.empty()) {
        std::cout << text;
    } else {
        atomic_write_file(args.out, text);
    }
    return 0;
}

std::vector<ReviewItem> read_review_items(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open file: " + path);
    }
    std::vector<ReviewItem> items;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("summary_x") || !j.contains("summary_y")) {
            throw ParseError("expected {\"id\"?, \"conversation\"?, \"summary_x\", \"summary_y\", "
                             "\"ground_truth\"?}",
                             line_no);
        }
        ReviewItem item;
        item.item_id = j.value("id", "item-" + std::to_string(items.size()));
        item.conversation = j.value("conversation", "");
        item.summary_x = j["summary_x"].get<std::string>();
        item.summary_y = j["summary_y"].get<std::string>();
        item.ground_truth = j.value("ground_truth", "");
        items.push_back(std::move(item));
    }
    return items;
}

int cmd_review_sheet(const Cli& cli, const std::string& in_path, const std::string& system_x,
                     const std::string& system_y, const std::string& sheet_path,
                     const std::string& key_path) {
    if (!cli.seed) {
        throw ConfigError("review-sheet requires --seed");
    }
    const auto items = read_review_items(in_path);
    auto [sheet, key] = make_review_sheet(items, system_x, system_y, *cli.seed);

    std::string sheet_csv = "item_id,conversation,summary_A,summary_B,ground_truth,choice\n";
    for (const auto& row : sheet.rows) {
        sheet_csv += csv_escape(row.item_id) + "," + csv_escape(row.conversation) + "," +
                     csv_escape(row.summary_a) + "," + csv_escape(row.summary_b) + "," +
                     csv_escape(row.ground_truth) + ",\n";
    }
    atomic_write_file(sheet_path, sheet_csv);

    std::string key_csv = "item_id,A_system,B_system\n";
    for (const auto& row : key.rows) {
        key_csv += csv_escape(row.item_id) + "," + csv_escape(row.a_system) + "," +
                   csv_escape(row.b_system) + "\n";
    }
    atomic_write_file(key_path, key_csv);

    std::cout << "wrote " << sheet.rows.size() << " items to " << sheet_path << " (key: " << key_path
              << ")\n";
    return 0;
}

std::vector<std::string> parse_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

ReviewKey read_key_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open file: " + path);
    }
    ReviewKey key;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty() || line_no == 1) {
            continue; // header
        }
        const auto fields = parse_csv_line(line);
        if (fields.size() != 3) {
            throw ParseError("key row must be item_id,A_system,B_system", line_no);
        }
        key.rows.push_back(KeyRow{fields[0], fields[1], fields[2]});
    }
    return key;
}

std::vector<PreferenceRecord> read_prefs_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open file: " + path);
    }
    std::vector<PreferenceRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty() || line_no == 1) {
            continue; // header
        }
        const auto fields = parse_csv_line(line);
        if (fields.size() != 3) {
            throw ParseError("preference row must be rater_id,item_id,choice", line_no);
        }
        records.push_back(PreferenceRecord{fields[0], fields[1], choice_from_string(trim(fields[2]))});
    }
    return records;
}

json win_rate_row_to_json(const WinRateRow& row) {
    json preferred = json::object();
    for (const auto& [system, count] : row.preferred) {
        preferred[system] = count;
    }
    json rates = json::object();
    json rates_2dp = json::object();
    for (const auto& [system, rate] : row.rates) {
        rates[system] = rate ? json(*rate) : json(nullptr);
        rates_2dp[system] = rate ? json(round2(*rate)) : json(nullptr);
    }
    return json{{"rater_id", row.rater_id},
                {"preferred", std::move(preferred)},
                {"ties", row.ties},
                {"win_rate", std::move(rates)},
                {"win_rate_2dp", std::move(rates_2dp)}};
}

int cmd_irr(const std::string& prefs_path, const std::string& key_path, const std::string& out) {
    const auto key = read_key_csv(key_path);
    const auto records = read_prefs_csv(prefs_path);
    const auto table = win_rate(records, key);

    // Group choices per item for agreement statistics over {A, B, TIE}.
    std::map<std::string, std::vector<Choice>> by_item;
    for (const auto& record : records) {
        by_item[record.item_id].push_back(record.choice);
    }
    std::vector<std::vector<Choice>> choices_per_item;
    for (auto& [item, choices] : by_item) {
        choices_per_item.push_back(choices);
    }
    const IrrResult irr = irr_from_choices(choices_per_item);

    json report;
    json per_rater = json::array();
    for (const auto& row : table.per_rater) {
        per_rater.push_back(win_rate_row_to_json(row));
    }
    report["per_rater"] = std::move(per_rater);
    report["total"] = win_rate_row_to_json(table.total);
    report["fleiss_kappa"] = irr.fleiss_kappa;
    report["krippendorff_alpha"] = irr.krippendorff_alpha;

    std::cout << std::fixed << std::setprecision(2);
    std::cout << "rater      ";
    for (const auto& [system, rate] : table.total.rates) {
        std::cout << std::setw(12) << system;
    }
    std::cout << std::setw(8) << "ties" << "\n";
    auto print_row = [&](const WinRateRow& row) {
        std::cout << std::setw(10) << std::left << row.rater_id << std::right << " ";
        for (const auto& [system, rate] : row.rates) {
            if (rate) {
                std::cout << std::setw(12) << round2(*rate);
            } else {
                std::cout << std::setw(12) << "n/a";
            }
        }
        std::cout << std::setw(8) << row.ties << "\n";
    };
    for (const auto& row : table.per_rater) {
        print_row(row);
    }
    print_row(table.total);
    std::cout << "fleiss_kappa=" << std::setprecision(5) << irr.fleiss_kappa
              << " krippendorff_alpha=" << irr.krippendorff_alpha << "\n";

    if (!out.empty()) {
        atomic_write_file(out, report.dump(2) + "\n");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Retrieval-filtered SOAP summarization pipeline"};
    app.require_subcommand(1);
    app.fallthrough();

    Cli cli;
    app.add_option("--config", cli.config_path, "TOML config file");
    app.add_option("--jobs", cli.jobs, "parallel workers for batch commands")->check(CLI::Range(1, 256));
    std::uint64_t seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "seed for review-sheet shuffling");

    // Config overrides, one flag per config key.
    std::map<std::string, std::string> string_overrides;
    std::map<std::string, double> number_overrides;
    auto add_string_override = [&](const std::string& flag, const char* help) {
        string_overrides[flag];
        app.add_option("--" + flag, string_overrides[flag], help);
    };
    auto add_number_override = [&](const std::string& flag, const char* help) {
        number_overrides[flag];
        app.add_option("--" + flag, number_overrides[flag], help);
    };
    add_string_override("embed-kind", "embedding provider kind (test|http)");
    add_string_override("embed-base-url", "embedding service base URL");
    add_string_override("embed-model", "embedding model name");
    add_number_override("dim", "embedding dimension");
    add_string_override("gen-kind", "generator kind (stub|http)");
    add_string_override("gen-base-url", "chat endpoint base URL");
    add_string_override("gen-model", "generator model name");
    add_number_override("temperature", "sampling temperature");
    add_number_override("max-tokens", "generation token cap");
    add_string_override("stub-response-file", "canned response file for the stub generator");
    add_number_override("w-sparse", "sparse retriever weight");
    add_number_override("w-dense", "dense retriever weight");
    add_number_override("rrf-lambda", "rank fusion constant");
    add_number_override("top-k-per-retriever", "per-retriever candidate count");
    add_number_override("top-k-final", "chunks kept after fusion");
    add_number_override("k1", "BM25 k1");
    add_number_override("b", "BM25 b");
    add_string_override("query", "retrieval prompt");
    add_string_override("instruction", "generation instruction");
    add_string_override("tokenizer", "token counter (whitespace|word)");

    CommonArgs index_args, retrieve_args, summarize_args, stats_args;
    bool explain = false;

    auto* index_cmd = app.add_subcommand("index", "build and save per-transcript chunk indexes");
    index_cmd->add_option("--in", index_args.in_path, "input transcripts")->required();
    index_cmd->add_option("--format", index_args.format, "jsonl|txt");
    index_cmd->add_option("--out", index_args.out, "output directory")->required();

    auto* retrieve_cmd = app.add_subcommand("retrieve", "run retriever-based filtering");
    retrieve_cmd->add_option("--in", retrieve_args.in_path, "input transcripts")->required();
    retrieve_cmd->add_option("--format", retrieve_args.format, "jsonl|txt");
    retrieve_cmd->add_option("--out", retrieve_args.out, "output directory")->required();
    retrieve_cmd->add_flag("--explain", explain, "include the per-candidate audit dump");

    auto* summarize_cmd = app.add_subcommand("summarize", "filter and generate SOAP summaries");
    summarize_cmd->add_option("--in", summarize_args.in_path, "input transcripts")->required();
    summarize_cmd->add_option("--format", summarize_args.format, "jsonl|txt");
    summarize_cmd->add_option("--out", summarize_args.out, "output directory")->required();

    std::string eval_in, eval_out;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "score candidate summaries against references");
    evaluate_cmd->add_option("--in", eval_in, "JSONL of {id?, candidate, reference}")->required();
    evaluate_cmd->add_option("--out", eval_out, "report path (stdout when omitted)");

    auto* stats_cmd = app.add_subcommand("stats", "corpus statistics");
    stats_cmd->add_option("--in", stats_args.in_path, "input file")->required();
    stats_cmd->add_option("--format", stats_args.format, "jsonl|txt|pairs");
    stats_cmd->add_option("--out", stats_args.out, "output path (stdout when omitted)");

    std::string review_in, system_x = "system_x", system_y = "system_y", sheet_path, key_out_path;
    auto* review_cmd = app.add_subcommand("review-sheet", "anonymized A/B sheet + assignment key");
    review_cmd->add_option("--in", review_in, "JSONL of {id?, conversation?, summary_x, summary_y, ground_truth?}")
        ->required();
    review_cmd->add_option("--system-x", system_x, "name of system X");
    review_cmd->add_option("--system-y", system_y, "name of system Y");
    review_cmd->add_option("--sheet", sheet_path, "sheet CSV path")->required();
    review_cmd->add_option("--key", key_out_path, "key CSV path")->required();

    std::string prefs_path, key_in_path, irr_out;
    auto* irr_cmd = app.add_subcommand("irr", "win rates and inter-rater reliability");
    irr_cmd->add_option("--prefs", prefs_path, "preferences CSV (rater_id,item_id,choice)")->required();
    irr_cmd->add_option("--key", key_in_path, "key CSV from review-sheet")->required();
    irr_cmd->add_option("--out", irr_out, "report path (optional)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    try {
        if (!cli.config_path.empty()) {
            cli.config = load_config(cli.config_path);
        }
        if (seed_opt->count() > 0) {
            cli.seed = seed_value;
        }

        auto provided = [&](const std::string& flag) { return app.count("--" + flag) > 0; };
        auto& c = cli.config;
        if (provided("embed-kind")) c.embed_kind = string_overrides["embed-kind"];
        if (provided("embed-base-url")) c.embed_base_url = string_overrides["embed-base-url"];
        if (provided("embed-model")) c.embed_model = string_overrides["embed-model"];
        if (provided("dim")) c.dim = static_cast<std::size_t>(number_overrides["dim"]);
        if (provided("gen-kind")) c.gen_kind = string_overrides["gen-kind"];
        if (provided("gen-base-url")) c.gen_base_url = string_overrides["gen-base-url"];
        if (provided("gen-model")) c.gen_model = string_overrides["gen-model"];
        if (provided("temperature")) c.temperature = number_overrides["temperature"];
        if (provided("max-tokens")) c.max_tokens = static_cast<int>(number_overrides["max-tokens"]);
        if (provided("stub-response-file")) c.stub_response_file = string_overrides["stub-response-file"];
        if (provided("w-sparse")) c.fusion.w_sparse = number_overrides["w-sparse"];
        if (provided("w-dense")) c.fusion.w_dense = number_overrides["w-dense"];
        if (provided("rrf-lambda")) c.fusion.rrf_lambda = number_overrides["rrf-lambda"];
        if (provided("top-k-per-retriever"))
            c.fusion.top_k_per_retriever = static_cast<std::size_t>(number_overrides["top-k-per-retriever"]);
        if (provided("top-k-final"))
            c.fusion.top_k_final = static_cast<std::size_t>(number_overrides["top-k-final"]);
        if (provided("k1")) c.k1 = number_overrides["k1"];
        if (provided("b")) c.b = number_overrides["b"];
        if (provided("query")) c.query = string_overrides["query"];
        if (provided("instruction")) c.instruction = string_overrides["instruction"];
        if (provided("tokenizer")) c.tokenizer_kind = string_overrides["tokenizer"];
        c.validate();

        if (index_cmd->parsed()) {
            return cmd_index(cli, index_args);
        }
        if (retrieve_cmd->parsed()) {
            return cmd_retrieve(cli, retrieve_args, explain);
        }
        if (summarize_cmd->parsed()) {
            return cmd_summarize(cli, summarize_args);
        }
        if (evaluate_cmd->parsed()) {
            return cmd_evaluate(cli, eval_in, eval_out);
        }
        if (stats_cmd->parsed()) {
            return cmd_stats(cli, stats_args);
        }
        if (review_cmd->parsed()) {
            return cmd_review_sheet(cli, review_in, system_x, system_y, sheet_path, key_out_path);
        }
        if (irr_cmd->parsed()) {
            return cmd_irr(prefs_path, key_in_path, irr_out);
        }
        std::cerr << "no subcommand given\n";
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
