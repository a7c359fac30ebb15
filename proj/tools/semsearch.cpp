// Command-line front end: index a corpus, expand and run single queries,
// evaluate run files against qrels.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "semsearch/activation.hpp"
#include "semsearch/evaluation.hpp"
#include "semsearch/index.hpp"
#include "semsearch/knowledge_base.hpp"
#include "semsearch/query_analysis.hpp"
#include "semsearch/text.hpp"

namespace {

using namespace semsearch;

struct RunConfig {
    std::string kb_dir = "data/kb";
    std::string phrases = "data/phrases.tsv";
    std::string class_lexicon = "data/class_lexicon.tsv";
    std::string stopwords = "data/stopwords.txt";
    std::string corpus = "data/corpus.jsonl";
    std::string index_path = "data/index.json";
    std::string qrels = "data/qrels.txt";
    std::string strategy = "rcsa";
    std::int64_t k = 10;
    std::int64_t permutations = 100000;
    std::uint64_t seed = 42;
    std::uint64_t max_added = 0;
    std::string qid = "q1";
    bool explain = false;
    bool json = false;
    bool exhaustive = false;
};

struct QueryPipeline {
    KnowledgeBase kb;
    PhraseDictionary dict{{}};
    ClassLexicon lexicon{{}};
    StopwordSet stopword_set;

    explicit QueryPipeline(const RunConfig& config)
        : kb(load_knowledge_base(config.kb_dir + "/classes.tsv", config.kb_dir + "/entities.tsv",
                                 config.kb_dir + "/relations.tsv", config.kb_dir + "/facts.tsv")),
          dict(load_phrase_dictionary(config.phrases, kb)),
          lexicon(load_class_lexicon(config.class_lexicon, kb)),
          stopword_set(load_stopwords(config.stopwords)) {}

    struct Expansion {
        QueryAnalysis analysis;
        std::optional<ActivationResult> activation;
        ExpandedQuery expanded;
    };

    Expansion expand_query(const std::string& query, const RunConfig& config) const {
        Expansion result;
        result.analysis = analyze_query(query, kb, dict, lexicon);
        if (config.strategy == "csa") {
            std::set<std::string> seeds;
            for (const std::string& id : result.analysis.mentioned_entities()) seeds.insert(id);
            result.activation = distance_constrained_spread(kb, seeds);
        } else if (config.strategy == "rcsa") {
            result.activation = relation_constrained_spread(kb, result.analysis.patterns);
        }
        std::vector<std::string> token_texts;
        for (const Token& token : result.analysis.tokens) token_texts.push_back(token.text);
        static const ActivationResult kNoActivation{};
        result.expanded =
            expand(token_texts, result.activation ? *result.activation : kNoActivation, kb,
                   stopword_set, config.max_added);
        return result;
    }

    /// Disjunctive term set ready for ranking: every expanded term stemmed,
    /// duplicates removed.
    std::vector<std::string> search_terms(const ExpandedQuery& expanded) const {
        std::vector<std::string> terms;
        std::set<std::string> seen;
        for (const std::string& term : expanded.terms()) {
            std::string stem = porter_stem(term);
            if (seen.insert(stem).second) terms.push_back(std::move(stem));
        }
        return terms;
    }
};

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const std::string& part : parts) {
        if (!out.empty()) out.push_back(' ');
        out += part;
    }
    return out;
}

void print_expansion(const QueryPipeline::Expansion& expansion, const RunConfig& config,
                     std::ostream& out) {
    if (config.json) {
        nlohmann::json j;
        j["strategy"] = config.strategy;
        j["original"] = expansion.expanded.original_terms;
        j["added"] = expansion.expanded.added_terms;
        if (config.explain) {
            nlohmann::json patterns = nlohmann::json::array();
            for (const RelationPattern& pattern : expansion.analysis.patterns) {
                patterns.push_back({{"anchor", pattern.anchor},
                                    {"relation", pattern.relation},
                                    {"target_class", pattern.target_class},
                                    {"anchor_role", to_string(pattern.anchor_role)}});
            }
            j["patterns"] = std::move(patterns);
            j["notes"] = expansion.analysis.notes;
            nlohmann::json trace = nlohmann::json::array();
            if (expansion.activation) {
                for (const ActivationTraceEntry& entry : expansion.activation->trace) {
                    trace.push_back({{"entity", entry.entity},
                                     {"origin", entry.origin},
                                     {"fact",
                                      {{"subject", entry.fact.subject},
                                       {"relation", entry.fact.relation},
                                       {"object", entry.fact.object}}}});
                }
            }
            j["trace"] = std::move(trace);
        }
        out << j.dump(2) << '\n';
        return;
    }

    out << "original: " << join(expansion.expanded.original_terms) << '\n';
    if (expansion.expanded.added_terms.empty()) {
        out << "added: (none)\n";
    } else {
        out << "added: " << join(expansion.expanded.added_terms) << '\n';
    }
    if (!config.explain) return;

    for (const RelationPattern& pattern : expansion.analysis.patterns) {
        out << "pattern: anchor=" << pattern.anchor << " relation=" << pattern.relation
            << " target=" << pattern.target_class
            << " anchor_role=" << to_string(pattern.anchor_role) << '\n';
    }
    for (const std::string& note : expansion.analysis.notes) out << "note: " << note << '\n';
    if (expansion.activation) out << serialize_trace(*expansion.activation);
}

int cmd_index(const RunConfig& config) {
    StopwordSet stopword_set = load_stopwords(config.stopwords);
    InvertedIndex index = build_index(read_corpus_jsonl(config.corpus), stopword_set);
    save_index(index, config.index_path);
    std::cout << "N=" << index.doc_count() << '\n'
              << "vocabulary=" << index.vocabulary_size() << '\n';
    return 0;
}

int cmd_expand(const RunConfig& config, const std::string& query) {
    QueryPipeline pipeline(config);
    print_expansion(pipeline.expand_query(query, config), config, std::cout);
    return 0;
}

int cmd_search(const RunConfig& config, const std::string& query) {
    QueryPipeline pipeline(config);
    InvertedIndex index = load_index(config.index_path);
    QueryPipeline::Expansion expansion = pipeline.expand_query(query, config);
    std::vector<ScoredDoc> results = rank(index, pipeline.search_terms(expansion.expanded),
                                          config.k);
    char score_text[64];
    for (std::size_t i = 0; i < results.size(); ++i) {
        std::snprintf(score_text, sizeof(score_text), "%.6f", results[i].score);
        std::cout << config.qid << " Q0 " << results[i].doc << ' ' << i + 1 << ' ' << score_text
                  << ' ' << config.strategy << '\n';
    }
    return 0;
}

int cmd_eval(const RunConfig& config, const std::string& run_a_path,
             const std::string& run_b_path) {
    Qrels qrels = load_qrels(config.qrels);
    Run run_a = load_run(run_a_path);
    std::optional<Run> run_b;
    std::string tag_b = "B";
    if (!run_b_path.empty()) {
        run_b = load_run(run_b_path);
        tag_b = run_b_path;
    }
    EvalReport report = build_eval_report(run_a, run_a_path, run_b, tag_b, qrels,
                                          config.exhaustive ? 0 : config.permutations,
                                          config.seed);
    if (config.json) {
        std::cout << report_to_json(report) << '\n';
    } else {
        std::cout << render_report_table(report);
    }
    return 0;
}

int cmd_repl(const RunConfig& config) {
    QueryPipeline pipeline(config);
    InvertedIndex index = load_index(config.index_path);
    std::string line;
    while (std::getline(std::cin, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        QueryPipeline::Expansion expansion = pipeline.expand_query(line, config);
        print_expansion(expansion, config, std::cout);
        std::vector<ScoredDoc> results =
            rank(index, pipeline.search_terms(expansion.expanded), config.k);
        char score_text[64];
        for (std::size_t i = 0; i < results.size(); ++i) {
            std::snprintf(score_text, sizeof(score_text), "%.6f", results[i].score);
            std::cout << "  " << i + 1 << ". " << results[i].doc << "  " << score_text << '\n';
        }
        std::cout.flush();
    }
    return 0;
}

void add_kb_options(CLI::App* cmd, RunConfig& config) {
    cmd->add_option("--kb-dir", config.kb_dir, "directory with the four ontology TSV files");
    cmd->add_option("--phrases", config.phrases, "relation phrase dictionary");
    cmd->add_option("--class-lexicon", config.class_lexicon, "wh-word / class-noun rules");
    cmd->add_option("--stopwords", config.stopwords, "stopword list, one token per line");
    cmd->add_option("--strategy", config.strategy, "expansion strategy")
        ->check(CLI::IsMember({"lexical", "csa", "rcsa"}));
    cmd->add_option("--max-added", config.max_added,
                    "cap on activated entities added to the query (0 = unlimited)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ontology-driven query expansion and document retrieval"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read defaults from an INI/TOML file");

    RunConfig config;
    std::string query;
    std::string run_a_path;
    std::string run_b_path;

    CLI::App* index_cmd = app.add_subcommand("index", "build and persist the inverted index");
    index_cmd->add_option("--corpus", config.corpus, "JSON-lines corpus");
    index_cmd->add_option("--index", config.index_path, "output index file");
    index_cmd->add_option("--stopwords", config.stopwords, "stopword list");

    CLI::App* expand_cmd = app.add_subcommand("expand", "expand a natural-language query");
    add_kb_options(expand_cmd, config);
    expand_cmd->add_flag("--explain", config.explain, "print patterns and activation trace");
    expand_cmd->add_flag("--json", config.json, "JSON output");
    expand_cmd->add_option("query", query, "query text")->required();

    CLI::App* search_cmd = app.add_subcommand("search", "expand a query and rank documents");
    add_kb_options(search_cmd, config);
    search_cmd->add_option("--index", config.index_path, "index file");
    search_cmd->add_option("--k", config.k, "result cap")->check(CLI::PositiveNumber);
    search_cmd->add_option("--qid", config.qid, "query id used in the run output");
    search_cmd->add_option("query", query, "query text")->required();

    CLI::App* eval_cmd = app.add_subcommand("eval", "score run files against qrels");
    eval_cmd->add_option("run_a", run_a_path, "run file for model A")->required();
    eval_cmd->add_option("run_b", run_b_path, "optional run file for model B");
    eval_cmd->add_option("--qrels", config.qrels, "TREC-style qrels");
    eval_cmd->add_option("--permutations", config.permutations,
                         "sample size S for the randomization test")
        ->check(CLI::PositiveNumber);
    eval_cmd->add_flag("--exhaustive", config.exhaustive,
                       "enumerate all sign permutations (needs <= 20 queries)");
    eval_cmd->add_option("--seed", config.seed, "randomization seed");
    eval_cmd->add_flag("--json", config.json, "JSON report instead of the table");

    CLI::App* repl_cmd = app.add_subcommand("repl", "read queries from stdin, print results");
    add_kb_options(repl_cmd, config);
    repl_cmd->add_option("--index", config.index_path, "index file");
    repl_cmd->add_option("--k", config.k, "result cap")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (index_cmd->parsed()) return cmd_index(config);
        if (expand_cmd->parsed()) return cmd_expand(config, query);
        if (search_cmd->parsed()) return cmd_search(config, query);
        if (eval_cmd->parsed()) return cmd_eval(config, run_a_path, run_b_path);
        if (repl_cmd->parsed()) return cmd_repl(config);
    } catch (const semsearch::DataError& e) {
        std::cerr << "error (" << semsearch::to_string(e.kind()) << "): " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
