// rsim: residualized-similarity authorship verification CLI.
//
// Exit codes: 0 success (verify: same author), 1 I/O or usage error,
// 2 corpus exhausted, 3 verify decided different author, 4 registry
// fingerprint mismatch, 5 non-finite training loss.
//
// Machine-readable JSON goes to stdout; logs go to stderr.

#include "CLI11.hpp"

#include "rsim/contrastive.hpp"
#include "rsim/corpus.hpp"
#include "rsim/errors.hpp"
#include "rsim/evalstats.hpp"
#include "rsim/interpret.hpp"
#include "rsim/pipeline.hpp"

#include <filesystem>
#include <iostream>
#include <sstream>

namespace {

using namespace rsim;
namespace fs = std::filesystem;

// Accepts both TOML (CLI11's native config dialect) and JSON config files,
// sniffed by the first non-whitespace byte.
class SniffingConfig : public CLI::ConfigTOML {
public:
    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        std::stringstream buffer;
        buffer << input.rdbuf();
        const std::string text = buffer.str();
        const std::size_t pos = text.find_first_not_of(" \t\r\n");
        if (pos != std::string::npos && text[pos] == '{') {
            std::vector<CLI::ConfigItem> items;
            flatten(json::parse(text), {}, items);
            return items;
        }
        std::stringstream again(text);
        return CLI::ConfigTOML::from_config(again);
    }

private:
    static void flatten(const json& j, std::vector<std::string> parents,
                        std::vector<CLI::ConfigItem>& items) {
        for (const auto& [key, value] : j.items()) {
            if (value.is_object()) {
                auto nested = parents;
                nested.push_back(key);
                flatten(value, std::move(nested), items);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = key;
            if (value.is_array()) {
                for (const auto& el : value)
                    item.inputs.push_back(el.is_string() ? el.get<std::string>() : el.dump());
            } else {
                item.inputs.push_back(value.is_string() ? value.get<std::string>()
                                                        : value.dump());
            }
            items.push_back(std::move(item));
        }
    }
};

json load_model_json(const fs::path& path) { return read_json_file(path); }

bool is_contrastive_model(const json& j) {
    return j.value("kind", "residual") == std::string("contrastive");
}

StandardizationStats load_stats(const fs::path& path) {
    return stats_from_json(read_json_file(path));
}

// Scores file line: {"score": final, "sim": s, "label": +-1, "intconf": ic}
void write_scores_jsonl(const fs::path& path, const PairScores& scored) {
    std::vector<json> rows;
    rows.reserve(scored.scores.size());
    for (std::size_t i = 0; i < scored.scores.size(); ++i) {
        const PairScore& ps = scored.scores[i];
        rows.push_back(json{{"score", ps.final_score},
                            {"sim", ps.sim},
                            {"label", scored.labels[i]},
                            {"intconf", ps.intconf}});
    }
    write_jsonl_file(path, rows);
}

ScoredSet load_scores_jsonl(const fs::path& path, const std::string& tag) {
    ScoredSet s;
    s.system_tag = tag;
    for (const json& row : read_jsonl_file(path)) {
        s.scores.push_back(row.at("score").get<double>());
        s.labels.push_back(row.at("label").get<int>());
    }
    return s;
}

struct CommandState {
    int exit_code = 0;
};

void cmd_synth(std::size_t authors, std::size_t docs, std::size_t words,
               const std::string& profile, std::uint64_t seed, const std::string& out) {
    const AuthorCorpus corpus =
        generate_synthetic_corpus(authors, docs, words, seed, GeneratorProfile::get(profile));
    save_corpus_jsonl(out, corpus);
    std::cout << json{{"format_version", kFormatVersion},
                      {"seed", seed},
                      {"profile", profile},
                      {"authors", corpus.authors.size()},
                      {"documents", corpus.document_count()},
                      {"out", out}}
                     .dump(2)
              << "\n";
}

void cmd_sample(const std::string& corpus_path, std::size_t train, std::size_t val,
                std::size_t test, std::size_t min_words, bool apply_redaction,
                std::uint64_t seed, const std::string& out_dir) {
    AuthorCorpus corpus = load_corpus_jsonl(corpus_path);
    if (apply_redaction) {
        for (auto& [_, docs] : corpus.authors)
            for (std::string& d : docs) d = redact(d);
        std::cerr << "redaction applied to " << corpus.document_count() << " documents\n";
    }
    const AuthorCorpus filtered = filter_corpus(corpus, min_words);
    std::cerr << "filtered corpus: " << filtered.authors.size() << "/" << corpus.authors.size()
              << " authors kept\n";

    SplitSpec spec;
    spec.train_pairs = train;
    spec.val_pairs = val;
    spec.test_pairs = test;
    spec.min_words = min_words;
    spec.seed = seed;
    const SampledSplits splits = sample_pairs(filtered, spec);

    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    save_pairs_jsonl(dir / "train_pairs.jsonl", splits.train);
    save_pairs_jsonl(dir / "val_pairs.jsonl", splits.val);
    save_pairs_jsonl(dir / "test_pairs.jsonl", splits.test);

    const json manifest{
        {"format_version", kFormatVersion},
        {"seed", seed},
        {"min_words", min_words},
        {"requested", {{"train", train}, {"val", val}, {"test", test}}},
        {"written",
         {{"train", splits.train.pairs.size()},
          {"val", splits.val.pairs.size()},
          {"test", splits.test.pairs.size()}}},
        {"label_ratio", "1:1"},
        {"files",
         {{"train", "train_pairs.jsonl"},
          {"val", "val_pairs.jsonl"},
          {"test", "test_pairs.jsonl"}}},
    };
    write_json_file(dir / "manifest.json", manifest);
    std::cout << manifest.dump(2) << "\n";
}

void cmd_fit_stats(const std::string& pairs_path, const std::string& registry_name,
                   std::uint64_t seed, const std::string& out) {
    const PairSet pairs = load_pairs_jsonl(pairs_path);
    const FeatureRegistry& registry = FeatureRegistry::get(registry_name);
    const StandardizationStats stats = fit_stats_on_pairs(pairs, registry);
    json j = stats_to_json(stats, seed);
    j["registry"] = registry_name;
    write_json_file(out, j);
    std::cout << json{{"out", out},
                      {"registry", registry_name},
                      {"registry_fingerprint", stats.registry_fingerprint},
                      {"n", stats.fitted_on}}
                     .dump(2)
              << "\n";
}

struct TrainArgs {
    std::string train_path, val_path, stats_path, registry_name = "core";
    std::string variant = "combined";
    std::string out;
    TrainConfig tc;
    std::size_t embedding_dims = 256;
    double output_scale = 2.0;
    double dropout = 0.1;
    std::size_t attn_width = 256, hidden1 = 128, hidden2 = 64;
    bool contrastive = false;
    double margin = 0.5;
    std::size_t proj_dim = 64;
};

void cmd_train(const TrainArgs& args) {
    const PairSet train_pairs = load_pairs_jsonl(args.train_path);
    const PairSet val_pairs = load_pairs_jsonl(args.val_path);
    const FeatureRegistry& registry = FeatureRegistry::get(args.registry_name);
    const StandardizationStats stats = load_stats(args.stats_path);
    if (stats.registry_fingerprint != registry.fingerprint())
        throw FingerprintMismatch("stats fingerprint " + stats.registry_fingerprint +
                                  " does not match registry '" + args.registry_name + "' (" +
                                  registry.fingerprint() + ")");

    const EmbeddingConfig ecfg{args.embedding_dims};
    const PreparedDocs train_docs = prepare_docs(train_pairs, registry, stats, ecfg);
    const PreparedDocs val_docs = prepare_docs(val_pairs, registry, stats, ecfg);

    if (args.contrastive) {
        ContrastiveConfig ccfg;
        ccfg.emb_dim = args.embedding_dims;
        ccfg.proj_dim = args.proj_dim;
        ccfg.margin = args.margin;
        const ContrastiveModel model = train_contrastive_baseline(
            build_emb_pairs(train_pairs, train_docs), build_emb_pairs(val_pairs, val_docs),
            ccfg, args.tc);
        write_json_file(args.out, model.to_json());
        std::cout << json{{"out", args.out},
                          {"kind", "contrastive"},
                          {"epochs", model.meta.epochs_run},
                          {"best_val_loss", model.meta.best_val_loss}}
                         .dump(2)
                  << "\n";
        return;
    }

    ModelConfig mcfg;
    mcfg.variant = variant_from_name(args.variant);
    mcfg.fv_dim = registry.size();
    mcfg.emb_dim = args.embedding_dims;
    mcfg.embedding_dims = args.embedding_dims;
    mcfg.attn_width = args.attn_width;
    mcfg.hidden1 = args.hidden1;
    mcfg.hidden2 = args.hidden2;
    mcfg.dropout = args.dropout;
    mcfg.output_scale = args.output_scale;
    mcfg.registry_name = args.registry_name;
    mcfg.registry_fingerprint = registry.fingerprint();

    const ResidualModel model = train(build_examples(train_pairs, train_docs),
                                      build_examples(val_pairs, val_docs), mcfg, args.tc);
    write_json_file(args.out, model.to_json());
    std::cout << json{{"out", args.out},
                      {"kind", "residual"},
                      {"variant", args.variant},
                      {"epochs", model.meta.epochs_run},
                      {"best_val_loss", model.meta.best_val_loss}}
                     .dump(2)
              << "\n";
}

struct EvaluateArgs {
    std::string pairs_path, stats_path, model_path;
    std::string report_path, roc_csv_path, scores_out;
    std::string calibrate; // "", "accuracy", "f1"
    std::string val_pairs_path;
    std::string stats_mode = "train"; // or "respective"
    double threshold = 0.5;
    std::size_t bootstrap_iterations = 10000;
    std::uint64_t seed = 42;
    std::vector<std::string> compare;
};

void cmd_evaluate(const EvaluateArgs& args) {
    if (!args.compare.empty()) {
        const ScoredSet a = load_scores_jsonl(args.compare[0], args.compare[0]);
        const ScoredSet b = load_scores_jsonl(args.compare[1], args.compare[1]);
        const BootstrapResult r =
            paired_bootstrap(a, b, args.bootstrap_iterations, args.seed);
        const json out{{"format_version", kFormatVersion},
                       {"seed", args.seed},
                       {"a", args.compare[0]},
                       {"b", args.compare[1]},
                       {"auc_a", auc(a)},
                       {"auc_b", auc(b)},
                       {"delta_auc", r.delta_auc},
                       {"p_value", r.p_value},
                       {"iterations", r.iterations}};
        if (!args.report_path.empty()) write_json_file(args.report_path, out);
        std::cout << out.dump(2) << "\n";
        return;
    }

    const PairSet pairs = load_pairs_jsonl(args.pairs_path);
    const json model_json = load_model_json(args.model_path);

    if (is_contrastive_model(model_json)) {
        const ContrastiveModel model = ContrastiveModel::from_json(model_json);
        const ScoredSet scored = score_pairs_contrastive(pairs, model);
        const EvalReport report = evaluate_scored(scored, args.threshold);
        json out{{"format_version", kFormatVersion},
                 {"seed", args.seed},
                 {"threshold", args.threshold},
                 {"n_pairs", pairs.pairs.size()},
                 {"systems", json::array({report_to_json(report)})}};
        if (!args.report_path.empty()) write_json_file(args.report_path, out);
        if (!args.roc_csv_path.empty()) write_roc_csv(args.roc_csv_path, report.curve);
        std::cout << out.dump(2) << "\n";
        return;
    }

    const ResidualModel model = ResidualModel::from_json(model_json);
    StandardizationStats stats = load_stats(args.stats_path);
    if (args.stats_mode == "respective") {
        // z-score against the evaluated dataset itself instead of the
        // training-split statistics
        const FeatureRegistry& registry = FeatureRegistry::get(model.config().registry_name);
        stats = fit_stats_on_pairs(pairs, registry);
        std::cerr << "stats-mode=respective: refitted standardization on " << stats.fitted_on
                  << " evaluation documents\n";
    } else if (args.stats_mode != "train") {
        throw Error("--stats-mode must be 'train' or 'respective'");
    }

    double threshold = args.threshold;
    std::string objective = "fixed";
    if (!args.calibrate.empty()) {
        if (args.val_pairs_path.empty()) throw Error("--calibrate requires --val-pairs");
        const PairSet val_pairs = load_pairs_jsonl(args.val_pairs_path);
        const PairScores val_scored = score_pairs(val_pairs, model, stats, args.threshold);
        if (args.calibrate != "accuracy" && args.calibrate != "f1")
            throw Error("--calibrate must be 'accuracy' or 'f1'");
        const ThresholdObjective obj = args.calibrate == "accuracy"
                                           ? ThresholdObjective::accuracy()
                                           : ThresholdObjective::f1();
        threshold = calibrate_threshold(val_scored.rs_set(), obj);
        objective = args.calibrate;
        std::cerr << "calibrated threshold (" << objective << "): " << threshold << "\n";
    }

    const PairScores scored = score_pairs(pairs, model, stats, threshold);
    const ScoredSet rs = scored.rs_set();
    const ScoredSet interp = scored.interp_set();
    const EvalReport rs_report = evaluate_scored(rs, threshold);
    const EvalReport interp_report = evaluate_scored(interp, threshold);
    const BootstrapResult bs =
        paired_bootstrap(rs, interp, args.bootstrap_iterations, args.seed);

    const json out{
        {"format_version", kFormatVersion},
        {"seed", args.seed},
        {"threshold", threshold},
        {"threshold_objective", objective},
        {"stats_mode", args.stats_mode},
        {"n_pairs", pairs.pairs.size()},
        {"zero_norm_warnings", scored.zero_norm_count},
        {"systems",
         json::array({report_to_json(rs_report), report_to_json(interp_report)})},
        {"comparison",
         {{"a", "rs"},
          {"b", "interpretable"},
          {"delta_auc", bs.delta_auc},
          {"p_value", bs.p_value},
          {"iterations", bs.iterations}}},
    };
    if (!args.report_path.empty()) write_json_file(args.report_path, out);
    if (!args.roc_csv_path.empty()) write_roc_csv(args.roc_csv_path, rs_report.curve);
    if (!args.scores_out.empty()) write_scores_jsonl(args.scores_out, scored);
    std::cout << out.dump(2) << "\n";
}

void cmd_verify(const std::string& doc1_path, const std::string& doc2_path,
                const std::string& stats_path, const std::string& model_path,
                double threshold, CommandState& state) {
    const std::string doc1 = read_text_file(doc1_path);
    const std::string doc2 = read_text_file(doc2_path);
    const ResidualModel model = ResidualModel::from_json(load_model_json(model_path));
    const StandardizationStats stats = load_stats(stats_path);

    // scoring only; the explain command adds ranked features
    const Explanation e = explain_pair(doc1, doc2, model, stats, threshold, 1);
    const PairScore& ps = e.score;
    std::cout << json{{"format_version", kFormatVersion},
                      {"sim", ps.sim},
                      {"residual_pred", ps.residual_pred},
                      {"final", ps.final_score},
                      {"threshold", ps.threshold},
                      {"predicted", ps.predicted_label},
                      {"g2v_predicted", ps.g2v_label},
                      {"flipped", ps.flipped},
                      {"intconf", ps.intconf},
                      {"zero_norm_warning", ps.sim_zero_norm}}
                     .dump(2)
              << "\n";
    state.exit_code = ps.predicted_label > 0 ? 0 : 3;
}

struct ExplainArgs {
    std::string pairs_path, doc1_path, doc2_path;
    std::string stats_path, model_path;
    std::string out, text_out;
    double threshold = 0.5;
    std::size_t n_features = 5;
};

void cmd_explain(const ExplainArgs& args) {
    const ResidualModel model = ResidualModel::from_json(load_model_json(args.model_path));
    const StandardizationStats stats = load_stats(args.stats_path);

    if (!args.doc1_path.empty()) {
        const std::string doc1 = read_text_file(args.doc1_path);
        const std::string doc2 = read_text_file(args.doc2_path);
        const Explanation e =
            explain_pair(doc1, doc2, model, stats, args.threshold, args.n_features);
        std::cout << explanation_to_json(e).dump(2) << "\n";
        if (!args.text_out.empty())
            write_text_file(args.text_out, explanation_text(e, doc1, doc2));
        return;
    }

    const PairSet pairs = load_pairs_jsonl(args.pairs_path);
    std::vector<json> rows;
    std::ostringstream text;
    std::vector<PairScore> scores;
    for (std::size_t i = 0; i < pairs.pairs.size(); ++i) {
        char id[32];
        std::snprintf(id, sizeof id, "pair_%04zu", i);
        const Explanation e = explain_pair(pairs.doc1(i), pairs.doc2(i), model, stats,
                                           args.threshold, args.n_features, id);
        rows.push_back(explanation_to_json(e));
        scores.push_back(e.score);
        if (!args.text_out.empty())
            text << explanation_text(e, pairs.doc1(i), pairs.doc2(i)) << "\n";
    }
    if (!args.out.empty()) write_jsonl_file(args.out, rows);
    if (!args.text_out.empty()) write_text_file(args.text_out, text.str());

    const IntconfHistogram hist = intconf_distribution(scores);
    std::cout << json{{"format_version", kFormatVersion},
                      {"pairs", rows.size()},
                      {"out", args.out},
                      {"intconf", histogram_to_json(hist)}}
                     .dump(2)
              << "\n";
}

void cmd_xdomain(const std::string& spec_path, const std::string& out_path,
                 std::uint64_t seed) {
    const json spec = read_json_file(spec_path);
    std::map<std::string, DomainSystem> systems;
    std::map<std::string, PairSet> tests;
    for (const json& domain : spec.at("domains")) {
        const std::string name = domain.at("name").get<std::string>();
        DomainSystem sys;
        sys.model =
            ResidualModel::from_json(load_model_json(domain.at("model").get<std::string>()));
        sys.stats = load_stats(domain.at("stats").get<std::string>());
        systems.emplace(name, std::move(sys));
        tests.emplace(name, load_pairs_jsonl(domain.at("pairs").get<std::string>()));
    }
    const XMatrix matrix = cross_domain_eval(systems, tests);
    json out = xmatrix_to_json(matrix);
    out["seed"] = seed;
    if (!out_path.empty()) write_json_file(out_path, out);
    std::cout << out.dump(2) << "\n";
}

void cmd_registry(const std::string& registry_name) {
    const FeatureRegistry& registry = FeatureRegistry::get(registry_name);
    for (const FeatureDefinition& def : registry.definitions())
        std::cout << def.id << '\t' << def.description << '\n';
}

void cmd_extract(const std::string& corpus_path, const std::string& registry_name,
                 const std::string& out) {
    const AuthorCorpus corpus = load_corpus_jsonl(corpus_path);
    const FeatureRegistry& registry = FeatureRegistry::get(registry_name);
    std::vector<json> rows;
    for (const auto& [author, docs] : corpus.authors) {
        for (std::size_t k = 0; k < docs.size(); ++k) {
            const FeatureVector fv = extract(docs[k], registry);
            json evidence = json::object();
            for (std::size_t i = 0; i < fv.evidence.size(); ++i) {
                if (fv.evidence[i].empty()) continue;
                json spans = json::array();
                for (const Span& s : fv.evidence[i]) spans.push_back({s.start, s.end});
                evidence[registry.definitions()[i].id] = std::move(spans);
            }
            rows.push_back(json{{"doc_id", author + "#" + std::to_string(k)},
                                {"registry_fingerprint", fv.registry_fingerprint},
                                {"values", fv.values},
                                {"evidence", std::move(evidence)}});
        }
    }
    write_jsonl_file(out, rows);
    std::cout << json{{"out", out}, {"documents", rows.size()}}.dump(2) << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"residualized-similarity authorship verification"};
    app.config_formatter(std::make_shared<SniffingConfig>());
    app.set_config("--config", "", "TOML or JSON config file");
    app.require_subcommand(1);

    CommandState state;

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic author corpus");
    std::size_t sy_authors = 40, sy_docs = 10, sy_words = 120;
    std::string sy_profile = "standard", sy_out = "corpus.jsonl";
    std::uint64_t sy_seed = 42;
    synth->add_option("--authors", sy_authors, "number of authors")->capture_default_str();
    synth->add_option("--docs-per-author", sy_docs)->capture_default_str();
    synth->add_option("--words-per-doc", sy_words)->capture_default_str();
    synth->add_option("--profile", sy_profile, "standard|forum|reviews|stories")
        ->capture_default_str();
    synth->add_option("--seed", sy_seed)->capture_default_str();
    synth->add_option("--out", sy_out)->capture_default_str();
    synth->callback(
        [&] { cmd_synth(sy_authors, sy_docs, sy_words, sy_profile, sy_seed, sy_out); });

    // sample
    auto* sample = app.add_subcommand("sample", "filter a corpus and sample labeled pairs");
    std::string sa_corpus, sa_out_dir = ".";
    std::size_t sa_train = 0, sa_val = 0, sa_test = 0, sa_min_words = 20;
    bool sa_redact = false;
    std::uint64_t sa_seed = 42;
    sample->add_option("--corpus", sa_corpus)->required();
    sample->add_option("--train", sa_train, "training pairs (even)")->required();
    sample->add_option("--val", sa_val, "validation pairs (even)")->required();
    sample->add_option("--test", sa_test, "test pairs (even)")->required();
    sample->add_option("--min-words", sa_min_words)->capture_default_str();
    sample->add_flag("--redact", sa_redact,
                     "replace card numbers, IPv4 addresses and phone numbers");
    sample->add_option("--seed", sa_seed)->capture_default_str();
    sample->add_option("--out-dir", sa_out_dir)->capture_default_str();
    sample->callback([&] {
        cmd_sample(sa_corpus, sa_train, sa_val, sa_test, sa_min_words, sa_redact, sa_seed,
                   sa_out_dir);
    });

    // fit-stats
    auto* fit = app.add_subcommand("fit-stats", "fit standardization statistics");
    std::string fs_pairs, fs_registry = "core", fs_out = "stats.json";
    std::uint64_t fs_seed = 42;
    fit->add_option("--pairs", fs_pairs, "training pair file")->required();
    fit->add_option("--registry", fs_registry, "core|alt|combined")->capture_default_str();
    fit->add_option("--seed", fs_seed)->capture_default_str();
    fit->add_option("--out", fs_out)->capture_default_str();
    fit->callback([&] { cmd_fit_stats(fs_pairs, fs_registry, fs_seed, fs_out); });

    // train
    auto* tr =
        app.add_subcommand("train", "train the residual model (or the contrastive baseline)");
    TrainArgs ta;
    tr->add_option("--train", ta.train_path)->required();
    tr->add_option("--val", ta.val_path)->required();
    tr->add_option("--stats", ta.stats_path)->required();
    tr->add_option("--registry", ta.registry_name)->capture_default_str();
    tr->add_option("--variant", ta.variant, "combined|only_neural|appended")
        ->capture_default_str();
    tr->add_option("--out", ta.out, "model output file")->required();
    tr->add_option("--learning-rate", ta.tc.learning_rate)->capture_default_str();
    tr->add_option("--max-epochs", ta.tc.max_epochs)->capture_default_str();
    tr->add_option("--batch-size", ta.tc.batch_size)->capture_default_str();
    tr->add_option("--patience", ta.tc.early_stopping_patience)->capture_default_str();
    tr->add_option("--weight-decay", ta.tc.weight_decay)->capture_default_str();
    tr->add_option("--seed", ta.tc.seed)->capture_default_str();
    tr->add_option("--embedding-dims", ta.embedding_dims)->capture_default_str();
    tr->add_option("--output-scale", ta.output_scale)->capture_default_str();
    tr->add_option("--dropout", ta.dropout)->capture_default_str();
    tr->add_option("--attn-width", ta.attn_width)->capture_default_str();
    tr->add_option("--hidden1", ta.hidden1)->capture_default_str();
    tr->add_option("--hidden2", ta.hidden2)->capture_default_str();
    tr->add_flag("--contrastive", ta.contrastive, "train the siamese baseline instead");
    tr->add_option("--margin", ta.margin)->capture_default_str();
    tr->add_option("--proj-dim", ta.proj_dim)->capture_default_str();
    tr->callback([&] { cmd_train(ta); });

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "AUC evaluation and paired bootstrap");
    EvaluateArgs ea;
    ev->add_option("--pairs", ea.pairs_path);
    ev->add_option("--stats", ea.stats_path);
    ev->add_option("--model", ea.model_path);
    ev->add_option("--threshold", ea.threshold)->capture_default_str();
    ev->add_option("--calibrate", ea.calibrate, "accuracy|f1 (needs --val-pairs)");
    ev->add_option("--val-pairs", ea.val_pairs_path);
    ev->add_option("--stats-mode", ea.stats_mode, "train|respective")->capture_default_str();
    ev->add_option("--report", ea.report_path, "report JSON output");
    ev->add_option("--roc-csv", ea.roc_csv_path, "ROC curve CSV output");
    ev->add_option("--scores-out", ea.scores_out, "per-pair scores JSONL output");
    ev->add_option("--bootstrap-iterations", ea.bootstrap_iterations)->capture_default_str();
    ev->add_option("--seed", ea.seed)->capture_default_str();
    ev->add_option("--compare", ea.compare, "two scores files to compare")->expected(2);
    ev->callback([&] {
        if (ea.compare.empty() &&
            (ea.pairs_path.empty() || ea.stats_path.empty() || ea.model_path.empty()))
            throw Error("evaluate needs --pairs/--stats/--model (or --compare A B)");
        cmd_evaluate(ea);
    });

    // verify
    auto* vf =
        app.add_subcommand("verify", "verify a document pair (exit 0 same, 3 different)");
    std::string vf_doc1, vf_doc2, vf_stats, vf_model;
    double vf_threshold = 0.5;
    vf->add_option("--doc1", vf_doc1)->required();
    vf->add_option("--doc2", vf_doc2)->required();
    vf->add_option("--stats", vf_stats)->required();
    vf->add_option("--model", vf_model)->required();
    vf->add_option("--threshold", vf_threshold)->capture_default_str();
    vf->callback(
        [&] { cmd_verify(vf_doc1, vf_doc2, vf_stats, vf_model, vf_threshold, state); });

    // explain
    auto* ex = app.add_subcommand("explain", "feature-level explanations with evidence spans");
    ExplainArgs xa;
    ex->add_option("--pairs", xa.pairs_path, "pair file (batch mode)");
    ex->add_option("--doc1", xa.doc1_path, "single-pair mode");
    ex->add_option("--doc2", xa.doc2_path);
    ex->add_option("--stats", xa.stats_path)->required();
    ex->add_option("--model", xa.model_path)->required();
    ex->add_option("--threshold", xa.threshold)->capture_default_str();
    ex->add_option("--n-features", xa.n_features)->capture_default_str();
    ex->add_option("--out", xa.out, "explanations JSONL (batch mode)");
    ex->add_option("--text", xa.text_out, "human-readable report file");
    ex->callback([&] {
        const bool single = !xa.doc1_path.empty() || !xa.doc2_path.empty();
        if (single && (xa.doc1_path.empty() || xa.doc2_path.empty()))
            throw Error("single-pair mode needs both --doc1 and --doc2");
        if (!single && xa.pairs_path.empty())
            throw Error("explain needs --pairs or --doc1/--doc2");
        cmd_explain(xa);
    });

    // xdomain
    auto* xd = app.add_subcommand("xdomain", "cross-domain AUC matrix");
    std::string xd_spec, xd_out;
    std::uint64_t xd_seed = 42;
    xd->add_option("--spec", xd_spec, "JSON listing domains: name/model/stats/pairs")
        ->required();
    xd->add_option("--out", xd_out);
    xd->add_option("--seed", xd_seed)->capture_default_str();
    xd->callback([&] { cmd_xdomain(xd_spec, xd_out, xd_seed); });

    // registry
    auto* rg = app.add_subcommand("registry", "list a feature registry as TSV");
    std::string rg_name = "core";
    rg->add_option("--registry", rg_name, "core|alt|combined")->capture_default_str();
    rg->callback([&] { cmd_registry(rg_name); });

    // extract
    auto* xt = app.add_subcommand("extract", "dump feature vectors with evidence spans");
    std::string xt_corpus, xt_registry = "core", xt_out = "vectors.jsonl";
    xt->add_option("--corpus", xt_corpus)->required();
    xt->add_option("--registry", xt_registry)->capture_default_str();
    xt->add_option("--out", xt_out)->capture_default_str();
    xt->callback([&] { cmd_extract(xt_corpus, xt_registry, xt_out); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const CorpusExhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const FingerprintMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const NonFiniteTraining& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return state.exit_code;
}
