#include "rsim/evalstats.hpp"

#include "rsim/jsonio.hpp"
#include "rsim/pipeline.hpp"
#include "test_support.hpp"

#include "doctest.h"

using namespace rsim;
using rsim_test::run_command;
using rsim_test::TempDir;

namespace {

struct Domain {
    std::string name;
    DomainSystem system;
    PairSet test_pairs;
};

Domain build_domain(const std::string& profile, std::uint64_t seed) {
    const AuthorCorpus corpus =
        generate_synthetic_corpus(20, 8, 110, seed, GeneratorProfile::get(profile));
    SplitSpec spec;
    spec.train_pairs = 600;
    spec.val_pairs = 150;
    spec.test_pairs = 200;
    spec.seed = derive_seed(seed, "xdomain-sample");
    const SampledSplits splits = sample_pairs(corpus, spec);

    const auto& reg = FeatureRegistry::core();
    Domain d;
    d.name = profile;
    d.system.stats = fit_stats_on_pairs(splits.train, reg);
    const EmbeddingConfig ecfg;
    const PreparedDocs train_docs = prepare_docs(splits.train, reg, d.system.stats, ecfg);
    const PreparedDocs val_docs = prepare_docs(splits.val, reg, d.system.stats, ecfg);

    ModelConfig mc;
    mc.variant = Variant::Combined;
    mc.fv_dim = reg.size();
    mc.registry_name = "core";
    mc.registry_fingerprint = reg.fingerprint();
    TrainConfig tc;
    tc.seed = derive_seed(seed, "xdomain-train");
    d.system.model = train(build_examples(splits.train, train_docs),
                           build_examples(splits.val, val_docs), mc, tc);
    d.test_pairs = splits.test;
    return d;
}

} // namespace

TEST_CASE("cross_domain_eval: diagonal dominance and RS floor across profiles") {
    // Three domains with distinct generator profiles, averaged over seeds.
    const std::vector<std::string> profiles{"forum", "reviews", "stories"};
    const std::vector<std::uint64_t> seeds{5, 6};

    double diag_sum = 0.0, off_sum = 0.0;
    std::size_t diag_n = 0, off_n = 0;
    double min_rs_vs_interp = 1.0;

    for (std::uint64_t seed : seeds) {
        std::map<std::string, DomainSystem> systems;
        std::map<std::string, PairSet> tests;
        for (const std::string& p : profiles) {
            Domain d = build_domain(p, seed);
            systems.emplace(d.name, std::move(d.system));
            tests.emplace(d.name, std::move(d.test_pairs));
        }
        const XMatrix m = cross_domain_eval(systems, tests);
        REQUIRE(m.cells.size() == profiles.size());
        for (std::size_t i = 0; i < m.cells.size(); ++i) {
            for (std::size_t j = 0; j < m.cells[i].size(); ++j) {
                const XCell& c = m.cells[i][j];
                REQUIRE(c.ok);
                if (m.train_domains[i] == m.eval_domains[j]) {
                    diag_sum += c.auc_rs;
                    ++diag_n;
                } else {
                    off_sum += c.auc_rs;
                    ++off_n;
                }
                min_rs_vs_interp = std::min(min_rs_vs_interp, c.auc_rs - c.auc_interp);
            }
        }
    }
    const double diag_mean = diag_sum / static_cast<double>(diag_n);
    const double off_mean = off_sum / static_cast<double>(off_n);
    MESSAGE("diagonal mean AUC " << diag_mean << " vs off-diagonal " << off_mean
                                 << "; min(RS - interp) = " << min_rs_vs_interp);
    // in-domain models do better on average than transplanted ones
    CHECK(diag_mean >= off_mean);
    // every cell's RS stays within 0.05 of that domain's interpretable-only
    CHECK(min_rs_vs_interp >= -0.05);
}

TEST_CASE("cross_domain_eval: 1x1 matrix equals plain evaluation") {
    Domain d = build_domain("forum", 9);
    const auto scored = score_pairs(d.test_pairs, d.system.model, d.system.stats, 0.5);
    const double plain_auc = auc(scored.rs_set());

    std::map<std::string, DomainSystem> systems;
    std::map<std::string, PairSet> tests;
    systems.emplace("forum", std::move(d.system));
    tests.emplace("forum", std::move(d.test_pairs));
    const XMatrix m = cross_domain_eval(systems, tests);
    REQUIRE(m.cells.size() == 1);
    REQUIRE(m.cells[0][0].ok);
    CHECK(m.cells[0][0].auc_rs == doctest::Approx(plain_auc));
}

TEST_CASE("cross_domain_eval: fingerprint mismatch fails the cell, not the run") {
    Domain d = build_domain("forum", 10);
    DomainSystem broken = d.system;
    broken.stats.registry_fingerprint = "deadbeefdeadbeef";

    std::map<std::string, DomainSystem> systems;
    systems.emplace("ok", std::move(d.system));
    systems.emplace("broken", std::move(broken));
    std::map<std::string, PairSet> tests;
    tests.emplace("forum", d.test_pairs);

    const XMatrix m = cross_domain_eval(systems, tests);
    REQUIRE(m.train_domains.size() == 2);
    bool saw_ok = false, saw_failed = false;
    for (std::size_t i = 0; i < m.cells.size(); ++i) {
        if (m.train_domains[i] == "ok") {
            CHECK(m.cells[i][0].ok);
            saw_ok = true;
        } else {
            CHECK(!m.cells[i][0].ok);
            CHECK(!m.cells[i][0].error.empty());
            saw_failed = true;
        }
    }
    CHECK(saw_ok);
    CHECK(saw_failed);

    // serialization carries the failure
    const json j = xmatrix_to_json(m);
    bool any_error = false;
    for (const json& cell : j.at("cells"))
        if (!cell.at("ok").get<bool>()) any_error = cell.contains("error");
    CHECK(any_error);
}

TEST_CASE("cli: xdomain command over serialized artifacts") {
    TempDir dir("xdomain_cli");
    const std::string cli = RSIM_CLI_PATH;
    json spec{{"domains", json::array()}};
    for (const std::string profile : {"forum", "stories"}) {
        Domain d = build_domain(profile, 12);
        const std::string model = dir.file(profile + "_model.json");
        const std::string stats = dir.file(profile + "_stats.json");
        const std::string pairs = dir.file(profile + "_pairs.jsonl");
        write_json_file(model, d.system.model.to_json());
        write_json_file(stats, stats_to_json(d.system.stats, 12));
        save_pairs_jsonl(pairs, d.test_pairs);
        spec["domains"].push_back(
            json{{"name", profile}, {"model", model}, {"stats", stats}, {"pairs", pairs}});
    }
    const std::string spec_path = dir.file("xdomain.json");
    write_json_file(spec_path, spec);
    const std::string out = dir.file("matrix.json");
    const auto r = run_command(cli + " xdomain --spec '" + spec_path + "' --out '" + out + "'",
                               dir);
    REQUIRE(r.exit_code == 0);
    const json m = read_json_file(out);
    CHECK(m.at("cells").size() == 4);
    for (const json& cell : m.at("cells")) CHECK(cell.at("ok") == true);
}
