#include "rsim/evalstats.hpp"

#include "rsim/errors.hpp"
#include "rsim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace rsim {

namespace {

void validate_set(const ScoredSet& s, bool need_both_classes) {
    if (s.scores.size() != s.labels.size())
        throw Error("scored set '" + s.system_tag + "': scores/labels length mismatch");
    if (s.scores.empty()) throw Error("scored set '" + s.system_tag + "' is empty");
    std::size_t pos = 0, neg = 0;
    for (int l : s.labels) {
        if (l == 1)
            ++pos;
        else if (l == -1)
            ++neg;
        else
            throw Error("scored set '" + s.system_tag + "': labels must be +1/-1");
    }
    if (need_both_classes && (pos == 0 || neg == 0))
        throw Error("AUC undefined for single-class input (set '" + s.system_tag + "')");
}

double auc_indexed(const std::vector<double>& scores, const std::vector<int>& labels,
                   std::vector<std::size_t>& order) {
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    const std::size_t n = order.size();
    double rank_sum_pos = 0.0;
    std::size_t n_pos = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double midrank = static_cast<double>(i + j) / 2.0 + 1.0; // 1-based
        for (std::size_t k = i; k <= j; ++k) {
            if (labels[order[k]] == 1) {
                rank_sum_pos += midrank;
                ++n_pos;
            }
        }
        i = j + 1;
    }
    const std::size_t n_neg = n - n_pos;
    const double u = rank_sum_pos -
                     static_cast<double>(n_pos) * (static_cast<double>(n_pos) + 1.0) / 2.0;
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

} // namespace

double auc(const ScoredSet& set) {
    validate_set(set, true);
    std::vector<std::size_t> order(set.scores.size());
    std::iota(order.begin(), order.end(), 0);
    return auc_indexed(set.scores, set.labels, order);
}

std::vector<RocPoint> roc_curve(const ScoredSet& set) {
    validate_set(set, true);
    std::vector<std::size_t> order(set.scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return set.scores[a] > set.scores[b];
    });
    double pos = 0, neg = 0;
    for (int l : set.labels) (l == 1 ? pos : neg) += 1.0;

    std::vector<RocPoint> curve{{0.0, 0.0}};
    double tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() &&
               set.scores[order[j + 1]] == set.scores[order[i]])
            ++j;
        for (std::size_t k = i; k <= j; ++k)
            (set.labels[order[k]] == 1 ? tp : fp) += 1.0;
        curve.push_back({fp / neg, tp / pos});
        i = j + 1;
    }
    return curve;
}

double trapezoid_area(const std::vector<RocPoint>& curve) {
    double area = 0.0;
    for (std::size_t i = 1; i < curve.size(); ++i)
        area += (curve[i].fpr - curve[i - 1].fpr) * (curve[i].tpr + curve[i - 1].tpr) / 2.0;
    return area;
}

ThresholdMetrics metrics_at(const ScoredSet& set, double threshold) {
    validate_set(set, false);
    std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < set.scores.size(); ++i) {
        const int pred = set.scores[i] > threshold ? 1 : -1;
        if (pred == 1)
            (set.labels[i] == 1 ? tp : fp) += 1;
        else
            (set.labels[i] == -1 ? tn : fn) += 1;
    }
    ThresholdMetrics m;
    m.accuracy = static_cast<double>(tp + tn) / static_cast<double>(set.scores.size());
    const double denom = static_cast<double>(2 * tp + fp + fn);
    m.f1 = denom > 0.0 ? 2.0 * static_cast<double>(tp) / denom : 0.0;
    return m;
}

double calibrate_threshold(const ScoredSet& val, const ThresholdObjective& objective) {
    if (objective.kind == ThresholdObjective::Kind::Fixed) return objective.fixed_t;
    validate_set(val, false);

    std::vector<double> distinct = val.scores;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() == 1) return distinct.front(); // no midpoints exist

    double best_t = 0.0, best_value = -1.0;
    for (std::size_t i = 0; i + 1 < distinct.size(); ++i) {
        const double t = (distinct[i] + distinct[i + 1]) / 2.0;
        const ThresholdMetrics m = metrics_at(val, t);
        const double value =
            objective.kind == ThresholdObjective::Kind::Accuracy ? m.accuracy : m.f1;
        if (value > best_value) { // strict: ties keep the lowest threshold
            best_value = value;
            best_t = t;
        }
    }
    return best_t;
}

BootstrapResult paired_bootstrap(const ScoredSet& a, const ScoredSet& b,
                                 std::size_t iterations, std::uint64_t seed) {
    validate_set(a, true);
    validate_set(b, true);
    if (a.scores.size() != b.scores.size() || a.labels != b.labels)
        throw Error("paired_bootstrap: sets must score identical pairs "
                    "(same length and labels)");

    BootstrapResult out;
    out.iterations = iterations;
    out.delta_auc = auc(a) - auc(b);
    if (out.delta_auc == 0.0) return out; // identical systems: p = 1

    const std::size_t n = a.scores.size();
    std::vector<double> sa(n), sb(n);
    std::vector<int> lab(n);
    std::vector<std::size_t> order(n);
    std::size_t flips = 0;
    for (std::size_t it = 0; it < iterations; ++it) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(it)));
        bool both = false;
        for (std::size_t attempt = 0; attempt < 1000 && !both; ++attempt) {
            std::size_t pos = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t idx = rng.below(n);
                sa[i] = a.scores[idx];
                sb[i] = b.scores[idx];
                lab[i] = a.labels[idx];
                if (lab[i] == 1) ++pos;
            }
            both = pos > 0 && pos < n;
        }
        if (!both) throw Error("paired_bootstrap: could not draw a two-class resample");
        std::iota(order.begin(), order.end(), 0);
        const double da = auc_indexed(sa, lab, order);
        std::iota(order.begin(), order.end(), 0);
        const double db = auc_indexed(sb, lab, order);
        const double d = da - db;
        if (d * (out.delta_auc > 0 ? 1.0 : -1.0) <= 0.0) ++flips;
    }
    out.p_value = std::min(1.0, 2.0 * static_cast<double>(flips) /
                                    static_cast<double>(iterations));
    return out;
}

EvalReport evaluate_scored(const ScoredSet& set, double threshold) {
    EvalReport report;
    report.system_tag = set.system_tag;
    report.auc_value = auc(set);
    report.curve = roc_curve(set);
    report.threshold = threshold;
    report.at_threshold = metrics_at(set, threshold);
    return report;
}

json report_to_json(const EvalReport& report) {
    json curve = json::array();
    for (const RocPoint& p : report.curve) curve.push_back({p.fpr, p.tpr});
    return json{
        {"system", report.system_tag},
        {"auc", report.auc_value},
        {"threshold", report.threshold},
        {"accuracy", report.at_threshold.accuracy},
        {"f1", report.at_threshold.f1},
        {"roc", curve},
    };
}

void write_roc_csv(const std::filesystem::path& path, const std::vector<RocPoint>& curve) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "fpr,tpr\n";
    char buf[64];
    for (const RocPoint& p : curve) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.fpr, p.tpr);
        out << buf;
    }
}

XMatrix cross_domain_eval(const std::map<std::string, DomainSystem>& systems,
                          const std::map<std::string, PairSet>& test_sets) {
    XMatrix m;
    for (const auto& [name, _] : systems) m.train_domains.push_back(name);
    for (const auto& [name, _] : test_sets) m.eval_domains.push_back(name);

    // Feature extraction and embeddings are reusable across train domains.
    std::map<std::pair<std::string, std::string>, std::vector<FeatureVector>> fv_cache;
    std::map<std::pair<std::string, std::size_t>, std::vector<Vec>> emb_cache;

    for (const std::string& train_dom : m.train_domains) {
        const DomainSystem& sys = systems.at(train_dom);
        std::vector<XCell> row;
        for (const std::string& eval_dom : m.eval_domains) {
            XCell cell;
            try {
                const ModelConfig& cfg = sys.model.config();
                const FeatureRegistry& reg = FeatureRegistry::get(cfg.registry_name);
                if (reg.fingerprint() != cfg.registry_fingerprint)
                    throw FingerprintMismatch("model fingerprint " + cfg.registry_fingerprint +
                                              " does not match registry " + reg.fingerprint());
                if (sys.stats.registry_fingerprint != cfg.registry_fingerprint)
                    throw FingerprintMismatch("stats fingerprint " +
                                              sys.stats.registry_fingerprint +
                                              " does not match model " +
                                              cfg.registry_fingerprint);
                const PairSet& pairs = test_sets.at(eval_dom);

                auto fv_key = std::make_pair(eval_dom, reg.fingerprint());
                if (!fv_cache.count(fv_key)) {
                    std::vector<FeatureVector> fvs;
                    fvs.reserve(pairs.docs.size());
                    for (const std::string& d : pairs.docs) fvs.push_back(extract(d, reg));
                    fv_cache.emplace(fv_key, std::move(fvs));
                }
                auto emb_key = std::make_pair(eval_dom, cfg.embedding_dims);
                if (!emb_cache.count(emb_key)) {
                    EmbeddingConfig ecfg{cfg.embedding_dims};
                    std::vector<Vec> embs;
                    embs.reserve(pairs.docs.size());
                    for (const std::string& d : pairs.docs) embs.push_back(embed(d, ecfg));
                    emb_cache.emplace(emb_key, std::move(embs));
                }

                const auto& fvs = fv_cache.at(fv_key);
                const auto& embs = emb_cache.at(emb_key);
                std::vector<Vec> z;
                z.reserve(fvs.size());
                for (const FeatureVector& fv : fvs) z.push_back(standardize(fv, sys.stats));

                ScoredSet rs{.scores = {}, .labels = {}, .system_tag = "rs"};
                ScoredSet interp{.scores = {}, .labels = {}, .system_tag = "interpretable"};
                for (const PairSet::Pair& p : pairs.pairs) {
                    const double sim = cosine(z[p.doc1], z[p.doc2]).value;
                    const double res = sys.model.forward(z[p.doc1], z[p.doc2], embs[p.doc1],
                                                         embs[p.doc2]);
                    rs.scores.push_back(sim + res);
                    interp.scores.push_back(sim);
                    rs.labels.push_back(p.label);
                    interp.labels.push_back(p.label);
                }
                cell.auc_rs = auc(rs);
                cell.auc_interp = auc(interp);
                cell.ok = true;
            } catch (const Error& e) {
                cell.ok = false;
                cell.error = e.what();
            }
            row.push_back(std::move(cell));
        }
        m.cells.push_back(std::move(row));
    }
    return m;
}

json xmatrix_to_json(const XMatrix& m) {
    json cells = json::array();
    for (std::size_t i = 0; i < m.cells.size(); ++i) {
        for (std::size_t j = 0; j < m.cells[i].size(); ++j) {
            const XCell& c = m.cells[i][j];
            json cell{
                {"train_domain", m.train_domains[i]},
                {"eval_domain", m.eval_domains[j]},
                {"ok", c.ok},
            };
            if (c.ok) {
                cell["auc_rs"] = c.auc_rs;
                cell["auc_interpretable"] = c.auc_interp;
            } else {
                cell["error"] = c.error;
            }
            cells.push_back(std::move(cell));
        }
    }
    return json{{"format_version", kFormatVersion},
                {"train_domains", m.train_domains},
                {"eval_domains", m.eval_domains},
                {"cells", cells}};
}

} // namespace rsim
