#include "rsim/interpret.hpp"

#include "rsim/embedding.hpp"
#include "rsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace rsim {

double intconf(double sim, double residual_pred, int predicted_label) {
    const double contribution =
        std::max(0.0, predicted_label > 0 ? 1.0 + sim : 1.0 - sim);
    const double denom = contribution + std::abs(residual_pred);
    if (denom == 0.0) return 0.0;
    return contribution / denom;
}

FlipInfo detect_flip(double sim, double final_score, double threshold) {
    FlipInfo info;
    info.g2v_label = classify(sim, threshold);
    info.predicted_label = classify(final_score, threshold);
    info.flipped = info.g2v_label != info.predicted_label;
    return info;
}

PairScore score_pair(double sim, double residual_pred, double threshold, bool sim_zero_norm) {
    PairScore ps;
    ps.sim = sim;
    ps.residual_pred = residual_pred;
    ps.final_score = sim + residual_pred;
    ps.threshold = threshold;
    const FlipInfo flip = detect_flip(sim, ps.final_score, threshold);
    ps.g2v_label = flip.g2v_label;
    ps.predicted_label = flip.predicted_label;
    ps.flipped = flip.flipped;
    ps.intconf = intconf(sim, residual_pred, ps.predicted_label);
    ps.sim_zero_norm = sim_zero_norm;
    return ps;
}

std::vector<RankedFeature> rank_features(const FeatureVector& raw1, const FeatureVector& raw2,
                                         std::span<const double> z1,
                                         std::span<const double> z2,
                                         const FeatureRegistry& registry, Direction direction,
                                         std::size_t n) {
    if (n < 1) throw Error("rank_features: n must be >= 1");
    if (raw1.registry_fingerprint != registry.fingerprint() ||
        raw2.registry_fingerprint != registry.fingerprint())
        throw FingerprintMismatch("rank_features: vectors do not match registry " +
                                  registry.fingerprint());
    if (z1.size() != registry.size() || z2.size() != registry.size())
        throw Error("rank_features: standardized vector length mismatch");

    std::vector<double> scores(registry.size());
    for (std::size_t i = 0; i < registry.size(); ++i) {
        const double a = z1[i], b = z2[i];
        scores[i] = direction == Direction::Same
                        ? std::abs(a) + std::abs(b) - std::abs(a - b)
                        : std::abs(a - b);
    }

    std::vector<std::size_t> order(registry.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] > scores[b]; // stable sort keeps registry order on ties
    });

    const std::size_t take = std::min(n, registry.size());
    std::vector<RankedFeature> out;
    out.reserve(take);
    for (std::size_t k = 0; k < take; ++k) {
        const std::size_t i = order[k];
        RankedFeature f;
        f.id = registry.definitions()[i].id;
        f.score = scores[i];
        f.val1 = z1[i];
        f.val2 = z2[i];
        f.raw1 = raw1.values[i];
        f.raw2 = raw2.values[i];
        f.opposite_sign = direction == Direction::Same && z1[i] * z2[i] < 0.0;
        f.evidence1 = raw1.evidence[i];
        f.evidence2 = raw2.evidence[i];
        out.push_back(std::move(f));
    }
    return out;
}

Explanation explain_pair(std::string_view doc1, std::string_view doc2,
                         const ResidualModel& model, const StandardizationStats& stats,
                         double threshold, std::size_t n, std::string pair_id) {
    const FeatureRegistry& registry = FeatureRegistry::get(model.config().registry_name);
    if (registry.fingerprint() != model.config().registry_fingerprint)
        throw FingerprintMismatch("explain_pair: model fingerprint " +
                                  model.config().registry_fingerprint +
                                  " does not match registry " + registry.fingerprint());
    if (stats.registry_fingerprint != registry.fingerprint())
        throw FingerprintMismatch("explain_pair: stats fingerprint " +
                                  stats.registry_fingerprint + " does not match registry " +
                                  registry.fingerprint());

    const FeatureVector raw1 = extract(doc1, registry);
    const FeatureVector raw2 = extract(doc2, registry);
    const std::vector<double> z1 = standardize(raw1, stats);
    const std::vector<double> z2 = standardize(raw2, stats);
    const CosineResult sim = cosine(z1, z2);

    const EmbeddingConfig ecfg{model.config().embedding_dims};
    const Vec e1 = embed(doc1, ecfg);
    const Vec e2 = embed(doc2, ecfg);
    const double residual = model.forward(z1, z2, e1, e2);

    Explanation e;
    e.pair_id = std::move(pair_id);
    e.score = score_pair(sim.value, residual, threshold, sim.zero_norm);
    e.direction = e.score.predicted_label > 0 ? Direction::Same : Direction::Different;
    e.n = n;
    e.top_features = rank_features(raw1, raw2, z1, z2, registry, e.direction, n);
    return e;
}

IntconfHistogram intconf_distribution(std::span<const PairScore> scores) {
    if (scores.empty()) throw Error("intconf_distribution: empty input");
    IntconfHistogram h;
    double sum = 0.0;
    for (const PairScore& s : scores) {
        sum += s.intconf;
        auto bin = static_cast<std::size_t>(s.intconf * 20.0);
        if (bin >= h.bins.size()) bin = h.bins.size() - 1; // 1.0 -> last bin
        ++h.bins[bin];
    }
    h.n = scores.size();
    h.mean = sum / static_cast<double>(scores.size());
    return h;
}

json histogram_to_json(const IntconfHistogram& h) {
    return json{
        {"bins", h.bins},
        {"bin_width", 0.05},
        {"mean", h.mean},
        {"n", h.n},
    };
}

json explanation_to_json(const Explanation& e) {
    json features = json::array();
    for (const RankedFeature& f : e.top_features) {
        json ev1 = json::array(), ev2 = json::array();
        for (const Span& s : f.evidence1) ev1.push_back({s.start, s.end});
        for (const Span& s : f.evidence2) ev2.push_back({s.start, s.end});
        features.push_back(json{
            {"id", f.id},
            {"score", f.score},
            {"val1", f.val1},
            {"val2", f.val2},
            {"raw_val1", f.raw1},
            {"raw_val2", f.raw2},
            {"opposite_sign", f.opposite_sign},
            {"evidence1", ev1},
            {"evidence2", ev2},
        });
    }
    return json{
        {"pair_id", e.pair_id},
        {"sim", e.score.sim},
        {"residual_pred", e.score.residual_pred},
        {"final", e.score.final_score},
        {"threshold", e.score.threshold},
        {"predicted", e.score.predicted_label},
        {"g2v_predicted", e.score.g2v_label},
        {"flipped", e.score.flipped},
        {"intconf", e.score.intconf},
        {"features", features},
    };
}

std::string explanation_text(const Explanation& e, std::string_view doc1,
                             std::string_view doc2) {
    std::ostringstream out;
    char buf[160];
    const char* verdict = e.score.predicted_label > 0 ? "same author" : "different author";
    const char* g2v = e.score.g2v_label > 0 ? "same author" : "different author";
    std::snprintf(buf, sizeof buf, "%s: %s (final %.2f %s threshold %.2f)\n",
                  e.pair_id.c_str(), verdict, e.score.final_score,
                  e.score.final_score > e.score.threshold ? ">" : "<=", e.score.threshold);
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "  interpretable similarity:     %.2f\n"
                  "  predicted residual:           %.2f\n"
                  "  final score:                  %.2f\n"
                  "  interpretability confidence:  %.2f\n",
                  e.score.sim, e.score.residual_pred, e.score.final_score, e.score.intconf);
    out << buf;
    std::snprintf(buf, sizeof buf, "  interpretable-only verdict:   %s (flipped: %s)\n", g2v,
                  e.score.flipped ? "yes" : "no");
    out << buf;
    if (e.score.sim_zero_norm)
        out << "  warning: a zero-norm standardized vector forced similarity to 0\n";

    std::snprintf(buf, sizeof buf, "  top %zu features (%s-author ranking):\n",
                  e.top_features.size(),
                  e.direction == Direction::Same ? "same" : "different");
    out << buf;
    std::snprintf(buf, sizeof buf, "    %-28s %7s %7s %7s %9s %9s\n", "feature", "score",
                  "doc1", "doc2", "raw1", "raw2");
    out << buf;
    for (const RankedFeature& f : e.top_features) {
        std::snprintf(buf, sizeof buf, "    %-28s %7.2f %7.2f %7.2f %9.4f %9.4f%s\n",
                      f.id.c_str(), f.score, f.val1, f.val2, f.raw1, f.raw2,
                      f.opposite_sign ? "  [opposite signs]" : "");
        out << buf;
    }

    auto print_evidence = [&](const char* label, const std::vector<Span>& spans,
                              std::string_view doc) {
        if (spans.empty()) return;
        out << "      " << label << ":";
        const std::size_t limit = std::min<std::size_t>(spans.size(), 6);
        for (std::size_t i = 0; i < limit; ++i) {
            const Span& s = spans[i];
            out << " \"" << doc.substr(s.start, s.end - s.start) << "\" [" << s.start << ","
                << s.end << ")";
        }
        if (spans.size() > limit) out << " (+" << spans.size() - limit << " more)";
        out << "\n";
    };
    for (const RankedFeature& f : e.top_features) {
        if (f.evidence1.empty() && f.evidence2.empty()) continue;
        out << "    " << f.id << "\n";
        print_evidence("doc1", f.evidence1, doc1);
        print_evidence("doc2", f.evidence2, doc2);
    }
    return out.str();
}

} // namespace rsim
