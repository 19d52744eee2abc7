#include "rsim/pipeline.hpp"

#include "rsim/errors.hpp"

namespace rsim {

StandardizationStats fit_stats_on_pairs(const PairSet& pairs,
                                        const FeatureRegistry& registry) {
    std::vector<FeatureVector> vectors;
    vectors.reserve(pairs.docs.size());
    for (const std::string& d : pairs.docs) vectors.push_back(extract(d, registry));
    return fit_stats(vectors);
}

PreparedDocs prepare_docs(const PairSet& pairs, const FeatureRegistry& registry,
                          const StandardizationStats& stats,
                          const EmbeddingConfig& embedding) {
    if (stats.registry_fingerprint != registry.fingerprint())
        throw FingerprintMismatch("prepare_docs: stats fingerprint " +
                                  stats.registry_fingerprint + " does not match registry " +
                                  registry.fingerprint());
    PreparedDocs out;
    out.raw.reserve(pairs.docs.size());
    out.z.reserve(pairs.docs.size());
    out.emb.reserve(pairs.docs.size());
    for (const std::string& d : pairs.docs) {
        out.raw.push_back(extract(d, registry));
        out.z.push_back(standardize(out.raw.back(), stats));
        out.emb.push_back(embed(d, embedding));
    }
    return out;
}

std::vector<PairExample> build_examples(const PairSet& pairs, const PreparedDocs& docs) {
    std::vector<PairExample> out;
    out.reserve(pairs.pairs.size());
    for (const PairSet::Pair& p : pairs.pairs) {
        PairExample ex;
        ex.fv1 = docs.z[p.doc1];
        ex.fv2 = docs.z[p.doc2];
        ex.e1 = docs.emb[p.doc1];
        ex.e2 = docs.emb[p.doc2];
        ex.sim = cosine(ex.fv1, ex.fv2).value;
        ex.label = p.label;
        ex.target = ground_truth_residual(p.label, ex.sim);
        out.push_back(std::move(ex));
    }
    return out;
}

std::vector<EmbPair> build_emb_pairs(const PairSet& pairs, const PreparedDocs& docs) {
    std::vector<EmbPair> out;
    out.reserve(pairs.pairs.size());
    for (const PairSet::Pair& p : pairs.pairs)
        out.push_back(EmbPair{docs.emb[p.doc1], docs.emb[p.doc2], p.label});
    return out;
}

ScoredSet PairScores::rs_set(std::string tag) const {
    ScoredSet s;
    s.system_tag = std::move(tag);
    s.scores.reserve(scores.size());
    for (const PairScore& ps : scores) s.scores.push_back(ps.final_score);
    s.labels = labels;
    return s;
}

ScoredSet PairScores::interp_set(std::string tag) const {
    ScoredSet s;
    s.system_tag = std::move(tag);
    s.scores.reserve(scores.size());
    for (const PairScore& ps : scores) s.scores.push_back(ps.sim);
    s.labels = labels;
    return s;
}

PairScores score_pairs(const PairSet& pairs, const ResidualModel& model,
                       const StandardizationStats& stats, double threshold) {
    const FeatureRegistry& registry = FeatureRegistry::get(model.config().registry_name);
    if (registry.fingerprint() != model.config().registry_fingerprint)
        throw FingerprintMismatch("score_pairs: model fingerprint " +
                                  model.config().registry_fingerprint +
                                  " does not match registry " + registry.fingerprint());
    const EmbeddingConfig ecfg{model.config().embedding_dims};
    const PreparedDocs docs = prepare_docs(pairs, registry, stats, ecfg);

    PairScores out;
    out.scores.reserve(pairs.pairs.size());
    out.labels.reserve(pairs.pairs.size());
    for (const PairSet::Pair& p : pairs.pairs) {
        const CosineResult sim = cosine(docs.z[p.doc1], docs.z[p.doc2]);
        if (sim.zero_norm) ++out.zero_norm_count;
        const double res =
            model.forward(docs.z[p.doc1], docs.z[p.doc2], docs.emb[p.doc1], docs.emb[p.doc2]);
        out.scores.push_back(score_pair(sim.value, res, threshold, sim.zero_norm));
        out.labels.push_back(p.label);
    }
    return out;
}

ScoredSet score_pairs_contrastive(const PairSet& pairs, const ContrastiveModel& model) {
    const EmbeddingConfig ecfg{model.config().emb_dim};
    std::vector<Vec> embs;
    embs.reserve(pairs.docs.size());
    for (const std::string& d : pairs.docs) embs.push_back(embed(d, ecfg));

    ScoredSet s;
    s.system_tag = "contrastive";
    for (const PairSet::Pair& p : pairs.pairs) {
        s.scores.push_back(model.score(embs[p.doc1], embs[p.doc2]));
        s.labels.push_back(p.label);
    }
    return s;
}

} // namespace rsim
