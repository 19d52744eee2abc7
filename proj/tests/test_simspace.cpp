#include "rsim/simspace.hpp"

#include "rsim/errors.hpp"
#include "rsim/rng.hpp"

#include "doctest.h"

#include <cmath>

using namespace rsim;

namespace {

FeatureVector make_fv(std::vector<double> values, const std::string& fp = "testfp") {
    FeatureVector fv;
    fv.registry_fingerprint = fp;
    fv.values = std::move(values);
    fv.evidence.assign(fv.values.size(), {});
    return fv;
}

// Independent two-pass mean/sd oracle (population).
void two_pass_stats(const std::vector<FeatureVector>& vs, std::vector<double>& mean,
                    std::vector<double>& sd) {
    const std::size_t d = vs[0].values.size();
    const double n = static_cast<double>(vs.size());
    mean.assign(d, 0.0);
    sd.assign(d, 0.0);
    for (const auto& v : vs)
        for (std::size_t i = 0; i < d; ++i) mean[i] += v.values[i];
    for (double& m : mean) m /= n;
    for (const auto& v : vs)
        for (std::size_t i = 0; i < d; ++i) {
            const double dlt = v.values[i] - mean[i];
            sd[i] += dlt * dlt;
        }
    for (double& s : sd) s = std::sqrt(s / n);
}

} // namespace

TEST_CASE("fit_stats: two-point population sd") {
    const auto stats = fit_stats({make_fv({0.0}), make_fv({2.0})});
    CHECK(stats.mean[0] == doctest::Approx(1.0));
    CHECK(stats.sd[0] == doctest::Approx(1.0));
    CHECK(stats.fitted_on == 2);
}

TEST_CASE("fit_stats: constant feature has sd 0") {
    const auto stats = fit_stats({make_fv({3.0, 1.0}), make_fv({3.0, 2.0}), make_fv({3.0, 3.0})});
    CHECK(stats.sd[0] == doctest::Approx(0.0));
    CHECK(stats.mean[0] == doctest::Approx(3.0));
}

TEST_CASE("fit_stats: matches an independent two-pass oracle to 1e-12") {
    Rng rng(123);
    std::vector<FeatureVector> vs;
    for (int i = 0; i < 100; ++i) {
        std::vector<double> vals(17);
        for (double& v : vals) v = rng.uniform(-3.0, 3.0);
        vs.push_back(make_fv(std::move(vals)));
    }
    const auto stats = fit_stats(vs);
    std::vector<double> mean, sd;
    two_pass_stats(vs, mean, sd);
    for (std::size_t i = 0; i < mean.size(); ++i) {
        CHECK(std::abs(stats.mean[i] - mean[i]) < 1e-12);
        CHECK(std::abs(stats.sd[i] - sd[i]) < 1e-12);
    }
}

TEST_CASE("fit_stats: errors") {
    CHECK_THROWS_AS(fit_stats({make_fv({1.0})}), Error);
    CHECK_THROWS_AS(fit_stats({make_fv({1.0}, "a"), make_fv({1.0}, "b")}),
                    FingerprintMismatch);
}

TEST_CASE("standardize: basic and zero-sd rule") {
    const auto stats = fit_stats({make_fv({0.0, 5.0}), make_fv({2.0, 5.0})});
    const auto z = standardize(make_fv({2.0, 5.0}), stats);
    CHECK(z[0] == doctest::Approx(1.0)); // (2 - 1) / 1
    CHECK(z[1] == doctest::Approx(0.0)); // constant feature maps to 0

    FeatureVector other = make_fv({1.0, 1.0}, "otherfp");
    CHECK_THROWS_AS(standardize(other, stats), FingerprintMismatch);
}

TEST_CASE("standardize: re-fitting on standardized data gives mean 0, sd 1") {
    Rng rng(7);
    std::vector<FeatureVector> vs;
    for (int i = 0; i < 40; ++i) {
        std::vector<double> vals(9);
        for (double& v : vals) v = rng.uniform(0.0, 10.0);
        vs.push_back(make_fv(std::move(vals)));
    }
    const auto stats = fit_stats(vs);
    std::vector<FeatureVector> zs;
    for (const auto& v : vs) zs.push_back(make_fv(standardize(v, stats)));
    const auto refit = fit_stats(zs);
    for (std::size_t i = 0; i < refit.mean.size(); ++i) {
        CHECK(std::abs(refit.mean[i]) < 1e-9);
        CHECK(std::abs(refit.sd[i] - 1.0) < 1e-9);
    }
}

TEST_CASE("cosine: trivial identities") {
    const std::vector<double> a{1.0, 2.0, 3.0};
    const std::vector<double> na{-1.0, -2.0, -3.0};
    const std::vector<double> orth{0.0, 0.0, 0.0};
    CHECK(cosine(a, a).value == doctest::Approx(1.0));
    CHECK(cosine(a, na).value == doctest::Approx(-1.0));
    const std::vector<double> x{1.0, 0.0};
    const std::vector<double> y{0.0, 1.0};
    CHECK(cosine(x, y).value == doctest::Approx(0.0));

    const auto zero = cosine(orth, a);
    CHECK(zero.value == 0.0);
    CHECK(zero.zero_norm);

    const std::vector<double> short_v{1.0};
    CHECK_THROWS_AS(cosine(a, short_v), Error);
}

TEST_CASE("cosine: scale invariance") {
    Rng rng(99);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> a(8), b(8);
        for (double& v : a) v = rng.uniform(-1.0, 1.0);
        for (double& v : b) v = rng.uniform(-1.0, 1.0);
        const double alpha = rng.uniform(0.01, 100.0);
        const double beta = rng.uniform(0.01, 100.0);
        std::vector<double> sa = a, sb = b;
        for (double& v : sa) v *= alpha;
        for (double& v : sb) v *= beta;
        CHECK(std::abs(cosine(sa, sb).value - cosine(a, b).value) < 1e-12);
    }
}

TEST_CASE("ground_truth_residual: forced arithmetic and exact identity") {
    CHECK(ground_truth_residual(1, 0.20) == doctest::Approx(0.80));
    CHECK(ground_truth_residual(-1, 0.09) == doctest::Approx(-1.09));

    Rng rng(2024);
    for (int t = 0; t < 1000; ++t) {
        const int y = rng.bernoulli(0.5) ? 1 : -1;
        const double s = rng.uniform(-1.0, 1.0);
        CHECK(s + ground_truth_residual(y, s) == static_cast<double>(y)); // exact
    }
}

TEST_CASE("classify: threshold rule with ties to different-author") {
    CHECK(classify(0.38, 0.5) == -1); // different author
    CHECK(classify(1.02, 0.5) == 1);  // same author
    CHECK(classify(0.5, 0.5) == -1);  // tie
}

TEST_CASE("stats json round-trip") {
    const auto stats = fit_stats({make_fv({0.0, 1.0}), make_fv({2.0, 1.0})});
    const json j = stats_to_json(stats, 42);
    CHECK(j.at("format_version") == 1);
    CHECK(j.at("seed") == 42);
    const auto back = stats_from_json(j);
    CHECK(back.registry_fingerprint == stats.registry_fingerprint);
    CHECK(back.mean == stats.mean);
    CHECK(back.sd == stats.sd);
    CHECK(back.fitted_on == 2);
}
