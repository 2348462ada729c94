#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "rstar/io.hpp"
#include "rstar/pipeline.hpp"
#include "rstar/synth.hpp"
#include "test_support.hpp"

using namespace rstar;
using namespace rstar::pipeline;
using rstar::testing::paper;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("rstar_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

nlohmann::json sample_config_json() {
    std::ifstream in(fs::path(RSTAR_SAMPLE_DIR) / "config.json");
    return nlohmann::json::parse(in);
}

PipelineConfig sample_config(const fs::path& out) {
    auto cfg = config_from_json(sample_config_json(), RSTAR_SAMPLE_DIR);
    cfg.output_dir = out;
    return cfg;
}

nlohmann::json read_json(const fs::path& p) {
    std::ifstream in(p);
    return nlohmann::json::parse(in);
}

} // namespace

TEST(Config, SampleParsesAndRejectsUnknownKeys) {
    auto j = sample_config_json();
    const auto cfg = config_from_json(j, RSTAR_SAMPLE_DIR);
    EXPECT_EQ(cfg.lda.topics, 3);
    EXPECT_EQ(cfg.seed, 42u);
    EXPECT_EQ(cfg.corpus_path, fs::path(RSTAR_SAMPLE_DIR) / "corpus.jsonl");
    j["bogus"] = 1;
    EXPECT_THROW(config_from_json(j, RSTAR_SAMPLE_DIR), ConfigError);
    auto k = sample_config_json();
    k["lda"]["topcs"] = 4;
    EXPECT_THROW(config_from_json(k, RSTAR_SAMPLE_DIR), ConfigError);
}

TEST(Config, HashIgnoresThreadsAndOutput) {
    auto a = sample_config("/tmp/a");
    auto b = sample_config("/tmp/b");
    b.threads = 4;
    EXPECT_EQ(config_hash(a), config_hash(b));
    b.seed = 43;
    EXPECT_NE(config_hash(a), config_hash(b));
    EXPECT_EQ(config_hash(config_from_json(config_to_json(a))), config_hash(a));
}

TEST(Config, InvalidValuesExitTwo) {
    auto cfg = sample_config(scratch("badcfg"));
    cfg.lda.topics = 0;
    const auto r = run_pipeline(cfg);
    EXPECT_EQ(r.exit_code, 2);
}

TEST(Distributions, Examples) {
    const corpus::Corpus one({paper("p", 2010, {"a", "b", "c"})});
    const auto rows = report_distributions(one);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].year, 2010);
    EXPECT_EQ(rows[0].papers, 1u);
    EXPECT_EQ(rows[0].authors, 3u);
    EXPECT_DOUBLE_EQ(rows[0].mean_authors_per_paper, 3.0);

    const corpus::Corpus gap({paper("p1", 2008, {"a", "b"}), paper("p2", 2008, {"a", "c", "d", "e"}), paper("p3", 2011, {"z"})});
    const auto g = report_distributions(gap);
    ASSERT_EQ(g.size(), 2u);
    EXPECT_DOUBLE_EQ(g[0].mean_authors_per_paper, 3.0);
    EXPECT_EQ(g[0].authors, 5u);
    EXPECT_EQ(g[1].year, 2011);
    EXPECT_THROW(report_distributions(corpus::Corpus(std::vector<corpus::PublicationRecord>{})), Error);
}

TEST(Pipeline, SampleRunEmitsEveryArtifact) {
    const auto out = scratch("sample");
    const auto r = run_pipeline(sample_config(out));
    ASSERT_EQ(r.exit_code, 0) << r.message;
    for (const char* f : {"feature_matrix.csv", "labels.csv", "correlation.csv", "group_comparison.csv",
                          "evaluation.json", "distributions.csv", "manifest.json"})
        EXPECT_TRUE(fs::exists(out / f)) << f;
    const auto m = read_json(out / "manifest.json");
    EXPECT_EQ(m["status"], "ok");
    for (const auto& f : m["files"]) EXPECT_EQ(f["sha256"], io::sha256_file(out / f["path"].get<std::string>()));
}

TEST(Pipeline, SameConfigSameFeatureMatrix) {
    const auto a = scratch("det_a"), b = scratch("det_b");
    auto ca = sample_config(a);
    auto cb = sample_config(b);
    cb.threads = 3;
    ASSERT_EQ(run_pipeline(ca, Stage::Features).exit_code, 0);
    ASSERT_EQ(run_pipeline(cb, Stage::Features).exit_code, 0);
    EXPECT_EQ(io::sha256_file(a / "feature_matrix.csv"), io::sha256_file(b / "feature_matrix.csv"));
}

TEST(Pipeline, MissingSjrFailsAtIngest) {
    const auto out = scratch("nosjr");
    auto cfg = sample_config(out);
    cfg.sjr_path = out / "does_not_exist.csv";
    const auto r = run_pipeline(cfg);
    EXPECT_EQ(r.exit_code, 3);
    EXPECT_EQ(r.failed_stage, "ingest");
    const auto m = read_json(out / "manifest.json");
    EXPECT_EQ(m["status"], "failed");
    EXPECT_EQ(m["failed_stage"], "ingest");
    EXPECT_EQ(m["failed_module"], "corpus");
    EXPECT_TRUE(m["partial"].get<bool>());
}

TEST(Synth, FixedSeedIsByteIdentical) {
    synth::SynthSpec spec;
    spec.cohort_size = 200;
    spec.seed = 5;
    const auto a = synth::write_synth(synth::synthesize_corpus(spec), scratch("synth_a"));
    const auto b = synth::write_synth(synth::synthesize_corpus(spec), scratch("synth_b"));
    EXPECT_EQ(io::sha256_file(a.corpus), io::sha256_file(b.corpus));
    EXPECT_EQ(io::sha256_file(a.sjr), io::sha256_file(b.sjr));
    EXPECT_EQ(io::sha256_file(a.truth), io::sha256_file(b.truth));
}

TEST(Synth, ZeroFractionGivesNoStars) {
    synth::SynthSpec spec;
    spec.cohort_size = 150;
    spec.rising_fraction = 0.0;
    const auto s = synth::synthesize_corpus(spec);
    ASSERT_EQ(s.truth.size(), 150u);
    for (const auto& t : s.truth) EXPECT_EQ(t.label, 0);
}

TEST(Synth, RisingArticleMeanWithinThreeStandardErrors) {
    synth::SynthSpec spec;
    spec.seed = 11;
    const auto s = synth::synthesize_corpus(spec);
    double sum = 0;
    std::size_t n = 0;
    for (const auto& t : s.truth)
        if (t.label == 1) {
            sum += t.articles;
            ++n;
        }
    ASSERT_GT(n, 30u);
    const auto p = synth::table1_rising().articles;
    EXPECT_NEAR(p.mean, 2.82, 1e-12);
    EXPECT_LT(std::abs(sum / static_cast<double>(n) - p.mean), 3.0 * p.sigma / std::sqrt(static_cast<double>(n)));
}

TEST(Synth, InfeasibleSpecThrows) {
    synth::SynthSpec spec;
    spec.cohort_years = {2010, 2009};
    EXPECT_THROW(synth::synthesize_corpus(spec), Error);
    synth::SynthSpec frac;
    frac.rising_fraction = 1.5;
    EXPECT_THROW(synth::synthesize_corpus(frac), Error);
}
