#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "rstar/pipeline.hpp"
#include "rstar/synth.hpp"

namespace {

using rstar::pipeline::Stage;

struct CommonFlags {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
};

int run_stage(const CommonFlags& flags, Stage last) {
    rstar::pipeline::PipelineConfig cfg;
    try {
        cfg = rstar::pipeline::load_config(flags.config);
        if (!flags.out.empty()) cfg.output_dir = flags.out;
        if (flags.seed) cfg.seed = *flags.seed;
        if (flags.threads) cfg.threads = *flags.threads;
        cfg.validate();
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    const auto r = rstar::pipeline::run_pipeline(cfg, last);
    if (r.exit_code != 0) {
        std::cerr << "stage '" << r.failed_stage << "' failed: " << r.message << "\n";
        if (!r.manifest.empty()) std::cerr << "manifest: " << r.manifest.string() << "\n";
        return r.exit_code;
    }
    for (const auto& f : r.files) std::cout << (cfg.output_dir / f).string() << "\n";
    std::cout << r.manifest.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rising-star scientometrics pipeline"};
    app.require_subcommand(1);

    CommonFlags flags;
    const std::pair<const char*, Stage> stages[] = {
        {"ingest", Stage::Ingest},     {"tier", Stage::Tier},         {"text", Stage::Text},
        {"topics", Stage::Topics},     {"network", Stage::Network},   {"features", Stage::Features},
        {"label", Stage::Label},       {"train", Stage::Train},       {"evaluate", Stage::Evaluate},
        {"report", Stage::Report},     {"run", Stage::Report},
    };
    std::optional<Stage> selected;
    for (const auto& [name, stage] : stages) {
        auto* sub = app.add_subcommand(name, std::string("run the pipeline through the ") + name + " stage");
        sub->add_option("--config", flags.config, "pipeline config (JSON)")->required();
        sub->add_option("--out", flags.out, "output directory (overrides config)");
        sub->add_option("--seed", flags.seed, "global seed (overrides config)");
        sub->add_option("--threads", flags.threads, "worker threads")->check(CLI::PositiveNumber);
        sub->callback([&selected, stage = stage] { selected = stage; });
    }

    rstar::synth::SynthSpec spec;
    std::string synth_out;
    std::size_t cohort = spec.cohort_size;
    auto* synth = app.add_subcommand("synth", "generate a synthetic corpus, SJR table and truth file");
    synth->add_option("--out", synth_out, "output directory")->required();
    synth->add_option("--seed", spec.seed, "generator seed");
    synth->add_option("--cohort-size", cohort, "number of cohort authors");
    synth->add_option("--rising-fraction", spec.rising_fraction, "fraction of planted rising stars");
    synth->add_option("--threads", flags.threads, "accepted for symmetry; generation is sequential");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (synth->parsed()) {
        try {
            spec.cohort_size = cohort;
            const auto corpus = rstar::synth::synthesize_corpus(spec);
            const auto paths = rstar::synth::write_synth(corpus, synth_out);
            for (const auto& w : corpus.warnings) std::cerr << "warning: " << w << "\n";
            std::cout << paths.corpus.string() << "\n" << paths.sjr.string() << "\n" << paths.truth.string() << "\n";
            return 0;
        } catch (const std::exception& e) {
            std::cerr << "synth failed: " << e.what() << "\n";
            return 2;
        }
    }
    return run_stage(flags, *selected);
}
