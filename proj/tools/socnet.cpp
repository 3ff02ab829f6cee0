#include "socnet/bootstrap.hpp"
#include "socnet/community.hpp"
#include "socnet/estimator.hpp"
#include "socnet/generator.hpp"
#include "socnet/io.hpp"
#include "socnet/render.hpp"
#include "socnet/rng.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

namespace {

using namespace socnet;

void require_valid(const WeightedNetwork& net) {
    const auto violations = validate(net);
    if (!violations.empty())
        throw std::runtime_error("invalid network: " + violations.front());
}

void run_generate(const std::string& specPath, std::uint64_t seed, const std::string& outPath,
                  const std::string& labelsOut) {
    const GeneratorSpec spec = read_generator_spec(specPath);
    const GeneratedNetwork g = generate(spec, seed);
    write_weights_csv(g.net, outPath);
    if (!labelsOut.empty()) write_labels(spec.assignment, labelsOut);
}

void run_fit(const std::string& netPath, const std::string& labelsPath, const std::string& mode,
             bool screen, int screenReplicates, double screenQuantile, std::uint64_t seed,
             bool sparse, const std::string& outPath, const std::string& estimateOut) {
    const WeightedNetwork net = read_weights_csv(netPath, sparse);
    const CommunityAssignment a = read_labels(labelsPath);
    FitOptions opt;
    if (mode == "nsm")
        opt.mode = FitMode::Nsm;
    else if (mode == "normal-lsm")
        opt.mode = FitMode::NormalLsm;
    else
        opt.mode = FitMode::GeneralLsm;
    opt.screen = screen;
    opt.screen_replicates = screenReplicates;
    opt.screen_quantile = screenQuantile;
    opt.seed = seed;
    const FittedModel model = fit_network(net, a, opt);
    write_model(model, outPath);
    if (!estimateOut.empty()) write_weights_csv(smooth_network(a, model), estimateOut);
}

void run_bootstrap(const std::string& modelPath, std::uint64_t seed, int count,
                   const std::string& prefix) {
    const FittedModel model = read_model(modelPath);
    const CounterRng root(seed);
    for (int k = 1; k <= count; ++k) {
        const WeightedNetwork rep =
            bootstrap_replicate(model, root.fork("replicate", static_cast<std::uint64_t>(k)).key());
        write_weights_csv(rep, prefix + std::to_string(k) + ".csv");
    }
}

void run_communities(const std::string& netPath, const std::string& method, int replicates,
                     std::uint64_t seed, const std::string& outPath) {
    const WeightedNetwork net = read_weights_csv(netPath);
    require_valid(net);
    CommunityAssignment result;
    if (method == "greedy") {
        result = greedy_communities(net);
    } else if (method == "spectral") {
        result = spectral_communities(net, replicates, seed);
    } else {
        const CommunityAssignment g = greedy_communities(net);
        const CommunityAssignment s = spectral_communities(net, replicates, seed);
        result = measure_l(net, s).L > measure_l(net, g).L ? s : g;
    }
    write_labels(result, outPath);
}

void run_render(const std::string& netPath, const std::string& labelsPath,
                const std::string& sort, const std::string& format,
                const std::string& outPath) {
    const WeightedNetwork net = read_weights_csv(netPath);
    CommunityAssignment labels;
    RenderOptions opt;
    if (!labelsPath.empty()) {
        labels = read_labels(labelsPath);
        opt.labels = &labels;
    }
    opt.sort_by_degree = sort == "degree";
    opt.color = format == "ppm";
    write_heatmap(net.weights, opt, outPath);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dense weighted network toolkit: generate, fit, bootstrap, cluster, render"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("generate", "sample a network from a generator spec");
    std::string genSpec, genOut, genLabelsOut;
    std::uint64_t genSeed = 0;
    gen->add_option("--spec", genSpec, "generator spec JSON")->required();
    gen->add_option("--seed", genSeed, "RNG seed (default 0)");
    gen->add_option("--out", genOut, "output weights CSV")->required();
    gen->add_option("--labels-out", genLabelsOut, "also write the true community labels");

    auto* fit = app.add_subcommand("fit", "fit a sociability model to a labeled network");
    std::string fitNet, fitLabels, fitMode = "nsm", fitOut, fitEstimateOut;
    bool fitScreen = false, fitSparse = false;
    int fitScreenReplicates = 99;
    double fitScreenQuantile = 0.05;
    std::uint64_t fitSeed = 0;
    fit->add_option("--net", fitNet, "weights CSV")->required();
    fit->add_option("--labels", fitLabels, "community labels file")->required();
    fit->add_option("--mode", fitMode, "nsm | normal-lsm | lsm (default nsm)")
        ->check(CLI::IsMember({"nsm", "normal-lsm", "lsm"}));
    fit->add_flag("--screen", fitScreen, "flag spurious pairs against fictional networks");
    fit->add_option("--screen-replicates", fitScreenReplicates,
                    "fictional networks per pair (default 99)");
    fit->add_option("--screen-quantile", fitScreenQuantile,
                    "screen false-positive rate (default 0.05)");
    fit->add_option("--seed", fitSeed, "RNG seed for the screen (default 0)");
    fit->add_flag("--sparse", fitSparse, "treat off-diagonal zeros as missing edges");
    fit->add_option("--out", fitOut, "output model JSON")->required();
    fit->add_option("--estimate-out", fitEstimateOut, "also write the smoothed network CSV");

    auto* boot = app.add_subcommand("bootstrap", "sample replicate networks from a model");
    std::string bootModel, bootPrefix;
    std::uint64_t bootSeed = 0;
    int bootCount = 1;
    boot->add_option("--model", bootModel, "fitted model JSON")->required();
    boot->add_option("--seed", bootSeed, "RNG seed (default 0)");
    boot->add_option("--count", bootCount, "number of replicates (default 1)")
        ->check(CLI::PositiveNumber);
    boot->add_option("--out-prefix", bootPrefix, "replicate k goes to <prefix>k.csv")
        ->required();

    auto* comm = app.add_subcommand("communities", "detect communities");
    std::string commNet, commMethod = "both", commOut;
    int commReplicates = 10;
    std::uint64_t commSeed = 0;
    comm->add_option("--net", commNet, "weights CSV")->required();
    comm->add_option("--method", commMethod, "greedy | spectral | both (default both)")
        ->check(CLI::IsMember({"greedy", "spectral", "both"}));
    comm->add_option("--replicates", commReplicates,
                     "spectral clusterings per community count (default 10)")
        ->check(CLI::PositiveNumber);
    comm->add_option("--seed", commSeed, "RNG seed (default 0)");
    comm->add_option("--out", commOut, "output labels file")->required();

    auto* rend = app.add_subcommand("render", "render a weights CSV as a heatmap");
    std::string rendNet, rendLabels, rendSort = "none", rendFormat = "pgm", rendOut;
    rend->add_option("--net", rendNet, "weights CSV (any square matrix)")->required();
    rend->add_option("--labels", rendLabels, "group rows/columns by these labels");
    rend->add_option("--sort", rendSort, "degree | none (default none)")
        ->check(CLI::IsMember({"degree", "none"}));
    rend->add_option("--format", rendFormat, "pgm | ppm (default pgm)")
        ->check(CLI::IsMember({"pgm", "ppm"}));
    rend->add_option("--out", rendOut, "output image")->required();

    try {
        app.parse(argc, argv);
        if (gen->parsed()) run_generate(genSpec, genSeed, genOut, genLabelsOut);
        if (fit->parsed())
            run_fit(fitNet, fitLabels, fitMode, fitScreen, fitScreenReplicates,
                    fitScreenQuantile, fitSeed, fitSparse, fitOut, fitEstimateOut);
        if (boot->parsed()) run_bootstrap(bootModel, bootSeed, bootCount, bootPrefix);
        if (comm->parsed()) run_communities(commNet, commMethod, commReplicates, commSeed, commOut);
        if (rend->parsed()) run_render(rendNet, rendLabels, rendSort, rendFormat, rendOut);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
