#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "corrbound/error.hpp"
#include "corrbound/harness.hpp"

namespace {

using namespace corrbound;

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) items.push_back(item);
    return items;
}

std::vector<int> parse_states(const std::string& text) {
    std::vector<int> states;
    for (const auto& item : split_list(text)) {
        std::size_t used = 0;
        int n = 0;
        try {
            n = std::stoi(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size() || n < 2) throw Error(ErrorCode::BadInput, "bad state count '" + item + "'");
        states.push_back(n);
    }
    if (states.empty()) throw Error(ErrorCode::BadInput, "--states is empty");
    return states;
}

std::vector<BoundId> parse_bounds(const std::string& text) {
    if (text == "all") return {std::begin(kAllBoundIds), std::end(kAllBoundIds)};
    std::vector<BoundId> ids;
    for (const auto& item : split_list(text)) {
        const auto id = parse_bound_id(item);
        if (!id) throw Error(ErrorCode::BadInput, "unknown bound '" + item + "'");
        ids.push_back(*id);
    }
    return ids;
}

CmaxMode parse_cmax(const std::string& text) {
    const auto mode = parse_cmax_mode(text);
    if (!mode) throw Error(ErrorCode::BadInput, "--cmax must be standard or tight");
    return *mode;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Correlation-bound verification for finite Markov jump processes"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    std::string model_path, out_path, states = "2,3,4", tgrid, bounds = "all", cmax = "standard",
                format = "csv", drive = "step";
    std::uint64_t seed = 1;
    int models = -1;
    double chi = 0.01;
    double rhs_scale = 1.0;

    auto* check = app.add_subcommand("check", "evaluate bounds for a model file or random models");
    check->add_option("--model", model_path, "model JSON file");
    check->add_option("--out", out_path, "output file (default stdout)");
    check->add_option("--seed", seed, "seed for generated models");
    check->add_option("--models", models, "number of generated models (without --model)");
    check->add_option("--states", states, "state counts to cycle through, e.g. 2,3,4");
    check->add_option("--tgrid", tgrid, "start:stop:points:lin|log")->required();
    check->add_option("--bounds", bounds, "comma-separated bound ids or 'all'");
    check->add_option("--cmax", cmax, "standard|tight");
    check->add_option("--format", format, "csv|json");
    check->add_option("--chi", chi, "perturbation strength for PULSE/STEP");
    check->add_option("--rhs-scale", rhs_scale)->group("");

    auto* fig2 = app.add_subcommand("figure2", "write fig2a..fig2d.csv");
    auto* fig3 = app.add_subcommand("figure3", "write fig3a.csv and fig3b.csv");
    for (auto* sub : {fig2, fig3}) {
        sub->add_option("--out", out_path, "output directory");
        sub->add_option("--seed", seed, "seed for the random models");
        sub->add_option("--tgrid", tgrid, "start:stop:points:lin|log");
    }
    fig2->add_option("--models", models, "number of random models (default 100)");

    auto* stress = app.add_subcommand("stress", "run every bound over random models");
    stress->add_option("--models", models, "number of models (default 500)");
    stress->add_option("--states", states, "state counts to cycle through");
    stress->add_option("--seed", seed, "base seed");
    stress->add_option("--tgrid", tgrid, "start:stop:points:lin|log");
    stress->add_option("--cmax", cmax, "standard|tight");
    stress->add_option("--chi", chi, "perturbation strength for PULSE/STEP");
    stress->add_option("--out", out_path, "JSON tally file (default stdout)");

    auto* response = app.add_subcommand("response", "linear response sweep from the stationary state");
    response->add_option("--model", model_path, "model JSON file")->required();
    response->add_option("--drive", drive, "pulse|step");
    response->add_option("--chi", chi, "perturbation strength");
    response->add_option("--tgrid", tgrid, "start:stop:points:lin|log")->required();
    response->add_option("--cmax", cmax, "standard|tight");
    response->add_option("--out", out_path, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitInputError;
    }

    try {
        if (check->parsed()) {
            RunConfig config;
            if (!model_path.empty()) config.model_path = model_path;
            config.states = parse_states(states);
            config.models = models < 0 ? 1 : models;
            config.t_grid = parse_time_grid(tgrid);
            config.bounds = parse_bounds(bounds);
            config.cmax_mode = parse_cmax(cmax);
            if (!out_path.empty()) config.output_path = out_path;
            if (format == "json") config.format = OutputFormat::Json;
            else if (format != "csv") throw Error(ErrorCode::BadInput, "--format must be csv or json");
            config.seed = seed;
            config.chi = chi;
            config.rhs_scale = rhs_scale;
            return cmd_check(config, std::cout, std::cerr);
        }
        if (fig2->parsed() || fig3->parsed()) {
            FigureConfig config;
            if (!out_path.empty()) config.out_dir = out_path;
            config.seed = seed;
            if (models >= 0) config.models = models;
            if (!tgrid.empty()) config.t_grid = parse_time_grid(tgrid);
            return fig2->parsed() ? cmd_figure2(config, std::cerr) : cmd_figure3(config, std::cerr);
        }
        if (stress->parsed()) {
            StressConfig config;
            if (models >= 0) config.models = models;
            config.states = parse_states(states);
            config.seed = seed;
            if (!tgrid.empty()) config.t_grid = parse_time_grid(tgrid);
            config.cmax_mode = parse_cmax(cmax);
            config.chi = chi;
            std::optional<std::filesystem::path> out;
            if (!out_path.empty()) out = out_path;
            return cmd_stress(config, out, std::cout, std::cerr);
        }
        if (response->parsed()) {
            ResponseConfig config;
            config.model_path = model_path;
            if (drive == "pulse") config.drive = ResponseDrive::Pulse;
            else if (drive != "step") throw Error(ErrorCode::BadInput, "--drive must be pulse or step");
            config.chi = chi;
            config.t_grid = parse_time_grid(tgrid);
            config.cmax_mode = parse_cmax(cmax);
            if (!out_path.empty()) config.output_path = out_path;
            return cmd_response(config, std::cout, std::cerr);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    }
    return kExitInputError;
}
