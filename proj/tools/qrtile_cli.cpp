// Command-line driver: schedule, simulate, evc, bench.

#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qrtile/report.hpp"

namespace {

using qrtile::RunConfig;

void add_common(CLI::App* cmd, RunConfig& config, std::string& weights_str) {
    cmd->add_option("--fixture", config.fixture, "bundled circuit or Hamiltonian name");
    cmd->add_option("--circuit", config.circuit_path, "circuit file");
    cmd->add_option("--hamiltonian", config.hamiltonian_path, "Hamiltonian file");
    cmd->add_option("--p", config.p, "number of processing elements (power of two)");
    cmd->add_option("--nodes", config.n_node, "number of nodes (power of two)");
    cmd->add_option("--gpn", config.n_gpn, "PEs per node (power of two)");
    cmd->add_option("--scheduler", config.scheduler, "flat|hierarchical|adhoc")
        ->check(CLI::IsMember({"flat", "hierarchical", "adhoc"}));
    cmd->add_option("--weights", weights_str, "QR cost weights: w_intra,w_inter");
    cmd->add_option("--seed", config.seed, "payload/coefficient seed");
    cmd->add_option("--workers", config.workers, "parallel worker count");
    cmd->add_option("--out", config.out_path, "output path");
    cmd->add_option("--format", config.format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->set_config("--config", "", "key=value config file; flags override");
}

void parse_weights(const std::string& s, qrtile::CostWeights& w) {
    if (s.empty()) return;
    auto comma = s.find(',');
    if (comma == std::string::npos) throw qrtile::ConfigError("--weights expects wi,we");
    try {
        w.w_intra = std::stod(s.substr(0, comma));
        w.w_inter = std::stod(s.substr(comma + 1));
    } catch (const std::exception&) {
        throw qrtile::ConfigError("--weights expects two numbers");
    }
    w.validate();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lazy qubit-reordering scheduler and distributed-simulation emulator"};
    app.require_subcommand(1);

    RunConfig config;
    std::string weights_str;
    std::string compare_str;
    std::string sweep_str;
    std::string diag_str = "on";
    std::string sched_list_str;

    CLI::App* sched = app.add_subcommand("schedule", "schedule a circuit and report QR metrics");
    add_common(sched, config, weights_str);
    sched->add_option("--compare", compare_str, "comma-separated schedulers to compare");

    CLI::App* sim = app.add_subcommand("simulate", "execute a schedule on the emulator");
    add_common(sim, config, weights_str);
    sim->add_flag("--verify", config.verify, "compare the final state against the dense oracle");

    CLI::App* evc = app.add_subcommand("evc", "tile Pauli strings and compute an expectation value");
    add_common(evc, config, weights_str);
    evc->add_option("--diagonalize", diag_str, "on|off")->check(CLI::IsMember({"on", "off"}));
    evc->add_flag("--verify", config.verify, "compare the energy against the dense oracle");

    CLI::App* bench = app.add_subcommand("bench", "sweep schedulers over GateFabric circuits");
    add_common(bench, config, weights_str);
    bench->add_option("--sweep-n", sweep_str, "comma-separated qubit counts");
    bench->add_option("--layers", config.layers, "GateFabric layers");
    bench->add_option("--schedulers", sched_list_str, "comma-separated scheduler list");

    CLI11_PARSE(app, argc, argv);

    try {
        parse_weights(weights_str, config.weights);
        config.diagonalize = diag_str != "off";
        auto split = [](const std::string& s) {
            std::vector<std::string> parts;
            std::stringstream ss(s);
            std::string item;
            while (std::getline(ss, item, ','))
                if (!item.empty()) parts.push_back(item);
            return parts;
        };
        config.compare = split(compare_str);
        for (const std::string& tok : split(sweep_str)) config.sweep_n.push_back(std::stoi(tok));
        if (!sched_list_str.empty()) config.bench_schedulers = split(sched_list_str);
        if (config.workers < 1) throw qrtile::ConfigError("--workers must be at least 1");

        if (sched->parsed()) return qrtile::cmd_schedule(config, std::cout, std::cerr);
        if (sim->parsed()) return qrtile::cmd_simulate(config, std::cout, std::cerr);
        if (evc->parsed()) return qrtile::cmd_evc(config, std::cout, std::cerr);
        if (bench->parsed()) return qrtile::cmd_bench(config, std::cout, std::cerr);
    } catch (const qrtile::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
