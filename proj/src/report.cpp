#include "qrtile/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "qrtile/evc_scheduler.hpp"

namespace qrtile {

namespace {

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

Circuit load_circuit(const RunConfig& config, ClusterShape* default_shape, bool need_payloads) {
    if (!config.fixture.empty()) {
        Circuit c = fixture_circuit(config.fixture, config.seed);
        if (default_shape) *default_shape = fixture_shape(config.fixture);
        return c;
    }
    if (!config.circuit_path.empty()) {
        std::ifstream in(config.circuit_path);
        if (!in) throw ConfigError("cannot open circuit file: " + config.circuit_path);
        std::stringstream buf;
        buf << in.rdbuf();
        Circuit c = parse_circuit(buf.str());
        if (need_payloads) seed_payloads(c, config.seed);
        if (default_shape) *default_shape = ClusterShape::flat(1);
        return c;
    }
    throw ConfigError("no circuit input: use --fixture or --circuit");
}

std::vector<PauliTerm> load_hamiltonian(const RunConfig& config, int* n_out) {
    if (!config.hamiltonian_path.empty()) {
        std::ifstream in(config.hamiltonian_path);
        if (!in) throw ConfigError("cannot open Hamiltonian file: " + config.hamiltonian_path);
        std::stringstream buf;
        buf << in.rdbuf();
        return parse_hamiltonian(buf.str(), n_out);
    }
    if (!config.fixture.empty()) return fixture_hamiltonian(config.fixture, n_out);
    throw ConfigError("no Hamiltonian input: use --fixture or --hamiltonian");
}

nlohmann::json config_echo(const RunConfig& config, const ClusterShape& shape) {
    return nlohmann::json{{"p", shape.p},
                          {"n_node", shape.n_node},
                          {"n_gpn", shape.n_gpn},
                          {"scheduler", config.scheduler},
                          {"seed", config.seed},
                          {"weights", {config.weights.w_intra, config.weights.w_inter}},
                          {"diagonalize", config.diagonalize},
                          {"workers", config.workers}};
}

void emit(const RunConfig& config, std::ostream& out, const std::string& text) {
    if (!config.out_path.empty()) {
        std::ofstream f(config.out_path, std::ios::binary);
        if (!f) throw ConfigError("cannot write output file: " + config.out_path);
        f << text;
    } else {
        out << text;
    }
}

}  // namespace

ClusterShape RunConfig::resolve_shape(const ClusterShape& fallback) const {
    if (n_node > 0 || n_gpn > 0) {
        if (n_node <= 0 || n_gpn <= 0)
            throw ConfigError("--nodes and --gpn must be given together");
        ClusterShape s = ClusterShape::two_level(n_node, n_gpn);
        if (p > 0 && p != s.p) throw ConfigError("--p disagrees with --nodes * --gpn");
        s.validate();
        return s;
    }
    if (p > 0) {
        ClusterShape s = ClusterShape::flat(p);
        s.validate();
        return s;
    }
    return fallback;
}

Schedule run_scheduler(const std::string& name, const Circuit& circuit,
                       const DependencyGraph& deps, const ClusterShape& shape) {
    if (name == "flat") return flat_tiling(circuit, deps, shape);
    if (name == "hierarchical") return hierarchical_tiling(circuit, deps, shape);
    if (name == "adhoc") return adhoc_schedule(circuit, deps, shape);
    throw ConfigError("unknown scheduler: " + name);
}

nlohmann::json schedule_metrics(const Schedule& schedule, const CostWeights& weights,
                                double sched_time_ms) {
    QrCounts counts = count_qrs(schedule);
    std::vector<int> tile_sizes;
    tile_sizes.reserve(schedule.tiles.size());
    for (const Tile& t : schedule.tiles) tile_sizes.push_back(static_cast<int>(t.gates.size()));
    return nlohmann::json{{"n_qr", counts.total},
                          {"n_intra", counts.intra},
                          {"n_inter", counts.inter},
                          {"cost", qr_cost(counts, weights)},
                          {"tiles", static_cast<int>(schedule.tiles.size())},
                          {"tile_sizes", tile_sizes},
                          {"sched_time_ms", sched_time_ms}};
}

int cmd_schedule(const RunConfig& config, std::ostream& out, std::ostream&) {
    ClusterShape shape = ClusterShape::flat(1);
    Circuit circuit = load_circuit(config, &shape, false);
    shape = config.resolve_shape(shape);
    DependencyGraph deps = build_dependency_graph(circuit);

    std::vector<std::string> names{config.scheduler};
    for (const std::string& s : config.compare)
        if (std::find(names.begin(), names.end(), s) == names.end()) names.push_back(s);

    nlohmann::json report;
    report["config"] = config_echo(config, shape);
    if (names.size() == 1) {
        double t0 = now_ms();
        Schedule s = run_scheduler(names[0], circuit, deps, shape);
        double t1 = now_ms();
        report["metrics"] = schedule_metrics(s, config.weights, t1 - t0);
        report["schedule"] = schedule_to_json(s);
    } else {
        nlohmann::json results;
        for (const std::string& name : names) {
            double t0 = now_ms();
            Schedule s = run_scheduler(name, circuit, deps, shape);
            double t1 = now_ms();
            results[name] = {{"metrics", schedule_metrics(s, config.weights, t1 - t0)},
                             {"schedule", schedule_to_json(s)}};
        }
        report["results"] = results;
    }
    emit(config, out, report.dump(2) + "\n");
    return 0;
}

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& diag) {
    ClusterShape shape = ClusterShape::flat(1);
    Circuit circuit = load_circuit(config, &shape, true);
    shape = config.resolve_shape(shape);
    for (const Operator& op : circuit.operators)
        if (op.kind == OpKind::Gate && !op.payload)
            throw MissingPayload("gate " + std::to_string(op.id) + " has no payload");

    DependencyGraph deps = build_dependency_graph(circuit);
    Schedule schedule = run_scheduler(config.scheduler, circuit, deps, shape);
    DistributedState state = init_state(circuit.n, shape);
    run_qsu(state, circuit, schedule, config.workers);
    ReferenceState final_state = flatten(state);

    nlohmann::json report;
    report["config"] = config_echo(config, shape);
    report["n"] = circuit.n;
    report["norm"] = state.norm();
    report["qr_executed"] = static_cast<int>(state.qr_log.size());
    report["relocated_total"] = state.total_relocated;

    int exit_code = 0;
    if (config.verify) {
        if (circuit.n > kOracleMaxQubits)
            throw OracleTooLarge("--verify needs n <= " + std::to_string(kOracleMaxQubits));
        ReferenceState oracle = ReferenceState::zero(circuit.n);
        for (const Operator& op : circuit.operators) dense_oracle_apply(oracle, op);
        double worst = 0.0;
        for (std::size_t i = 0; i < oracle.amps.size(); ++i)
            worst = std::max(worst, std::abs(oracle.amps[i] - final_state.amps[i]));
        bool pass = worst <= 1e-12;
        report["verify"] = {{"max_amp_error", worst}, {"pass", pass}};
        if (!pass) exit_code = 1;
    }
    if (!config.out_path.empty()) {
        std::ofstream f(config.out_path, std::ios::binary);
        if (!f) throw ConfigError("cannot write output file: " + config.out_path);
        write_state_dump(f, final_state, shape.p);
        report["dump"] = config.out_path;
    }
    out << report.dump(2) << "\n";
    if (exit_code != 0) diag << "verification failed\n";
    return exit_code;
}

int cmd_evc(const RunConfig& config, std::ostream& out, std::ostream& diag) {
    int n = 0;
    std::vector<PauliTerm> terms = load_hamiltonian(config, &n);

    Circuit circuit;
    bool have_circuit = false;
    if (!config.circuit_path.empty()) {
        std::ifstream in(config.circuit_path);
        if (!in) throw ConfigError("cannot open circuit file: " + config.circuit_path);
        std::stringstream buf;
        buf << in.rdbuf();
        circuit = parse_circuit(buf.str());
        seed_payloads(circuit, config.seed);
        if (circuit.n != n)
            throw ConfigError("circuit has " + std::to_string(circuit.n) +
                              " qubits, Hamiltonian has " + std::to_string(n));
        have_circuit = true;
    }

    ClusterShape shape = config.resolve_shape(ClusterShape::flat(1));

    DistributedState state = init_state(n, shape);
    Schedule schedule;
    if (have_circuit) {
        DependencyGraph deps = build_dependency_graph(circuit);
        schedule = run_scheduler(config.scheduler, circuit, deps, shape);
        run_qsu(state, circuit, schedule, config.workers);
    }

    double t0 = now_ms();
    PauliTilePlan plan = plan_evc(terms, n, shape, config.diagonalize, config.workers);
    double t1 = now_ms();
    Amp energy = expectation(state, plan, terms, config.workers);
    BaselineResult baseline = index_order_baseline(terms, n, shape);
    double ratio = static_cast<double>(baseline.n_qr) / std::max(1, plan.qr_count());

    nlohmann::json report;
    report["config"] = config_echo(config, shape);
    report["n"] = n;
    report["terms"] = static_cast<int>(terms.size());
    report["energy"] = energy.real();
    report["energy_imag"] = energy.imag();
    report["tiles"] = static_cast<int>(plan.tiles.size());
    report["n_qr"] = plan.qr_count();
    report["baseline_qr"] = baseline.n_qr;
    report["ratio"] = ratio;
    report["sched_time_ms"] = t1 - t0;
    report["plan"] = plan_to_json(plan);

    int exit_code = 0;
    if (config.verify) {
        if (n > kOracleMaxQubits)
            throw OracleTooLarge("--verify needs n <= " + std::to_string(kOracleMaxQubits));
        ReferenceState oracle = ReferenceState::zero(n);
        if (have_circuit)
            for (const Operator& op : circuit.operators) dense_oracle_apply(oracle, op);
        Amp dense = dense_oracle_expectation(oracle, terms);
        double err = std::abs(energy - dense);
        bool pass = err <= 1e-10 * (1.0 + std::abs(dense)) && std::abs(energy.imag()) <= 1e-10;
        report["verify"] = {{"dense_energy", dense.real()}, {"abs_error", err}, {"pass", pass}};
        if (!pass) exit_code = 1;
    }
    emit(config, out, report.dump(2) + "\n");
    if (exit_code != 0) diag << "verification failed\n";
    return exit_code;
}

int cmd_bench(const RunConfig& config, std::ostream& out, std::ostream&) {
    std::ostringstream csv;
    csv << "n,p,scheduler,n_qr,n_intra,n_inter,cost,sched_time_ms\n";
    ClusterShape shape = config.resolve_shape(ClusterShape::flat(4));
    for (int n : config.sweep_n) {
        Circuit circuit = gen_gatefabric(GateFabricSpec{n, config.layers, config.seed, false});
        DependencyGraph deps = build_dependency_graph(circuit);
        for (const std::string& name : config.bench_schedulers) {
            double t0 = now_ms();
            Schedule s = run_scheduler(name, circuit, deps, shape);
            double t1 = now_ms();
            QrCounts counts = count_qrs(s);
            csv << n << "," << shape.p << "," << name << "," << counts.total << ","
                << counts.intra << "," << counts.inter << ","
                << qr_cost(counts, config.weights) << "," << (t1 - t0) << "\n";
        }
    }
    emit(config, out, csv.str());
    return 0;
}

}  // namespace qrtile
