#pragma once

#include <iosfwd>

#include "json.hpp"
#include "qrtile/models.hpp"
#include "qrtile/qsu_scheduler.hpp"

namespace qrtile {

/*
 * Batch-driver configuration. Flags override config-file values which
 * override the defaults below.
 */
struct RunConfig {
    std::string fixture;
    std::string circuit_path;
    std::string hamiltonian_path;
    int p = 0;  // 0 = fixture default (or 1)
    int n_node = 0;
    int n_gpn = 0;
    std::string scheduler = "flat";
    std::vector<std::string> compare;
    CostWeights weights;
    std::uint64_t seed = 1;
    bool diagonalize = true;
    int workers = 1;
    bool verify = false;
    std::string out_path;
    std::string format = "json";
    // bench sweep
    std::vector<int> sweep_n;
    int layers = 2;
    std::vector<std::string> bench_schedulers = {"flat", "hierarchical", "adhoc"};

    ClusterShape resolve_shape(const ClusterShape& fallback) const;
};

Schedule run_scheduler(const std::string& name, const Circuit& circuit,
                       const DependencyGraph& deps, const ClusterShape& shape);

nlohmann::json schedule_metrics(const Schedule& schedule, const CostWeights& weights,
                                double sched_time_ms);

// Each command writes its report to `out` (or the configured output path)
// and returns the process exit code: 0 on success, 1 when a requested
// verification fails.
int cmd_schedule(const RunConfig& config, std::ostream& out, std::ostream& diag);
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& diag);
int cmd_evc(const RunConfig& config, std::ostream& out, std::ostream& diag);
int cmd_bench(const RunConfig& config, std::ostream& out, std::ostream& diag);

}  // namespace qrtile
