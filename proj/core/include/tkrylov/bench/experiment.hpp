#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tkrylov/bench/generators.hpp"
#include "tkrylov/krylov_state.hpp"
#include "tkrylov/recursions.hpp"

namespace tkrylov::bench {

/// Wall-clock plus operation counts for one run; the tvv-equivalent count is
/// the comparison unit (a Gram matvec counts double).
struct OpCounter {
    Counters ops;
    double wall_ms = 0.0;
};

enum class Method {
    minimal,
    modified,
    maximal,
    optimized_hosvd,
    optimized_krylov,
    small_mode,
    contracted,
    hosvd,
    hosvd_krylov,
};

const char* method_name(Method m);
Method method_from_name(const std::string& name);

enum class StartPolicy { random, fibre_mean, file };

/// Start-vector file: three whitespace-separated blocks "len v_1 ... v_len"
/// for modes 1 and 2, optionally followed by a third block for mode 3.
StartVectors read_start_vectors(std::istream& in);
StartVectors read_start_vectors_file(const std::string& path);

/// Experiment description, loadable from a flat key = value text file.
/// Every key can be overridden by an environment variable named
/// TKRYLOV_<KEY> with the key uppercased ('-' and '.' become '_').
struct ExperimentSpec {
    std::string experiment_id = "experiment";
    std::string source = "low-rank";  // low-rank | sparse | file
    std::array<int, 3> dims{20, 20, 20};
    std::array<int, 3> gen_ranks{5, 5, 5};         // low-rank source
    std::int64_t nnz = 0;                          // sparse source
    ValueDistribution distribution = ValueDistribution::gaussian;
    bool single_per_tube = false;
    std::string tensor_file;                       // file source
    std::vector<Method> methods{Method::minimal};
    std::vector<int> rank_schedule{5};
    std::optional<std::array<int, 3>> target_ranks;  // per-mode targets
    int reps = 1;
    std::uint64_t seed = 1;
    StartPolicy start_policy = StartPolicy::random;
    std::string start_file;  // start_policy = file
    int warmup = 4;
    int inner_steps = 3;
    int small_mode = 0;  // 0 = pick the smallest mode
    SmallModeOptions::Policy small_policy = SmallModeOptions::Policy::cyclic;
    double breakdown_tol = 1e-12;
    std::string output;       // CSV path (CLI)
    std::string save_states;  // optional archive directory
};

ExperimentSpec parse_spec(std::istream& in);
ExperimentSpec parse_spec_file(const std::string& path);

/// Applies TKRYLOV_* environment overrides on top of a parsed spec.
void apply_env_overrides(ExperimentSpec& spec);

/// One CSV row; on a per-row failure `error` is set and the metric fields
/// are left empty in the CSV.
struct RunRecord {
    std::string experiment_id;
    Method method;
    int k = 0;
    std::array<int, 3> ranks{0, 0, 0};
    int rep = 0;
    std::uint64_t seed = 0;
    double core_norm = 0.0;
    double rel_error = 0.0;
    std::optional<double> max_principal_angle;
    OpCounter counter;  // the tvv_count CSV column is counter.ops.tvv_equivalents()
    int breakdowns = 0;
    std::string error;
};

std::vector<RunRecord> run_experiment(const ExperimentSpec& spec);

extern const char* const kCsvHeader;
void write_csv(std::ostream& out, const std::vector<RunRecord>& rows);
std::string to_csv(const std::vector<RunRecord>& rows);

}  // namespace tkrylov::bench
