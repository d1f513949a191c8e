#include "tkrylov/bench/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "tkrylov/archive.hpp"
#include "tkrylov/coordinate_io.hpp"
#include "tkrylov/dense_tensor.hpp"
#include "tkrylov/recursions.hpp"
#include "tkrylov/sparse_tensor.hpp"
#include "tkrylov/subspace.hpp"
#include "tkrylov/tensor_ops.hpp"
#include "tkrylov/tucker.hpp"

namespace tkrylov::bench {

const char* const kCsvHeader =
    "experiment_id,method,k,p,q,r,rep,seed,core_norm,rel_error,max_principal_angle,tvv_count,"
    "wall_ms,breakdowns";

const char* method_name(Method m) {
    switch (m) {
        case Method::minimal: return "minimal";
        case Method::modified: return "modified";
        case Method::maximal: return "maximal";
        case Method::optimized_hosvd: return "optimized-hosvd";
        case Method::optimized_krylov: return "optimized-krylov";
        case Method::small_mode: return "small-mode";
        case Method::contracted: return "contracted";
        case Method::hosvd: return "hosvd";
        default: return "hosvd-krylov";
    }
}

Method method_from_name(const std::string& name) {
    if (name == "minimal") return Method::minimal;
    if (name == "modified") return Method::modified;
    if (name == "maximal") return Method::maximal;
    if (name == "optimized-hosvd") return Method::optimized_hosvd;
    if (name == "optimized-krylov" || name == "optimized") return Method::optimized_krylov;
    if (name == "small-mode") return Method::small_mode;
    if (name == "contracted") return Method::contracted;
    if (name == "hosvd") return Method::hosvd;
    if (name == "hosvd-krylov") return Method::hosvd_krylov;
    throw std::invalid_argument("unknown method: " + name);
}

// ---------------------------------------------------------------------------
// spec parsing

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    auto e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::array<int, 3> parse_triple(const std::string& value, const std::string& key) {
    std::istringstream in(value);
    std::array<int, 3> out{};
    if (!(in >> out[0] >> out[1] >> out[2]))
        throw std::invalid_argument("spec key '" + key + "' expects three integers, got '" +
                                    value + "'");
    return out;
}

std::vector<int> parse_schedule(const std::string& value) {
    // Either "start:step:stop" or a comma-separated list.
    if (value.find(':') != std::string::npos) {
        int start = 0, step = 0, stop = 0;
        char c1 = 0, c2 = 0;
        std::istringstream in(value);
        if (!(in >> start >> c1 >> step >> c2 >> stop) || c1 != ':' || c2 != ':' || step <= 0)
            throw std::invalid_argument("bad rank schedule: " + value);
        std::vector<int> out;
        for (int k = start; k <= stop; k += step) out.push_back(k);
        return out;
    }
    std::vector<int> out;
    std::istringstream in(value);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(std::stoi(item));
    }
    if (out.empty()) throw std::invalid_argument("empty rank schedule");
    return out;
}

bool parse_bool(const std::string& value, const std::string& key) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw std::invalid_argument("spec key '" + key + "' expects a boolean, got '" + value + "'");
}

void apply_key(ExperimentSpec& spec, const std::string& key, const std::string& value) {
    if (key == "experiment_id") spec.experiment_id = value;
    else if (key == "source") spec.source = value;
    else if (key == "dims") spec.dims = parse_triple(value, key);
    else if (key == "gen_ranks") spec.gen_ranks = parse_triple(value, key);
    else if (key == "nnz") spec.nnz = std::stoll(value);
    else if (key == "distribution")
        spec.distribution = value == "uniform" ? ValueDistribution::uniform
                                               : ValueDistribution::gaussian;
    else if (key == "single_per_tube") spec.single_per_tube = parse_bool(value, key);
    else if (key == "tensor_file") spec.tensor_file = value;
    else if (key == "methods") {
        spec.methods.clear();
        std::istringstream in(value);
        std::string item;
        while (std::getline(in, item, ',')) {
            item = trim(item);
            if (!item.empty()) spec.methods.push_back(method_from_name(item));
        }
        if (spec.methods.empty()) throw std::invalid_argument("empty methods list");
    } else if (key == "rank_schedule") spec.rank_schedule = parse_schedule(value);
    else if (key == "target_ranks") spec.target_ranks = parse_triple(value, key);
    else if (key == "reps") spec.reps = std::stoi(value);
    else if (key == "seed") spec.seed = std::stoull(value);
    else if (key == "start_policy") {
        if (value == "fibre-mean") spec.start_policy = StartPolicy::fibre_mean;
        else if (value == "file") spec.start_policy = StartPolicy::file;
        else if (value == "random") spec.start_policy = StartPolicy::random;
        else throw std::invalid_argument("unknown start_policy: " + value);
    } else if (key == "start_file") spec.start_file = value;
    else if (key == "warmup") spec.warmup = std::stoi(value);
    else if (key == "inner_steps") spec.inner_steps = std::stoi(value);
    else if (key == "small_mode") spec.small_mode = std::stoi(value);
    else if (key == "small_policy") {
        if (value == "cyclic") spec.small_policy = SmallModeOptions::Policy::cyclic;
        else if (value == "random") spec.small_policy = SmallModeOptions::Policy::random_combination;
        else if (value == "optimized") spec.small_policy = SmallModeOptions::Policy::optimized;
        else throw std::invalid_argument("unknown small_policy: " + value);
    } else if (key == "breakdown_tol") spec.breakdown_tol = std::stod(value);
    else if (key == "output") spec.output = value;
    else if (key == "save_states") spec.save_states = value;
    else throw std::invalid_argument("unknown spec key: " + key);
}

const char* const kSpecKeys[] = {
    "experiment_id", "source",     "dims",        "gen_ranks",    "nnz",
    "distribution",  "single_per_tube", "tensor_file", "methods",  "rank_schedule",
    "target_ranks",  "reps",       "seed",        "start_policy", "start_file",
    "warmup",        "inner_steps", "small_mode", "small_policy", "breakdown_tol",
    "output",        "save_states",
};

}  // namespace

ExperimentSpec parse_spec(std::istream& in) {
    ExperimentSpec spec;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            std::ostringstream msg;
            msg << "spec parse error at line " << line_no << ": expected key = value";
            throw std::invalid_argument(msg.str());
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            apply_key(spec, key, value);
        } catch (const std::exception& err) {
            std::ostringstream msg;
            msg << "spec parse error at line " << line_no << ": " << err.what();
            throw std::invalid_argument(msg.str());
        }
    }
    return spec;
}

ExperimentSpec parse_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open spec file: " + path);
    ExperimentSpec spec = parse_spec(in);
    apply_env_overrides(spec);
    return spec;
}

void apply_env_overrides(ExperimentSpec& spec) {
    for (const char* key : kSpecKeys) {
        std::string env = "TKRYLOV_";
        for (const char* p = key; *p; ++p)
            env += (*p == '-' || *p == '.') ? '_' : static_cast<char>(std::toupper(*p));
        if (const char* value = std::getenv(env.c_str())) apply_key(spec, key, value);
    }
}

StartVectors read_start_vectors(std::istream& in) {
    auto read_block = [&](const char* which) {
        int len = 0;
        if (!(in >> len) || len < 1)
            throw std::runtime_error(std::string("start-vector file: bad length for ") + which);
        Eigen::VectorXd v(len);
        for (int i = 0; i < len; ++i)
            if (!(in >> v(i)))
                throw std::runtime_error(std::string("start-vector file: truncated ") + which);
        if (v.norm() == 0.0)
            throw std::runtime_error(std::string("start-vector file: zero vector for ") + which);
        return Eigen::VectorXd(v / v.norm());
    };
    StartVectors s;
    s.u1 = read_block("mode 1");
    s.v1 = read_block("mode 2");
    int peek_len = 0;
    if (in >> peek_len) {
        if (peek_len < 1) throw std::runtime_error("start-vector file: bad length for mode 3");
        Eigen::VectorXd w(peek_len);
        for (int i = 0; i < peek_len; ++i)
            if (!(in >> w(i))) throw std::runtime_error("start-vector file: truncated mode 3");
        if (w.norm() == 0.0) throw std::runtime_error("start-vector file: zero vector for mode 3");
        s.w1 = w / w.norm();
    }
    s.provenance = StartVectors::Provenance::user;
    return s;
}

StartVectors read_start_vectors_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open start-vector file: " + path);
    return read_start_vectors(in);
}

// ---------------------------------------------------------------------------
// running

namespace {

using TensorVariant = std::variant<DenseTensor3, SparseTensor3>;

TensorVariant make_tensor(const ExperimentSpec& spec, std::uint64_t seed,
                          std::optional<LowRankTensor>& truth) {
    if (spec.source == "low-rank") {
        LowRankTensor t = gen_low_rank(spec.dims, spec.gen_ranks, seed);
        TensorVariant out{std::move(t.tensor)};
        t.tensor = DenseTensor3();
        truth = std::move(t);
        return out;
    }
    if (spec.source == "sparse")
        return gen_sparse(spec.dims, spec.nnz, seed, spec.distribution, spec.single_per_tube);
    if (spec.source == "file") return read_coordinate_file(spec.tensor_file);
    throw std::invalid_argument("unknown tensor source: " + spec.source);
}

struct MethodOutput {
    Eigen::MatrixXd U, V, W;
    Counters counters;
    int breakdowns = 0;
    KrylovState state;  // kept for archiving when applicable
    bool has_state = false;
    std::optional<DenseTensor3> core;  // set by methods that already computed it
};

template <typename TensorT>
MethodOutput run_method(const TensorT& A, const ExperimentSpec& spec, Method method, int k,
                        std::uint64_t seed) {
    RecursionOptions ropt;
    ropt.seed = seed;
    ropt.breakdown_tol = spec.breakdown_tol;

    StartVectors starts;
    switch (spec.start_policy) {
        case StartPolicy::fibre_mean: starts = fibre_mean_starts(A); break;
        case StartPolicy::file: starts = read_start_vectors_file(spec.start_file); break;
        default: starts = StartVectors::random({A.dim1(), A.dim2(), A.dim3()}, seed); break;
    }

    const std::array<int, 3> targets =
        spec.target_ranks ? *spec.target_ranks : std::array<int, 3>{k, k, k};

    MethodOutput out;
    auto from_state = [&](KrylovState&& s) {
        out.U = s.U.matrix();
        out.V = s.V.matrix();
        out.W = s.W.matrix();
        out.counters = s.counters;
        out.breakdowns = static_cast<int>(s.events.size());
        out.state = std::move(s);
        out.has_state = true;
    };

    switch (method) {
        case Method::minimal:
            from_state(minimal_recursion(A, starts, k, ropt));
            break;
        case Method::modified:
            from_state(modified_minimal_recursion(A, starts, targets, ropt));
            break;
        case Method::maximal: {
            KrylovState full = maximal_recursion(A, starts, {A.dim1(), A.dim2(), A.dim3()}, ropt);
            const KrylovState cut = maximal_truncate(full, A, targets);
            out.U = cut.U.matrix();
            out.V = cut.V.matrix();
            out.W = cut.W.matrix();
            out.counters = cut.counters;
            out.breakdowns = static_cast<int>(full.events.size());
            // archive the untruncated run; it is the state the loop
            // factorization identities can be verified against
            out.state = std::move(full);
            out.has_state = true;
            break;
        }
        case Method::optimized_hosvd:
        case Method::optimized_krylov: {
            OptimizeOptions oopt;
            oopt.strategy = method == Method::optimized_hosvd
                                ? OptimizeOptions::Strategy::exact_hosvd
                                : OptimizeOptions::Strategy::inner_krylov;
            oopt.warmup = spec.warmup;
            oopt.inner_steps = spec.inner_steps;
            from_state(optimized_recursion(A, starts, k, oopt, ropt));
            break;
        }
        case Method::small_mode: {
            Mode small = Mode::one;
            if (spec.small_mode >= 1 && spec.small_mode <= 3) {
                small = mode_from_index(spec.small_mode);
            } else {
                int best = A.dim1();
                for (Mode m : {Mode::two, Mode::three})
                    if (A.dim(m) < best) {
                        best = A.dim(m);
                        small = m;
                    }
            }
            SmallModeOptions sopt;
            sopt.policy = spec.small_policy;
            from_state(small_mode_recursion(A, small, k, sopt, ropt));
            break;
        }
        case Method::contracted: {
            std::mt19937_64 rng(seed);
            Counters total;
            int breakdowns = 0;
            auto run_mode = [&](Mode mode, const Eigen::VectorXd& start) {
                LanczosResult r = contracted_lanczos(A, mode, std::min(k, A.dim(mode)), start);
                total += r.counters;
                if (r.breakdown) ++breakdowns;
                return Eigen::MatrixXd(r.basis.matrix());
            };
            Eigen::VectorXd su = starts.u1, sv = starts.v1;
            Eigen::VectorXd sw = starts.w1 ? *starts.w1 : random_unit_vector(A.dim3(), rng);
            out.U = run_mode(Mode::one, su);
            out.V = run_mode(Mode::two, sv);
            out.W = run_mode(Mode::three, sw);
            out.counters = total;
            out.breakdowns = breakdowns;
            break;
        }
        case Method::hosvd: {
            TuckerDecomp d = truncated_hosvd(A, targets);
            out.U = d.U;
            out.V = d.V;
            out.W = d.W;
            out.counters = d.counters;
            out.core = std::move(d.core);
            break;
        }
        case Method::hosvd_krylov: {
            TuckerDecomp d = hosvd_via_krylov(A, targets, ropt);
            out.U = d.U;
            out.V = d.V;
            out.W = d.W;
            out.counters = d.counters;
            out.core = std::move(d.core);
            break;
        }
    }
    return out;
}

double subspace_angle(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& basis) {
    if (truth.cols() <= basis.cols()) return max_principal_angle(truth, basis);
    return max_principal_angle(basis, truth);
}

std::string csv_double(double v) {
    std::ostringstream out;
    out << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
    return out.str();
}

}  // namespace

std::vector<RunRecord> run_experiment(const ExperimentSpec& spec) {
    std::vector<RunRecord> rows;

    for (int rep = 0; rep < spec.reps; ++rep) {
        const std::uint64_t rep_seed = spec.seed + static_cast<std::uint64_t>(rep);
        std::optional<LowRankTensor> truth;
        TensorVariant tensor = make_tensor(spec, rep_seed, truth);

        for (Method method : spec.methods) {
            for (int k : spec.rank_schedule) {
                RunRecord row;
                row.experiment_id = spec.experiment_id;
                row.method = method;
                row.k = k;
                row.rep = rep;
                row.seed = rep_seed;

                const auto t0 = std::chrono::steady_clock::now();
                try {
                    std::visit(
                        [&](const auto& A) {
                            MethodOutput mo = run_method(A, spec, method, k, rep_seed);
                            Counters counters = mo.counters;
                            const DenseTensor3 core =
                                mo.core ? std::move(*mo.core)
                                        : core_project(A, mo.U, mo.V, mo.W, &counters);
                            row.ranks = {static_cast<int>(mo.U.cols()),
                                         static_cast<int>(mo.V.cols()),
                                         static_cast<int>(mo.W.cols())};
                            row.core_norm = frob_norm(core);
                            const double a_norm = frob_norm(A);
                            row.rel_error =
                                approx_error_from_norms(a_norm, row.core_norm) /
                                std::max(a_norm, 1e-300);
                            if (truth) {
                                const double angle =
                                    std::max({subspace_angle(truth->X, mo.U),
                                              subspace_angle(truth->Y, mo.V),
                                              subspace_angle(truth->Z, mo.W)});
                                row.max_principal_angle = angle;
                            }
                            row.counter.ops = counters;
                            row.breakdowns = mo.breakdowns;
                            if (!spec.save_states.empty() && mo.has_state) {
                                std::ostringstream name;
                                name << spec.save_states << "/" << spec.experiment_id << "_"
                                     << method_name(method) << "_k" << k << "_rep" << rep
                                     << ".json";
                                save_state(name.str(), mo.state);
                            }
                        },
                        tensor);
                } catch (const std::exception& err) {
                    row.error = err.what();
                }
                row.counter.wall_ms = std::chrono::duration<double, std::milli>(
                                          std::chrono::steady_clock::now() - t0)
                                          .count();
                rows.push_back(std::move(row));
            }
        }
    }

    std::sort(rows.begin(), rows.end(), [](const RunRecord& a, const RunRecord& b) {
        const int ma = static_cast<int>(a.method), mb = static_cast<int>(b.method);
        return std::tie(a.experiment_id, ma, a.k, a.rep) <
               std::tie(b.experiment_id, mb, b.k, b.rep);
    });
    return rows;
}

void write_csv(std::ostream& out, const std::vector<RunRecord>& rows) {
    out << kCsvHeader << "\n";
    for (const RunRecord& r : rows) {
        out << r.experiment_id << "," << method_name(r.method) << "," << r.k << "," << r.ranks[0]
            << "," << r.ranks[1] << "," << r.ranks[2] << "," << r.rep << "," << r.seed << ",";
        if (r.error.empty()) {
            out << csv_double(r.core_norm) << "," << csv_double(r.rel_error) << ",";
            if (r.max_principal_angle) out << csv_double(*r.max_principal_angle);
            out << "," << r.counter.ops.tvv_equivalents() << ","
                << csv_double(r.counter.wall_ms) << "," << r.breakdowns;
        } else {
            std::string msg = r.error;
            std::replace(msg.begin(), msg.end(), ',', ';');
            out << ",,,," << csv_double(r.counter.wall_ms) << ",error: " << msg;
        }
        out << "\n";
    }
}

std::string to_csv(const std::vector<RunRecord>& rows) {
    std::ostringstream out;
    write_csv(out, rows);
    return out.str();
}

}  // namespace tkrylov::bench
