#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "tkrylov/archive.hpp"
#include "tkrylov/bench/experiment.hpp"
#include "tkrylov/bench/generators.hpp"
#include "tkrylov/coordinate_io.hpp"
#include "tkrylov/factorization.hpp"
#include "tkrylov/tensor_ops.hpp"

using namespace tkrylov;

namespace {

std::array<int, 3> parse_triple_arg(const std::string& value, const std::string& name) {
    std::array<int, 3> out{};
    char c1 = 0, c2 = 0;
    std::istringstream in(value);
    if (!(in >> out[0] >> c1 >> out[1] >> c2 >> out[2]) || c1 != ',' || c2 != ',')
        throw CLI::ValidationError(name, "expected three comma-separated integers");
    return out;
}

int cmd_gen(const std::string& out_path, const std::string& dims_arg, const std::string& ranks_arg,
            long long nnz, const std::string& distribution, bool single_per_tube,
            std::uint64_t seed) {
    const auto dims = parse_triple_arg(dims_arg, "--dims");
    if (!ranks_arg.empty() && nnz >= 0)
        throw CLI::ValidationError("--ranks/--nnz", "choose either a low-rank dense tensor or a sparse one");
    if (!ranks_arg.empty()) {
        const auto ranks = parse_triple_arg(ranks_arg, "--ranks");
        const auto t = bench::gen_low_rank(dims, ranks, seed);
        write_coordinate_file(out_path, t.tensor);
        std::cout << "wrote dense low-rank tensor " << dims[0] << "x" << dims[1] << "x" << dims[2]
                  << " of rank (" << ranks[0] << "," << ranks[1] << "," << ranks[2] << ") to "
                  << out_path << "\n";
        return 0;
    }
    if (nnz < 0) throw CLI::ValidationError("gen", "one of --ranks or --nnz is required");
    const auto dist = distribution == "uniform" ? bench::ValueDistribution::uniform
                                                : bench::ValueDistribution::gaussian;
    const SparseTensor3 A = bench::gen_sparse(dims, nnz, seed, dist, single_per_tube);
    write_coordinate_file(out_path, A);
    std::cout << "wrote sparse tensor " << dims[0] << "x" << dims[1] << "x" << dims[2] << " with "
              << A.nnz() << " nonzeros to " << out_path << "\n";
    return 0;
}

int cmd_run(const std::string& spec_path, const std::string& output_override) {
    bench::ExperimentSpec spec = bench::parse_spec_file(spec_path);
    if (!output_override.empty()) spec.output = output_override;
    if (!spec.save_states.empty()) std::filesystem::create_directories(spec.save_states);

    const auto rows = bench::run_experiment(spec);
    int errors = 0;
    for (const auto& r : rows)
        if (!r.error.empty()) ++errors;

    if (spec.output.empty()) {
        bench::write_csv(std::cout, rows);
    } else {
        std::ofstream out(spec.output);
        if (!out) {
            std::cerr << "cannot write " << spec.output << "\n";
            return 1;
        }
        bench::write_csv(out, rows);
        std::cout << rows.size() << " rows written to " << spec.output;
        if (errors) std::cout << " (" << errors << " rows carry errors)";
        std::cout << "\n";
    }
    return 0;
}

int cmd_verify(const std::string& state_path, const std::string& tensor_path, double tol) {
    const KrylovState state = load_state(state_path);
    const SparseTensor3 A = read_coordinate_file(tensor_path);
    const ResidualReport report = factorization_residuals(A, state);

    if (report.families.empty()) {
        std::cout << "no factorization identities apply to this state's method\n";
        return 0;
    }
    bool ok = true;
    for (const auto& f : report.families) {
        const bool pass = f.max_rel_residual <= tol;
        ok = ok && pass;
        std::cout << (pass ? "[PASS] " : "[FAIL] ") << f.name << ": max relative residual "
                  << std::setprecision(3) << std::scientific << f.max_rel_residual << " over "
                  << f.checks << " checks (tol " << tol << ")\n"
                  << std::defaultfloat;
    }
    return ok ? 0 : 2;
}

int cmd_info(const std::string& path) {
    const SparseTensor3 A = read_coordinate_file(path);
    const auto [l, m, n] = A.dims();
    const double cells = static_cast<double>(l) * m * n;
    int nonempty = 0;
    std::int64_t max_slice = 0;
    for (int k = 1; k <= n; ++k) {
        const auto s = A.slice(k);
        if (!s.empty()) ++nonempty;
        max_slice = std::max<std::int64_t>(max_slice, static_cast<std::int64_t>(s.size()));
    }
    std::cout << "dims:             " << l << " x " << m << " x " << n << "\n"
              << "nnz:              " << A.nnz() << "\n"
              << "density:          " << (cells > 0 ? A.nnz() / cells : 0.0) << "\n"
              << "frobenius norm:   " << frob_norm(A) << "\n"
              << "nonempty slices:  " << nonempty << " of " << n << "\n"
              << "largest slice:    " << max_slice << " entries\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Krylov-type low-multilinear-rank approximation toolkit"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a synthetic tensor file");
    std::string gen_out, gen_dims, gen_ranks, gen_dist = "gaussian";
    long long gen_nnz = -1;
    bool gen_tube = false;
    std::uint64_t gen_seed = 1;
    gen->add_option("--out", gen_out, "output coordinate file")->required()
        ->envname("TKRYLOV_GEN_OUT");
    gen->add_option("--dims", gen_dims, "tensor dimensions l,m,n")->required()
        ->envname("TKRYLOV_GEN_DIMS");
    gen->add_option("--ranks", gen_ranks, "low-rank generator ranks p,q,r (dense output)")
        ->envname("TKRYLOV_GEN_RANKS");
    gen->add_option("--nnz", gen_nnz, "sparse generator nonzero count")
        ->envname("TKRYLOV_GEN_NNZ");
    gen->add_option("--distribution", gen_dist, "sparse value distribution gaussian|uniform")
        ->envname("TKRYLOV_GEN_DISTRIBUTION");
    gen->add_flag("--single-per-tube", gen_tube, "at most one nonzero per mode-3 tube");
    gen->add_option("--seed", gen_seed, "random seed")->envname("TKRYLOV_GEN_SEED");

    // run
    auto* run = app.add_subcommand("run", "run an experiment spec file, emit CSV");
    std::string run_spec, run_output;
    run->add_option("spec", run_spec, "experiment spec file")->required()
        ->check(CLI::ExistingFile);
    run->add_option("--output", run_output, "CSV output path (overrides the spec file)")
        ->envname("TKRYLOV_OUTPUT");

    // verify
    auto* verify = app.add_subcommand("verify", "check factorization identities of a state archive");
    std::string verify_state, verify_tensor;
    double verify_tol = 1e-10;
    verify->add_option("--state", verify_state, "state archive (JSON)")->required()
        ->check(CLI::ExistingFile);
    verify->add_option("--tensor", verify_tensor, "tensor coordinate file")->required()
        ->check(CLI::ExistingFile);
    verify->add_option("--tol", verify_tol, "residual tolerance")->envname("TKRYLOV_VERIFY_TOL");

    // info
    auto* info = app.add_subcommand("info", "print tensor statistics");
    std::string info_path;
    info->add_option("file", info_path, "tensor coordinate file")->required()
        ->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return cmd_gen(gen_out, gen_dims, gen_ranks, gen_nnz, gen_dist, gen_tube, gen_seed);
        if (run->parsed()) return cmd_run(run_spec, run_output);
        if (verify->parsed()) return cmd_verify(verify_state, verify_tensor, verify_tol);
        if (info->parsed()) return cmd_info(info_path);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
