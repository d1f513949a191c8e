#include "tkrylov/bench/generators.hpp"

#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "tkrylov/subspace.hpp"
#include "tkrylov/tensor_ops.hpp"

namespace tkrylov::bench {

namespace {

double gram_eigen_gap(const DenseTensor3& core, Mode mode) {
    const Eigen::MatrixXd G = gram(core, mode);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G);
    const double max = eig.eigenvalues().maxCoeff();
    const double min = eig.eigenvalues().minCoeff();
    return max > 0 ? min / max : 0.0;
}

}  // namespace

LowRankTensor gen_low_rank(std::array<int, 3> dims, std::array<int, 3> ranks,
                           std::uint64_t seed) {
    for (int d = 0; d < 3; ++d) {
        if (ranks[d] < 1 || ranks[d] > dims[d]) {
            std::ostringstream msg;
            msg << "gen_low_rank: rank " << ranks[d] << " outside 1.." << dims[d] << " in mode "
                << d + 1;
            throw std::invalid_argument(msg.str());
        }
    }

    std::mt19937_64 rng(seed);
    LowRankTensor out;
    out.X = random_orthonormal(dims[0], ranks[0], rng);
    out.Y = random_orthonormal(dims[1], ranks[1], rng);
    out.Z = random_orthonormal(dims[2], ranks[2], rng);

    // The core must have full multilinear rank for the ground truth to be the
    // actual rank; a degenerate draw (probability zero, but checked) is
    // redrawn deterministically.
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int attempt = 0; attempt < 8; ++attempt) {
        DenseTensor3 core(ranks[0], ranks[1], ranks[2]);
        for (double& x : core.data()) x = normal(rng);
        if (gram_eigen_gap(core, Mode::one) > 1e-6 && gram_eigen_gap(core, Mode::two) > 1e-6 &&
            gram_eigen_gap(core, Mode::three) > 1e-6) {
            out.core = std::move(core);
            out.tensor = ttm_multi(out.core, &out.X, &out.Y, &out.Z);
            return out;
        }
    }
    throw std::runtime_error("gen_low_rank: could not draw a full-rank core");
}

SparseTensor3 gen_sparse(std::array<int, 3> dims, std::int64_t nnz, std::uint64_t seed,
                         ValueDistribution dist, bool single_per_tube) {
    const auto [l, m, n] = dims;
    if (l < 1 || m < 1 || n < 1) throw std::invalid_argument("gen_sparse: empty dims");
    const std::int64_t cells =
        single_per_tube ? static_cast<std::int64_t>(l) * m : static_cast<std::int64_t>(l) * m * n;
    if (nnz < 0 || nnz > cells) {
        std::ostringstream msg;
        msg << "gen_sparse: nnz " << nnz << " infeasible, limit is " << cells;
        throw std::invalid_argument(msg.str());
    }

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> di(1, l), dj(1, m), dk(1, n);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    auto draw_value = [&]() {
        double v = 0.0;
        while (v == 0.0) v = dist == ValueDistribution::gaussian ? gauss(rng) : unif(rng);
        return v;
    };

    std::unordered_set<std::int64_t> taken;
    taken.reserve(static_cast<std::size_t>(nnz) * 2);
    std::vector<SparseEntry> entries;
    entries.reserve(static_cast<std::size_t>(nnz));
    while (static_cast<std::int64_t>(entries.size()) < nnz) {
        const int i = di(rng), j = dj(rng), k = dk(rng);
        const std::int64_t key =
            single_per_tube ? (i - 1) + static_cast<std::int64_t>(l) * (j - 1)
                            : (i - 1) + static_cast<std::int64_t>(l) * ((j - 1) +
                                  static_cast<std::int64_t>(m) * (k - 1));
        if (!taken.insert(key).second) continue;
        entries.push_back({i, j, k, draw_value()});
    }
    return SparseTensor3(l, m, n, std::move(entries), SparseTensor3::DuplicatePolicy::reject);
}

}  // namespace tkrylov::bench
