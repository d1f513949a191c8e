#include "tkrylov/krylov_state.hpp"

#include "tkrylov/subspace.hpp"

namespace tkrylov {

StartVectors StartVectors::random(std::array<int, 3> dims, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    StartVectors s;
    s.u1 = random_unit_vector(dims[0], rng);
    s.v1 = random_unit_vector(dims[1], rng);
    s.provenance = Provenance::random;
    return s;
}

namespace {

int hessenberg_cols(const KrylovState& s) {
    const int k = std::min({s.U.size(), s.V.size(), s.W.size()});
    return std::max(0, k - 1);
}

}  // namespace

Eigen::MatrixXd KrylovState::hessenberg_u() const {
    const int rows = U.size();
    const int cols = hessenberg_cols(*this);
    Eigen::MatrixXd Hm = Eigen::MatrixXd::Zero(rows, cols);
    for (int i = 1; i <= cols; ++i)
        for (int lam = 1; lam <= rows; ++lam) Hm(lam - 1, i - 1) = H.at(lam, i, i);
    return Hm;
}

Eigen::MatrixXd KrylovState::hessenberg_v() const {
    const int rows = V.size();
    const int cols = hessenberg_cols(*this);
    const int shift = variant == MinimalVariant::latest_pairs ? 1 : 0;
    Eigen::MatrixXd Hm = Eigen::MatrixXd::Zero(rows, cols);
    for (int i = 1; i <= cols; ++i)
        for (int mu = 1; mu <= rows; ++mu) Hm(mu - 1, i - 1) = H.at(i + shift, mu, i);
    return Hm;
}

Eigen::MatrixXd KrylovState::hessenberg_w() const {
    const int rows = W.size();
    const int cols = hessenberg_cols(*this);
    const int shift = variant == MinimalVariant::latest_pairs ? 1 : 0;
    Eigen::MatrixXd Hm = Eigen::MatrixXd::Zero(rows, cols);
    for (int i = 1; i <= cols; ++i)
        for (int nu = 1; nu <= rows; ++nu) Hm(nu - 1, i - 1) = H.at(i + shift, i + shift, nu);
    return Hm;
}

}  // namespace tkrylov
