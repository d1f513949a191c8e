#include "tkrylov/dense_tensor.hpp"

#include <sstream>
#include <stdexcept>

namespace tkrylov {

DenseTensor3::DenseTensor3(int l, int m, int n) : l_(l), m_(m), n_(n) {
    if (l < 0 || m < 0 || n < 0) throw std::invalid_argument("DenseTensor3: negative dimension");
    data_.assign(static_cast<std::size_t>(size()), 0.0);
}

DenseTensor3::DenseTensor3(int l, int m, int n, std::vector<double> data)
    : l_(l), m_(m), n_(n), data_(std::move(data)) {
    if (static_cast<std::int64_t>(data_.size()) != size()) {
        std::ostringstream msg;
        msg << "DenseTensor3: data length " << data_.size() << " does not match dims " << l << "x"
            << m << "x" << n;
        throw std::invalid_argument(msg.str());
    }
}

int DenseTensor3::dim(Mode mode) const {
    switch (mode) {
        case Mode::one: return l_;
        case Mode::two: return m_;
        default: return n_;
    }
}

std::int64_t DenseTensor3::offset(int i, int j, int k) const {
    if (i < 1 || i > l_ || j < 1 || j > m_ || k < 1 || k > n_) {
        std::ostringstream msg;
        msg << "DenseTensor3: index (" << i << "," << j << "," << k << ") outside 1-based bounds "
            << l_ << "x" << m_ << "x" << n_;
        throw std::out_of_range(msg.str());
    }
    return (i - 1) + static_cast<std::int64_t>(l_) * (j - 1) +
           static_cast<std::int64_t>(l_) * m_ * (k - 1);
}

Eigen::Map<const Eigen::MatrixXd> DenseTensor3::slice(int k) const {
    if (k < 1 || k > n_) throw std::out_of_range("DenseTensor3::slice: k outside 1..n");
    return {data_.data() + static_cast<std::int64_t>(l_) * m_ * (k - 1), l_, m_};
}

Eigen::Map<Eigen::MatrixXd> DenseTensor3::slice(int k) {
    if (k < 1 || k > n_) throw std::out_of_range("DenseTensor3::slice: k outside 1..n");
    return {data_.data() + static_cast<std::int64_t>(l_) * m_ * (k - 1), l_, m_};
}

Eigen::Map<const Eigen::MatrixXd> DenseTensor3::slices_as_columns() const {
    return {data_.data(), static_cast<Eigen::Index>(l_) * m_, n_};
}

void DenseTensor3::set_zero() { std::fill(data_.begin(), data_.end(), 0.0); }

}  // namespace tkrylov
