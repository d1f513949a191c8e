#include "tkrylov/coeff_tensor.hpp"

#include <sstream>
#include <stdexcept>

namespace tkrylov {

std::int64_t CoeffTensor::offset(int i, int j, int k) const {
    return (i - 1) + static_cast<std::int64_t>(dims_[0]) * (j - 1) +
           static_cast<std::int64_t>(dims_[0]) * dims_[1] * (k - 1);
}

void CoeffTensor::grow(int a, int b, int c) {
    a = std::max(a, dims_[0]);
    b = std::max(b, dims_[1]);
    c = std::max(c, dims_[2]);
    if (a == dims_[0] && b == dims_[1] && c == dims_[2]) return;

    std::vector<double> values(static_cast<std::size_t>(a) * b * c, 0.0);
    std::vector<std::uint8_t> mask(values.size(), 0);
    for (int k = 1; k <= dims_[2]; ++k)
        for (int j = 1; j <= dims_[1]; ++j)
            for (int i = 1; i <= dims_[0]; ++i) {
                const auto src = static_cast<std::size_t>(offset(i, j, k));
                const auto dst = static_cast<std::size_t>(
                    (i - 1) + static_cast<std::int64_t>(a) * (j - 1) +
                    static_cast<std::int64_t>(a) * b * (k - 1));
                values[dst] = values_[src];
                mask[dst] = mask_[src];
            }
    dims_ = {a, b, c};
    values_ = std::move(values);
    mask_ = std::move(mask);
}

void CoeffTensor::set(int i, int j, int k, double value) {
    grow(i, j, k);
    const auto off = static_cast<std::size_t>(offset(i, j, k));
    if (mask_[off]) {
        std::ostringstream msg;
        msg << "CoeffTensor: entry (" << i << "," << j << "," << k << ") written twice";
        throw std::logic_error(msg.str());
    }
    values_[off] = value;
    mask_[off] = 1;
    ++filled_count_;
}

double CoeffTensor::at(int i, int j, int k) const {
    if (i < 1 || j < 1 || k < 1 || i > dims_[0] || j > dims_[1] || k > dims_[2]) return 0.0;
    return values_[static_cast<std::size_t>(offset(i, j, k))];
}

bool CoeffTensor::filled(int i, int j, int k) const {
    if (i < 1 || j < 1 || k < 1 || i > dims_[0] || j > dims_[1] || k > dims_[2]) return false;
    return mask_[static_cast<std::size_t>(offset(i, j, k))] != 0;
}

DenseTensor3 CoeffTensor::dense() const {
    return DenseTensor3(dims_[0], dims_[1], dims_[2], values_);
}

DenseTensor3 CoeffTensor::dense_prefix(int a, int b, int c) const {
    DenseTensor3 out(a, b, c);
    for (int k = 1; k <= c; ++k)
        for (int j = 1; j <= b; ++j)
            for (int i = 1; i <= a; ++i) out(i, j, k) = at(i, j, k);
    return out;
}

std::vector<double> CoeffTensor::values_flat() const { return values_; }

std::vector<std::uint8_t> CoeffTensor::mask_flat() const { return mask_; }

CoeffTensor CoeffTensor::from_flat(std::array<int, 3> dims, const std::vector<double>& values,
                                   const std::vector<std::uint8_t>& mask) {
    const auto expect = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
    if (values.size() != expect || mask.size() != expect)
        throw std::invalid_argument("CoeffTensor::from_flat: size mismatch");
    CoeffTensor out;
    out.dims_ = dims;
    out.values_ = values;
    out.mask_ = mask;
    out.filled_count_ = 0;
    for (auto b : mask)
        if (b) ++out.filled_count_;
    return out;
}

}  // namespace tkrylov
