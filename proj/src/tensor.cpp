#include "bootnet/tensor.hpp"

#include <cmath>
#include <cstring>
#include <functional>
#include <numeric>
#include <sstream>

#include "bootnet/errors.hpp"

namespace bootnet {

namespace {

std::size_t shape_product(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    return n;
}

void check_shape_dims(const std::vector<std::size_t>& shape) {
    for (std::size_t d : shape) {
        if (d == 0) {
            throw ShapeError("tensor shape has zero dimension: " + shape_to_string(shape));
        }
    }
}

}  // namespace

std::string shape_to_string(const std::vector<std::size_t>& shape) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) os << " x ";
        os << shape[i];
    }
    os << ']';
    return os.str();
}

Tensor::Tensor(std::vector<std::size_t> shape)
    : shape_(std::move(shape)), data_(shape_product(shape_), 0.0) {
    check_shape_dims(shape_);
}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    check_shape_dims(shape_);
    if (shape_product(shape_) != data_.size()) {
        throw ShapeError("data length " + std::to_string(data_.size()) +
                         " does not match shape " + shape_to_string(shape_));
    }
}

Tensor Tensor::scalar(double v) { return Tensor({1}, {v}); }

Tensor Tensor::full(std::vector<std::size_t> shape, double v) {
    Tensor t(std::move(shape));
    std::fill(t.data_.begin(), t.data_.end(), v);
    return t;
}

Tensor Tensor::vec(std::initializer_list<double> values) {
    return Tensor({values.size()}, std::vector<double>(values));
}

Tensor Tensor::mat(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t r = rows.size();
    if (r == 0) throw ShapeError("matrix literal needs at least one row");
    const std::size_t c = rows.begin()->size();
    std::vector<double> data;
    data.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c) throw ShapeError("ragged matrix literal");
        data.insert(data.end(), row.begin(), row.end());
    }
    return Tensor({r, c}, std::move(data));
}

Tensor Tensor::eye(std::size_t n) {
    Tensor t({n, n});
    for (std::size_t i = 0; i < n; ++i) t.data_[i * n + i] = 1.0;
    return t;
}

std::size_t Tensor::rows() const {
    if (shape_.empty()) throw ShapeError("rows() on empty tensor");
    return shape_[0];
}

std::size_t Tensor::cols() const {
    if (shape_.size() != 2) {
        throw ShapeError("cols() requires a 2-d tensor, got " + shape_str());
    }
    return shape_[1];
}

double& Tensor::at(std::size_t i, std::size_t j) {
    return data_[i * cols() + j];
}

double Tensor::at(std::size_t i, std::size_t j) const {
    return data_[i * cols() + j];
}

bool Tensor::equals(const Tensor& other) const {
    if (shape_ != other.shape_) return false;
    if (data_.empty()) return other.data_.empty();
    return std::memcmp(data_.data(), other.data_.data(), data_.size() * sizeof(double)) == 0;
}

bool Tensor::all_finite() const {
    for (double v : data_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

Tensor Tensor::reshaped(std::vector<std::size_t> new_shape) const {
    if (shape_product(new_shape) != data_.size()) {
        throw ShapeError("reshape " + shape_str() + " -> " + shape_to_string(new_shape) +
                         " changes element count");
    }
    return Tensor(std::move(new_shape), data_);
}

Tensor Tensor::slice_rows(std::size_t begin, std::size_t end) const {
    if (shape_.empty() || begin > end || end > shape_[0]) {
        throw ShapeError("bad row slice [" + std::to_string(begin) + ", " +
                         std::to_string(end) + ") of " + shape_str());
    }
    const std::size_t row_elems = data_.size() / shape_[0];
    std::vector<std::size_t> out_shape = shape_;
    out_shape[0] = end - begin;
    std::vector<double> out(data_.begin() + static_cast<std::ptrdiff_t>(begin * row_elems),
                            data_.begin() + static_cast<std::ptrdiff_t>(end * row_elems));
    return Tensor(std::move(out_shape), std::move(out));
}

std::string Tensor::shape_str() const { return shape_to_string(shape_); }

Tensor gather_rows(const Tensor& t, const std::vector<std::size_t>& indices) {
    if (t.ndim() == 0) throw ShapeError("gather_rows on empty tensor");
    const std::size_t n = t.shape()[0];
    const std::size_t row_elems = t.size() / n;
    std::vector<std::size_t> out_shape = t.shape();
    out_shape[0] = indices.size();
    std::vector<double> out;
    out.reserve(indices.size() * row_elems);
    for (std::size_t idx : indices) {
        if (idx >= n) {
            throw ValidationError("row index " + std::to_string(idx) + " out of range for " +
                                  t.shape_str());
        }
        const double* src = t.data() + idx * row_elems;
        out.insert(out.end(), src, src + row_elems);
    }
    return Tensor(std::move(out_shape), std::move(out));
}

Tensor concat_rows(const Tensor& a, const Tensor& b) {
    if (a.ndim() == 0) return b;
    if (b.ndim() == 0) return a;
    if (a.ndim() != b.ndim()) {
        throw ShapeError("concat_rows rank mismatch: " + a.shape_str() + " vs " + b.shape_str());
    }
    for (std::size_t d = 1; d < a.ndim(); ++d) {
        if (a.shape()[d] != b.shape()[d]) {
            throw ShapeError("concat_rows trailing dims differ: " + a.shape_str() + " vs " +
                             b.shape_str());
        }
    }
    std::vector<std::size_t> out_shape = a.shape();
    out_shape[0] += b.shape()[0];
    std::vector<double> data;
    data.reserve(a.size() + b.size());
    data.insert(data.end(), a.values().begin(), a.values().end());
    data.insert(data.end(), b.values().begin(), b.values().end());
    return Tensor(std::move(out_shape), std::move(data));
}

}  // namespace bootnet
