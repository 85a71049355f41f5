#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace bootnet {

/// Dense n-dimensional array of 64-bit floats, row-major.
///
/// Values are treated as immutable once an operation has produced them;
/// mutation is confined to construction sites (initializers, optimizer
/// updates building replacement tensors).
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> shape);  // zero-filled
    Tensor(std::vector<std::size_t> shape, std::vector<double> data);

    static Tensor scalar(double v);
    static Tensor full(std::vector<std::size_t> shape, double v);
    static Tensor vec(std::initializer_list<double> values);
    static Tensor mat(std::initializer_list<std::initializer_list<double>> rows);
    /// Identity matrix n x n.
    static Tensor eye(std::size_t n);

    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t ndim() const { return shape_.size(); }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    /// First dimension (number of rows / examples). Requires ndim >= 1.
    std::size_t rows() const;
    /// Second dimension. Requires ndim == 2.
    std::size_t cols() const;

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& values() { return data_; }
    const std::vector<double>& values() const { return data_; }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }
    double& at(std::size_t i, std::size_t j);
    double at(std::size_t i, std::size_t j) const;

    bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
    /// Exact elementwise equality (shape and every bit of every value).
    bool equals(const Tensor& other) const;
    bool all_finite() const;

    /// Same data reinterpreted under a new shape with equal element count.
    Tensor reshaped(std::vector<std::size_t> new_shape) const;
    /// Copy of row range [begin, end) along the first dimension.
    Tensor slice_rows(std::size_t begin, std::size_t end) const;

    std::string shape_str() const;

private:
    std::vector<std::size_t> shape_;
    std::vector<double> data_;
};

std::string shape_to_string(const std::vector<std::size_t>& shape);

/// Rows of `t` (first dimension) picked out by `indices`, in order.
Tensor gather_rows(const Tensor& t, const std::vector<std::size_t>& indices);

/// Concatenation along the first dimension; trailing dims must agree.
Tensor concat_rows(const Tensor& a, const Tensor& b);

}  // namespace bootnet
