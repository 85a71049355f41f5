#include "bootnet/ops.hpp"

#include <cmath>

#include "bootnet/errors.hpp"

namespace bootnet {

namespace {

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
    if (!a.same_shape(b)) {
        throw ShapeError(std::string(op) + ": shape mismatch " + a.shape_str() + " vs " +
                         b.shape_str());
    }
}

void require_2d(const Tensor& t, const char* op) {
    if (t.ndim() != 2) {
        throw ShapeError(std::string(op) + ": expected 2-d tensor, got " + t.shape_str());
    }
}

// out += g elementwise
void accumulate(Tensor& out, const Tensor& g) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += g[i];
}

void matmul_into(const Tensor& a, const Tensor& b, Tensor& out, bool transpose_a,
                 bool transpose_b) {
    const std::size_t m = transpose_a ? a.cols() : a.rows();
    const std::size_t k = transpose_a ? a.rows() : a.cols();
    const std::size_t n = transpose_b ? b.rows() : b.cols();
    const std::size_t a_r = a.rows(), a_c = a.cols(), b_c = b.cols();
    const double* ap = a.data();
    const double* bp = b.data();
    double* op = out.data();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t kk = 0; kk < k; ++kk) {
            const double av = transpose_a ? ap[kk * a_c + i] : ap[i * a_c + kk];
            if (av == 0.0) continue;
            if (!transpose_b) {
                const double* brow = bp + kk * b_c;
                double* orow = op + i * n;
                for (std::size_t j = 0; j < n; ++j) orow[j] += av * brow[j];
            } else {
                for (std::size_t j = 0; j < n; ++j) op[i * n + j] += av * bp[j * b_c + kk];
            }
        }
    }
    (void)a_r;
}

}  // namespace

// ---------------- value-level ----------------

Tensor matmul(const Tensor& a, const Tensor& b) {
    require_2d(a, "matmul");
    require_2d(b, "matmul");
    if (a.cols() != b.rows()) {
        throw ShapeError("matmul: inner dimensions disagree, " + a.shape_str() + " x " +
                         b.shape_str());
    }
    Tensor out({a.rows(), b.cols()});
    matmul_into(a, b, out, false, false);
    return out;
}

Tensor relu(const Tensor& x) {
    Tensor out(x.shape());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
    return out;
}

Tensor l2_normalize(const Tensor& x, double eps) {
    if (x.ndim() != 1 && x.ndim() != 2) {
        throw ShapeError("l2_normalize: expected 1-d or 2-d tensor, got " + x.shape_str());
    }
    const std::size_t rows = x.ndim() == 1 ? 1 : x.shape()[0];
    const std::size_t d = x.size() / rows;
    Tensor out(x.shape());
    for (std::size_t i = 0; i < rows; ++i) {
        const double* row = x.data() + i * d;
        double sq = 0.0;
        for (std::size_t j = 0; j < d; ++j) sq += row[j] * row[j];
        const double norm = std::sqrt(sq);
        const double r = norm > eps ? norm : eps;
        for (std::size_t j = 0; j < d; ++j) out[i * d + j] = row[j] / r;
    }
    return out;
}

Tensor softmax_rows(const Tensor& logits) {
    require_2d(logits, "softmax_rows");
    const std::size_t b = logits.rows(), c = logits.cols();
    Tensor out(logits.shape());
    for (std::size_t i = 0; i < b; ++i) {
        const double* row = logits.data() + i * c;
        double m = row[0];
        for (std::size_t j = 1; j < c; ++j) m = std::max(m, row[j]);
        double denom = 0.0;
        for (std::size_t j = 0; j < c; ++j) denom += std::exp(row[j] - m);
        for (std::size_t j = 0; j < c; ++j) out[i * c + j] = std::exp(row[j] - m) / denom;
    }
    return out;
}

namespace {

void validate_onehot(const Tensor& onehot) {
    require_2d(onehot, "cross_entropy");
    const std::size_t b = onehot.rows(), c = onehot.cols();
    for (std::size_t i = 0; i < b; ++i) {
        std::size_t ones = 0;
        for (std::size_t j = 0; j < c; ++j) {
            const double v = onehot[i * c + j];
            if (v == 1.0) {
                ++ones;
            } else if (v != 0.0) {
                throw ValidationError("cross_entropy: one-hot row " + std::to_string(i) +
                                      " has non-{0,1} entry");
            }
        }
        if (ones != 1) {
            throw ValidationError("cross_entropy: one-hot row " + std::to_string(i) + " has " +
                                  std::to_string(ones) + " ones");
        }
    }
}

// Per-row loss is logsumexp(row) - <row, y>; returns the mean.
double cross_entropy_value(const Tensor& logits, const Tensor& onehot) {
    const std::size_t b = logits.rows(), c = logits.cols();
    double total = 0.0;
    for (std::size_t i = 0; i < b; ++i) {
        const double* row = logits.data() + i * c;
        double m = row[0];
        for (std::size_t j = 1; j < c; ++j) m = std::max(m, row[j]);
        double denom = 0.0, picked = 0.0;
        for (std::size_t j = 0; j < c; ++j) {
            denom += std::exp(row[j] - m);
            if (onehot[i * c + j] == 1.0) picked = row[j];
        }
        total += m + std::log(denom) - picked;
    }
    return total / static_cast<double>(b);
}

}  // namespace

double cross_entropy(const Tensor& logits, const Tensor& onehot) {
    require_2d(logits, "cross_entropy");
    validate_onehot(onehot);
    require_same_shape(logits, onehot, "cross_entropy");
    return cross_entropy_value(logits, onehot);
}

Tensor one_hot(const std::vector<std::uint32_t>& labels, std::size_t num_classes) {
    Tensor out({labels.size(), num_classes});
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] >= num_classes) {
            throw ValidationError("one_hot: label " + std::to_string(labels[i]) +
                                  " out of range for " + std::to_string(num_classes) +
                                  " classes");
        }
        out[i * num_classes + labels[i]] = 1.0;
    }
    return out;
}

// ---------------- graph ops ----------------

NodePtr add(const NodePtr& a, const NodePtr& b) {
    require_same_shape(a->value, b->value, "add");
    Tensor out(a->value.shape());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a->value[i] + b->value[i];
    return make_node(std::move(out), {a, b}, [a, b](Node& self) {
        accumulate(a->ensure_grad(), self.grad);
        accumulate(b->ensure_grad(), self.grad);
    });
}

NodePtr sub(const NodePtr& a, const NodePtr& b) {
    require_same_shape(a->value, b->value, "sub");
    Tensor out(a->value.shape());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a->value[i] - b->value[i];
    return make_node(std::move(out), {a, b}, [a, b](Node& self) {
        accumulate(a->ensure_grad(), self.grad);
        Tensor& gb = b->ensure_grad();
        for (std::size_t i = 0; i < gb.size(); ++i) gb[i] -= self.grad[i];
    });
}

NodePtr mul(const NodePtr& a, const NodePtr& b) {
    require_same_shape(a->value, b->value, "mul");
    Tensor out(a->value.shape());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a->value[i] * b->value[i];
    return make_node(std::move(out), {a, b}, [a, b](Node& self) {
        Tensor& ga = a->ensure_grad();
        Tensor& gb = b->ensure_grad();
        for (std::size_t i = 0; i < self.grad.size(); ++i) {
            ga[i] += self.grad[i] * b->value[i];
            gb[i] += self.grad[i] * a->value[i];
        }
    });
}

NodePtr affine(const NodePtr& a, double k, double c) {
    Tensor out(a->value.shape());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = k * a->value[i] + c;
    return make_node(std::move(out), {a}, [a, k](Node& self) {
        Tensor& ga = a->ensure_grad();
        for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += k * self.grad[i];
    });
}

NodePtr add_rowvec(const NodePtr& a, const NodePtr& b) {
    require_2d(a->value, "add_rowvec");
    if (b->value.ndim() != 1 || b->value.size() != a->value.cols()) {
        throw ShapeError("add_rowvec: bias " + b->value.shape_str() + " does not match " +
                         a->value.shape_str());
    }
    const std::size_t rows = a->value.rows(), n = a->value.cols();
    Tensor out(a->value.shape());
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out[i * n + j] = a->value[i * n + j] + b->value[j];
        }
    }
    return make_node(std::move(out), {a, b}, [a, b, rows, n](Node& self) {
        accumulate(a->ensure_grad(), self.grad);
        Tensor& gb = b->ensure_grad();
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < n; ++j) gb[j] += self.grad[i * n + j];
        }
    });
}

NodePtr matmul(const NodePtr& a, const NodePtr& b) {
    Tensor out = matmul(a->value, b->value);
    return make_node(std::move(out), {a, b}, [a, b](Node& self) {
        // dA += G B^T, dB += A^T G
        matmul_into(self.grad, b->value, a->ensure_grad(), false, true);
        matmul_into(a->value, self.grad, b->ensure_grad(), true, false);
    });
}

NodePtr relu(const NodePtr& x) {
    Tensor out = relu(x->value);
    return make_node(std::move(out), {x}, [x](Node& self) {
        Tensor& gx = x->ensure_grad();
        for (std::size_t i = 0; i < gx.size(); ++i) {
            if (x->value[i] > 0.0) gx[i] += self.grad[i];
        }
    });
}

NodePtr sum(const NodePtr& x) {
    double total = 0.0;
    for (std::size_t i = 0; i < x->value.size(); ++i) total += x->value[i];
    return make_node(Tensor::scalar(total), {x}, [x](Node& self) {
        Tensor& gx = x->ensure_grad();
        const double g = self.grad[0];
        for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += g;
    });
}

NodePtr l2_normalize_rows(const NodePtr& x, double eps) {
    Tensor out = l2_normalize(x->value, eps);
    const std::size_t rows = x->value.ndim() == 1 ? 1 : x->value.shape()[0];
    const std::size_t d = x->value.size() / rows;
    // Capture the output value for the Jacobian: d(x/r)/dx = (I - y y^T)/r
    // when ||x|| > eps, else I/eps with r clamped.
    Tensor y = out;
    return make_node(std::move(out), {x}, [x, y, rows, d, eps](Node& self) {
        Tensor& gx = x->ensure_grad();
        for (std::size_t i = 0; i < rows; ++i) {
            const double* xrow = x->value.data() + i * d;
            const double* yrow = y.data() + i * d;
            const double* grow = self.grad.data() + i * d;
            double sq = 0.0;
            for (std::size_t j = 0; j < d; ++j) sq += xrow[j] * xrow[j];
            const double norm = std::sqrt(sq);
            const double r = norm > eps ? norm : eps;
            if (norm > eps) {
                double gy = 0.0;
                for (std::size_t j = 0; j < d; ++j) gy += grow[j] * yrow[j];
                for (std::size_t j = 0; j < d; ++j) {
                    gx[i * d + j] += (grow[j] - yrow[j] * gy) / r;
                }
            } else {
                for (std::size_t j = 0; j < d; ++j) gx[i * d + j] += grow[j] / r;
            }
        }
    });
}

NodePtr row_dot(const NodePtr& a, const NodePtr& b) {
    require_2d(a->value, "row_dot");
    require_same_shape(a->value, b->value, "row_dot");
    const std::size_t rows = a->value.rows(), d = a->value.cols();
    Tensor out({rows});
    for (std::size_t i = 0; i < rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < d; ++j) s += a->value[i * d + j] * b->value[i * d + j];
        out[i] = s;
    }
    return make_node(std::move(out), {a, b}, [a, b, rows, d](Node& self) {
        Tensor& ga = a->ensure_grad();
        Tensor& gb = b->ensure_grad();
        for (std::size_t i = 0; i < rows; ++i) {
            const double g = self.grad[i];
            for (std::size_t j = 0; j < d; ++j) {
                ga[i * d + j] += g * b->value[i * d + j];
                gb[i * d + j] += g * a->value[i * d + j];
            }
        }
    });
}

NodePtr cross_entropy_onehot(const NodePtr& logits, const Tensor& onehot) {
    require_2d(logits->value, "cross_entropy");
    validate_onehot(onehot);
    require_same_shape(logits->value, onehot, "cross_entropy");
    const double loss = cross_entropy_value(logits->value, onehot);
    Tensor probs = softmax_rows(logits->value);
    const std::size_t b = logits->value.rows(), c = logits->value.cols();
    return make_node(Tensor::scalar(loss), {logits},
                     [logits, probs, onehot, b, c](Node& self) {
                         Tensor& gl = logits->ensure_grad();
                         const double g = self.grad[0] / static_cast<double>(b);
                         for (std::size_t i = 0; i < b * c; ++i) {
                             gl[i] += g * (probs[i] - onehot[i]);
                         }
                     });
}

NodePtr stop_grad(const NodePtr& x) {
    // No parents: the backward sweep cannot see anything upstream of here.
    return make_node(x->value, {}, nullptr);
}

}  // namespace bootnet
