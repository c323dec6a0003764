#ifndef ANYCSP_TENSOR_HPP
#define ANYCSP_TENSOR_HPP

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace anycsp {

// Dense row-major matrix of doubles. Training and tests both run at 64 bit.
struct Tensor2 {
    int rows = 0;
    int cols = 0;
    std::vector<double> v;

    Tensor2() = default;
    Tensor2(int r, int c) : rows(r), cols(c), v(static_cast<size_t>(r) * c, 0.0) {}

    double& at(int r, int c) { return v[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return v[static_cast<size_t>(r) * cols + c]; }
    size_t size() const { return v.size(); }

    void fill(double x) { std::fill(v.begin(), v.end(), x); }

    bool finite() const {
        for (double x : v)
            if (!std::isfinite(x)) return false;
        return true;
    }
};

enum class Agg : uint8_t { Sum = 0, Mean = 1, Max = 2 };

inline const char* agg_name(Agg a) {
    switch (a) {
        case Agg::Sum: return "sum";
        case Agg::Mean: return "mean";
        case Agg::Max: return "max";
    }
    return "?";
}

inline Agg agg_from_name(const std::string& s) {
    if (s == "sum") return Agg::Sum;
    if (s == "mean") return Agg::Mean;
    if (s == "max") return Agg::Max;
    throw std::invalid_argument("unknown aggregation: " + s);
}

// C (+)= op(A) * op(B)
inline void gemm_acc(const Tensor2& a, bool ta, const Tensor2& b, bool tb, Tensor2& c,
                     bool accumulate) {
    const int m = ta ? a.cols : a.rows;
    const int k = ta ? a.rows : a.cols;
    const int n = tb ? b.rows : b.cols;
    assert((tb ? b.cols : b.rows) == k);
    assert(c.rows == m && c.cols == n);
    if (!accumulate) c.fill(0.0);
    if (!ta && !tb) {
        for (int i = 0; i < m; ++i) {
            const double* ar = &a.v[static_cast<size_t>(i) * k];
            double* cr = &c.v[static_cast<size_t>(i) * n];
            for (int p = 0; p < k; ++p) {
                const double av = ar[p];
                if (av == 0.0) continue;
                const double* br = &b.v[static_cast<size_t>(p) * n];
                for (int j = 0; j < n; ++j) cr[j] += av * br[j];
            }
        }
    } else if (ta && !tb) {
        for (int p = 0; p < k; ++p) {
            const double* ar = &a.v[static_cast<size_t>(p) * m];
            const double* br = &b.v[static_cast<size_t>(p) * n];
            for (int i = 0; i < m; ++i) {
                const double av = ar[i];
                if (av == 0.0) continue;
                double* cr = &c.v[static_cast<size_t>(i) * n];
                for (int j = 0; j < n; ++j) cr[j] += av * br[j];
            }
        }
    } else if (!ta && tb) {
        for (int i = 0; i < m; ++i) {
            const double* ar = &a.v[static_cast<size_t>(i) * k];
            double* cr = &c.v[static_cast<size_t>(i) * n];
            for (int j = 0; j < n; ++j) {
                const double* br = &b.v[static_cast<size_t>(j) * k];
                double s = 0.0;
                for (int p = 0; p < k; ++p) s += ar[p] * br[p];
                cr[j] += s;
            }
        }
    } else {
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int p = 0; p < k; ++p) s += a.at(p, i) * b.at(j, p);
                c.at(i, j) += s;
            }
    }
}

// Reverse-mode tape. Forward ops append nodes; backward() replays the
// recorded closures in reverse and accumulates gradients for marked
// parameters into an external gradient store aligned with the parameter
// registration order.
class Tape {
  public:
    struct Node {
        Tensor2 val;
        Tensor2 grad;
        std::function<void()> back;  // empty for leaves without parameters
    };

    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    void register_params(std::vector<Tensor2*> params, std::vector<Tensor2>* grads) {
        params_ = std::move(params);
        param_grads_ = grads;
    }

    const Tensor2& val(int id) const { return nodes_[id].val; }
    Tensor2& grad(int id) { return nodes_[id].grad; }
    size_t node_count() const { return nodes_.size(); }

    int input(Tensor2 x) {
        nodes_.push_back(Node{std::move(x), {}, {}});
        return static_cast<int>(nodes_.size()) - 1;
    }

    int param(int pi) {
        const int id = input(*params_.at(pi));
        nodes_[id].back = [this, id, pi] {
            Tensor2& g = (*param_grads_)[pi];
            const Tensor2& ng = nodes_[id].grad;
            for (size_t i = 0; i < g.v.size(); ++i) g.v[i] += ng.v[i];
        };
        return id;
    }

    int matmul(int a, int b) {
        const Tensor2& A = nodes_[a].val;
        const Tensor2& B = nodes_[b].val;
        if (A.cols != B.rows) throw std::invalid_argument("matmul shape mismatch");
        Tensor2 C(A.rows, B.cols);
        gemm_acc(A, false, B, false, C, false);
        const int id = input(std::move(C));
        nodes_[id].back = [this, id, a, b] {
            gemm_acc(nodes_[id].grad, false, nodes_[b].val, true, nodes_[a].grad, true);
            gemm_acc(nodes_[a].val, true, nodes_[id].grad, false, nodes_[b].grad, true);
        };
        return id;
    }

    int add(int a, int b) {
        const Tensor2& A = nodes_[a].val;
        const Tensor2& B = nodes_[b].val;
        if (A.rows != B.rows || A.cols != B.cols) throw std::invalid_argument("add shape mismatch");
        Tensor2 C = A;
        for (size_t i = 0; i < C.v.size(); ++i) C.v[i] += B.v[i];
        const int id = input(std::move(C));
        nodes_[id].back = [this, id, a, b] {
            const Tensor2& g = nodes_[id].grad;
            for (size_t i = 0; i < g.v.size(); ++i) {
                nodes_[a].grad.v[i] += g.v[i];
                nodes_[b].grad.v[i] += g.v[i];
            }
        };
        return id;
    }

    // a: n x c, bias: 1 x c broadcast over rows
    int add_bias(int a, int bias) {
        const Tensor2& A = nodes_[a].val;
        const Tensor2& B = nodes_[bias].val;
        if (B.rows != 1 || B.cols != A.cols) throw std::invalid_argument("bias shape mismatch");
        Tensor2 C = A;
        for (int r = 0; r < C.rows; ++r)
            for (int c = 0; c < C.cols; ++c) C.at(r, c) += B.at(0, c);
        const int id = input(std::move(C));
        nodes_[id].back = [this, id, a, bias] {
            const Tensor2& g = nodes_[id].grad;
            for (size_t i = 0; i < g.v.size(); ++i) nodes_[a].grad.v[i] += g.v[i];
            Tensor2& bg = nodes_[bias].grad;
            for (int r = 0; r < g.rows; ++r)
                for (int c = 0; c < g.cols; ++c) bg.at(0, c) += g.at(r, c);
        };
        return id;
    }

    int affine(int a, double scale, double shift) {
        Tensor2 C = nodes_[a].val;
        for (double& x : C.v) x = scale * x + shift;
        const int id = input(std::move(C));
        nodes_[id].back = [this, id, a, scale] {
            const Tensor2& g = nodes_[id].grad;
            for (size_t i = 0; i < g.v.size(); ++i) nodes_[a].grad.v[i] += scale * g.v[i];
        };
        return id;
    }

    int mul(int a, int b) {
        const Tensor2& A = nodes_[a].val;
        const Tensor2& B = nodes_[b].val;
        if (A.rows != B.rows || A.cols != B.cols) throw std::invalid_argument("mul shape mismatch");
        Tensor2 C = A;
        for (size_t i = 0; i < C.v.size(); ++i) C.v[i] *= B.v[i];
        const int id = input(std::move(C));
        nodes_[id].back = [this, id, a, b] {
            const Tensor2& g = nodes_[id].grad;
            for (size_t i = 0; i < g.v.size(); ++i) {
                nodes_[a].grad.v[i] += g.v[i] * nodes_[b].val.v[i];
                nodes_[b].grad.v[i] += g.v[i] * nodes_[a].val.v[i];
            }
        };
        return id;
    }

    int relu(int a) {
        Tensor2 C = nodes_[a].val;
        for (double& x : C.v) x = x > 0.0 ? x : 0.0;
        const int id = input(std::move(C));
        nodes_[id].back = [this, id, a] {
            const Tensor2& g = nodes_[id].grad;
            for (size_t i = 0; i < g.v.size(); ++i)
                if (nodes_[a].val.v[i] > 0.0) nodes_[a].grad.v[i] += g.v[i];
        };
        return id;
    }

    int sigmoid(int a) {
        Tensor2 C = nodes_[a].val;
        for (double& x : C.v) x = 1.0 / (1.0 + std::exp(-x));
        const int id = input(std::move(C));
        nodes_[id].back = [this, id, a] {
            const Tensor2& g = nodes_[id].grad;
            const Tensor2& y = nodes_[id].val;
            for (size_t i = 0; i < g.v.size(); ++i)
                nodes_[a].grad.v[i] += g.v[i] * y.v[i] * (1.0 - y.v[i]);
        };
        return id;
    }

    int tanh_op(int a) {
        Tensor2 C = nodes_[a].val;
        for (double& x : C.v) x = std::tanh(x);
        const int id = input(std::move(C));
        nodes_[id].back = [this, id, a] {
            const Tensor2& g = nodes_[id].grad;
            const Tensor2& y = nodes_[id].val;
            for (size_t i = 0; i < g.v.size(); ++i)
                nodes_[a].grad.v[i] += g.v[i] * (1.0 - y.v[i] * y.v[i]);
        };
        return id;
    }

    int concat_cols(int a, int b) {
        const Tensor2& A = nodes_[a].val;
        const Tensor2& B = nodes_[b].val;
        if (A.rows != B.rows) throw std::invalid_argument("concat row mismatch");
        Tensor2 C(A.rows, A.cols + B.cols);
        for (int r = 0; r < A.rows; ++r) {
            for (int c = 0; c < A.cols; ++c) C.at(r, c) = A.at(r, c);
            for (int c = 0; c < B.cols; ++c) C.at(r, A.cols + c) = B.at(r, c);
        }
        const int id = input(std::move(C));
        const int ac = A.cols;
        nodes_[id].back = [this, id, a, b, ac] {
            const Tensor2& g = nodes_[id].grad;
            Tensor2& ga = nodes_[a].grad;
            Tensor2& gb = nodes_[b].grad;
            for (int r = 0; r < g.rows; ++r) {
                for (int c = 0; c < ac; ++c) ga.at(r, c) += g.at(r, c);
                for (int c = 0; c < gb.cols; ++c) gb.at(r, c) += g.at(r, ac + c);
            }
        };
        return id;
    }

    // Append one constant column (e.g. binary vertex labels). No gradient flows
    // into the column.
    int append_const_col(int a, const std::vector<double>& col) {
        const Tensor2& A = nodes_[a].val;
        if (static_cast<int>(col.size()) != A.rows)
            throw std::invalid_argument("append_const_col size mismatch");
        Tensor2 C(A.rows, A.cols + 1);
        for (int r = 0; r < A.rows; ++r) {
            for (int c = 0; c < A.cols; ++c) C.at(r, c) = A.at(r, c);
            C.at(r, A.cols) = col[r];
        }
        const int id = input(std::move(C));
        nodes_[id].back = [this, id, a] {
            const Tensor2& g = nodes_[id].grad;
            Tensor2& ga = nodes_[a].grad;
            for (int r = 0; r < g.rows; ++r)
                for (int c = 0; c < ga.cols; ++c) ga.at(r, c) += g.at(r, c);
        };
        return id;
    }

    // Row-wise LayerNorm with trainable gain/shift (1 x c each).
    int layer_norm(int a, int gain, int shift, double eps = 1e-5) {
        const Tensor2& A = nodes_[a].val;
        const Tensor2& G = nodes_[gain].val;
        const Tensor2& S = nodes_[shift].val;
        if (G.cols != A.cols || S.cols != A.cols)
            throw std::invalid_argument("layer_norm shape mismatch");
        const int n = A.cols;
        Tensor2 C(A.rows, n);
        auto xhat = std::make_shared<Tensor2>(A.rows, n);
        auto istd = std::make_shared<std::vector<double>>(A.rows);
        for (int r = 0; r < A.rows; ++r) {
            double mean = 0.0;
            for (int c = 0; c < n; ++c) mean += A.at(r, c);
            mean /= n;
            double var = 0.0;
            for (int c = 0; c < n; ++c) {
                const double d = A.at(r, c) - mean;
                var += d * d;
            }
            var /= n;
            const double is = 1.0 / std::sqrt(var + eps);
            (*istd)[r] = is;
            for (int c = 0; c < n; ++c) {
                const double xh = (A.at(r, c) - mean) * is;
                xhat->at(r, c) = xh;
                C.at(r, c) = G.at(0, c) * xh + S.at(0, c);
            }
        }
        const int id = input(std::move(C));
        nodes_[id].back = [this, id, a, gain, shift, xhat, istd] {
            const Tensor2& g = nodes_[id].grad;
            const Tensor2& G2 = nodes_[gain].val;
            const int n = g.cols;
            for (int r = 0; r < g.rows; ++r) {
                double sum_gy = 0.0, sum_gyx = 0.0;
                for (int c = 0; c < n; ++c) {
                    const double gy = g.at(r, c) * G2.at(0, c);
                    sum_gy += gy;
                    sum_gyx += gy * xhat->at(r, c);
                    nodes_[gain].grad.at(0, c) += g.at(r, c) * xhat->at(r, c);
                    nodes_[shift].grad.at(0, c) += g.at(r, c);
                }
                const double is = (*istd)[r];
                for (int c = 0; c < n; ++c) {
                    const double gy = g.at(r, c) * G2.at(0, c);
                    nodes_[a].grad.at(r, c) +=
                        is * (gy - sum_gy / n - xhat->at(r, c) * sum_gyx / n);
                }
            }
        };
        return id;
    }

    int gather_rows(int a, std::vector<int> ids) {
        const Tensor2& A = nodes_[a].val;
        Tensor2 C(static_cast<int>(ids.size()), A.cols);
        for (size_t r = 0; r < ids.size(); ++r)
            for (int c = 0; c < A.cols; ++c) C.at(static_cast<int>(r), c) = A.at(ids[r], c);
        const int id = input(std::move(C));
        nodes_[id].back = [this, id, a, ids = std::move(ids)] {
            const Tensor2& g = nodes_[id].grad;
            Tensor2& ga = nodes_[a].grad;
            for (size_t r = 0; r < ids.size(); ++r)
                for (int c = 0; c < g.cols; ++c) ga.at(ids[r], c) += g.at(static_cast<int>(r), c);
        };
        return id;
    }

    // Per output row r: copy d columns starting at block[r]*d from input row
    // rows[r]. Used to route the label-0/label-1 message halves along edges.
    int gather_rows_block(int a, std::vector<int> rows, std::vector<uint8_t> block, int d) {
        const Tensor2& A = nodes_[a].val;
        if (A.cols < 2 * d) throw std::invalid_argument("gather_rows_block width");
        Tensor2 C(static_cast<int>(rows.size()), d);
        for (size_t r = 0; r < rows.size(); ++r) {
            const int off = block[r] ? d : 0;
            for (int c = 0; c < d; ++c) C.at(static_cast<int>(r), c) = A.at(rows[r], off + c);
        }
        const int id = input(std::move(C));
        nodes_[id].back = [this, id, a, rows = std::move(rows), block = std::move(block), d] {
            const Tensor2& g = nodes_[id].grad;
            Tensor2& ga = nodes_[a].grad;
            for (size_t r = 0; r < rows.size(); ++r) {
                const int off = block[r] ? d : 0;
                for (int c = 0; c < d; ++c)
                    ga.at(rows[r], off + c) += g.at(static_cast<int>(r), c);
            }
        };
        return id;
    }

    // Element-wise per-segment reduction. Empty segments yield 0 in all modes.
    // MAX routes the gradient to the first maximizer per column.
    int segment_agg(int a, std::vector<int> seg, int nseg, Agg agg) {
        const Tensor2& A = nodes_[a].val;
        if (static_cast<int>(seg.size()) != A.rows)
            throw std::invalid_argument("segment id count mismatch");
        Tensor2 C(nseg, A.cols);
        std::vector<int> count(nseg, 0);
        for (int s : seg) {
            if (s < 0 || s >= nseg) throw std::out_of_range("segment id out of range");
            ++count[s];
        }
        auto argmax = std::make_shared<std::vector<int>>();
        if (agg == Agg::Max) {
            argmax->assign(static_cast<size_t>(nseg) * A.cols, -1);
            for (int r = 0; r < A.rows; ++r) {
                const int s = seg[r];
                for (int c = 0; c < A.cols; ++c) {
                    int& am = (*argmax)[static_cast<size_t>(s) * A.cols + c];
                    if (am < 0 || A.at(r, c) > C.at(s, c)) {
                        C.at(s, c) = A.at(r, c);
                        am = r;
                    }
                }
            }
        } else {
            for (int r = 0; r < A.rows; ++r) {
                const int s = seg[r];
                for (int c = 0; c < A.cols; ++c) C.at(s, c) += A.at(r, c);
            }
            if (agg == Agg::Mean)
                for (int s = 0; s < nseg; ++s)
                    if (count[s] > 0)
                        for (int c = 0; c < A.cols; ++c) C.at(s, c) /= count[s];
        }
        const int id = input(std::move(C));
        nodes_[id].back = [this, id, a, seg = std::move(seg), count = std::move(count), agg,
                           argmax] {
            const Tensor2& g = nodes_[id].grad;
            Tensor2& ga = nodes_[a].grad;
            if (agg == Agg::Max) {
                for (int s = 0; s < g.rows; ++s)
                    for (int c = 0; c < g.cols; ++c) {
                        const int am = (*argmax)[static_cast<size_t>(s) * g.cols + c];
                        if (am >= 0) ga.at(am, c) += g.at(s, c);
                    }
            } else {
                for (int r = 0; r < ga.rows; ++r) {
                    const int s = seg[r];
                    const double w = agg == Agg::Mean ? 1.0 / count[s] : 1.0;
                    for (int c = 0; c < g.cols; ++c) ga.at(r, c) += w * g.at(s, c);
                }
            }
        };
        return id;
    }

    // a is n x 1 of scores; softmax with max-subtraction within each segment.
    int segment_softmax(int a, std::vector<int> seg, int nseg) {
        const Tensor2& A = nodes_[a].val;
        if (A.cols != 1) throw std::invalid_argument("segment_softmax expects n x 1");
        if (static_cast<int>(seg.size()) != A.rows)
            throw std::invalid_argument("segment id count mismatch");
        std::vector<double> mx(nseg, -std::numeric_limits<double>::infinity());
        std::vector<double> denom(nseg, 0.0);
        for (int r = 0; r < A.rows; ++r) mx[seg[r]] = std::max(mx[seg[r]], A.v[r]);
        for (int s = 0; s < nseg; ++s)
            if (!std::isfinite(mx[s])) throw std::invalid_argument("empty softmax segment");
        Tensor2 C(A.rows, 1);
        for (int r = 0; r < A.rows; ++r) {
            C.v[r] = std::exp(A.v[r] - mx[seg[r]]);
            denom[seg[r]] += C.v[r];
        }
        for (int r = 0; r < A.rows; ++r) C.v[r] /= denom[seg[r]];
        const int id = input(std::move(C));
        nodes_[id].back = [this, id, a, seg = std::move(seg), nseg] {
            const Tensor2& y = nodes_[id].val;
            const Tensor2& g = nodes_[id].grad;
            std::vector<double> dot(nseg, 0.0);
            for (int r = 0; r < y.rows; ++r) dot[seg[r]] += g.v[r] * y.v[r];
            for (int r = 0; r < y.rows; ++r)
                nodes_[a].grad.v[r] += y.v[r] * (g.v[r] - dot[seg[r]]);
        };
        return id;
    }

    // sum over picked rows of log(a[pick] + eps); a is n x 1, result 1 x 1.
    int log_pick_sum(int a, std::vector<int> picks, double eps) {
        const Tensor2& A = nodes_[a].val;
        Tensor2 C(1, 1);
        for (int p : picks) C.v[0] += std::log(A.v[p] + eps);
        const int id = input(std::move(C));
        nodes_[id].back = [this, id, a, picks = std::move(picks), eps] {
            const double g = nodes_[id].grad.v[0];
            for (int p : picks) nodes_[a].grad.v[p] += g / (nodes_[a].val.v[p] + eps);
        };
        return id;
    }

    int zero_scalar() { return input(Tensor2(1, 1)); }

    // acc + coeff * term, both 1 x 1
    int scale_add(int acc, int term, double coeff) {
        Tensor2 C(1, 1);
        C.v[0] = nodes_[acc].val.v[0] + coeff * nodes_[term].val.v[0];
        const int id = input(std::move(C));
        nodes_[id].back = [this, id, acc, term, coeff] {
            const double g = nodes_[id].grad.v[0];
            nodes_[acc].grad.v[0] += g;
            nodes_[term].grad.v[0] += coeff * g;
        };
        return id;
    }

    // Sum of all entries, result 1 x 1. Handy as a scalar test loss.
    int sum_all(int a) {
        Tensor2 C(1, 1);
        for (double x : nodes_[a].val.v) C.v[0] += x;
        const int id = input(std::move(C));
        nodes_[id].back = [this, id, a] {
            const double g = nodes_[id].grad.v[0];
            for (double& x : nodes_[a].grad.v) x += g;
        };
        return id;
    }

    void backward(int loss) {
        if (loss < 0 || loss >= static_cast<int>(nodes_.size()))
            throw std::invalid_argument("backward before forward");
        if (nodes_[loss].val.size() != 1) throw std::invalid_argument("loss must be scalar");
        for (Node& n : nodes_) {
            n.grad = Tensor2(n.val.rows, n.val.cols);
        }
        nodes_[loss].grad.v[0] = 1.0;
        for (int i = loss; i >= 0; --i)
            if (nodes_[i].back) nodes_[i].back();
    }

    void clear() {
        nodes_.clear();
    }

  private:
    std::vector<Node> nodes_;
    std::vector<Tensor2*> params_;
    std::vector<Tensor2>* param_grads_ = nullptr;
};

}  // namespace anycsp

#endif
