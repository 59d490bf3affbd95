#include "udgan/tape.hpp"

#include <algorithm>
#include <cmath>

#include "udgan/kernels.hpp"

namespace udgan {

double stable_sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

Matrix softmax_rows(const Matrix& x) {
    Matrix out(x.rows, x.cols);
    for (std::size_t i = 0; i < x.rows; ++i) {
        const double* in = &x.data[i * x.cols];
        double* o = &out.data[i * out.cols];
        double mx = in[0];
        for (std::size_t j = 1; j < x.cols; ++j) mx = std::max(mx, in[j]);
        double sum = 0.0;
        for (std::size_t j = 0; j < x.cols; ++j) {
            o[j] = std::exp(in[j] - mx);
            sum += o[j];
        }
        for (std::size_t j = 0; j < x.cols; ++j) o[j] /= sum;
    }
    return out;
}

Tape::Id Tape::push(Matrix v, std::function<void(Tape&, const Matrix&)> back) {
    nodes_.push_back(Node{std::move(v), nullptr, std::move(back)});
    return static_cast<Id>(nodes_.size() - 1);
}

void Tape::check_id(Id id) const {
    if (id >= nodes_.size()) throw UsageError("tape: invalid node id");
}

const Matrix& Tape::value(Id id) const {
    check_id(id);
    return nodes_[id].val();
}

Matrix& Tape::gbuf(Id id) {
    Matrix& g = grads_[id];
    if (g.size() == 0) {
        const Matrix& v = nodes_[id].val();
        g = Matrix(v.rows, v.cols);
    }
    return g;
}

const Matrix& Tape::grad(Id id) const {
    check_id(id);
    if (!backward_done_) throw UsageError("tape: grad() before backward()");
    return grads_[id];
}

bool Tape::has_grad(Id id) const {
    return backward_done_ && id < grads_.size() && grads_[id].size() > 0;
}

Tape::Id Tape::input(Matrix v) { return push(std::move(v), nullptr); }

Tape::Id Tape::constant(const Matrix* external) {
    nodes_.push_back(Node{Matrix(), external, nullptr});
    return static_cast<Id>(nodes_.size() - 1);
}

Tape::Id Tape::param(std::string_view name) {
    if (!store_) throw UsageError("tape: param() without a bound ParamStore");
    auto it = param_ids_.find(std::string(name));
    if (it != param_ids_.end()) return it->second;
    const std::size_t si = store_->index_of(name);
    nodes_.push_back(Node{Matrix(), &store_->entry(si).value, nullptr});
    const Id id = static_cast<Id>(nodes_.size() - 1);
    param_nodes_.emplace_back(id, si);
    param_ids_.emplace(std::string(name), id);
    return id;
}

Tape::Id Tape::matmul(Id a, Id b) {
    check_id(a);
    check_id(b);
    const Matrix& av = value(a);
    const Matrix& bv = value(b);
    Matrix out(av.rows, bv.cols);
    kernels::matmul(av, bv, out);
    return push(std::move(out), [a, b](Tape& t, const Matrix& go) {
        // dA += go * B^T ; dB += A^T * go
        kernels::matmul_nt_acc(go, t.value(b), t.gbuf(a));
        kernels::matmul_tn_acc(t.value(a), go, t.gbuf(b));
    });
}

Tape::Id Tape::add(Id a, Id b) {
    const Matrix& av = value(a);
    const Matrix& bv = value(b);
    if (!av.same_shape(bv)) throw ConfigError("add: shape mismatch");
    Matrix out = av;
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += bv.data[i];
    return push(std::move(out), [a, b](Tape& t, const Matrix& go) {
        Matrix& ga = t.gbuf(a);
        Matrix& gb = t.gbuf(b);
        for (std::size_t i = 0; i < go.data.size(); ++i) {
            ga.data[i] += go.data[i];
            gb.data[i] += go.data[i];
        }
    });
}

Tape::Id Tape::add_row(Id a, Id bias) {
    const Matrix& av = value(a);
    const Matrix& bv = value(bias);
    if (bv.rows != 1 || bv.cols != av.cols) throw ConfigError("add_row: bias must be 1 x cols");
    Matrix out = av;
    for (std::size_t r = 0; r < out.rows; ++r)
        for (std::size_t c = 0; c < out.cols; ++c) out(r, c) += bv(0, c);
    return push(std::move(out), [a, bias](Tape& t, const Matrix& go) {
        Matrix& ga = t.gbuf(a);
        Matrix& gb = t.gbuf(bias);
        for (std::size_t i = 0; i < go.data.size(); ++i) ga.data[i] += go.data[i];
        for (std::size_t r = 0; r < go.rows; ++r)
            for (std::size_t c = 0; c < go.cols; ++c) gb(0, c) += go(r, c);
    });
}

Tape::Id Tape::sub(Id a, Id b) {
    const Matrix& av = value(a);
    const Matrix& bv = value(b);
    if (!av.same_shape(bv)) throw ConfigError("sub: shape mismatch");
    Matrix out = av;
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] -= bv.data[i];
    return push(std::move(out), [a, b](Tape& t, const Matrix& go) {
        Matrix& ga = t.gbuf(a);
        Matrix& gb = t.gbuf(b);
        for (std::size_t i = 0; i < go.data.size(); ++i) {
            ga.data[i] += go.data[i];
            gb.data[i] -= go.data[i];
        }
    });
}

Tape::Id Tape::mul(Id a, Id b) {
    const Matrix& av = value(a);
    const Matrix& bv = value(b);
    if (!av.same_shape(bv)) throw ConfigError("mul: shape mismatch");
    Matrix out = av;
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] *= bv.data[i];
    return push(std::move(out), [a, b](Tape& t, const Matrix& go) {
        const Matrix& av2 = t.value(a);
        const Matrix& bv2 = t.value(b);
        Matrix& ga = t.gbuf(a);
        Matrix& gb = t.gbuf(b);
        for (std::size_t i = 0; i < go.data.size(); ++i) {
            ga.data[i] += go.data[i] * bv2.data[i];
            gb.data[i] += go.data[i] * av2.data[i];
        }
    });
}

Tape::Id Tape::affine(Id a, double k, double c) {
    Matrix out = value(a);
    for (double& v : out.data) v = k * v + c;
    return push(std::move(out), [a, k](Tape& t, const Matrix& go) {
        Matrix& ga = t.gbuf(a);
        for (std::size_t i = 0; i < go.data.size(); ++i) ga.data[i] += k * go.data[i];
    });
}

Tape::Id Tape::sigmoid(Id a) {
    Matrix out = value(a);
    for (double& v : out.data) v = stable_sigmoid(v);
    const Id self = static_cast<Id>(nodes_.size()); // id this node will get
    return push(std::move(out), [a, self](Tape& t, const Matrix& go) {
        const Matrix& y = t.value(self);
        Matrix& ga = t.gbuf(a);
        for (std::size_t i = 0; i < go.data.size(); ++i)
            ga.data[i] += go.data[i] * y.data[i] * (1.0 - y.data[i]);
    });
}

Tape::Id Tape::tanh_(Id a) {
    Matrix out = value(a);
    for (double& v : out.data) v = std::tanh(v);
    const Id self = static_cast<Id>(nodes_.size());
    return push(std::move(out), [a, self](Tape& t, const Matrix& go) {
        const Matrix& y = t.value(self);
        Matrix& ga = t.gbuf(a);
        for (std::size_t i = 0; i < go.data.size(); ++i)
            ga.data[i] += go.data[i] * (1.0 - y.data[i] * y.data[i]);
    });
}

Tape::Id Tape::relu(Id a) {
    Matrix out = value(a);
    for (double& v : out.data) v = v > 0.0 ? v : 0.0;
    return push(std::move(out), [a](Tape& t, const Matrix& go) {
        const Matrix& x = t.value(a);
        Matrix& ga = t.gbuf(a);
        for (std::size_t i = 0; i < go.data.size(); ++i)
            if (x.data[i] > 0.0) ga.data[i] += go.data[i];
    });
}

Tape::Id Tape::concat_cols(Id a, Id b) {
    const Matrix& av = value(a);
    const Matrix& bv = value(b);
    if (av.rows != bv.rows) throw ConfigError("concat_cols: row mismatch");
    Matrix out(av.rows, av.cols + bv.cols);
    for (std::size_t r = 0; r < av.rows; ++r) {
        for (std::size_t c = 0; c < av.cols; ++c) out(r, c) = av(r, c);
        for (std::size_t c = 0; c < bv.cols; ++c) out(r, av.cols + c) = bv(r, c);
    }
    const std::size_t acols = av.cols;
    return push(std::move(out), [a, b, acols](Tape& t, const Matrix& go) {
        Matrix& ga = t.gbuf(a);
        Matrix& gb = t.gbuf(b);
        for (std::size_t r = 0; r < go.rows; ++r) {
            for (std::size_t c = 0; c < acols; ++c) ga(r, c) += go(r, c);
            for (std::size_t c = acols; c < go.cols; ++c) gb(r, c - acols) += go(r, c);
        }
    });
}

Tape::Id Tape::slice_cols(Id a, std::size_t c0, std::size_t c1) {
    const Matrix& av = value(a);
    if (c0 >= c1 || c1 > av.cols) throw ConfigError("slice_cols: bad range");
    Matrix out(av.rows, c1 - c0);
    for (std::size_t r = 0; r < av.rows; ++r)
        for (std::size_t c = c0; c < c1; ++c) out(r, c - c0) = av(r, c);
    return push(std::move(out), [a, c0](Tape& t, const Matrix& go) {
        Matrix& ga = t.gbuf(a);
        for (std::size_t r = 0; r < go.rows; ++r)
            for (std::size_t c = 0; c < go.cols; ++c) ga(r, c0 + c) += go(r, c);
    });
}

Tape::Id Tape::row(Id a, std::size_t r) {
    const Matrix& av = value(a);
    if (r >= av.rows) throw ConfigError("row: index out of range");
    Matrix out(1, av.cols);
    for (std::size_t c = 0; c < av.cols; ++c) out(0, c) = av(r, c);
    return push(std::move(out), [a, r](Tape& t, const Matrix& go) {
        Matrix& ga = t.gbuf(a);
        for (std::size_t c = 0; c < go.cols; ++c) ga(r, c) += go(0, c);
    });
}

Tape::Id Tape::gather_rows(Id table, std::vector<int> ids) {
    const Matrix& tv = value(table);
    Matrix out(ids.size(), tv.cols);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const int id = ids[i];
        if (id < 0 || static_cast<std::size_t>(id) >= tv.rows)
            throw DataError("gather_rows: id out of range");
        for (std::size_t c = 0; c < tv.cols; ++c) out(i, c) = tv(static_cast<std::size_t>(id), c);
    }
    return push(std::move(out), [table, ids = std::move(ids)](Tape& t, const Matrix& go) {
        Matrix& gt = t.gbuf(table);
        for (std::size_t i = 0; i < ids.size(); ++i) {
            const std::size_t r = static_cast<std::size_t>(ids[i]);
            for (std::size_t c = 0; c < go.cols; ++c) gt(r, c) += go(i, c);
        }
    });
}

Tape::Id Tape::softmax_rows(Id a) {
    Matrix out = udgan::softmax_rows(value(a));
    const Id self = static_cast<Id>(nodes_.size());
    return push(std::move(out), [a, self](Tape& t, const Matrix& go) {
        const Matrix& y = t.value(self);
        Matrix& ga = t.gbuf(a);
        for (std::size_t r = 0; r < go.rows; ++r) {
            double dot = 0.0;
            for (std::size_t c = 0; c < go.cols; ++c) dot += go(r, c) * y(r, c);
            for (std::size_t c = 0; c < go.cols; ++c)
                ga(r, c) += y(r, c) * (go(r, c) - dot);
        }
    });
}

Tape::Id Tape::log_softmax_rows(Id a) {
    const Matrix& av = value(a);
    Matrix out(av.rows, av.cols);
    for (std::size_t r = 0; r < av.rows; ++r) {
        const double* in = &av.data[r * av.cols];
        double* o = &out.data[r * out.cols];
        double mx = in[0];
        for (std::size_t c = 1; c < av.cols; ++c) mx = std::max(mx, in[c]);
        double sum = 0.0;
        for (std::size_t c = 0; c < av.cols; ++c) sum += std::exp(in[c] - mx);
        const double lse = mx + std::log(sum);
        for (std::size_t c = 0; c < av.cols; ++c) o[c] = in[c] - lse;
    }
    const Id self = static_cast<Id>(nodes_.size());
    return push(std::move(out), [a, self](Tape& t, const Matrix& go) {
        const Matrix& logp = t.value(self);
        Matrix& ga = t.gbuf(a);
        for (std::size_t r = 0; r < go.rows; ++r) {
            double gsum = 0.0;
            for (std::size_t c = 0; c < go.cols; ++c) gsum += go(r, c);
            for (std::size_t c = 0; c < go.cols; ++c)
                ga(r, c) += go(r, c) - std::exp(logp(r, c)) * gsum;
        }
    });
}

Tape::Id Tape::sum_all(Id a) {
    const Matrix& av = value(a);
    Matrix out(1, 1);
    for (double v : av.data) out.data[0] += v;
    return push(std::move(out), [a](Tape& t, const Matrix& go) {
        Matrix& ga = t.gbuf(a);
        for (double& g : ga.data) g += go.data[0];
    });
}

Tape::Id Tape::mean_all(Id a) {
    const Matrix& av = value(a);
    const double inv = 1.0 / static_cast<double>(av.size());
    Matrix out(1, 1);
    for (double v : av.data) out.data[0] += v;
    out.data[0] *= inv;
    return push(std::move(out), [a, inv](Tape& t, const Matrix& go) {
        Matrix& ga = t.gbuf(a);
        for (double& g : ga.data) g += go.data[0] * inv;
    });
}

Tape::Id Tape::pick_nll_mean(Id log_probs, std::vector<int> targets) {
    const Matrix& lp = value(log_probs);
    if (targets.size() != lp.rows) throw UsageError("pick_nll_mean: target count mismatch");
    const double inv = 1.0 / static_cast<double>(targets.size());
    Matrix out(1, 1);
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const int tgt = targets[i];
        if (tgt < 0 || static_cast<std::size_t>(tgt) >= lp.cols)
            throw DataError("pick_nll_mean: target out of range");
        out.data[0] -= lp(i, static_cast<std::size_t>(tgt));
    }
    out.data[0] *= inv;
    return push(std::move(out),
                [log_probs, targets = std::move(targets), inv](Tape& t, const Matrix& go) {
                    Matrix& g = t.gbuf(log_probs);
                    for (std::size_t i = 0; i < targets.size(); ++i)
                        g(i, static_cast<std::size_t>(targets[i])) -= go.data[0] * inv;
                });
}

Tape::Id Tape::pick_weighted_sum(Id log_probs, std::vector<int> targets,
                                 std::vector<double> weights) {
    const Matrix& lp = value(log_probs);
    if (targets.size() != lp.rows || weights.size() != lp.rows)
        throw UsageError("pick_weighted_sum: row count mismatch");
    Matrix out(1, 1);
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const int tgt = targets[i];
        if (tgt < 0 || static_cast<std::size_t>(tgt) >= lp.cols)
            throw DataError("pick_weighted_sum: target out of range");
        out.data[0] += weights[i] * lp(i, static_cast<std::size_t>(tgt));
    }
    return push(std::move(out), [log_probs, targets = std::move(targets),
                                 weights = std::move(weights)](Tape& t, const Matrix& go) {
        Matrix& g = t.gbuf(log_probs);
        for (std::size_t i = 0; i < targets.size(); ++i)
            g(i, static_cast<std::size_t>(targets[i])) += go.data[0] * weights[i];
    });
}

void Tape::backward(Id loss) {
    if (nodes_.empty()) throw UsageError("tape: backward without a forward evaluation");
    check_id(loss);
    if (backward_done_) throw UsageError("tape: backward called twice");
    const Matrix& lv = nodes_[loss].val();
    if (lv.rows != 1 || lv.cols != 1) throw UsageError("tape: backward requires a 1x1 loss");

    grads_.assign(nodes_.size(), Matrix());
    gbuf(loss).data[0] = 1.0;
    backward_done_ = true;

    for (std::size_t i = nodes_.size(); i-- > 0;) {
        const Id id = static_cast<Id>(i);
        if (!nodes_[i].back) continue;
        const Matrix& g = grads_[id];
        if (g.size() == 0) continue; // node does not influence the loss
        nodes_[i].back(*this, g);
    }
}

void Tape::add_param_grads_to(ParamStore& store) const {
    if (!backward_done_) throw UsageError("tape: add_param_grads_to before backward");
    for (const auto& [id, si] : param_nodes_) {
        const Matrix& g = grads_[id];
        if (g.size() == 0) continue;
        Matrix& dst = store.entry(si).grad;
        for (std::size_t k = 0; k < g.data.size(); ++k) dst.data[k] += g.data[k];
    }
}

} // namespace udgan
