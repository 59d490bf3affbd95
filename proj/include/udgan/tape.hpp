#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "udgan/matrix.hpp"
#include "udgan/param_store.hpp"

namespace udgan {

// Eager reverse-mode tape. Every op computes its value immediately and
// records a closure that routes the output gradient to its parents.
// A tape is built per forward evaluation and is cheap to discard; parameter
// values are read through const references into a ParamStore, so concurrent
// tapes over one store are safe as long as nobody mutates the store.
class Tape {
public:
    using Id = std::uint32_t;

    explicit Tape(const ParamStore* store = nullptr) : store_(store) {}

    // Leaves.
    Id input(Matrix v);
    Id constant(const Matrix* external); // aliases caller-owned storage
    Id param(std::string_view name);     // trainable leaf from the bound store

    // Linear algebra.
    Id matmul(Id a, Id b);
    Id add(Id a, Id b);          // same shape
    Id add_row(Id a, Id bias);   // bias is 1 x cols, broadcast over rows
    Id sub(Id a, Id b);
    Id mul(Id a, Id b);          // elementwise
    Id affine(Id a, double k, double c); // k*a + c elementwise
    Id scale(Id a, double k) { return affine(a, k, 0.0); }
    Id one_minus(Id a) { return affine(a, -1.0, 1.0); }

    // Nonlinearities.
    Id sigmoid(Id a);
    Id tanh_(Id a);
    Id relu(Id a);

    // Shape ops.
    Id concat_cols(Id a, Id b);
    Id slice_cols(Id a, std::size_t c0, std::size_t c1);
    Id row(Id a, std::size_t r);
    Id gather_rows(Id table, std::vector<int> ids);

    // Softmax family (row-stabilized).
    Id softmax_rows(Id a);
    Id log_softmax_rows(Id a);

    // Reductions / losses. All produce 1x1 scalars.
    Id sum_all(Id a);
    Id mean_all(Id a);
    // -(1/n) * sum_i logp(i, target_i)
    Id pick_nll_mean(Id log_probs, std::vector<int> targets);
    // sum_i w_i * logp(i, target_i)
    Id pick_weighted_sum(Id log_probs, std::vector<int> targets, std::vector<double> weights);

    const Matrix& value(Id id) const;
    std::size_t node_count() const { return nodes_.size(); }

    // Reverse sweep from a 1x1 loss node. May be called once per tape.
    void backward(Id loss);

    // Gradient of the loss w.r.t. any node (valid after backward()).
    const Matrix& grad(Id id) const;
    bool has_grad(Id id) const;

    // Adds the parameter-leaf gradients into the bound store's grad slots.
    void add_param_grads_to(ParamStore& store) const;

private:
    struct Node {
        Matrix owned;
        const Matrix* ext = nullptr;
        std::function<void(Tape&, const Matrix&)> back; // null for leaves
        const Matrix& val() const { return ext ? *ext : owned; }
    };

    Id push(Matrix v, std::function<void(Tape&, const Matrix&)> back);
    Matrix& gbuf(Id id);
    void check_id(Id id) const;

    const ParamStore* store_;
    std::vector<Node> nodes_;
    std::vector<Matrix> grads_;
    std::vector<std::pair<Id, std::size_t>> param_nodes_; // tape id -> store index
    std::unordered_map<std::string, Id> param_ids_;
    bool backward_done_ = false;
};

// Standalone stabilized softmax over rows (no tape involvement).
Matrix softmax_rows(const Matrix& x);

// Numerically stable logistic function.
double stable_sigmoid(double x);

} // namespace udgan
