#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "udgan/matrix.hpp"

namespace udgan {

// Named parameter tensors with same-shaped gradient slots. Insertion order is
// preserved and defines the serialization / update order, which keeps runs
// reproducible.
class ParamStore {
public:
    struct Entry {
        std::string name;
        Matrix value;
        Matrix grad;
    };

    Matrix& add(std::string name, Matrix init) {
        if (index_.count(name)) throw ConfigError("duplicate parameter name: " + name);
        index_[name] = entries_.size();
        entries_.push_back(Entry{std::move(name), std::move(init), Matrix()});
        Entry& e = entries_.back();
        e.grad = Matrix(e.value.rows, e.value.cols);
        return e.value;
    }

    bool has(std::string_view name) const { return index_.count(std::string(name)) > 0; }

    std::size_t index_of(std::string_view name) const {
        auto it = index_.find(std::string(name));
        if (it == index_.end()) throw ConfigError("unknown parameter: " + std::string(name));
        return it->second;
    }

    Matrix& value(std::string_view name) { return entries_[index_of(name)].value; }
    const Matrix& value(std::string_view name) const { return entries_[index_of(name)].value; }
    Matrix& grad(std::string_view name) { return entries_[index_of(name)].grad; }
    const Matrix& grad(std::string_view name) const { return entries_[index_of(name)].grad; }

    Entry& entry(std::size_t i) { return entries_[i]; }
    const Entry& entry(std::size_t i) const { return entries_[i]; }
    std::size_t size() const { return entries_.size(); }

    void zero_grads() {
        for (auto& e : entries_)
            for (double& g : e.grad.data) g = 0.0;
    }

    // Total number of scalar parameters.
    std::size_t scalar_count() const {
        std::size_t n = 0;
        for (const auto& e : entries_) n += e.value.size();
        return n;
    }

    double grad_global_norm() const;

    // Scales all gradients so the global norm does not exceed max_norm.
    void clip_grads_global_norm(double max_norm);

    bool values_finite() const {
        for (const auto& e : entries_)
            if (!e.value.all_finite()) return false;
        return true;
    }

private:
    std::vector<Entry> entries_;
    std::unordered_map<std::string, std::size_t> index_;
};

// Adam with bias correction. Moment buffers are keyed by store order, so a
// given (store, optimizer) pair always updates deterministically.
class AdamOptimizer {
public:
    explicit AdamOptimizer(double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
        : beta1_(beta1), beta2_(beta2), eps_(eps) {}

    void step(ParamStore& store, double lr);

    std::int64_t steps_taken() const { return t_; }

private:
    double beta1_, beta2_, eps_;
    std::int64_t t_ = 0;
    std::vector<Matrix> m_, v_;
};

} // namespace udgan
