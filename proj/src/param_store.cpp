#include "udgan/param_store.hpp"

#include <cmath>

namespace udgan {

double ParamStore::grad_global_norm() const {
    double sq = 0.0;
    for (const auto& e : entries_)
        for (double g : e.grad.data) sq += g * g;
    return std::sqrt(sq);
}

void ParamStore::clip_grads_global_norm(double max_norm) {
    if (max_norm <= 0.0) return;
    const double norm = grad_global_norm();
    if (norm <= max_norm || norm == 0.0) return;
    const double scale = max_norm / norm;
    for (auto& e : entries_)
        for (double& g : e.grad.data) g *= scale;
}

void AdamOptimizer::step(ParamStore& store, double lr) {
    if (m_.size() != store.size()) {
        m_.assign(store.size(), Matrix());
        v_.assign(store.size(), Matrix());
        for (std::size_t i = 0; i < store.size(); ++i) {
            const Matrix& p = store.entry(i).value;
            m_[i] = Matrix(p.rows, p.cols);
            v_[i] = Matrix(p.rows, p.cols);
        }
    }
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < store.size(); ++i) {
        auto& e = store.entry(i);
        auto& m = m_[i].data;
        auto& v = v_[i].data;
        for (std::size_t k = 0; k < e.value.data.size(); ++k) {
            const double g = e.grad.data[k];
            m[k] = beta1_ * m[k] + (1.0 - beta1_) * g;
            v[k] = beta2_ * v[k] + (1.0 - beta2_) * g * g;
            const double mhat = m[k] / bc1;
            const double vhat = v[k] / bc2;
            e.value.data[k] -= lr * mhat / (std::sqrt(vhat) + eps_);
        }
    }
}

} // namespace udgan
