#include "udgan/gradcheck.hpp"

#include <cmath>

namespace udgan {

GradCheckReport finite_difference_check(ParamStore& store,
                                        const std::function<double()>& loss_fn,
                                        double eps, std::size_t max_coords_per_param) {
    GradCheckReport rep;
    for (std::size_t pi = 0; pi < store.size(); ++pi) {
        auto& entry = store.entry(pi);
        const std::size_t n = entry.value.size();
        // Deterministic stride subsample for large tensors.
        std::size_t stride = 1;
        if (max_coords_per_param > 0 && n > max_coords_per_param)
            stride = (n + max_coords_per_param - 1) / max_coords_per_param;
        for (std::size_t k = 0; k < n; k += stride) {
            const double orig = entry.value.data[k];
            entry.value.data[k] = orig + eps;
            const double lp = loss_fn();
            entry.value.data[k] = orig - eps;
            const double lm = loss_fn();
            entry.value.data[k] = orig;

            const double numeric = (lp - lm) / (2.0 * eps);
            const double analytic = entry.grad.data[k];
            const double scale = std::max(std::fabs(numeric), std::fabs(analytic));
            double rel;
            if (scale < 1e-7) {
                rel = std::fabs(numeric - analytic) < 1e-9 ? 0.0
                                                           : std::fabs(numeric - analytic);
            } else {
                rel = std::fabs(numeric - analytic) / scale;
            }
            ++rep.coords_checked;
            if (rel > rep.max_rel_err) {
                rep.max_rel_err = rel;
                rep.worst_param = entry.name;
                rep.worst_coord = k;
            }
        }
    }
    return rep;
}

} // namespace udgan
