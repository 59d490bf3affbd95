#pragma once

#include <functional>
#include <string>

#include "udgan/param_store.hpp"

namespace udgan {

struct GradCheckReport {
    double max_rel_err = 0.0;
    std::string worst_param;
    std::size_t worst_coord = 0;
    std::size_t coords_checked = 0;
    bool ok(double tol) const { return max_rel_err < tol; }
};

// Central finite differences over every parameter coordinate (optionally a
// deterministic subsample for large tensors). loss_fn must run a complete
// fresh forward pass from the store; it is the independent oracle against
// which tape gradients are compared. Analytic gradients are read from the
// store's grad slots, which the caller fills before invoking this.
GradCheckReport finite_difference_check(ParamStore& store,
                                        const std::function<double()>& loss_fn,
                                        double eps = 1e-4,
                                        std::size_t max_coords_per_param = 0);

} // namespace udgan
