#include "volkit/numerics/quadrature.hpp"

namespace volkit::numerics {

void QuadratureRule::validate() const {
    if (node_count != 7) {
        throw DomainError("QuadratureRule: only the G7-K15 pair (node_count = 7) is available");
    }
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
        throw DomainError("QuadratureRule: tolerances must be > 0");
    }
    if (max_subdivisions < 1) {
        throw DomainError("QuadratureRule: max_subdivisions must be >= 1");
    }
}

}  // namespace volkit::numerics
