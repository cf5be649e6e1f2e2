#pragma once

#include "haarquench/linalg.hpp"
#include "haarquench/states.hpp"

namespace haarquench {

/// (sigma_y (x) sigma_y) rho* (sigma_y (x) sigma_y), conjugation in the computational basis.
ComplexMatrix spin_flip(const ComplexMatrix& rho);

/// Wootters concurrence max(0, l1 - l2 - l3 - l4), with l_i the descending
/// square roots of the eigenvalues of rho * spin_flip(rho). Computed as the
/// singular values of V^T (sigma_y (x) sigma_y) V for rho = V V^dagger, with
/// eigenvalues of rho below 1e-14 treated as zero.
double concurrence_mixed(const DensityMatrix& rho);

/// 2 |a00 a11 - a01 a10|, clamped to [0, 1].
double concurrence_pure(const PureState& psi);

}  // namespace haarquench
