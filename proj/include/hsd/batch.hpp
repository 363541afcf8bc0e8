#pragma once

// Random sampling of domain points and batch kernels over many triangles.
//
// Each kernel has a serial reference loop and an OpenMP loop selected by
// Execution; both produce identical results in the same order.

#include "hsd/domain.hpp"
#include "hsd/execution.hpp"
#include "hsd/triangle_area.hpp"

#include <random>
#include <span>
#include <vector>

namespace hsd {

using Rng = std::mt19937_64;

/// Haar-distributed n x n unitary (QR of a complex Gaussian matrix, phase-corrected).
CMatrix random_unitary(Rng& rng, Index n);

/// U diag(s) V* with Haar U, V and singular values uniform in [0, max_sigma).
MatrixPoint random_point(Rng& rng, Index p, Index q, double max_sigma);

Triangle random_triangle(Rng& rng, Index p, Index q, double max_sigma);
std::vector<Triangle> random_triangles(Rng& rng, Index p, Index q, double max_sigma, std::size_t count);

/// Areas of every triangle with one method.
std::vector<AreaResult> batch_areas(std::span<const Triangle> triangles, AreaMethod method,
                                    Execution exec = Execution::parallel);

struct BatchBound {
    double max_abs_area = 0.0;
    std::size_t worst_index = 0;
};

/// Largest |vformula area| over the batch.
BatchBound batch_max_area(std::span<const Triangle> triangles, Execution exec = Execution::parallel);

}  // namespace hsd
