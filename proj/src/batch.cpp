#include "hsd/batch.hpp"

#include <Eigen/QR>

#include <cmath>
#include <exception>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hsd {

CMatrix random_unitary(Rng& rng, Index n) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    CMatrix g(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < n; ++j) {
        const double a = std::abs(r(j, j));
        if (a > 0.0) q.col(j) *= r(j, j) / a;
    }
    return q;
}

MatrixPoint random_point(Rng& rng, Index p, Index q, double max_sigma) {
    std::uniform_real_distribution<double> uni(0.0, max_sigma);
    if (p == 1 && q == 1) {
        std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
        return MatrixPoint::scalar(std::polar(uni(rng), angle(rng)));
    }
    const Index r = std::min(p, q);
    CMatrix d = CMatrix::Zero(p, q);
    for (Index i = 0; i < r; ++i) d(i, i) = uni(rng);
    return MatrixPoint(random_unitary(rng, p) * d * random_unitary(rng, q).adjoint());
}

Triangle random_triangle(Rng& rng, Index p, Index q, double max_sigma) {
    MatrixPoint a = random_point(rng, p, q, max_sigma);
    MatrixPoint b = random_point(rng, p, q, max_sigma);
    MatrixPoint c = random_point(rng, p, q, max_sigma);
    return {std::move(a), std::move(b), std::move(c)};
}

std::vector<Triangle> random_triangles(Rng& rng, Index p, Index q, double max_sigma, std::size_t count) {
    std::vector<Triangle> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(random_triangle(rng, p, q, max_sigma));
    return out;
}

std::vector<AreaResult> batch_areas(std::span<const Triangle> triangles, AreaMethod method, Execution exec) {
    std::vector<AreaResult> out(triangles.size());
    if (exec == Execution::serial) {
        for (std::size_t i = 0; i < triangles.size(); ++i) out[i] = area(method, triangles[i]);
        return out;
    }
    // Exceptions cannot cross the parallel region; keep the first one by index.
    std::exception_ptr failure;
    std::size_t failed_at = triangles.size();
    const auto n = static_cast<long>(triangles.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (long i = 0; i < n; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = area(method, triangles[static_cast<std::size_t>(i)]);
        } catch (...) {
#pragma omp critical(hsd_batch_failure)
            if (static_cast<std::size_t>(i) < failed_at) {
                failed_at = static_cast<std::size_t>(i);
                failure = std::current_exception();
            }
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

BatchBound batch_max_area(std::span<const Triangle> triangles, Execution exec) {
    const std::vector<AreaResult> areas = batch_areas(triangles, AreaMethod::vformula, exec);
    BatchBound out;
    for (std::size_t i = 0; i < areas.size(); ++i) {
        const double a = std::abs(areas[i].value);
        if (a > out.max_abs_area) {
            out.max_abs_area = a;
            out.worst_index = i;
        }
    }
    return out;
}

}  // namespace hsd
