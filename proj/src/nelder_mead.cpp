#include "hsd/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace hsd {

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective, Eigen::VectorXd start,
                             const NelderMeadOptions& opts,
                             const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& project) {
    using Vec = Eigen::VectorXd;
    const auto n = static_cast<int>(start.size());
    const double nd = static_cast<double>(n);
    const double alpha = 1.0;
    const double gamma = 1.0 + 2.0 / nd;
    const double rho = 0.75 - 0.5 / nd;
    const double sigma = 1.0 - 1.0 / nd;

    NelderMeadResult out;
    const auto feasible = [&](Vec x) { return project ? project(x) : x; };
    const auto eval = [&](const Vec& x) {
        ++out.evaluations;
        return objective(x);
    };

    start = feasible(std::move(start));
    out.x = start;
    if (opts.max_evaluations <= 0) {
        out.f = objective(start);
        return out;
    }

    std::vector<Vec> pts(static_cast<std::size_t>(n + 1), start);
    std::vector<double> fv(static_cast<std::size_t>(n + 1));
    fv[0] = eval(pts[0]);
    for (int i = 0; i < n; ++i) {
        Vec x = start;
        const double step = x(i) != 0.0 ? opts.initial_step * std::max(1.0, std::abs(x(i))) : opts.initial_step;
        x(i) += step;
        pts[static_cast<std::size_t>(i + 1)] = feasible(x);
        fv[static_cast<std::size_t>(i + 1)] = eval(pts[static_cast<std::size_t>(i + 1)]);
    }

    std::vector<int> order(static_cast<std::size_t>(n + 1));
    while (out.evaluations < opts.max_evaluations) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fv[static_cast<std::size_t>(a)] < fv[static_cast<std::size_t>(b)]; });
        const auto best = static_cast<std::size_t>(order.front());
        const auto worst = static_cast<std::size_t>(order.back());
        const auto second = static_cast<std::size_t>(order[static_cast<std::size_t>(n - 1)]);

        double diameter = 0.0;
        for (const Vec& p : pts) diameter = std::max(diameter, (p - pts[best]).lpNorm<Eigen::Infinity>());
        if (diameter <= opts.x_tolerance && fv[worst] - fv[best] <= opts.f_tolerance) {
            out.converged = true;
            break;
        }

        Vec centroid = Vec::Zero(n);
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (i != worst) centroid += pts[i];
        centroid /= nd;

        const Vec xr = feasible(centroid + alpha * (centroid - pts[worst]));
        const double fr = eval(xr);
        if (fr < fv[best]) {
            const Vec xe = feasible(centroid + gamma * (xr - centroid));
            const double fe = eval(xe);
            if (fe < fr) {
                pts[worst] = xe;
                fv[worst] = fe;
            } else {
                pts[worst] = xr;
                fv[worst] = fr;
            }
            continue;
        }
        if (fr < fv[second]) {
            pts[worst] = xr;
            fv[worst] = fr;
            continue;
        }
        const bool outside = fr < fv[worst];
        const Vec xc = outside ? feasible(centroid + rho * (xr - centroid)) : feasible(centroid + rho * (pts[worst] - centroid));
        const double fc = eval(xc);
        if (fc < std::min(fr, fv[worst])) {
            pts[worst] = xc;
            fv[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i == best) continue;
            pts[i] = feasible(pts[best] + sigma * (pts[i] - pts[best]));
            fv[i] = eval(pts[i]);
        }
    }

    const auto best = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
    out.x = pts[best];
    out.f = fv[best];
    return out;
}

}  // namespace hsd
