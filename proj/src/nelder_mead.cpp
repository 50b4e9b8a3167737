#include "mcasim/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mcasim/errors.hpp"

namespace mcasim {

void OptimizerConfig::validate() const {
    if (f_tol <= 0.0) throw config_error("OptimizerConfig: f_tol must be > 0");
    if (x_tol <= 0.0) throw config_error("OptimizerConfig: x_tol must be > 0");
    if (max_evals < 1) throw config_error("OptimizerConfig: max_evals must be >= 1");
    if (n_restarts < 0) throw config_error("OptimizerConfig: n_restarts must be >= 0");
    if (threads < 1) throw config_error("OptimizerConfig: threads must be >= 1");
    if (reflection <= 0.0 || expansion <= 1.0 || contraction <= 0.0 || contraction >= 1.0 ||
        shrink <= 0.0 || shrink >= 1.0)
        throw config_error("OptimizerConfig: simplex coefficients out of range");
}

namespace {

std::string point_str(const std::vector<double>& x) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
    os << ")";
    return os.str();
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                             const std::vector<double>& start, const OptimizerConfig& config,
                             double initial_step) {
    config.validate();
    const std::size_t k = start.size();
    if (k < 1) throw usage_error("nelder_mead: need at least one dimension");

    long evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        const double f = objective(x);
        ++evals;
        if (!std::isfinite(f))
            throw usage_error("nelder_mead: objective returned a non-finite value at " +
                              point_str(x));
        return f;
    };

    // Initial simplex: the start plus one vertex per coordinate offset.
    std::vector<std::vector<double>> v(k + 1, start);
    std::vector<double> f(k + 1);
    for (std::size_t i = 0; i < k; ++i) v[i + 1][i] += initial_step;
    for (std::size_t i = 0; i <= k; ++i) f[i] = eval(v[i]);

    std::vector<std::size_t> order(k + 1);
    bool converged = false;
    while (true) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
        const std::size_t best = order[0], second_worst = order[k - 1], worst = order[k];

        double x_spread = 0.0;
        for (std::size_t i = 0; i <= k; ++i)
            for (std::size_t d = 0; d < k; ++d)
                x_spread = std::max(x_spread, std::abs(v[i][d] - v[best][d]));
        if (f[worst] - f[best] < config.f_tol && x_spread < config.x_tol) {
            converged = true;
            break;
        }
        if (evals >= config.max_evals) break;

        std::vector<double> centroid(k, 0.0);
        for (std::size_t i = 0; i <= k; ++i) {
            if (i == worst) continue;
            for (std::size_t d = 0; d < k; ++d) centroid[d] += v[i][d];
        }
        for (double& c : centroid) c /= static_cast<double>(k);

        auto blend = [&](double coeff) {
            std::vector<double> x(k);
            for (std::size_t d = 0; d < k; ++d)
                x[d] = centroid[d] + coeff * (centroid[d] - v[worst][d]);
            return x;
        };

        const auto xr = blend(config.reflection);
        const double fr = eval(xr);

        if (fr < f[best]) {
            const auto xe = blend(config.reflection * config.expansion);
            const double fe = eval(xe);
            if (fe < fr) {
                v[worst] = xe;
                f[worst] = fe;
            } else {
                v[worst] = xr;
                f[worst] = fr;
            }
            continue;
        }
        if (fr < f[second_worst]) {
            v[worst] = xr;
            f[worst] = fr;
            continue;
        }

        // Contraction, outside when the reflection improved on the worst
        // vertex and inside otherwise.
        const bool outside = fr < f[worst];
        const auto xc = blend(outside ? config.reflection * config.contraction
                                      : -config.contraction);
        const double fc = eval(xc);
        if (fc < (outside ? fr : f[worst])) {
            v[worst] = xc;
            f[worst] = fc;
            continue;
        }

        // Shrink everything toward the best vertex.
        for (std::size_t i = 0; i <= k; ++i) {
            if (i == best) continue;
            for (std::size_t d = 0; d < k; ++d)
                v[i][d] = v[best][d] + config.shrink * (v[i][d] - v[best][d]);
            f[i] = eval(v[i]);
        }
    }

    const std::size_t best =
        static_cast<std::size_t>(std::min_element(f.begin(), f.end()) - f.begin());
    return {v[best], f[best], evals, converged};
}

}  // namespace mcasim
