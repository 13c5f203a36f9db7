#include "uc/stepsize.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace uc {

Multipliers update_multipliers(const Multipliers& lambda_k, const Multipliers& g, double c_k) {
    if (!(c_k > 0.0)) throw std::invalid_argument("update_multipliers: step must be positive");
    Multipliers next = lambda_k;
    for (std::size_t t = 0; t < next.lambda0.size(); ++t) next.lambda0[t] += c_k * g.lambda0[t];
    for (std::size_t l = 0; l < next.lambda_plus.size(); ++l)
        for (std::size_t t = 0; t < next.lambda_plus[l].size(); ++t) {
            if (g.lambda_plus[l][t] < 0.0 || g.lambda_minus[l][t] < 0.0)
                throw std::invalid_argument("update_multipliers: negative line component in g");
            next.lambda_plus[l][t] += c_k * g.lambda_plus[l][t];
            next.lambda_minus[l][t] += c_k * g.lambda_minus[l][t];
        }
    return next;
}

Matrix beta_direction(const UcInstance& instance, const NetworkModel& model, const Multipliers& g) {
    const std::size_t n = instance.num_units();
    const std::size_t nline = instance.num_lines();
    const std::size_t horizon = static_cast<std::size_t>(instance.horizon);
    Matrix d(n, std::vector<double>(horizon, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < horizon; ++t) {
            double v = -g.lambda0[t];
            for (std::size_t l = 0; l < nline; ++l)
                v += (g.lambda_plus[l][t] - g.lambda_minus[l][t]) * model.gamma_unit[l][i];
            d[i][t] = v;
        }
    return d;
}

double optimize_c0(const UcInstance& instance, const NetworkModel& model,
                   const Multipliers& lambda_star, const Multipliers& g,
                   const BetaTable& beta_at_lambda_star, const SolverConfig& config) {
    (void)lambda_star;
    const double delta = config.delta;
    const double u = config.step_bound;
    Matrix slope = beta_direction(instance, model, g);

    double c0 = u;
    for (std::size_t i = 0; i < beta_at_lambda_star.beta.size(); ++i) {
        for (std::size_t t = 0; t < beta_at_lambda_star.beta[i].size(); ++t) {
            double margin = beta_at_lambda_star.beta[i][t] - beta_at_lambda_star.beta0[i];
            if (std::abs(margin) < delta) continue;  // unprotected, allowed to flip
            double s = slope[i][t];
            if (margin >= delta && s < 0.0)
                c0 = std::min(c0, (delta - margin) / s);
            else if (margin <= -delta && s > 0.0)
                c0 = std::min(c0, (-delta - margin) / s);
        }
    }
    if (c0 <= 0.0) {
        // A protected entry sits exactly at margin with an adverse gradient;
        // the exact maximum is 0, which would stall the update.
        std::cerr << "warning: optimal initial step is 0, falling back to "
                  << std::min(u, 1e-3) << "\n";
        return std::min(u, 1e-3);
    }
    return c0;
}

}  // namespace uc
