#ifndef PUREX_INTEGRATOR_HPP
#define PUREX_INTEGRATOR_HPP

#include "purex/config.hpp"
#include "purex/model.hpp"
#include "purex/params.hpp"
#include "purex/state.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace purex {

enum class StepMethod { ImplicitEuler, Bdf2 };

struct IntegratorOptions {
    double dt_internal = 0.05;  // sub-step within one control period, h
    double newton_tol = 1e-10;  // residual tolerance of the implicit solves
    int newton_max_iter = 25;
    StepMethod method = StepMethod::ImplicitEuler;
    double alg_tol = 1e-12;     // per-stage interface equilibrium tolerance
    int alg_max_iter = 60;
};

IntegratorOptions integrator_options_from_config(const Config& cfg);

struct IntegrationError : std::runtime_error {
    IntegrationError(const std::string& what, int stage_ = -1, double residual_ = 0.0)
        : std::runtime_error(what), stage(stage_), residual(residual_) {}
    int stage;       // 1-based stage for algebraic failures, -1 otherwise
    double residual; // last residual norm seen
};

struct InfeasibleTargetError : std::runtime_error {
    InfeasibleTargetError(const std::string& what, double nearest_u_, double achievable_y_)
        : std::runtime_error(what), nearest_u(nearest_u_), achievable_y(achievable_y_) {}
    double nearest_u;     // bound closest to the requested target
    double achievable_y;  // steady y at that bound
};

/// Solves the 32 interface equilibrium concentrations for a given
/// differential state, one independent 2x2 Newton per stage (damped,
/// projected onto the physical box, bisection fallback). `warm_start`
/// seeds the iteration, typically with the previous step's solution.
Eigen::VectorXd solve_algebraic(const Eigen::VectorXd& x, const PlantParams& params,
                                const IntegratorOptions& opts = {},
                                const Eigen::VectorXd* warm_start = nullptr);

/// One control period advanced by sub-stepped implicit Euler (or BDF2).
/// `flux_integral` carries the time-integrated boundary fluxes (mol) with
/// the same implicit quadrature as the scheme, so for implicit Euler the
/// species balance inventory(next) - inventory(prev) = net flux is exact
/// up to Newton tolerance.
struct StepResult {
    PlantState state;
    BoundaryFluxes flux_integral;
    int substeps = 0;
    int newton_iters = 0;
    int jacobian_builds = 0;
    int step_halvings = 0;
};

StepResult step(const PlantState& state, double u, double q, double T,
                const IntegratorOptions& opts, const PlantParams& params);

/// Steady state for fixed inputs: damped Newton on the eliminated system
/// f(x, alg(x)) = 0 to ||f||_inf < 1e-9, with pseudo-transient
/// continuation as start-up path and fallback.
PlantState steady_state(double u, double q, const PlantParams& params,
                        const IntegratorOptions& opts = {}, const PlantState* guess = nullptr);

double steady_y(double u, double q, const PlantParams& params,
                const IntegratorOptions& opts = {}, const PlantState* guess = nullptr);

/// Warm-start cache for repeated steady-state solves at nearby inputs.
struct SteadyCache {
    bool valid = false;
    double u = 0.0;
    double q = 0.0;
    PlantState state;
};

/// Feed flow that places the steady output at y_set for disturbance q_hat:
/// bracketed secant/bisection on u -> steady_y(u, q_hat) - y_set, to
/// |y - y_set| < 1e-6 * y_set. Throws InfeasibleTargetError when y_set is
/// outside [steady_y(u_min), steady_y(u_max)].
double solve_u_set(double y_set, double q_hat, const PlantParams& params,
                   const IntegratorOptions& opts = {}, SteadyCache* cache = nullptr);

/// Steady-state characteristic y(u), z(u) over [u_min, u_max] at fixed q.
struct SweepPoint {
    double u = 0.0;
    double y = 0.0;          // [U]aq settler 9
    double z = 0.0;          // [U]aq settler 1 (raffinate)
    double u_og_out = 0.0;   // loaded-solvent uranium at stage 16
    double saturation = 0.0; // organic uranium / TBP capacity at stage 16
};

std::vector<SweepPoint> sweep_steady_curve(const PlantParams& params,
                                           const IntegratorOptions& opts, int n_points,
                                           double q);

} // namespace purex

#endif
