#include "purex/integrator.hpp"

#include "purex/chemistry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>

namespace purex {

IntegratorOptions integrator_options_from_config(const Config& cfg) {
    IntegratorOptions o;
    o.dt_internal = cfg.get_double("integrator.dt_internal", o.dt_internal);
    o.newton_tol = cfg.get_double("integrator.newton_tol", o.newton_tol);
    o.newton_max_iter = cfg.get_int("integrator.newton_max_iter", o.newton_max_iter);
    o.alg_tol = cfg.get_double("integrator.alg_tol", o.alg_tol);
    o.alg_max_iter = cfg.get_int("integrator.alg_max_iter", o.alg_max_iter);
    const std::string m = cfg.get_string("integrator.method", "implicit-euler");
    if (m == "implicit-euler")
        o.method = StepMethod::ImplicitEuler;
    else if (m == "bdf2")
        o.method = StepMethod::Bdf2;
    else
        throw ConfigError("integrator.method: unknown method '" + m + "'");
    if (!(o.dt_internal > 0.0) || !(o.newton_tol > 0.0))
        throw ConfigError("integrator options: dt_internal and newton_tol must be > 0");
    return o;
}

namespace {

MixerConcs mixer_concs(const Eigen::VectorXd& x, int stage) {
    // Integration transients may carry roundoff-level negatives; the
    // chemistry reads them as zero.
    MixerConcs c;
    c.U_aq = std::max(x[idx(Block::UaqM, stage)], 0.0);
    c.U_og = std::max(x[idx(Block::UogM, stage)], 0.0);
    c.H_aq = std::max(x[idx(Block::HaqM, stage)], 0.0);
    c.H_og = std::max(x[idx(Block::HogM, stage)], 0.0);
    return c;
}

double res_norm(const std::pair<double, double>& g) {
    return std::max(std::abs(g.first), std::abs(g.second));
}

// Root of g_U in U_star for fixed H_star by bisection; g_U is positive at 0
// and negative at the cap, where the two-film organic concentration hits 0.
double bisect_u_star(const MixerConcs& c, double h_star, double u_cap, const PlantParams& p) {
    double lo = 0.0, hi = u_cap;
    auto g = [&](double us) {
        return interface_u_og(c, us) - equilibrium_u_og(us, h_star, p);
    };
    if (g(hi) >= 0.0) return hi;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-16 * std::max(1.0, u_cap)) break;
    }
    return 0.5 * (lo + hi);
}

// Nested-bisection fallback for one stage: outer loop on H_star, inner on
// U_star. Slow but unconditionally convergent on the physical box.
std::pair<double, double> stage_equilibrium_bisect(const MixerConcs& c, const PlantParams& p) {
    const double u_cap = std::max(0.0, c.U_aq + 2.0 * c.U_og);
    const double h_cap = std::max(0.0, c.H_aq + 2.0 * c.H_og);
    if (h_cap <= 0.0) {
        double us = (u_cap > 0.0) ? bisect_u_star(c, 0.0, u_cap, p) : 0.0;
        return {us, 0.0};
    }
    auto gh_at = [&](double hs) {
        double us = (u_cap > 0.0) ? bisect_u_star(c, hs, u_cap, p) : 0.0;
        return interface_h_og(c, hs) - equilibrium_h_og(us, hs, p);
    };
    double lo = 0.0, hi = h_cap;
    if (gh_at(hi) >= 0.0) {
        double us = (u_cap > 0.0) ? bisect_u_star(c, hi, u_cap, p) : 0.0;
        return {us, hi};
    }
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (gh_at(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-16 * std::max(1.0, h_cap)) break;
    }
    double hs = 0.5 * (lo + hi);
    double us = (u_cap > 0.0) ? bisect_u_star(c, hs, u_cap, p) : 0.0;
    return {us, hs};
}

// Damped, box-projected 2x2 Newton for one stage's interface equilibrium.
// Returns (U_star, H_star); throws IntegrationError on non-convergence of
// both Newton and the bisection fallback.
std::pair<double, double> stage_equilibrium(const MixerConcs& c, const PlantParams& p,
                                            double tol, int max_iter, double us0, double hs0,
                                            int stage) {
    const double u_cap = std::max(0.0, c.U_aq + 2.0 * c.U_og);
    const double h_cap = std::max(0.0, c.H_aq + 2.0 * c.H_og);
    if (u_cap <= 0.0 && h_cap <= 0.0) return {0.0, 0.0};

    double us = std::clamp(us0, 0.0, u_cap);
    double hs = std::clamp(hs0, 0.0, h_cap);
    if (us == 0.0 && u_cap > 0.0) us = std::min(c.U_aq, u_cap);
    if (hs == 0.0 && h_cap > 0.0) hs = std::min(c.H_aq, h_cap);

    auto residual = [&](double a, double b) {
        return interface_equilibrium_residual(c, {a, b}, p);
    };

    auto g = residual(us, hs);
    double gn = res_norm(g);
    for (int it = 0; it < max_iter && gn >= tol; ++it) {
        const double h_u = std::max(1e-13, 1e-7 * std::max(u_cap, 1.0));
        const double h_h = std::max(1e-13, 1e-7 * std::max(h_cap, 1.0));

        // Forward-difference 2x2 Jacobian with probes clamped into the box.
        double u_probe = std::clamp(us + h_u, 0.0, u_cap);
        if (u_probe == us) u_probe = std::clamp(us - h_u, 0.0, u_cap);
        double h_probe = std::clamp(hs + h_h, 0.0, h_cap);
        if (h_probe == hs) h_probe = std::clamp(hs - h_h, 0.0, h_cap);
        const double du = u_probe - us;
        const double dh = h_probe - hs;
        auto gu = (du != 0.0) ? residual(u_probe, hs) : g;
        auto gh = (dh != 0.0) ? residual(us, h_probe) : g;

        double j11 = (du != 0.0) ? (gu.first - g.first) / du : 1.0;
        double j21 = (du != 0.0) ? (gu.second - g.second) / du : 0.0;
        double j12 = (dh != 0.0) ? (gh.first - g.first) / dh : 0.0;
        double j22 = (dh != 0.0) ? (gh.second - g.second) / dh : 1.0;

        const double det = j11 * j22 - j12 * j21;
        if (!std::isfinite(det) || std::abs(det) < 1e-300) break;
        double step_u = (-g.first * j22 + g.second * j12) / det;
        double step_h = (-g.second * j11 + g.first * j21) / det;

        double t = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 30; ++ls) {
            const double us_new = std::clamp(us + t * step_u, 0.0, u_cap);
            const double hs_new = std::clamp(hs + t * step_h, 0.0, h_cap);
            auto g_new = residual(us_new, hs_new);
            const double gn_new = res_norm(g_new);
            if (gn_new < gn || gn_new < tol) {
                us = us_new;
                hs = hs_new;
                g = g_new;
                gn = gn_new;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;
    }

    if (gn < tol) return {us, hs};

    // Fallback: nested bisection, then report honestly if even that fails.
    auto [us_b, hs_b] = stage_equilibrium_bisect(c, p);
    auto g_b = residual(us_b, hs_b);
    if (res_norm(g_b) < std::max(tol, 1e-10))
        return {us_b, hs_b};
    throw IntegrationError("interface equilibrium did not converge at stage " +
                               std::to_string(stage),
                           stage, res_norm(g_b));
}

// Cascade model with the algebraic variables eliminated per evaluation.
class EliminatedModel {
public:
    EliminatedModel(const PlantParams& params, double u, double q)
        : params_(params), flows_(wire_flows(params, u, q)) {}

    const StageFlows& flows() const { return flows_; }

    // alg_io: warm start in, converged interface solution out.
    Eigen::VectorXd rhs(const Eigen::VectorXd& x, Eigen::VectorXd& alg_io,
                        const IntegratorOptions& opts) const {
        solve_alg_inplace(x, alg_io, opts);
        return mass_balance_rhs(x, alg_io, flows_, params_);
    }

    void solve_alg_inplace(const Eigen::VectorXd& x, Eigen::VectorXd& alg_io,
                           const IntegratorOptions& opts) const {
        for (int stage = 1; stage <= params_.n_stages; ++stage) {
            const MixerConcs c = mixer_concs(x, stage);
            auto [us, hs] =
                stage_equilibrium(c, params_, opts.alg_tol, opts.alg_max_iter,
                                  alg_io[alg_idx_u(stage)], alg_io[alg_idx_h(stage)], stage);
            alg_io[alg_idx_u(stage)] = us;
            alg_io[alg_idx_h(stage)] = hs;
        }
    }

    // Finite-difference Jacobian of rhs(x, alg(x)). Stage coupling only
    // reaches nearest neighbours, so stages three apart are perturbed
    // together: 3 colors x 8 state slots = 24 evaluations.
    Eigen::MatrixXd jacobian(const Eigen::VectorXd& x, const Eigen::VectorXd& alg_base,
                             const Eigen::VectorXd& f_base, const IntegratorOptions& opts) const {
        Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(kDiffStates, kDiffStates);
        for (int color = 0; color < 3; ++color) {
            for (int slot = 0; slot < 8; ++slot) {
                Eigen::VectorXd xp = x;
                std::array<double, kStages> hcol{};
                for (int stage = 1 + color; stage <= params_.n_stages; stage += 3) {
                    const int col = slot * kStages + (stage - 1);
                    const double h = 1e-6 * std::max(std::abs(x[col]), 1e-2);
                    hcol[stage - 1] = h;
                    xp[col] += h;
                }
                Eigen::VectorXd alg = alg_base;
                const Eigen::VectorXd fp = rhs(xp, alg, opts);
                for (int stage = 1 + color; stage <= params_.n_stages; stage += 3) {
                    const int col = slot * kStages + (stage - 1);
                    const double h = hcol[stage - 1];
                    const int lo = std::max(1, stage - 1);
                    const int hi = std::min(params_.n_stages, stage + 1);
                    for (int rs = lo; rs <= hi; ++rs) {
                        for (int rslot = 0; rslot < 8; ++rslot) {
                            const int row = rslot * kStages + (rs - 1);
                            jac(row, col) = (fp[row] - f_base[row]) / h;
                        }
                    }
                }
            }
        }
        return jac;
    }

private:
    const PlantParams& params_;
    StageFlows flows_;
};

} // namespace

Eigen::VectorXd solve_algebraic(const Eigen::VectorXd& x, const PlantParams& params,
                                const IntegratorOptions& opts,
                                const Eigen::VectorXd* warm_start) {
    if (x.minCoeff() < kNegativeTol)
        throw std::domain_error("solve_algebraic: negative concentrations in state");
    Eigen::VectorXd alg =
        (warm_start != nullptr) ? *warm_start : Eigen::VectorXd::Zero(kAlgStates);
    for (int stage = 1; stage <= params.n_stages; ++stage) {
        const MixerConcs c = mixer_concs(x, stage);
        auto [us, hs] = stage_equilibrium(c, params, opts.alg_tol, opts.alg_max_iter,
                                          alg[alg_idx_u(stage)], alg[alg_idx_h(stage)], stage);
        alg[alg_idx_u(stage)] = us;
        alg[alg_idx_h(stage)] = hs;
    }
    return alg;
}

namespace {

// One implicit sub-step: solves X - x_ref - beta*h*f(X) = 0 by modified
// Newton, reusing the factored Jacobian in `lu` until convergence stalls.
struct ImplicitWorkspace {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    bool lu_valid = false;
    int newton_iters = 0;
    int jacobian_builds = 0;
};

bool implicit_solve(const EliminatedModel& model, const Eigen::VectorXd& x_ref,
                    const Eigen::VectorXd& x_pred, double beta_h, const IntegratorOptions& opts,
                    ImplicitWorkspace& ws, Eigen::VectorXd& x_out, Eigen::VectorXd& alg_io) {
    Eigen::VectorXd x = x_pred;
    Eigen::VectorXd alg = alg_io;
    bool rebuilt_this_solve = false;

    auto refresh_jacobian = [&](const Eigen::VectorXd& at, const Eigen::VectorXd& alg_at,
                                const Eigen::VectorXd& f_at) {
        const Eigen::MatrixXd jac = model.jacobian(at, alg_at, f_at, opts);
        ws.lu.compute(Eigen::MatrixXd(Eigen::MatrixXd::Identity(kDiffStates, kDiffStates) -
                                      beta_h * jac));
        ws.lu_valid = true;
        ++ws.jacobian_builds;
        rebuilt_this_solve = true;
    };

    Eigen::VectorXd f = model.rhs(x, alg, opts);
    if (!ws.lu_valid) refresh_jacobian(x, alg, f);

    double prev_norm = std::numeric_limits<double>::infinity();
    for (int it = 0; it < opts.newton_max_iter; ++it) {
        ++ws.newton_iters;
        const Eigen::VectorXd residual = x - x_ref - beta_h * f;
        const double rn = residual.lpNorm<Eigen::Infinity>();
        if (rn < opts.newton_tol) {
            x_out = x;
            alg_io = alg;
            return true;
        }
        // Slow or non-contracting iteration: rebuild the Jacobian once at
        // the current iterate before giving up on this step size.
        if (rn > 0.5 * prev_norm && it > 0) {
            if (rebuilt_this_solve) return false;
            refresh_jacobian(x, alg, f);
        }
        prev_norm = rn;
        x -= ws.lu.solve(residual);
        if (!x.allFinite()) return false;
        f = model.rhs(x, alg, opts);
    }
    return false;
}

} // namespace

StepResult step(const PlantState& state, double u, double q, double T,
                const IntegratorOptions& opts, const PlantParams& params) {
    if (!(T > 0.0)) throw std::domain_error("step: T must be > 0");
    const EliminatedModel model(params, u, q);

    StepResult out;
    out.state.x = state.x;
    out.state.x_alg = state.x_alg;
    model.solve_alg_inplace(out.state.x, out.state.x_alg, opts);

    ImplicitWorkspace ws;
    const double h_floor = opts.dt_internal / 64.0;
    double h = std::min(opts.dt_internal, T);
    double remaining = T;

    Eigen::VectorXd x_prev;       // state before the last accepted sub-step
    double h_prev = -1.0;         // its size, for BDF2 consistency
    const bool bdf2 = opts.method == StepMethod::Bdf2;

    while (remaining > 1e-12 * T) {
        const double h_try = std::min(h, remaining);
        // BDF2 needs an equal-size history step; fall back to implicit
        // Euler on the first sub-step and after any resize.
        const bool use_bdf2 = bdf2 && h_prev == h_try && x_prev.size() == kDiffStates;

        Eigen::VectorXd x_ref, x_next;
        double beta_h;
        if (use_bdf2) {
            x_ref = (4.0 * out.state.x - x_prev) / 3.0;
            beta_h = 2.0 * h_try / 3.0;
        } else {
            x_ref = out.state.x;
            beta_h = h_try;
        }

        Eigen::VectorXd alg = out.state.x_alg;
        const bool ok =
            implicit_solve(model, x_ref, out.state.x, beta_h, opts, ws, x_next, alg);
        if (!ok) {
            ws.lu_valid = false;
            ++out.step_halvings;
            h *= 0.5;
            if (h < h_floor)
                throw IntegrationError("implicit step failed below the sub-step floor", -1,
                                       0.0);
            h_prev = -1.0;
            continue;
        }

        out.flux_integral += boundary_fluxes(x_next, model.flows(), params).scaled(h_try);
        x_prev = out.state.x;
        h_prev = h_try;
        out.state.x = x_next;
        out.state.x_alg = alg;
        remaining -= h_try;
        ++out.substeps;
        if (h < opts.dt_internal) h = std::min(opts.dt_internal, h * 2.0);
    }

    out.newton_iters = ws.newton_iters;
    out.jacobian_builds = ws.jacobian_builds;
    return out;
}

namespace {

constexpr double kSteadyTol = 1e-9;

// Pseudo-transient continuation: march with growing implicit steps until
// the eliminated right-hand side is small.
bool pseudo_transient(const EliminatedModel& model, const IntegratorOptions& opts,
                      Eigen::VectorXd& x, Eigen::VectorXd& alg, double target_norm,
                      double max_time) {
    IntegratorOptions local = opts;
    double t = 0.0;
    double dt = 0.5;
    PlantState cur;
    cur.x = x;
    cur.x_alg = alg;
    while (t < max_time) {
        local.dt_internal = dt;
        local.method = StepMethod::ImplicitEuler;
        PlantState next;
        next.x = cur.x;
        next.x_alg = cur.x_alg;
        ImplicitWorkspace ws;
        Eigen::VectorXd x_next;
        Eigen::VectorXd a = cur.x_alg;
        if (implicit_solve(model, cur.x, cur.x, dt, local, ws, x_next, a)) {
            cur.x = x_next;
            cur.x_alg = a;
            t += dt;
            dt = std::min(dt * 2.0, 512.0);
            Eigen::VectorXd f = model.rhs(cur.x, cur.x_alg, opts);
            if (f.lpNorm<Eigen::Infinity>() < target_norm) {
                x = cur.x;
                alg = cur.x_alg;
                return true;
            }
        } else {
            dt *= 0.25;
            if (dt < 1e-6) return false;
        }
    }
    x = cur.x;
    alg = cur.x_alg;
    return false;
}

bool newton_polish(const EliminatedModel& model, const IntegratorOptions& opts,
                   Eigen::VectorXd& x, Eigen::VectorXd& alg, int max_iter) {
    Eigen::VectorXd f = model.rhs(x, alg, opts);
    double fn = f.lpNorm<Eigen::Infinity>();
    for (int it = 0; it < max_iter && fn >= kSteadyTol; ++it) {
        const Eigen::MatrixXd jac = model.jacobian(x, alg, f, opts);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
        const Eigen::VectorXd delta = lu.solve(-f);
        if (!delta.allFinite()) return false;

        double t = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 25; ++ls) {
            Eigen::VectorXd x_new = x + t * delta;
            Eigen::VectorXd alg_new = alg;
            Eigen::VectorXd f_new;
            bool eval_ok = true;
            try {
                f_new = model.rhs(x_new, alg_new, opts);
            } catch (const IntegrationError&) {
                eval_ok = false;
            }
            if (eval_ok) {
                const double fn_new = f_new.lpNorm<Eigen::Infinity>();
                if (fn_new < fn * (1.0 - 1e-4 * t) || fn_new < kSteadyTol) {
                    x = x_new;
                    alg = alg_new;
                    f = f_new;
                    fn = fn_new;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if (!accepted) return false;
    }
    return fn < kSteadyTol;
}

} // namespace

PlantState steady_state(double u, double q, const PlantParams& params,
                        const IntegratorOptions& opts, const PlantState* guess) {
    const EliminatedModel model(params, u, q);

    PlantState s;
    if (guess != nullptr) {
        s.x = guess->x;
        s.x_alg = guess->x_alg;
    }
    model.solve_alg_inplace(s.x, s.x_alg, opts);

    // Warm guesses usually land directly in Newton's basin.
    if (guess != nullptr && newton_polish(model, opts, s.x, s.x_alg, 60)) {
        s.x = s.x.cwiseMax(0.0);
        return s;
    }

    // Cold start or failed polish: pseudo-transient continuation first.
    if (!pseudo_transient(model, opts, s.x, s.x_alg, 1e-6, 1e5) ||
        !newton_polish(model, opts, s.x, s.x_alg, 60)) {
        // Last resort: keep integrating until the derivative flatlines.
        if (!pseudo_transient(model, opts, s.x, s.x_alg, kSteadyTol, 1e6))
            throw IntegrationError("steady_state: no convergence for u=" + std::to_string(u) +
                                       " q=" + std::to_string(q),
                                   -1, 0.0);
    }
    s.x = s.x.cwiseMax(0.0);
    model.solve_alg_inplace(s.x, s.x_alg, opts);
    return s;
}

double steady_y(double u, double q, const PlantParams& params, const IntegratorOptions& opts,
                const PlantState* guess) {
    return steady_state(u, q, params, opts, guess).y();
}

double solve_u_set(double y_set, double q_hat, const PlantParams& params,
                   const IntegratorOptions& opts, SteadyCache* cache) {
    if (!(y_set > 0.0)) throw std::domain_error("solve_u_set: y_set must be > 0");

    PlantState* warm = (cache != nullptr && cache->valid && cache->q == q_hat)
                           ? &cache->state
                           : nullptr;

    auto eval = [&](double u, const PlantState* g) {
        PlantState s = steady_state(u, q_hat, params, opts, g);
        return s;
    };

    PlantState s_lo = eval(params.u_min, warm);
    PlantState s_hi = eval(params.u_max, &s_lo);
    const double y_lo = s_lo.y();
    const double y_hi = s_hi.y();
    const double tol = 1e-6 * y_set;

    auto commit = [&](double u, const PlantState& s) {
        if (cache != nullptr) {
            cache->valid = true;
            cache->u = u;
            cache->q = q_hat;
            cache->state = s;
        }
        return u;
    };

    if (y_set < y_lo - tol)
        throw InfeasibleTargetError("solve_u_set: y_set below achievable range", params.u_min,
                                    y_lo);
    if (y_set > y_hi + tol)
        throw InfeasibleTargetError("solve_u_set: y_set above achievable range", params.u_max,
                                    y_hi);
    if (std::abs(y_lo - y_set) <= tol) return commit(params.u_min, s_lo);
    if (std::abs(y_hi - y_set) <= tol) return commit(params.u_max, s_hi);

    double u_lo = params.u_min, u_hi = params.u_max;
    double f_lo = y_lo - y_set, f_hi = y_hi - y_set;
    PlantState s_last = s_hi;
    for (int it = 0; it < 80; ++it) {
        // Secant proposal clipped into the bracket, midpoint fallback.
        double u_mid = u_lo - f_lo * (u_hi - u_lo) / (f_hi - f_lo);
        const double lo_guard = u_lo + 0.05 * (u_hi - u_lo);
        const double hi_guard = u_hi - 0.05 * (u_hi - u_lo);
        if (!(u_mid > lo_guard && u_mid < hi_guard)) u_mid = 0.5 * (u_lo + u_hi);

        PlantState s_mid = eval(u_mid, &s_last);
        s_last = s_mid;
        const double f_mid = s_mid.y() - y_set;
        if (std::abs(f_mid) <= tol) return commit(u_mid, s_mid);
        if (f_mid < 0.0) {
            u_lo = u_mid;
            f_lo = f_mid;
        } else {
            u_hi = u_mid;
            f_hi = f_mid;
        }
        if (u_hi - u_lo < 1e-12 * params.u_max) return commit(0.5 * (u_lo + u_hi), s_mid);
    }
    throw IntegrationError("solve_u_set: root finding did not converge", -1, 0.0);
}

std::vector<SweepPoint> sweep_steady_curve(const PlantParams& params,
                                           const IntegratorOptions& opts, int n_points,
                                           double q) {
    if (n_points < 2) throw std::domain_error("sweep_steady_curve: need at least 2 points");
    std::vector<SweepPoint> out;
    out.reserve(n_points);
    PlantState warm;
    bool have_warm = false;
    for (int i = 0; i < n_points; ++i) {
        const double u =
            params.u_min + (params.u_max - params.u_min) * double(i) / double(n_points - 1);
        PlantState s = steady_state(u, q, params, opts, have_warm ? &warm : nullptr);
        warm = s;
        have_warm = true;
        SweepPoint pt;
        pt.u = u;
        pt.y = s.y();
        pt.z = s.z();
        pt.u_og_out = s.at(Block::UogD, params.n_stages);
        pt.saturation = pt.u_og_out / (0.5 * params.TBP_total);
        out.push_back(pt);
    }
    return out;
}

} // namespace purex
