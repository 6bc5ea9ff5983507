#include "purex/model.hpp"

#include <stdexcept>

namespace purex {

Eigen::VectorXd mass_balance_rhs(const Eigen::VectorXd& x, const Eigen::VectorXd& x_alg,
                                 const StageFlows& flows, const PlantParams& params) {
    Eigen::VectorXd dx(kDiffStates);

    const double rate_u = params.transfer_rate_U(); // 3*k_U/d, 1/h
    const double rate_h = params.transfer_rate_H();

    for (int stage = 1; stage <= params.n_stages; ++stage) {
        const double A = flows.aq(stage);
        const double O = flows.og(stage);
        const double Vm = flows.v_mix(stage);
        const double Wm = flows.w_mix(stage);
        if (!(Vm > 0.0) || !(Wm > 0.0))
            throw std::domain_error("mass_balance_rhs: zero mixer phase volume");

        const StageInlets in = stage_inlets(x, flows, params, stage);

        const double u_aq_m = x[idx(Block::UaqM, stage)];
        const double u_og_m = x[idx(Block::UogM, stage)];
        const double h_aq_m = x[idx(Block::HaqM, stage)];
        const double h_og_m = x[idx(Block::HogM, stage)];

        const double phi_u = rate_u * Vm * (u_aq_m - x_alg[alg_idx_u(stage)]);
        const double phi_h = rate_h * Vm * (h_aq_m - x_alg[alg_idx_h(stage)]);

        // Mixers
        dx[idx(Block::UaqM, stage)] = (A * in.U_aq - A * u_aq_m - phi_u) / Vm;
        dx[idx(Block::UogM, stage)] = (O * in.U_og - O * u_og_m + phi_u) / Wm;
        dx[idx(Block::HaqM, stage)] = (A * in.H_aq - A * h_aq_m - phi_h) / Vm;
        dx[idx(Block::HogM, stage)] = (O * in.H_og - O * h_og_m + phi_h) / Wm;

        // Settlers: flow-through from the same stage's mixer.
        dx[idx(Block::UaqD, stage)] =
            A * (u_aq_m - x[idx(Block::UaqD, stage)]) / params.V_settler_aq;
        dx[idx(Block::UogD, stage)] =
            O * (u_og_m - x[idx(Block::UogD, stage)]) / params.V_settler_og;
        dx[idx(Block::HaqD, stage)] =
            A * (h_aq_m - x[idx(Block::HaqD, stage)]) / params.V_settler_aq;
        dx[idx(Block::HogD, stage)] =
            O * (h_og_m - x[idx(Block::HogD, stage)]) / params.V_settler_og;
    }
    return dx;
}

BoundaryFluxes boundary_fluxes(const Eigen::VectorXd& x, const StageFlows& flows,
                               const PlantParams& params) {
    BoundaryFluxes f;
    const double A_raff = flows.aq(1);       // raffinate leaves stage 1 aqueous
    const double O_out = flows.og(params.n_stages); // loaded solvent leaves stage 16

    f.U_in = flows.u * params.U_aq_F;
    f.H_in = flows.u * params.H_aq_F + params.A_E * params.H_aq_E;

    f.U_out = A_raff * x[idx(Block::UaqD, 1)] + O_out * x[idx(Block::UogD, params.n_stages)];
    f.H_out = A_raff * x[idx(Block::HaqD, 1)] + O_out * x[idx(Block::HogD, params.n_stages)];
    return f;
}

namespace {

double inventory(const Eigen::VectorXd& x, const StageFlows& flows, const PlantParams& params,
                 Block aq_m, Block og_m, Block aq_d, Block og_d) {
    double total = 0.0;
    for (int stage = 1; stage <= params.n_stages; ++stage) {
        total += x[idx(aq_m, stage)] * flows.v_mix(stage);
        total += x[idx(og_m, stage)] * flows.w_mix(stage);
        total += x[idx(aq_d, stage)] * params.V_settler_aq;
        total += x[idx(og_d, stage)] * params.V_settler_og;
    }
    return total;
}

} // namespace

double inventory_U(const Eigen::VectorXd& x, const StageFlows& flows, const PlantParams& params) {
    return inventory(x, flows, params, Block::UaqM, Block::UogM, Block::UaqD, Block::UogD);
}

double inventory_H(const Eigen::VectorXd& x, const StageFlows& flows, const PlantParams& params) {
    return inventory(x, flows, params, Block::HaqM, Block::HogM, Block::HaqD, Block::HogD);
}

} // namespace purex
