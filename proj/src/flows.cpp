#include "purex/flows.hpp"

#include <stdexcept>

namespace purex {

StageFlows wire_flows(const PlantParams& params, double u, double q) {
    if (!(u > 0.0) || !(q > 0.0))
        throw std::domain_error("wire_flows: flows must be strictly positive");

    StageFlows f;
    f.u = u;
    f.q = q;
    for (int stage = 1; stage <= params.n_stages; ++stage) {
        // Scrub acid alone above the feed stage, feed added at and below it.
        const double a = (stage <= params.feed_stage) ? params.A_E + u : params.A_E;
        const double o = q;
        f.A[stage - 1] = a;
        f.O[stage - 1] = o;
        // Perfect mixing: A*W = O*V with V + W = V_mix_total.
        f.V_mix[stage - 1] = params.V_mix_total * a / (a + o);
        f.W_mix[stage - 1] = params.V_mix_total * o / (a + o);
    }
    return f;
}

StageInlets stage_inlets(const Eigen::VectorXd& x, const StageFlows& flows,
                         const PlantParams& params, int stage) {
    StageInlets in;

    // Aqueous inlet: settler of stage+1; scrub acid at stage 16; the
    // flow-weighted mixture of feed solution and the upstream settler at
    // the feed stage.
    if (stage == params.n_stages) {
        in.U_aq = 0.0;
        in.H_aq = params.H_aq_E;
    } else if (stage == params.feed_stage) {
        const double a_up = flows.aq(stage + 1);
        const double a_in = flows.u + a_up;
        in.U_aq = (flows.u * params.U_aq_F + a_up * x[idx(Block::UaqD, stage + 1)]) / a_in;
        in.H_aq = (flows.u * params.H_aq_F + a_up * x[idx(Block::HaqD, stage + 1)]) / a_in;
    } else {
        in.U_aq = x[idx(Block::UaqD, stage + 1)];
        in.H_aq = x[idx(Block::HaqD, stage + 1)];
    }

    // Organic inlet: settler of stage-1; fresh solvent at stage 1.
    if (stage == 1) {
        in.U_og = 0.0;
        in.H_og = 0.0;
    } else {
        in.U_og = x[idx(Block::UogD, stage - 1)];
        in.H_og = x[idx(Block::HogD, stage - 1)];
    }
    return in;
}

} // namespace purex
