#ifndef PUREX_FLOWS_HPP
#define PUREX_FLOWS_HPP

#include "purex/params.hpp"
#include "purex/state.hpp"

#include <array>

namespace purex {

/// Resolved flow network for given inputs (u = feed flow A_F, q = fresh
/// solvent flow O_E). With no leakage the flow through a stage equals its
/// inlet flow, so a single A/O per stage suffices; the mixer phase volumes
/// follow from the perfect-mixing split A*W = O*V with V + W fixed.
struct StageFlows {
    std::array<double, kStages> A{};     // aqueous flow through stage n, L/h
    std::array<double, kStages> O{};     // organic flow through stage n, L/h
    std::array<double, kStages> V_mix{}; // aqueous mixer volume, L
    std::array<double, kStages> W_mix{}; // organic mixer volume, L
    double u = 0.0;
    double q = 0.0;

    double aq(int stage) const { return A[stage - 1]; }
    double og(int stage) const { return O[stage - 1]; }
    double v_mix(int stage) const { return V_mix[stage - 1]; }
    double w_mix(int stage) const { return W_mix[stage - 1]; }
};

/// Wires the countercurrent cascade: aqueous runs 16 -> 1 (scrub acid in at
/// 16, feed joins at the feed stage, raffinate out at 1), organic runs
/// 1 -> 16 (fresh solvent in at 1, loaded solvent out at 16).
/// Throws std::domain_error for non-positive u or q.
StageFlows wire_flows(const PlantParams& params, double u, double q);

/// Inlet concentrations of stage `stage` for the current state: interior
/// stages read the neighbouring settlers, the boundary stages read the
/// external streams, and the feed stage mixes feed solution into the
/// aqueous inlet flow-weighted.
struct StageInlets {
    double U_aq = 0.0;
    double U_og = 0.0;
    double H_aq = 0.0;
    double H_og = 0.0;
};

StageInlets stage_inlets(const Eigen::VectorXd& x, const StageFlows& flows,
                         const PlantParams& params, int stage);

} // namespace purex

#endif
