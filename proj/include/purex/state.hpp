#ifndef PUREX_STATE_HPP
#define PUREX_STATE_HPP

#include <Eigen/Core>

namespace purex {

inline constexpr int kStages = 16;
inline constexpr int kDiffStates = 128;
inline constexpr int kAlgStates = 32;

/// Species/phase/vessel blocks of the differential state vector, in layout
/// order. Each block holds 16 stage values; e.g. the controlled variable
/// y = [U]aq in settler 9 lives at idx(Block::UaqD, 9).
enum class Block : int {
    UaqM = 0, // uranium, aqueous, mixer
    UogM = 1, // uranium, organic, mixer
    UaqD = 2, // uranium, aqueous, settler
    UogD = 3, // uranium, organic, settler
    HaqM = 4, // acid, aqueous, mixer
    HogM = 5, // acid, organic, mixer
    HaqD = 6, // acid, aqueous, settler
    HogD = 7, // acid, organic, settler
};

/// Flat index of (block, stage) in the 128-vector; stage is 1-based.
constexpr int idx(Block b, int stage) {
    return static_cast<int>(b) * kStages + (stage - 1);
}

/// Index of the per-stage interface equilibrium concentrations in the
/// 32-vector of algebraic states: [U]*aq first, then [H]*aq.
constexpr int alg_idx_u(int stage) { return stage - 1; }
constexpr int alg_idx_h(int stage) { return kStages + stage - 1; }

/// Full cascade state: 128 differential concentrations plus the 32
/// interface equilibrium concentrations that close the algebraic loop.
struct PlantState {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(kDiffStates);
    Eigen::VectorXd x_alg = Eigen::VectorXd::Zero(kAlgStates);

    double at(Block b, int stage) const { return x[idx(b, stage)]; }
    double& at(Block b, int stage) { return x[idx(b, stage)]; }

    double u_star(int stage) const { return x_alg[alg_idx_u(stage)]; }
    double h_star(int stage) const { return x_alg[alg_idx_h(stage)]; }

    /// Controlled variable: aqueous uranium leaving the scrub-side settler 9.
    double y() const { return at(Block::UaqD, 9); }
    /// Constrained variable: aqueous uranium in the raffinate (settler 1).
    double z() const { return at(Block::UaqD, 1); }

    double min_concentration() const { return x.minCoeff(); }
};

} // namespace purex

#endif
