#ifndef PUREX_MODEL_HPP
#define PUREX_MODEL_HPP

#include "purex/flows.hpp"
#include "purex/params.hpp"
#include "purex/state.hpp"

namespace purex {

/// Time derivatives of all 128 concentrations (mol/L/h).
///
/// Mixer balances carry inlet, outlet and the interfacial transfer term
/// Phi = (3*k*V_mix/d)*(c_aq - c*), with -Phi on the aqueous side and +Phi
/// on the organic side; settler balances are pure flow-through. `x_alg`
/// must hold the interface equilibrium solution for `x`.
/// Throws std::domain_error when a mixer phase volume is zero.
Eigen::VectorXd mass_balance_rhs(const Eigen::VectorXd& x, const Eigen::VectorXd& x_alg,
                                 const StageFlows& flows, const PlantParams& params);

/// Net boundary fluxes (mol/h) for each species: everything entering via
/// feed/scrub/fresh-solvent minus everything leaving via raffinate and
/// loaded solvent. The interior transport and transfer terms telescope, so
/// the volume-weighted sum of mass_balance_rhs equals in - out exactly.
struct BoundaryFluxes {
    double U_in = 0.0;
    double U_out = 0.0;
    double H_in = 0.0;
    double H_out = 0.0;

    double net_U() const { return U_in - U_out; }
    double net_H() const { return H_in - H_out; }

    BoundaryFluxes& operator+=(const BoundaryFluxes& o) {
        U_in += o.U_in;
        U_out += o.U_out;
        H_in += o.H_in;
        H_out += o.H_out;
        return *this;
    }
    BoundaryFluxes scaled(double s) const { return {U_in * s, U_out * s, H_in * s, H_out * s}; }
};

BoundaryFluxes boundary_fluxes(const Eigen::VectorXd& x, const StageFlows& flows,
                               const PlantParams& params);

/// Total moles of a species currently held in all mixers and settlers,
/// using the phase volumes implied by `flows`.
double inventory_U(const Eigen::VectorXd& x, const StageFlows& flows, const PlantParams& params);
double inventory_H(const Eigen::VectorXd& x, const StageFlows& flows, const PlantParams& params);

} // namespace purex

#endif
