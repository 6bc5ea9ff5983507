#ifndef PUREX_CHEMISTRY_HPP
#define PUREX_CHEMISTRY_HPP

#include "purex/params.hpp"

#include <utility>

namespace purex {

/// Mixer-side bulk concentrations at one stage (mol/L).
struct MixerConcs {
    double U_aq = 0.0;
    double U_og = 0.0;
    double H_aq = 0.0;
    double H_og = 0.0;
};

/// Candidate interface equilibrium concentrations (mol/L).
struct InterfaceGuess {
    double U_star = 0.0;
    double H_star = 0.0;
};

/// Inputs may carry tiny negative roundoff; anything at or above this is
/// clamped to zero, anything below is a domain error.
inline constexpr double kNegativeTol = -1e-9;

/// Free (uncomplexed) TBP concentration at interface equilibrium, from the
/// closed-form positive root of the TBP balance:
///   TBP_total = TBP_free + 2*[U]og,i + [H]og,i
/// with both organic interface concentrations replaced by their equilibrium
/// expressions. Returns a value in (0, TBP_total].
double tbp_free(double U_star, double H_star, const PlantParams& params);

/// Equilibrium organic-phase concentrations implied by the aqueous
/// interface values (the right-hand sides the residuals compare against).
double equilibrium_u_og(double U_star, double H_star, const PlantParams& params);
double equilibrium_h_og(double U_star, double H_star, const PlantParams& params);

/// Organic interface concentrations from the equal-coefficient two-film
/// relations, given the mixer bulk concentrations.
inline double interface_u_og(const MixerConcs& c, double U_star) {
    return 0.5 * c.U_aq + c.U_og - 0.5 * U_star;
}
inline double interface_h_og(const MixerConcs& c, double H_star) {
    return 0.5 * c.H_aq + c.H_og - 0.5 * H_star;
}

/// Aqueous interface concentrations (film-average of bulk and equilibrium).
inline double interface_u_aq(const MixerConcs& c, double U_star) {
    return 0.5 * (c.U_aq + U_star);
}
inline double interface_h_aq(const MixerConcs& c, double H_star) {
    return 0.5 * (c.H_aq + H_star);
}

/// The per-stage algebraic residual pair (g_U, g_H): two-film organic
/// interface concentration minus its thermodynamic-equilibrium value.
/// Zero at the stage's interface equilibrium.
std::pair<double, double> interface_equilibrium_residual(const MixerConcs& concs,
                                                         const InterfaceGuess& guess,
                                                         const PlantParams& params);

} // namespace purex

#endif
