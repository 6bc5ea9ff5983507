#include "purex/chemistry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace purex {

namespace {

double checked(double v, const char* name) {
    if (v < kNegativeTol)
        throw std::domain_error(std::string("chemistry: negative ") + name);
    return std::max(v, 0.0);
}

} // namespace

double tbp_free(double U_star, double H_star, const PlantParams& params) {
    const double us = checked(U_star, "U_star");
    const double hs = checked(H_star, "H_star");
    const double no3 = 2.0 * us + hs;
    const double a = 2.0 * params.K_U * us * no3 * no3;
    const double b = 1.0 + params.K_H * hs * no3;
    const double c = params.TBP_total;
    // Rationalized positive root of a*t^2 + b*t - c = 0; collapses to c/b
    // when a -> 0.
    return 2.0 * c / (b + std::sqrt(b * b + 4.0 * a * c));
}

double equilibrium_u_og(double U_star, double H_star, const PlantParams& params) {
    const double us = checked(U_star, "U_star");
    const double hs = checked(H_star, "H_star");
    const double no3 = 2.0 * us + hs;
    const double t = tbp_free(us, hs, params);
    return params.K_U * us * no3 * no3 * t * t;
}

double equilibrium_h_og(double U_star, double H_star, const PlantParams& params) {
    const double us = checked(U_star, "U_star");
    const double hs = checked(H_star, "H_star");
    const double no3 = 2.0 * us + hs;
    const double t = tbp_free(us, hs, params);
    return params.K_H * hs * no3 * t;
}

std::pair<double, double> interface_equilibrium_residual(const MixerConcs& concs,
                                                         const InterfaceGuess& guess,
                                                         const PlantParams& params) {
    MixerConcs c;
    c.U_aq = checked(concs.U_aq, "U_aq");
    c.U_og = checked(concs.U_og, "U_og");
    c.H_aq = checked(concs.H_aq, "H_aq");
    c.H_og = checked(concs.H_og, "H_og");
    const double us = checked(guess.U_star, "U_star");
    const double hs = checked(guess.H_star, "H_star");

    const double g_u = interface_u_og(c, us) - equilibrium_u_og(us, hs, params);
    const double g_h = interface_h_og(c, hs) - equilibrium_h_og(us, hs, params);
    return {g_u, g_h};
}

} // namespace purex
