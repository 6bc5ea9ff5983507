#ifndef PUREX_PARAMS_HPP
#define PUREX_PARAMS_HPP

#include "purex/config.hpp"

#include <string>

namespace purex {

/// Physical and flowsheet constants for the 16-stage extraction-scrubbing
/// cascade.
///
/// Units throughout: time in hours, flows in L/h, volumes in L,
/// concentrations in mol/L. Mass-transfer coefficients are configured in
/// m/s together with the droplet diameter in m; transfer_rate_U/H() folds
/// them into a per-hour rate constant (3*k/d, converted s -> h).
struct PlantParams {
    int n_stages = 16;
    int feed_stage = 8; // 1-based, feed solution joins the aqueous inlet here

    // Chemistry
    double K_U = 5.0;  // uranium extraction equilibrium constant
    double K_H = 0.1;  // nitric acid extraction equilibrium constant
    double k_U = 1e-2; // uranium mass-transfer coefficient, m/s
    double k_H = 1e-2; // acid mass-transfer coefficient, m/s
    double d = 2e-3;   // droplet diameter, m
    double TBP_total = 1.1; // total TBP concentration in the organic phase, mol/L

    // Vessel volumes
    double V_mix_total = 30.0;  // total mixer volume per stage (both phases), L
    double V_settler_aq = 60.0; // settler aqueous volume per stage, L
    double V_settler_og = 60.0; // settler organic volume per stage, L

    // External streams
    double A_E = 50.0;    // scrubbing acid flow rate, L/h
    double H_aq_E = 1.0;  // scrubbing acid concentration, mol/L
    double U_aq_F = 1.0;  // feed uranium concentration, mol/L
    double H_aq_F = 3.0;  // feed acid concentration, mol/L

    // Inputs and bounds
    double u_min = 10.0;     // feed flow lower bound, L/h
    double u_max = 80.0;     // feed flow upper bound, L/h
    double du_max = 10.0;    // feed flow rate bound per control step, L/h
    double q_nominal = 100.0; // nominal fresh solvent flow, L/h
    double T = 0.5;          // control sampling time, h

    /// Interfacial transfer rate constant 3*k/d in 1/h.
    double transfer_rate_U() const { return 3.0 * k_U * 3600.0 / d; }
    double transfer_rate_H() const { return 3.0 * k_H * 3600.0 / d; }

    /// Throws std::invalid_argument when any invariant is broken
    /// (positivity, u_min < u_max, feed stage strictly interior).
    void validate() const;
};

/// Reads the `plant.*` keys of a config. Throws ConfigError on missing or
/// malformed keys and std::invalid_argument when the result is invalid.
PlantParams plant_params_from_config(const Config& cfg);

/// Operating targets shipped with the plant configuration (`target.*` keys).
/// All three are calibrated against the steady-state sweep of the nominal
/// flowsheet; see configs/nominal.cfg.
struct OperatingTargets {
    double y_set_nominal = 0.0;  // nominal set point for y = [U]aq settler 9, mol/L
    double y_set_critical = 0.0; // saturation-plateau set point, mol/L
    double z_tol = 0.0;          // raffinate uranium limit for z = [U]aq settler 1, mol/L
};

OperatingTargets targets_from_config(const Config& cfg);

} // namespace purex

#endif
