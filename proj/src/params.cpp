#include "purex/params.hpp"

#include <stdexcept>
#include <string>

namespace purex {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0))
        throw std::invalid_argument(std::string("PlantParams: ") + name + " must be > 0");
}

} // namespace

void PlantParams::validate() const {
    if (n_stages != 16)
        throw std::invalid_argument("PlantParams: n_stages is fixed at 16");
    if (feed_stage <= 1 || feed_stage >= n_stages)
        throw std::invalid_argument("PlantParams: feed_stage must be strictly inside 1..n_stages");
    require_positive(K_U, "K_U");
    require_positive(K_H, "K_H");
    require_positive(k_U, "k_U");
    require_positive(k_H, "k_H");
    require_positive(d, "d");
    require_positive(TBP_total, "TBP_total");
    require_positive(V_mix_total, "V_mix_total");
    require_positive(V_settler_aq, "V_settler_aq");
    require_positive(V_settler_og, "V_settler_og");
    require_positive(A_E, "A_E");
    require_positive(H_aq_E, "H_aq_E");
    require_positive(H_aq_F, "H_aq_F");
    if (U_aq_F < 0.0)
        throw std::invalid_argument("PlantParams: U_aq_F must be >= 0");
    require_positive(u_min, "u_min");
    require_positive(u_max, "u_max");
    if (!(u_min < u_max))
        throw std::invalid_argument("PlantParams: u_min must be < u_max");
    require_positive(du_max, "du_max");
    require_positive(q_nominal, "q_nominal");
    require_positive(T, "T");
}

PlantParams plant_params_from_config(const Config& cfg) {
    PlantParams p;
    p.n_stages = cfg.get_int("plant.n_stages", p.n_stages);
    p.feed_stage = cfg.get_int("plant.feed_stage", p.feed_stage);
    p.K_U = cfg.get_double("plant.K_U");
    p.K_H = cfg.get_double("plant.K_H");
    p.k_U = cfg.get_double("plant.k_U");
    p.k_H = cfg.get_double("plant.k_H");
    p.d = cfg.get_double("plant.droplet_d");
    p.TBP_total = cfg.get_double("plant.TBP_total");
    p.V_mix_total = cfg.get_double("plant.V_mix_total");
    p.V_settler_aq = cfg.get_double("plant.V_settler_aq");
    p.V_settler_og = cfg.get_double("plant.V_settler_og");
    p.A_E = cfg.get_double("plant.A_E");
    p.H_aq_E = cfg.get_double("plant.H_aq_E");
    p.U_aq_F = cfg.get_double("plant.U_aq_F");
    p.H_aq_F = cfg.get_double("plant.H_aq_F");
    p.u_min = cfg.get_double("plant.u_min");
    p.u_max = cfg.get_double("plant.u_max");
    p.du_max = cfg.get_double("plant.du_max");
    p.q_nominal = cfg.get_double("plant.q_nominal");
    p.T = cfg.get_double("plant.T");
    p.validate();
    return p;
}

OperatingTargets targets_from_config(const Config& cfg) {
    OperatingTargets t;
    t.y_set_nominal = cfg.get_double("target.y_set_nominal");
    t.y_set_critical = cfg.get_double("target.y_set_critical");
    t.z_tol = cfg.get_double("target.z_tol");
    if (!(t.y_set_nominal > 0.0) || !(t.y_set_critical > 0.0) || !(t.z_tol > 0.0))
        throw std::invalid_argument("OperatingTargets: all targets must be > 0");
    return t;
}

} // namespace purex
