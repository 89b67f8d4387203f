#include "gridfdi/cases.hpp"

namespace gridfdi::net {

// WSCC 3-machine 9-bus (Anderson-Fouad network data, classical machine
// constants). The default variant keeps the published load table verbatim
// (L3 = 100 MW / 350 MVAr); the base-case solution then has |V8| ~ 0.66 pu,
// so the voltage band is 0.6..1.2 to keep the base case inside its own
// bounds. The canonical variant uses 35 MVAr and the usual 0.9..1.1 band.

namespace {

constexpr std::string_view kWscc9 = R"json({
  "base_mva": 100.0,
  "buses": [
    {"id": 1, "kind": "slack", "v_min": 0.6, "v_max": 1.2, "name": "Bus 1 (G1)"},
    {"id": 2, "kind": "pv",    "v_min": 0.6, "v_max": 1.2, "name": "Bus 2 (G2)"},
    {"id": 3, "kind": "pv",    "v_min": 0.6, "v_max": 1.2, "name": "Bus 3 (G3)"},
    {"id": 4, "kind": "pq",    "v_min": 0.6, "v_max": 1.2, "name": "Bus 4"},
    {"id": 5, "kind": "pq",    "v_min": 0.6, "v_max": 1.2, "name": "Bus 5 (L1)"},
    {"id": 6, "kind": "pq",    "v_min": 0.6, "v_max": 1.2, "name": "Bus 6 (L2)"},
    {"id": 7, "kind": "pq",    "v_min": 0.6, "v_max": 1.2, "name": "Bus 7"},
    {"id": 8, "kind": "pq",    "v_min": 0.6, "v_max": 1.2, "name": "Bus 8 (L3)"},
    {"id": 9, "kind": "pq",    "v_min": 0.6, "v_max": 1.2, "name": "Bus 9"}
  ],
  "branches": [
    {"from": 1, "to": 4, "r": 0.0,    "x": 0.0576, "b_sh": 0.0,   "tap": 1.0},
    {"from": 2, "to": 7, "r": 0.0,    "x": 0.0625, "b_sh": 0.0,   "tap": 1.0},
    {"from": 3, "to": 9, "r": 0.0,    "x": 0.0586, "b_sh": 0.0,   "tap": 1.0},
    {"from": 4, "to": 5, "r": 0.010,  "x": 0.085,  "b_sh": 0.176, "tap": 1.0},
    {"from": 4, "to": 6, "r": 0.017,  "x": 0.092,  "b_sh": 0.158, "tap": 1.0},
    {"from": 5, "to": 7, "r": 0.032,  "x": 0.161,  "b_sh": 0.306, "tap": 1.0},
    {"from": 6, "to": 9, "r": 0.039,  "x": 0.170,  "b_sh": 0.358, "tap": 1.0},
    {"from": 7, "to": 8, "r": 0.0085, "x": 0.072,  "b_sh": 0.149, "tap": 1.0},
    {"from": 8, "to": 9, "r": 0.0119, "x": 0.1008, "b_sh": 0.209, "tap": 1.0}
  ],
  "generators": [
    {"bus": 1, "v_set_pu": 1.040, "h_s": 23.64, "d_pu": 0.01, "r_a_pu": 0.0,
     "x_q_pu": 0.0608, "omega_s_rad_s": 376.99111843077515},
    {"bus": 2, "p_set_mw": 163.0, "v_set_pu": 1.025, "h_s": 6.40, "d_pu": 0.01,
     "r_a_pu": 0.0, "x_q_pu": 0.1198, "omega_s_rad_s": 376.99111843077515},
    {"bus": 3, "p_set_mw": 85.0, "v_set_pu": 1.025, "h_s": 3.01, "d_pu": 0.01,
     "r_a_pu": 0.0, "x_q_pu": 0.1813, "omega_s_rad_s": 376.99111843077515}
  ],
  "loads": [
    {"bus": 5, "p_mw": 125.0, "q_mvar": 50.0},
    {"bus": 6, "p_mw": 90.0,  "q_mvar": 30.0},
    {"bus": 8, "p_mw": 100.0, "q_mvar": 350.0}
  ]
})json";

constexpr std::string_view kWscc9Canonical = R"json({
  "base_mva": 100.0,
  "buses": [
    {"id": 1, "kind": "slack", "v_min": 0.9, "v_max": 1.1, "name": "Bus 1 (G1)"},
    {"id": 2, "kind": "pv",    "v_min": 0.9, "v_max": 1.1, "name": "Bus 2 (G2)"},
    {"id": 3, "kind": "pv",    "v_min": 0.9, "v_max": 1.1, "name": "Bus 3 (G3)"},
    {"id": 4, "kind": "pq",    "v_min": 0.9, "v_max": 1.1, "name": "Bus 4"},
    {"id": 5, "kind": "pq",    "v_min": 0.9, "v_max": 1.1, "name": "Bus 5 (L1)"},
    {"id": 6, "kind": "pq",    "v_min": 0.9, "v_max": 1.1, "name": "Bus 6 (L2)"},
    {"id": 7, "kind": "pq",    "v_min": 0.9, "v_max": 1.1, "name": "Bus 7"},
    {"id": 8, "kind": "pq",    "v_min": 0.9, "v_max": 1.1, "name": "Bus 8 (L3)"},
    {"id": 9, "kind": "pq",    "v_min": 0.9, "v_max": 1.1, "name": "Bus 9"}
  ],
  "branches": [
    {"from": 1, "to": 4, "r": 0.0,    "x": 0.0576, "b_sh": 0.0,   "tap": 1.0},
    {"from": 2, "to": 7, "r": 0.0,    "x": 0.0625, "b_sh": 0.0,   "tap": 1.0},
    {"from": 3, "to": 9, "r": 0.0,    "x": 0.0586, "b_sh": 0.0,   "tap": 1.0},
    {"from": 4, "to": 5, "r": 0.010,  "x": 0.085,  "b_sh": 0.176, "tap": 1.0},
    {"from": 4, "to": 6, "r": 0.017,  "x": 0.092,  "b_sh": 0.158, "tap": 1.0},
    {"from": 5, "to": 7, "r": 0.032,  "x": 0.161,  "b_sh": 0.306, "tap": 1.0},
    {"from": 6, "to": 9, "r": 0.039,  "x": 0.170,  "b_sh": 0.358, "tap": 1.0},
    {"from": 7, "to": 8, "r": 0.0085, "x": 0.072,  "b_sh": 0.149, "tap": 1.0},
    {"from": 8, "to": 9, "r": 0.0119, "x": 0.1008, "b_sh": 0.209, "tap": 1.0}
  ],
  "generators": [
    {"bus": 1, "v_set_pu": 1.040, "h_s": 23.64, "d_pu": 0.01, "r_a_pu": 0.0,
     "x_q_pu": 0.0608, "omega_s_rad_s": 376.99111843077515},
    {"bus": 2, "p_set_mw": 163.0, "v_set_pu": 1.025, "h_s": 6.40, "d_pu": 0.01,
     "r_a_pu": 0.0, "x_q_pu": 0.1198, "omega_s_rad_s": 376.99111843077515},
    {"bus": 3, "p_set_mw": 85.0, "v_set_pu": 1.025, "h_s": 3.01, "d_pu": 0.01,
     "r_a_pu": 0.0, "x_q_pu": 0.1813, "omega_s_rad_s": 376.99111843077515}
  ],
  "loads": [
    {"bus": 5, "p_mw": 125.0, "q_mvar": 50.0},
    {"bus": 6, "p_mw": 90.0,  "q_mvar": 30.0},
    {"bus": 8, "p_mw": 100.0, "q_mvar": 35.0}
  ]
})json";

}  // namespace

std::string_view embedded_wscc9() { return kWscc9; }
std::string_view embedded_wscc9_canonical() { return kWscc9Canonical; }

}  // namespace gridfdi::net
