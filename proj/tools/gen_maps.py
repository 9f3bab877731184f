#!/usr/bin/env python3
"""Generate the shipped synthetic turbomachine maps.

The original machine characteristics are not publicly available, so the
repo ships smooth synthetic maps constructed around the rated point of the
default plant configuration (see data/README.md):

  compressor: PR = 1 + (PR_r - 1) n^2 (1.3 - 0.3 (m / m_d)^2), m_d = m_r n
  turbine:    PR = (1 - 0.9495 (m / (1.15 m_r))^2)^(-1/2)   (ellipse law)

with temperature ratios from constant isentropic efficiencies and
gamma = 5/3 (monatomic He-Xe). Corrected-quantity conventions:

  m' = mdot sqrt(T R) / ((2 r_tip)^2 p)      N' = N_rpm 2 r_tip / sqrt(g R T)

Rated aerodynamic design values (calibration artifacts, not published
data): r_tip = 0.15 m, N = 45000 rpm, W = 2.76 kg/s, compressor inlet
319 K / 1.5 MPa, turbine inlet 1080 K / 2.91 MPa, PR_C = 2.0, eta_c = 0.83,
eta_t = 0.85.
"""
import math
import os

R_UNIV = 8.31446261815324
M_GAS = 0.040  # kg/mol
R_SPEC = R_UNIV / M_GAS
GAMMA = 5.0 / 3.0
EXP = (GAMMA - 1.0) / GAMMA  # 0.4

R_TIP = 0.15
N_RATED = 45000.0
W_RATED = 2.76
PR_C_RATED = 2.0
ETA_C = 0.83
ETA_T = 0.85

T_C_IN, P_C_IN = 319.0, 1.5e6
T_T_IN, P_T_IN = 1080.0, 2.91e6


def m_corr(mdot, t, p):
    return mdot * math.sqrt(t * R_SPEC) / ((2 * R_TIP) ** 2 * p)


def n_corr(n_rpm, t):
    return n_rpm * 2 * R_TIP / math.sqrt(GAMMA * R_SPEC * t)


MC_RATED = m_corr(W_RATED, T_C_IN, P_C_IN)
NC_RATED = n_corr(N_RATED, T_C_IN)
MT_RATED = m_corr(W_RATED, T_T_IN, P_T_IN)
NT_RATED = n_corr(N_RATED, T_T_IN)

N_REL = [0.02, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50,
         0.60, 0.70, 0.80, 0.90, 1.00, 1.10, 1.25, 1.40, 1.60, 1.80, 2.00,
         2.20]
M_REL = [0.005 + 1.395 * i / 39 for i in range(40)]


def compressor_pr(n, m):
    md = max(n, 1e-6)
    pr = 1.0 + (PR_C_RATED - 1.0) * n * n * (1.3 - 0.3 * (m / md) ** 2)
    return max(pr, 1.0 + 1e-4)


def compressor_tr(pr):
    return 1.0 + (pr ** EXP - 1.0) / ETA_C


def turbine_pr(m):
    arg = 1.0 - 0.9495 * (m / 1.15) ** 2
    return max(arg, 0.02) ** -0.5


def turbine_tr(pr):
    return 1.0 / (1.0 - ETA_T * (1.0 - pr ** -EXP))


def write_map(path, kind, n_ref, m_ref):
    lines = ["# synthetic %s map; see tools/gen_maps.py for construction" %
             kind,
             "machine %s" % kind,
             "r_tip %.6g" % R_TIP]
    for nr in N_REL:
        for mr in M_REL:
            if kind == "compressor":
                pr = compressor_pr(nr, mr)
                tr = compressor_tr(pr)
            else:
                pr = turbine_pr(mr)
                tr = turbine_tr(pr)
            lines.append("point %.10g %.10g %.10g %.10g" %
                         (nr * n_ref, mr * m_ref, pr, tr))
    if kind == "compressor":
        for nr in N_REL:
            lines.append("surge %.10g %.10g" % (nr * n_ref,
                                                0.55 * nr * m_ref))
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


def main():
    out = os.path.join(os.path.dirname(__file__), "..", "data", "maps")
    os.makedirs(out, exist_ok=True)
    write_map(os.path.join(out, "compressor.map"), "compressor",
              NC_RATED, MC_RATED)
    write_map(os.path.join(out, "turbine.map"), "turbine",
              NT_RATED, MT_RATED)
    print("rated compressor: m'=%.10g N'=%.10g PR=%.6g" %
          (MC_RATED, NC_RATED, compressor_pr(1.0, 1.0)))
    print("rated turbine:    m'=%.10g N'=%.10g PR=%.6g TR=%.6g" %
          (MT_RATED, NT_RATED, turbine_pr(1.0),
           turbine_tr(turbine_pr(1.0))))
    # oracle values for the tests
    print("m_corr(3.31, 319, 1.5e6) =", repr(m_corr(3.31, T_C_IN, P_C_IN)))
    print("n_corr(45000, 319)       =", repr(n_corr(45000.0, T_C_IN)))


if __name__ == "__main__":
    main()
