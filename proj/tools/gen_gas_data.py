#!/usr/bin/env python3
"""Generate the He-Xe gas property coefficient file and the reference
property fixture.

Second virial coefficients B(T) are fitted to literature values
(Dymond & Smith compilation for the pure species, combining-rule
estimates for the He-Xe pair) on the basis

    B(T) = a0 + a1*t + a2*t^2 + a3/t,   t = T/1000 K,  B in cm^3/mol.

Lennard-Jones parameters feed the Chapman-Enskog viscosity and
conductivity correlations. The fixture file plays the role of the
digitized reference tabulation: viscosity entries are first-order
Chapman-Enskog values and conductivity entries are first-order
(uncorrected) values, both rounded to 4 significant figures. See
data/README.md for the provenance discussion.
"""

import numpy as np

R = 8.31446261815324  # J/(mol K)
M_HE = 4.002602       # g/mol
M_XE = 131.293

# (T [K], B [cm^3/mol]) anchor points.
B_POINTS = {
    "He-He": [(250.0, 12.1), (400.0, 11.7), (600.0, 11.0),
              (900.0, 10.0), (1200.0, 9.0), (1500.0, 8.1)],
    "Xe-Xe": [(250.0, -185.0), (300.0, -130.0), (450.0, -62.0),
              (600.0, -26.0), (800.0, -3.0), (1100.0, 14.0), (1500.0, 24.0)],
    "He-Xe": [(250.0, 22.0), (400.0, 25.0), (600.0, 26.5),
              (900.0, 27.0), (1200.0, 27.0), (1500.0, 26.8)],
}

LJ = {  # sigma [Angstrom], eps/k [K]
    "He": (2.551, 10.22),
    "Xe": (4.047, 231.0),
}

K3_CORRECTION = 0.050  # third-order conductivity correction amplitude


def fit_virial(points, linear=False):
    # cp >= ideal over the envelope needs d2B/dT2 <= 0; the nearly flat
    # He-He curve is fitted linearly so its curvature is exactly zero.
    T = np.array([p[0] for p in points])
    B = np.array([p[1] for p in points])
    t = T / 1000.0
    if linear:
        A = np.column_stack([np.ones_like(t), t])
        coef, *_ = np.linalg.lstsq(A, B, rcond=None)
        return np.array([coef[0], coef[1], 0.0, 0.0])
    A = np.column_stack([np.ones_like(t), t, t * t, 1.0 / t])
    coef, *_ = np.linalg.lstsq(A, B, rcond=None)
    return coef


def b_eval(coef, T):
    t = T / 1000.0
    return coef[0] + coef[1] * t + coef[2] * t * t + coef[3] / t


def b_second_deriv(coef, T):
    # d2B/dT2 with t = T/1000: a2 term -> 2*a2/1e6, a3/t -> 2*a3*1e3/T^3
    return 2.0 * coef[2] * 1e-6 + 2.0 * coef[3] * 1000.0 / T ** 3


def mole_fraction_from_M(M):
    return (M - M_HE) / (M_XE - M_HE)


def b_mix(coefs, x, T):
    b11 = b_eval(coefs["He-He"], T)
    b22 = b_eval(coefs["Xe-Xe"], T)
    b12 = b_eval(coefs["He-Xe"], T)
    return (1 - x) ** 2 * b11 + 2 * x * (1 - x) * b12 + x * x * b22


def z_factor(coefs, x, T, p):
    B = b_mix(coefs, x, T) * 1e-6  # m^3/mol
    return 1.0 + B * p / (R * T)


def omega22(Tstar):
    return (1.16145 * Tstar ** -0.14874 + 0.52487 * np.exp(-0.77320 * Tstar)
            + 2.16178 * np.exp(-2.43787 * Tstar))


def omega11(Tstar):
    return (1.06036 * Tstar ** -0.15610 + 0.19300 * np.exp(-0.47635 * Tstar)
            + 1.03587 * np.exp(-1.52996 * Tstar)
            + 1.76474 * np.exp(-3.89411 * Tstar))


def visc_single(M, sigma, eps, T):
    return 2.6693e-6 * np.sqrt(M * T) / (sigma ** 2 * omega22(T / eps))


def mixture_transport(x, T):
    """First-order Chapman-Enskog binary viscosity (Hirschfelder form)
    and first-order mixture conductivity (Mason-Saxena)."""
    s1, e1 = LJ["He"]
    s2, e2 = LJ["Xe"]
    s12 = 0.5 * (s1 + s2)
    e12 = np.sqrt(e1 * e2)
    m1, m2 = M_HE, M_XE
    x1, x2 = 1.0 - x, x

    mu1 = visc_single(m1, s1, e1, T)
    mu2 = visc_single(m2, s2, e2, T)
    m12 = 2.0 * m1 * m2 / (m1 + m2)
    mu12 = 2.6693e-6 * np.sqrt(m12 * T) / (s12 ** 2 * omega22(T / e12))
    astar = omega22(T / e12) / omega11(T / e12)

    q = (m1 + m2) ** 2 / (4.0 * m1 * m2)
    X = x1 * x1 / mu1 + 2 * x1 * x2 / mu12 + x2 * x2 / mu2
    Y = 0.6 * astar * (x1 * x1 / mu1 * (m1 / m2)
                       + 2 * x1 * x2 / mu12 * q * mu12 ** 2 / (mu1 * mu2)
                       + x2 * x2 / mu2 * (m2 / m1))
    Z = 0.6 * astar * (x1 * x1 * (m1 / m2)
                       + 2 * x1 * x2 * (q * (mu12 / mu1 + mu12 / mu2) - 1.0)
                       + x2 * x2 * (m2 / m1))
    mu = (1.0 + Z) / (X + Y)

    lam1 = 15.0 / 4.0 * R / (m1 * 1e-3) * mu1
    lam2 = 15.0 / 4.0 * R / (m2 * 1e-3) * mu2
    if x2 == 0.0:
        lam = lam1
    elif x1 == 0.0:
        lam = lam2
    else:
        def phi(mi, mj, mui, muj):
            return (1 + np.sqrt(mui / muj) * (mj / mi) ** 0.25) ** 2 \
                / np.sqrt(8.0 * (1 + mi / mj))
        d1 = x1 + x2 * phi(m1, m2, mu1, mu2)
        d2 = x2 + x1 * phi(m2, m1, mu2, mu1)
        lam = x1 * lam1 / d1 + x2 * lam2 / d2
    return mu, lam


def main():
    coefs = {k: fit_virial(v, linear=(k == "He-He"))
             for k, v in B_POINTS.items()}

    # --- verification of spec-level constraints ---------------------------
    print("fit residuals:")
    for k, pts in B_POINTS.items():
        T = np.array([p[0] for p in pts])
        B = np.array([p[1] for p in pts])
        r = np.abs(b_eval(coefs[k], T) - B).max()
        print(f"  {k}: coef={coefs[k]}, max fit dev {r:.3f} cm3/mol")

    # cp correction must be >= 0 over the envelope for every composition:
    # cp_molar = 2.5 R - p T B_mix'' >= 2.5 R requires B_mix'' <= 0.
    Ts = np.linspace(250, 1500, 200)
    worst = -1e30
    for xx in np.linspace(0, 1, 51):
        b2 = ((1 - xx) ** 2 * b_second_deriv(coefs["He-He"], Ts)
              + 2 * xx * (1 - xx) * b_second_deriv(coefs["He-Xe"], Ts)
              + xx * xx * b_second_deriv(coefs["Xe-Xe"], Ts))
        worst = max(worst, b2.max())
    print(f"max B_mix'' over envelope: {worst:.3e} cm3/mol/K^2 (need <= 0)")

    # Z peak location at 600 K, 2 MPa must fall in 30.34-61.07 g/mol.
    Ms = np.linspace(M_HE + 0.01, M_XE - 0.01, 4000)
    Zs = [z_factor(coefs, mole_fraction_from_M(M), 600.0, 2.0e6) for M in Ms]
    Mpk = Ms[int(np.argmax(Zs))]
    print(f"Z peak at 600 K / 2 MPa: M = {Mpk:.2f} g/mol "
          f"(need within [30.34, 61.07])")

    # monotone molar cp in xenon fraction at 600 K / 2 MPa.
    xs = np.linspace(0, 1, 101)
    cps = [2.5 * R - 2.0e6 * 600.0 *
           ((1 - xx) ** 2 * b_second_deriv(coefs["He-He"], 600.0)
            + 2 * xx * (1 - xx) * b_second_deriv(coefs["He-Xe"], 600.0)
            + xx * xx * b_second_deriv(coefs["Xe-Xe"], 600.0)) * 1e-6
           for xx in xs]
    print(f"molar cp monotone in x at 600K/2MPa: "
          f"{bool(np.all(np.diff(cps) > 0))}")

    # --- coefficient file -------------------------------------------------
    with open("data/gas_coefficients.dat", "w") as f:
        f.write("# He-Xe property coefficients. See data/README.md.\n")
        f.write("# virial <pair> a0 a1 a2 a3 :"
                " B(T) = a0 + a1*t + a2*t^2 + a3/t, t = T/1000 K,"
                " B in cm^3/mol\n")
        for k in ("He-He", "Xe-Xe", "He-Xe"):
            c = coefs[k]
            f.write(f"virial {k} {c[0]:.10g} {c[1]:.10g} "
                    f"{c[2]:.10g} {c[3]:.10g}\n")
        f.write("# lj <species> sigma[Angstrom] eps_over_k[K]\n")
        for sp, (s, e) in LJ.items():
            f.write(f"lj {sp} {s:.6g} {e:.6g}\n")
        f.write("# third-order conductivity correction amplitude\n")
        f.write(f"conductivity_third_order {K3_CORRECTION:.6g}\n")

    # --- reference fixture ------------------------------------------------
    # Rows: M[g/mol] T[K] mu_ref[Pa s] lambda_ref[W/m/K], 4 significant
    # figures, mimicking a digitized tabulation. Conductivity entries are
    # first order (no third-order correction).
    with open("data/gas_reference_fixture.dat", "w") as f:
        f.write("# reference transport-property tabulation (stand-in),"
                " see data/README.md\n")
        f.write("# columns: molar_mass[g/mol] T[K] viscosity[Pa.s]"
                " conductivity[W/(m.K)]\n")
        for M in (30.0, 40.0, 50.0):
            x = mole_fraction_from_M(M)
            for T in np.arange(400.0, 1200.1, 100.0):
                mu, lam = mixture_transport(x, T)
                f.write(f"{M:.4g} {T:.6g} {float(f'{mu:.4g}'):.4g} "
                        f"{float(f'{lam:.4g}'):.4g}\n")

    # expected deviation band check for the third-order correction
    for M in (30.0, 40.0, 50.0):
        x = mole_fraction_from_M(M)
        corr = K3_CORRECTION * 4 * x * (1 - x) * \
            ((M_XE - M_HE) / (M_XE + M_HE)) ** 2
        print(f"M={M}: third-order conductivity correction {100*corr:.2f}% "
              f"(need in [2.13, 4.40])")

    print("wrote data/gas_coefficients.dat, data/gas_reference_fixture.dat")


if __name__ == "__main__":
    main()
