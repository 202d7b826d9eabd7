#!/usr/bin/env python3
"""Regenerates tests/oracle_tables.hpp from mpmath at 50 significant digits.

Nothing in the C++ library is used here; the values are an independent
reference for the double-precision kernels.
"""
import mpmath as mp

mp.mp.dps = 50


def c(z):
    z = mp.mpc(z)
    return "{%s, %s}" % (mp.nstr(z.real, 20, min_fixed=-1, max_fixed=1), mp.nstr(z.imag, 20, min_fixed=-1, max_fixed=1))


def r(x):
    return mp.nstr(mp.mpf(x), 20, min_fixed=-1, max_fixed=1)


def h(w, k4):
    nu = mp.sqrt(mp.mpf(k4) / (1 - 2 * w))
    return mp.re(mp.hyp2f1(1 - nu / 2, 1 + nu / 2, 1, (2 * w - 1) / (2 * w)))


def ground_state(k4, lo, hi):
    return mp.findroot(lambda w: h(w, k4), (mp.mpf(lo), mp.mpf(hi)), solver="anderson")


out = []
out.append("// Generated by tests/oracle/gen_tables.py (mpmath, 50 digits). Do not edit.")
out.append("#pragma once\n")
out.append("#include <array>\n#include <complex>\n")
out.append("namespace mlqm::oracle_tables {\n")

# log-gamma on 50 points: purely imaginary, right half plane, left half plane,
# large imaginary parts up to 50.
pts = []
for y in [0.05, 0.2, 0.4472135955, 0.7, 1.0, 1.2247448714, 2.5, 7.0, 20.0, 50.0]:
    pts.append(mp.mpc(0, y))
for y in [-0.3, -3.0, -45.0]:
    pts.append(mp.mpc(0, y))
for x, y in [(0.5, 0), (1.5, 0), (3.25, 0), (10.0, 0), (0.1, 0), (2.5, 0), (25.0, 0), (171.5, 0),
             (1, 0.2236067977), (1, 0.6123724357), (0.5, 1.0), (0.5, -1.0), (2.0, 3.0),
             (3.5, -7.25), (12.0, 40.0), (0.25, 49.0), (5.0, 0.01), (1.0, 10.0), (30.0, -30.0),
             (0.9, 0.1), (4.0, 25.0)]:
    pts.append(mp.mpc(x, y))
for x, y in [(-0.5, 0.0), (-2.5, 0.0), (-0.3, 0.7), (-1.7, -2.2), (-5.5, 3.0), (-10.25, 0.5),
             (-0.75, 15.0), (-3.3, -0.01), (-20.5, 1.0), (-0.1, -0.1), (-7.9, 40.0),
             (-1.0, 0.5), (-4.5, -12.0), (-0.5, 30.0), (-15.2, -2.0), (-2.0, 0.3)]:
    pts.append(mp.mpc(x, y))
assert len(pts) == 50, len(pts)
out.append("struct LogGammaPoint {\n  std::complex<double> z;\n  std::complex<double> log_gamma;\n};\n")
out.append("inline constexpr std::array<LogGammaPoint, %d> kLogGamma{{" % len(pts))
for z in pts:
    out.append("    {%s, %s}," % (c(z), c(mp.loggamma(z))))
out.append("}};\n")

# 2F1 with complex (conjugate) parameters on both sides of z = 0 and near 1.
h2 = []
for a, b, cc, z in [((1, -0.6), (1, 0.6), 1, -0.5), ((1, -1.2), (1, 1.2), 1, -40.0),
                    ((1, -0.22), (1, 0.22), 1, -2.0e5), ((1, -1.3), (1, 1.3), 1, -3.0e12),
                    ((0.4, 0), (1.6, 0), 1, 0.45), ((0.2, 0), (1.8, 0), 1, 0.95),
                    ((-0.35, 0), (2.35, 0), 1, 0.999), ((0.5, 0.3), (2.0, -0.1), (2.5, 0.2), 0.93),
                    ((0.7, 0), (1.3, 0), 1, -0.999), ((1.5, 0), (0.25, 0), 3, -25.0),
                    ((0.725, 0), (1.275, 0), 1, -1.0e9), ((2, 0), (3, 0), 4.5, 0.97),
                    # c - a - b at or near an integer
                    ((1, 0), (1, 0), 2, -50.0), ((0.3, 0), (0.9, 0), 1.204, 0.97),
                    ((0.6, 0.25), (0.6, -0.25), 0.193, 0.985), ((1.5, 0), (0.5, 0), 4, 0.95),
                    ((0.25, 0), (0.75, 0), (2.000001, 0), 0.999), ((1, 0), (2, 0), 1.5, -1.0e6),
                    ((1, -0.3), (1, 0.3), 1, 0.9999), ((1.2, 0), (-0.7, 0), 0.5, 0.93)]:
    A = mp.mpc(*a) if isinstance(a, tuple) else mp.mpc(a)
    B = mp.mpc(*b) if isinstance(b, tuple) else mp.mpc(b)
    C = mp.mpc(*cc) if isinstance(cc, tuple) else mp.mpc(cc)
    h2.append((A, B, C, mp.mpf(z), mp.hyp2f1(A, B, C, z)))
out.append("struct Hyp2f1Point {\n  std::complex<double> a, b, c;\n  double z;\n  std::complex<double> value;\n};\n")
out.append("inline constexpr std::array<Hyp2f1Point, %d> kHyp2f1{{" % len(h2))
for A, B, C, z, v in h2:
    out.append("    {%s, %s, %s, %s, %s}," % (c(A), c(B), c(C), r(z), c(v)))
out.append("}};\n")

# Quantization condition h(omega) at a few points.
hv = []
for k4, w in [(-6, 0.3), (-6, 0.7), (-6, 2.0), (-0.2, 1e-3), (-0.2, 1e-7), (0.2758, 0.01),
              (0.5767, 0.4), (-6, 1e-12), (-1, 0.049), (2.0, 3.0)]:
    hv.append((k4, w, h(mp.mpf(w), k4)))
out.append("struct QuantizationPoint {\n  double four_kappa;\n  double omega;\n  double h;\n};\n")
out.append("inline constexpr std::array<QuantizationPoint, %d> kQuantization{{" % len(hv))
for k4, w, v in hv:
    out.append("    {%s, %s, %s}," % (r(k4), r(w), r(v)))
out.append("}};\n")

# Bound-state roots.
w_m6 = ground_state(-6, 0.51, 0.54)
w_m02 = ground_state(-0.2, 4.0e-4, 6.0e-4)
w_m02_1 = ground_state(-0.2, 3.0e-10, 5.0e-10)
w_m02_2 = ground_state(-0.2, 2.0e-16, 4.0e-16)
out.append("inline constexpr double kGroundStateFourKappaMinus6 = %s;" % r(w_m6))
out.append("inline constexpr double kGroundStateFourKappaMinusFifth = %s;" % r(w_m02))
out.append("inline constexpr double kFirstExcitedFourKappaMinusFifth = %s;" % r(w_m02_1))
out.append("inline constexpr double kSecondExcitedFourKappaMinusFifth = %s;\n" % r(w_m02_2))

# Asymptotic ground-state energy for 4 kappa = -1/5 with M = beta = 1.
nu2 = mp.sqrt(mp.mpf("0.2"))
phi = mp.arg(mp.gamma(1j * nu2) / (mp.gamma(1 + 1j * nu2 / 2) * mp.gamma(1j * nu2 / 2)))
e0 = -mp.mpf(1) / 2 * mp.exp(2 / nu2 * (phi - mp.pi / 2))
out.append("inline constexpr double kAsymptoticPhaseFourKappaMinusFifth = %s;" % r(phi))
out.append("inline constexpr double kAsymptoticE0FourKappaMinusFifth = %s;\n" % r(e0))

# Radial norm of the m = 0, beta' = 0 ground state for 4 kappa = -6, beta = 1,
# unit amplitude: sqrt( int_0^inf p (1+p^2)^{-1} phi(p)^2 dp ),
# phi = (1 - xi) F(a*, b*; 1; xi / xi0).
w = w_m6
k4 = mp.mpf(-6)
nu = mp.sqrt(k4 / (1 - 2 * w))
xi0 = 2 * w / (2 * w - 1)


def integrand_xi(x):
    # p dp/(1+p^2) = dxi / (2 (1 - xi)) for omega1 = 1
    f = mp.re(mp.hyp2f1(1 - nu / 2, 1 + nu / 2, 1, x / xi0))
    return (1 - x) ** 2 * f ** 2 / (2 * (1 - x))


norm2 = mp.quad(integrand_xi, [0, 0.5, 0.9, 0.99, 1])
out.append("inline constexpr double kGroundStateNormFourKappaMinus6 = %s;\n" % r(mp.sqrt(norm2)))

# Heun series reference: local solution evaluated by high-precision ODE
# integration from a Frobenius start, independent of the coefficient recurrence.
heun = []
for (xi0h, q, a, b, cc, d, e, x) in [
        (2.5, mp.mpc(0.3, 0.1), mp.mpc(0.8, 0.4), mp.mpc(1.7, -0.4), 1.5, 2, 0.0, 0.9),
        (-0.4, mp.mpc(-0.2, 0), mp.mpc(1.1, 0), mp.mpc(0.6, 0), 2.0, 2, -1.3, 0.3),
        (1.8, mp.mpc(1.0, 0), mp.mpc(0.5, 1.5), mp.mpc(0.5, -1.5), 1.0, 2, -1.0, 0.8)]:
    xi0h = mp.mpf(xi0h)
    cc = mp.mpf(cc); d = mp.mpf(d); e = mp.mpc(e)
    # Series to very high order at a tiny start point (negligible truncation),
    # then ODE to x.
    x_start = mp.mpf("1e-3")
    coeffs = [mp.mpc(1), -q / (cc * xi0h)]
    for n in range(0, 60):
        lhs = (n + 2) * (n + 1 + cc) * xi0h
        rhs = ((n + 1) ** 2 * (xi0h + 1) + (n + 1) * (cc + d - 1 + (a + b - d) * xi0h) - q) * coeffs[n + 1] \
            - (n + a) * (n + b) * coeffs[n]
        coeffs.append(rhs / lhs)
    f0 = sum(cn * x_start ** k for k, cn in enumerate(coeffs))
    df0 = sum(k * cn * x_start ** (k - 1) for k, cn in enumerate(coeffs) if k > 0)

    def rhs_fn(t, y, xi0h=xi0h, q=q, a=a, b=b, cc=cc, d=d, e=e):
        f, fp = y
        fpp = -(cc / t + e / (t - 1) + d / (t - xi0h)) * fp - (a * b * t + q) / (t * (t - 1) * (t - xi0h)) * f
        return [fp, fpp]

    sol = mp.odefun(rhs_fn, x_start, [f0, df0])
    heun.append((xi0h, q, a, b, cc, d, e, x, sol(x)[0]))
out.append("struct HeunPoint {\n  double xi0;\n  std::complex<double> q, a, b, c, d, e;\n  double xi;\n  std::complex<double> value;\n};\n")
out.append("inline constexpr std::array<HeunPoint, %d> kHeun{{" % len(heun))
for xi0h, q, a, b, cc, d, e, x, v in heun:
    out.append("    {%s, %s, %s, %s, %s, %s, %s, %s, %s}," % (r(xi0h), c(q), c(a), c(b), c(cc), c(d), c(e), r(x), c(v)))
out.append("}};\n")

out.append("}  // namespace mlqm::oracle_tables")
print("\n".join(out))
