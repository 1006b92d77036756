"""Independent high-precision reference values for tests/reference_values.rs.

Run with `python3 oracle.py`; prints Rust constants. Uses mpmath only
(quadrature, root finding and its own special functions), never the crate.
"""
from mpmath import mp, mpf, quad, gamma, gammainc, loggamma, exp, log, sqrt, pi, findroot, erfc, pcfd, inf, diff, e

mp.dps = 40


def gr_pdf(x, d, t):
    return 2 * t ** (d + 1) * x ** (2 * d + 1) * exp(-t * x * x) / gamma(d + 1)


def gr_cdf_quad(x, d, t):
    return quad(lambda s: gr_pdf(s, d, t), [0, x])


def gr_cdf(x, d, t):
    return gammainc(d + 1, 0, t * x * x, regularized=True)


def goll_cdf(x, a, b, d, t):
    g = gr_cdf(x, d, t)
    A = g ** (a * b)
    B = (1 - g ** b) ** a
    return A / (A + B)


def goll_pdf(x, a, b, d, t):
    # density formula, written independently of the crate's log-space form
    g = gr_cdf(x, d, t)
    gx = gr_pdf(x, d, t)
    gb = g ** b
    return a * b * gx * g ** (a * b - 1) * (1 - gb) ** (a - 1) / (g ** (a * b) + (1 - gb) ** a) ** 2


def out(name, v):
    print(f"pub const {name}: f64 = {mp.nstr(v, 20, min_fixed=-30, max_fixed=30)};")


out("LN_GAMMA_HALF", log(sqrt(pi)))
out("REG_LOWER_2_5_AT_1_3", quad(lambda s: s ** 1.5 * exp(-s), [0, mpf("1.3")]) / gamma(mpf("2.5")))
out("REG_UPPER_3_AT_40", exp(-40) * (1 + 40 + mpf(40) ** 2 / 2))
out("GAMMA_QUANTILE_2_5_AT_0_73", findroot(lambda x: gammainc(mpf("2.5"), 0, x, regularized=True) - mpf("0.73"), 2))
out("NORMAL_QUANTILE_0_975", findroot(lambda z: erfc(-z / sqrt(2)) / 2 - mpf("0.975"), 2))

# D_nu(z) for nu < 0 from its integral representation, checked against mpmath's pcfd
def pcf_int(nu, z):
    return exp(-z * z / 4) / gamma(-nu) * quad(lambda s: s ** (-nu - 1) * exp(-s * s / 2 - z * s), [0, inf])


for nu, z, name in [(-1, 0, "PCF_M1_AT_0"), (mpf("-2.4"), mpf("-0.7"), "PCF_M2_4_AT_M0_7")]:
    a, b = pcf_int(nu, z), pcfd(nu, z)
    assert abs(a - b) < mpf(10) ** -25, (a, b)
    out(name, a)

out("GR_CDF_1_5_15_AT_0_4", gr_cdf_quad(mpf("0.4"), mpf("1.5"), 15))
out("GR_PDF_1_5_15_AT_0_4", gr_pdf(mpf("0.4"), mpf("1.5"), 15))
out("GR_QUANTILE_2_3_AT_0_9", findroot(lambda x: gr_cdf(x, 2, 3) - mpf("0.9"), 1))
out("GR_MEAN_1_5_15", quad(lambda s: s * gr_pdf(s, mpf("1.5"), 15), [0, 1, inf]))

DESIGN = (mpf("0.35"), mpf("0.55"), mpf("-0.55"), mpf("0.11"))
# closed form, confirmed by quadrature of the density (singular at 0)
design_quad = quad(lambda s: goll_pdf(s, *DESIGN), [0, mpf("1e-20"), mpf("1e-10"), mpf("1e-5"), mpf("0.01"), 1])
assert abs(design_quad - goll_cdf(1, *DESIGN)) < mpf(10) ** -10
out("DESIGN_CDF_AT_1", goll_cdf(1, *DESIGN))
out("DESIGN_CDF_AT_5", goll_cdf(5, *DESIGN))
out("DESIGN_CDF_AT_20", goll_cdf(20, *DESIGN))
SHARP = (mpf("0.3"), mpf(2), mpf("1.5"), mpf(15))
out("PDF_0_3_2_1_5_15_AT_0_5", diff(lambda s: goll_cdf(s, *SHARP), mpf("0.5")))
H = (mpf("0.1"), mpf("2.5"), mpf(1), mpf(1))
out("HRF_AT_2", goll_pdf(2, *H) / (1 - quad(lambda s: goll_pdf(s, *H), [0, 1, 2])))
out("DESIGN_QUANTILE_0_9", findroot(lambda x: goll_cdf(x, *DESIGN) - mpf("0.9"), (5, 20), solver="anderson"))
g = 1 - exp(-1)
out("ODDS_B2_AT_1", g ** 2 / (1 - g ** 2))

# e_m^{(2)} for delta = 0.5, theta = 1 by squaring the power series
q = [(-1) ** m / ((mpf("1.5") + m) * gamma(m + 1)) for m in range(7)]
e2 = [sum(q[i] * q[m - i] for i in range(m + 1)) for m in range(7)]
print("pub const E2_HALF_1: [f64; 7] = [" + ", ".join(mp.nstr(v, 20, min_fixed=-30, max_fixed=30) for v in e2) + "];")

# moments and mgf of the EGR (alpha = 1, beta = 2, delta = 0, theta = 1) law: density 2 G g
egr = lambda s: goll_pdf(s, 1, 2, 0, 1)
out("EGR2_SECOND_MOMENT", quad(lambda s: s * s * egr(s), [0, 2, inf]))
out("RAYLEIGH_MGF_0_5", quad(lambda s: exp(s / 2) * 2 * s * exp(-s * s), [0, 2, inf]))
med = sqrt(log(2))
out("RAYLEIGH_INCOMPLETE_MEAN_AT_MEDIAN", quad(lambda s: s * 2 * s * exp(-s * s), [0, med]))
