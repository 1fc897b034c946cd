"""Genus-1 numerics for the non-perturbative construction.

Riemann theta in one modulus with derivative weights, elliptic periods via
the arithmetic-geometric mean, the first non-perturbative correction
coefficients assembled from supplied cycle integrals, and trans-series
containers whose equality is coefficientwise per (hbar-power, theta-weight)
sector.

Double-precision complex arithmetic with explicit tail bounds; tolerances
are module constants, overridable per call.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

THETA_TOL = 1e-14
TWO_PI_I = 2j * math.pi


@dataclass(frozen=True)
class ThetaValue:
    v: complex
    tau: complex
    derivative_order: int
    value: complex
    tail_bound: float


def theta_g1(v: complex, tau: complex, k: int = 0, tol: float = THETA_TOL) -> ThetaValue:
    """Sum_n n^k exp(2 pi i n v + pi i n^2 tau) with a rigorous tail cutoff.

    The summand decays like exp(-pi Im(tau) n^2 + 2 pi |Im v| |n|); N* is
    chosen so the bound on the dropped tail is below `tol`.
    """
    if tau.imag <= 0:
        raise ValueError("not a Siegel parameter")
    a = math.pi * tau.imag
    b = 2 * math.pi * abs(v.imag)
    n_star = 1
    while True:
        # past n0 = max(1, (b + k/n)/2a + 1) the summand is decreasing
        if a * (2 * n_star + 1) > b + k / max(n_star, 1) + 2:
            t = _term_bound(n_star + 1, k, a, b)
            ratio = math.exp(-(a * (2 * n_star + 3) - b - k))
            if ratio < 1 and t / (1 - ratio) < tol:
                break
        n_star += 1
        if n_star > 10_000:
            raise ValueError("theta truncation did not converge")
    total = complex(0.0)
    for n in range(-n_star, n_star + 1):
        w = n ** k if k else 1
        if w == 0 and k:
            continue
        total += w * cmath.exp(TWO_PI_I * n * v + 1j * math.pi * n * n * tau)
    t = _term_bound(n_star + 1, k, a, b)
    ratio = math.exp(-(a * (2 * n_star + 3) - b - k))
    tail = 2 * t / (1 - ratio)
    return ThetaValue(v, tau, k, total, tail)


def _term_bound(n: int, k: int, a: float, b: float) -> float:
    return (n ** k) * math.exp(-a * n * n + b * n)


def theta_quasiperiodicity_check(v: complex, tau: complex,
                                 shift_tol: float = 1e-10,
                                 heat_tol: float = 1e-8) -> dict:
    """Numeric identities: v-periodicity, tau-quasi-periodicity (single and
    composed double shift) and the heat-type identity via central differences."""
    report = {}
    th = theta_g1(v, tau).value
    report["period_1"] = abs(theta_g1(v + 1, tau).value - th) <= shift_tol * max(1.0, abs(th))

    def shifted(n: int) -> complex:
        phase = cmath.exp(-TWO_PI_I * (n * v + 0.5 * n * n * tau))
        return phase * th

    got1 = theta_g1(v + tau, tau).value
    report["quasi_period_tau"] = abs(got1 - shifted(1)) <= shift_tol * max(1.0, abs(shifted(1)))
    got2 = theta_g1(v + 2 * tau, tau).value
    report["quasi_period_2tau"] = abs(got2 - shifted(2)) <= shift_tol * max(1.0, abs(shifted(2)))
    # composed single shifts agree with the double shift
    via_single = cmath.exp(-TWO_PI_I * ((v + tau) + 0.5 * tau)) * got1
    report["double_shift_composition"] = abs(got2 - via_single) <= shift_tol * max(1.0, abs(got2))

    # heat identity d_tau Theta = (1/(4 pi i)) d_v^2 Theta, central differences
    h = 1e-4
    dtau = (theta_g1(v, tau + h).value - theta_g1(v, tau - h).value) / (2 * h)
    dv2 = (theta_g1(v + h, tau).value - 2 * th + theta_g1(v - h, tau).value) / (h * h)
    lhs = dtau
    rhs = dv2 / (4j * math.pi)
    report["heat_identity"] = abs(lhs - rhs) <= heat_tol * max(1.0, abs(lhs), abs(rhs))
    report["passed"] = all(v for k, v in report.items() if k != "passed")
    return report


# -- elliptic periods -------------------------------------------------------------


def agm(x: float, y: float) -> float:
    for _ in range(64):
        if x == y or abs(x - y) <= 4e-16 * max(abs(x), abs(y)):
            break
        x, y = 0.5 * (x + y), math.sqrt(x * y)
    return 0.5 * (x + y)


def elliptic_K(m: float) -> float:
    """Complete elliptic integral of the first kind, parameter m = k^2."""
    if not 0 <= m < 1:
        raise ValueError("parameter must lie in [0, 1)")
    return math.pi / (2 * agm(1.0, math.sqrt(1.0 - m)))


def elliptic_E(m: float) -> float:
    """Complete elliptic integral of the second kind via the AGM c-sums."""
    if not 0 <= m < 1:
        raise ValueError("parameter must lie in [0, 1)")
    a, b = 1.0, math.sqrt(1.0 - m)
    c = math.sqrt(m)
    s = 0.5 * c * c
    p = 1.0
    while abs(c) > 1e-17:
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        p *= 2.0
        s += 0.5 * p * c * c
    return math.pi / (2 * a) * (1.0 - s)


def elliptic_periods(roots: tuple[float, float, float]):
    """Periods (A, B) and modulus tau of y^2 = (x-e1)(x-e2)(x-e3) for real
    distinct roots; orientation fixed so Im(tau) > 0."""
    e = sorted(roots, reverse=True)
    e1, e2, e3 = e
    if e1 == e2 or e2 == e3:
        raise ValueError("degenerate elliptic curve")
    s13 = math.sqrt(e1 - e3)
    m = (e2 - e3) / (e1 - e3)
    period_a = 2 * elliptic_K(m) / s13
    period_b = 2 * elliptic_K(1 - m) / s13
    tau = 1j * period_b / period_a
    return period_a, 1j * period_b, tau


# -- non-perturbative correction coefficients -------------------------------------


#: names of the supplied primitive integrals (genus 1: single B-cycle)
INPUT_KEYS = ("D_omega11", "B_omega11",
              "DDD_omega03", "DDB_omega03", "DBB_omega03", "BBB_omega03",
              "DDBB_omega04")


@dataclass
class CycleIntegralInputs:
    """Supplied numeric values of the D/B-slot integrals of omega11, omega03,
    omega04 together with the phase data (phi, mu, tau, rho, epsilon)."""
    integrals: dict[str, complex]
    phi: complex
    mu: complex
    tau: complex
    rho: complex
    epsilon: complex = 0.0
    t_p0: dict[str, complex] = field(default_factory=dict)

    def __post_init__(self):
        if self.tau.imag <= 0:
            raise ValueError("not a Siegel parameter")
        missing = [k for k in INPUT_KEYS if k not in self.integrals]
        if missing:
            raise ValueError(f"incomplete cycle-integral provider: missing {missing}")

    def shifted_by_b(self) -> "CycleIntegralInputs":
        """Inputs for the divisor translated once along the B-cycle: each
        D-slot integral picks up a B-slot by the binomial expansion."""
        g = self.integrals
        new = dict(g)
        new["D_omega11"] = g["D_omega11"] + g["B_omega11"]
        new["DDD_omega03"] = (g["DDD_omega03"] + 3 * g["DDB_omega03"]
                              + 3 * g["DBB_omega03"] + g["BBB_omega03"])
        new["DDB_omega03"] = g["DDB_omega03"] + 2 * g["DBB_omega03"] + g["BBB_omega03"]
        new["DBB_omega03"] = g["DBB_omega03"] + g["BBB_omega03"]
        return CycleIntegralInputs(new, self.phi, self.mu + self.tau, self.tau,
                                   self.rho, self.epsilon, dict(self.t_p0))


def g_coefficient(inputs: CycleIntegralInputs, r: int, k: int) -> complex:
    """Correction coefficient of hbar^r multiplying the k-th theta weight.

    Genus one: all cycle indices coincide, so only the multiplicity k
    matters.  Coefficients beyond k = 3r vanish identically.
    """
    if r not in (0, 1, 2):
        raise ValueError("only orders r <= 2 are assembled from the inputs")
    if k < 0:
        raise ValueError("negative theta weight")
    if k > 3 * r:
        return 0j
    g = inputs.integrals
    if r == 0:
        return 1 + 0j if k == 0 else 0j
    if r == 1:
        if k == 0:
            return g["D_omega11"] + g["DDD_omega03"] / 6
        if k == 1:
            return g["B_omega11"] + g["DDB_omega03"] / 2
        if k == 2:
            return g["DBB_omega03"]
        if k == 3:
            return g["BBB_omega03"]
    # r == 2: only the double-index coefficient is printed/assembled
    if k == 2:
        return (g["B_omega11"] ** 2 / 2
                + g["B_omega11"] * g["DDB_omega03"]
                + g["DDB_omega03"] ** 2 / 8
                + g["DDBB_omega04"] / 2)
    raise ValueError(f"order-2 coefficient with theta weight {k} is not "
                     "assembled from the supplied integrals")


@dataclass
class TransSeries:
    """Map (hbar power r, theta weight k) -> coefficient; equality means all
    sector coefficients equal.  `theta_first` only changes the presentation
    order of the sectors, never the content."""
    terms: dict[tuple[int, int], complex]
    theta_first: bool = False

    def sectors(self):
        keys = self.terms.keys()
        if self.theta_first:
            return sorted(keys, key=lambda rk: (rk[1], rk[0]))
        return sorted(keys, key=lambda rk: (rk[0], rk[1]))

    def reorder(self, theta_first: bool) -> "TransSeries":
        return TransSeries(dict(self.terms), theta_first)

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(abs(c) <= tol for c in self.terms.values())

    def equals(self, other: "TransSeries", tol: float = 0.0) -> bool:
        keys = set(self.terms) | set(other.terms)
        return all(abs(self.terms.get(k, 0j) - other.terms.get(k, 0j)) <= tol
                   for k in keys)

    def evaluate(self, hbar: complex, v: complex, tau: complex,
                 tol: float = THETA_TOL) -> complex:
        total = 0j
        for (r, k), c in self.terms.items():
            total += c * hbar ** r * theta_g1(v, tau, k, tol).value
        return total


# assembled orders: r = 0, 1 complete; r = 2 carries the printed
# double-theta-weight coefficient
NP_SECTORS = ((0, 0), (1, 0), (1, 1), (1, 2), (1, 3), (2, 2))

# Contraction weights: the ordered-tuple sum over B-indices degenerates at
# genus one, so the theta-weight-k sector carries the coefficient of n^k in
# the Fourier picture; for the k-th repeated index that is the printed
# per-tuple value divided by the multiset count.
_SECTOR_WEIGHT = {(0, 0): 1.0, (1, 0): 1.0, (1, 1): 1.0,
                  (1, 2): 0.5, (1, 3): 1.0 / 6.0, (2, 2): 1.0}


def np_sector_coefficient(inputs: CycleIntegralInputs, r: int, k: int) -> complex:
    return _SECTOR_WEIGHT.get((r, k), 1.0) * g_coefficient(inputs, r, k)


def assemble_np_wavefunction(inputs: CycleIntegralInputs, order: int = 2,
                             theta_first: bool = False) -> TransSeries:
    """Trans-series of the non-perturbative wave function relative to its
    exponential prefactor: sum_r hbar^r sum_k (sector coefficient) Theta^(k)(v, tau).

    With degenerate theta data (all arguments frozen and the positive-weight
    coefficients zero) the series collapses to a plain WKB shape."""
    if order > 2:
        raise ValueError("inputs cover corrections through order 2 only")
    terms = {}
    for (r, k) in NP_SECTORS:
        if r <= order:
            terms[(r, k)] = np_sector_coefficient(inputs, r, k)
    return TransSeries(terms, theta_first)


def np_argument(inputs: CycleIntegralInputs, hbar: complex) -> complex:
    """Theta argument v = (rho + phi)/hbar + mu(z)."""
    return (inputs.rho + inputs.phi) / hbar + inputs.mu


# -- monodromy checks --------------------------------------------------------------


def np_monodromy_a_phase(inputs: CycleIntegralInputs, hbar: complex) -> complex:
    """A-cycle translation: theta is 1-periodic, the phase is purely the
    filling-fraction exponential."""
    return cmath.exp(TWO_PI_I * inputs.epsilon / hbar)


def np_monodromy_cp_phase(inputs: CycleIntegralInputs, hbar: complex,
                          pole: str, at_base: bool) -> complex:
    t0 = inputs.t_p0.get(pole, 0j)
    sign = -1.0 if at_base else 1.0
    return sign * cmath.exp(TWO_PI_I * t0 / hbar)


def np_monodromy_b_sectors(inputs: CycleIntegralInputs, hbar: complex,
                           order: int = 1, tol: float = THETA_TOL):
    """Sector-by-sector check data for the B-cycle translation.

    Translating the divisor endpoint along B shifts the theta argument by
    tau, binomially mixes D-slots into B-slots inside the correction
    coefficients, and multiplies the exponential prefactor by
    exp(2 pi i phi / hbar) * exp(2 pi i mu + pi i tau); the composite must be
    exp(-2 pi i rho / hbar) times the original, order by order in hbar.
    Orders r <= 1 close on the supplied integrals (order 2 would need the
    second-order two-B-slot primitives that are not part of the inputs).
    """
    if order > 1:
        raise ValueError("B-translation closes on the supplied integrals only "
                         "through order 1")
    v = np_argument(inputs, hbar)
    tau = inputs.tau
    shifted_inputs = inputs.shifted_by_b()
    pref = (cmath.exp(TWO_PI_I * inputs.phi / hbar)
            * cmath.exp(TWO_PI_I * inputs.mu + 1j * math.pi * tau))
    target_phase = cmath.exp(-TWO_PI_I * inputs.rho / hbar)
    pairs = []
    for r in range(order + 1):
        lhs = 0j
        rhs = 0j
        for k in range(0, 3 * r + 1):
            th_shift = theta_g1(v + tau, tau, k, tol).value
            lhs += np_sector_coefficient(shifted_inputs, r, k) * th_shift
            rhs += np_sector_coefficient(inputs, r, k) * theta_g1(v, tau, k, tol).value
        pairs.append((pref * lhs, target_phase * rhs))
    return pairs
