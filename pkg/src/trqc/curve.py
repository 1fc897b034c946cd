"""Admissible genus-0 spectral curves with a rational parametrization.

A curve is the data of rational x(z), y(z) on the z-sphere together with
the derived invariants: the plane-curve coefficients P_l(lam), the poles of
y dx with their canonical local coordinates and spectral times, and the
simple ramification points with their deck involutions.  Everything is
exact over the rationals; curves whose ramification points or canonical
coordinates leave the rationals are rejected with explicit errors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cas import (INF, LaurentSeries, Poly, QQ, RationalFunction, expand_at,
                  eval_poly_at_series, poly_gcd, series_residue)

Z, LAM = "z", "lam"


class CurveError(ValueError):
    pass


@dataclass(frozen=True)
class PolePoint:
    z_value: object            # Fraction or INF
    base_point: object         # lam-value: Fraction or INF
    d_p: int                   # local degree of x
    r_p: int                   # pole order of y dx
    times: tuple[Fraction, ...]  # t_{p,0} .. t_{p, r_p-1}
    label: str

    def time(self, k: int) -> Fraction:
        if 0 <= k < len(self.times):
            return self.times[k]
        return QQ(0)


@dataclass(frozen=True)
class RamPoint:
    z_value: Fraction
    critical_value: Fraction
    involution: LaurentSeries   # sigma(a + t) - a as a series in t

    def sigma_coeff(self, k: int) -> Fraction:
        if self.involution.min_exp <= k <= self.involution.order:
            return QQ(self.involution.coefficient(k))
        return QQ(0)


@dataclass
class CurveSpec:
    """Input data: a rational parametrization plus optional declared
    coefficients and options (consumed from the text format of trqc.io)."""
    name: str
    x: RationalFunction
    y: RationalFunction
    declared_P: list[RationalFunction] | None = None
    order: int = 5
    chi_max: int | None = None
    strict_admissibility: bool = False
    expansion_depth: int | None = None


@dataclass
class SpectralCurve:
    name: str
    x: RationalFunction
    y: RationalFunction
    d: int
    P: list[RationalFunction]          # P[0] = 1, P[l] rational in lam
    poles: list[PolePoint]
    ramification: list[RamPoint]
    depth: int

    def xp(self) -> RationalFunction:
        return self.x.derivative(Z)

    def yp(self) -> RationalFunction:
        return self.y.derivative(Z)

    def base_poles(self) -> list[object]:
        """Distinct lam-values under the poles of y dx."""
        seen = []
        for p in self.poles:
            if not any(_same_point(p.base_point, s) for s in seen):
                seen.append(p.base_point)
        return seen

    def pole_orders_of_P(self) -> dict[object, list[int]]:
        """r_P^(l): pole order of P_l at each base pole (index l from 1)."""
        out = {}
        for bp in self.base_poles():
            orders = []
            for l in range(1, self.d + 1):
                orders.append(_pole_order(self.P[l], bp))
            out[_point_key(bp)] = orders
        return out

    def content_key(self) -> str:
        bits = [self.name, str(self.x), str(self.y)]
        return "|".join(bits)


def _same_point(a, b) -> bool:
    if a is INF or b is INF:
        return a is b
    return QQ(a) == QQ(b)


def _point_key(p) -> str:
    return "inf" if p is INF else str(QQ(p))


def _pole_order(f: RationalFunction, point) -> int:
    if f.is_zero():
        return 0
    if point is INF:
        return max(0, f.num.degree_in(LAM) - f.den.degree_in(LAM))
    s = expand_at(f, LAM, QQ(point), 0)
    return max(0, -s.min_exp) if not s.is_zero() else 0


# -- local expansion helpers --------------------------------------------------------


def local_series(f: RationalFunction, z_value, order: int) -> LaurentSeries:
    """Expansion of f(z) in the local uniformizer u (u = z - a or u = 1/z)."""
    return expand_at(f, Z, INF if z_value is INF else QQ(z_value), order)


def ydx_series(curve_x: RationalFunction, curve_y: RationalFunction,
               z_value, order: int) -> LaurentSeries:
    """Series of y dx / du in the local uniformizer at z_value."""
    integrand = curve_y * curve_x.derivative(Z)
    s = local_series(integrand, z_value, order + 2)
    if z_value is INF:
        # z = 1/u: dz = -du/u^2
        return (-s).shift(-2).truncate(order)
    return s.truncate(order)


def canonical_coordinate(curve_x: RationalFunction, z_value, base_point,
                         d_p: int, order: int) -> LaurentSeries:
    """zeta_p(u) = xi_P(x(z))^(1/d_p) as a series in the local uniformizer."""
    if base_point is INF:
        xi = curve_x.inverse()
    else:
        xi = curve_x - QQ(base_point)
    s = local_series(xi, z_value, order + d_p)
    if s.is_zero() or s.min_exp != d_p:
        raise CurveError("local degree mismatch while building the canonical "
                         f"coordinate at {z_value}")
    try:
        return s.nth_root(d_p).truncate(order)
    except ValueError as exc:
        raise CurveError(f"canonical coordinate at {z_value} needs an "
                         f"irrational {d_p}-th root: {exc}") from exc


# -- construction -------------------------------------------------------------------


def _rational_roots(p: Poly, var: str) -> list[tuple[Fraction, int]]:
    """Rational roots with multiplicities; raises if irrational factors of
    positive degree remain."""
    coeffs = {k: (c.constant_value() if not c.is_constant() or True else c)
              for k, c in p.as_univariate(var).items()}
    coeffs = {k: v.constant_value() for k, v in p.as_univariate(var).items()}
    if any(not c.is_constant() for c in p.as_univariate(var).values()):
        raise CurveError("root finding expects a univariate polynomial")
    # scale to integer coefficients
    from math import gcd, lcm
    den = 1
    for c in coeffs.values():
        den = lcm(den, c.denominator)
    ic = {k: int(c * den) for k, c in coeffs.items()}
    n = max(ic)
    roots: list[tuple[Fraction, int]] = []

    def content(d: dict[int, int]) -> int:
        g = 0
        for v in d.values():
            g = gcd(g, abs(v))
        return g or 1

    work = dict(ic)
    # strip zero root
    mult0 = 0
    while work and min(work) > 0:
        work = {k - 1: v for k, v in work.items()}
        mult0 += 1
    if mult0:
        roots.append((QQ(0), mult0))
    while work and max(work) > 0:
        a0 = work.get(0, 0)
        an = work[max(work)]
        if a0 == 0:
            work = {k - 1: v for k, v in work.items() if k >= 1}
            if roots and roots[0][0] == 0:
                roots[0] = (QQ(0), roots[0][1] + 1)
            else:
                roots.insert(0, (QQ(0), 1))
            continue
        found = None
        for pnum in _divisors(abs(a0)):
            for qden in _divisors(abs(an)):
                for sign in (1, -1):
                    cand = QQ(sign * pnum, qden)
                    if _eval_int_poly(work, cand) == 0:
                        found = cand
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            raise CurveError("ramification data requires irrational algebraic "
                             "numbers; only rational ramification points are "
                             "supported")
        work = _deflate(work, found)
        for i, (r, m) in enumerate(roots):
            if r == found:
                roots[i] = (r, m + 1)
                break
        else:
            roots.append((found, 1))
    return roots


def _divisors(n: int) -> list[int]:
    n = abs(n)
    if n == 0:
        return [1]
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i != n // i:
                out.append(n // i)
        i += 1
    return sorted(out)


def _eval_int_poly(d: dict[int, int], x: Fraction) -> Fraction:
    total = QQ(0)
    for k, c in d.items():
        total += c * x ** k
    return total


def _deflate(d: dict[int, int], root: Fraction) -> dict[int, int]:
    """Synthetic division by (x - root), rescaled to integer coefficients."""
    n = max(d)
    b = {}
    acc = QQ(0)
    for k in range(n, -1, -1):
        acc = acc * root + d.get(k, 0)
        if k:
            b[k - 1] = acc
    from math import lcm
    den = 1
    for v in b.values():
        den = lcm(den, QQ(v).denominator)
    return {k: int(QQ(v) * den) for k, v in b.items()}


def _sylvester_resultant(u: Poly, v: Poly, var: str) -> Poly:
    """Resultant eliminating `var`, by fraction-free Bareiss elimination."""
    du = u.degree_in(var)
    dv = v.degree_in(var)
    if du == 0:
        return u ** dv
    if dv == 0:
        return v ** du
    uc = u.as_univariate(var)
    vc = v.as_univariate(var)
    n = du + dv
    M: list[list[Poly]] = []
    for i in range(dv):
        row = [Poly.zero()] * n
        for k, c in uc.items():
            row[i + du - k] = c
        M.append(row)
    for i in range(du):
        row = [Poly.zero()] * n
        for k, c in vc.items():
            row[i + dv - k] = c
        M.append(row)
    # Bareiss
    from .cas.poly import exact_divide
    sign = 1
    prev = Poly.one()
    for k in range(n - 1):
        if M[k][k].is_zero():
            swap = None
            for r in range(k + 1, n):
                if not M[r][k].is_zero():
                    swap = r
                    break
            if swap is None:
                return Poly.zero()
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = M[i][j] * M[k][k] - M[i][k] * M[k][j]
                q = exact_divide(num, prev)
                assert q is not None, "Bareiss division must be exact"
                M[i][j] = q
            M[i][k] = Poly.zero()
        prev = M[k][k]
    return M[n - 1][n - 1] * sign


def curve_polynomial(x: RationalFunction, y: RationalFunction) -> list[RationalFunction]:
    """Coefficients P_l(lam) of the monic plane curve satisfied by (x, y),
    eliminating z by a resultant."""
    lam = Poly.var(LAM)
    yy = Poly.var("y")
    u = x.num - lam * x.den            # numerator of x(z) - lam
    v = y.num - yy * y.den             # numerator of y(z) - y
    res = _sylvester_resultant(u, v, Z)
    if res.is_zero():
        raise CurveError("degenerate parametrization: vanishing resultant")
    by_y = res.as_univariate("y")
    d = max(by_y)
    lead = by_y[d]
    out = [RationalFunction.one()]
    for l in range(1, d + 1):
        c = by_y.get(d - l, Poly.zero())
        sign = QQ(-1) ** l
        out.append(RationalFunction(c, lead) * sign)
    return out


def load_curve(spec: CurveSpec) -> SpectralCurve:
    x, y = spec.x, spec.y
    if set(x.variables()) - {Z} or set(y.variables()) - {Z}:
        raise CurveError("parametrization must be rational in the uniformizer only")
    d = max(x.num.degree_in(Z), x.den.degree_in(Z))
    if d < 2:
        raise CurveError("degree of the cover must be at least 2")
    P = curve_polynomial(x, y)
    if len(P) - 1 != d:
        raise CurveError("parametrization not birational: curve degree "
                         f"{len(P) - 1} differs from cover degree {d}")
    # the parametrization satisfies the curve identically
    acc = RationalFunction.zero()
    for l in range(0, d + 1):
        acc = acc + QQ(-1) ** l * y ** (d - l) * P[l].subs({LAM: x})
    if not acc.is_zero():
        raise CurveError("parametrization does not satisfy curve")
    if spec.declared_P is not None:
        if len(spec.declared_P) != d:
            raise CurveError("declared coefficient count differs from the degree")
        for l, dp in enumerate(spec.declared_P, start=1):
            if not (dp - P[l]).is_zero():
                raise CurveError(f"declared P_{l} does not match the "
                                 "parametrization")
    _check_birational(x, y)

    # poles of y dx
    depth = spec.expansion_depth or 0
    pole_zs = _pole_locations(x, y)
    # provisional depth from pole orders
    prelim = []
    for zv in pole_zs:
        s = ydx_series(x, y, zv, 0)
        r_p = max(0, -s.min_exp)
        prelim.append((zv, r_p))
    max_r = max((r for _, r in prelim), default=0)
    if depth <= 0:
        depth = 2 * max_r + 16
    poles = []
    for zv, r_p in prelim:
        if r_p == 0:
            continue
        poles.append(_build_pole(x, y, zv, depth))
    total = sum((p.time(0) for p in poles), QQ(0))
    if total != 0:
        raise CurveError("sum of residues of y dx does not vanish: "
                         "inconsistent pole data")

    ram = _ramification_points(x, y, poles, depth)
    return SpectralCurve(spec.name, x, y, d, P, poles, ram, depth)


def _pole_locations(x: RationalFunction, y: RationalFunction) -> list[object]:
    """Candidate z-locations of poles of y dx (finite rational plus infinity)."""
    form = y * x.derivative(Z)
    den = form.den
    locs: list[object] = []
    for root, _ in _rational_roots(den, Z) if not den.is_constant() else []:
        locs.append(root)
    locs.append(INF)
    return locs


def _build_pole(x: RationalFunction, y: RationalFunction, zv, depth: int) -> PolePoint:
    s = ydx_series(x, y, zv, depth)
    r_p = max(0, -s.min_exp)
    # base point
    if zv is INF:
        xval = _value_at(x, INF)
    else:
        xval = _value_at(x, zv)
    d_p = _local_degree(x, zv, xval)
    zeta = canonical_coordinate(x, zv, xval, d_p, depth)
    # times: t_k = Res_u( zeta^k * ydx )
    times = []
    for k in range(0, r_p):
        zk = zeta ** k if k else LaurentSeries.constant(zeta.var, QQ(1), zeta.order)
        times.append(QQ(series_residue((zk * s).truncate(min(zk.order + s.min_exp, s.order)))))
    # analytic remainder check: ydx - sum t_k zeta^(-k-1) zeta' du analytic
    zp = zeta.derivative()
    rem = s
    for k, t in enumerate(times):
        if t == 0:
            continue
        rem = rem - (zeta ** (-k - 1) * zp) * t
    if not rem.is_zero() and rem.min_exp < 0:
        raise CurveError(f"expansion too short at pole {zv}: singular remainder")
    label = f"z={'inf' if zv is INF else QQ(zv)}"
    return PolePoint(zv, xval, d_p, r_p, tuple(times), label)


def _value_at(f: RationalFunction, zv):
    if zv is INF:
        dn = f.num.degree_in(Z)
        dd = f.den.degree_in(Z)
        if dn > dd:
            return INF
        s = expand_at(f, Z, INF, 0)
        return QQ(0) if s.is_zero() or s.min_exp > 0 else QQ(s.coefficient(0))
    d = f.den.eval_rational({Z: QQ(zv)})
    if d == 0:
        return INF
    return f.eval_rational({Z: QQ(zv)})


def _local_degree(x: RationalFunction, zv, base) -> int:
    if base is INF:
        xi = x.inverse()
    else:
        xi = x - QQ(base)
    s = local_series(xi, zv, 8)
    while s.is_zero():
        s = local_series(xi, zv, s.order + 8)
    return s.min_exp


def _ramification_points(x, y, poles, depth: int) -> list[RamPoint]:
    xp = x.derivative(Z)
    pole_zs = [p.z_value for p in poles]
    if xp.is_zero():
        raise CurveError("constant x")
    out = []
    num = xp.num
    if num.degree_in(Z) > 0:
        for root, mult in _rational_roots(num, Z):
            if any(_same_point(root, pz) for pz in pole_zs):
                continue
            if x.den.eval_rational({Z: root}) == 0:
                continue
            if mult != 1:
                raise CurveError("unsupported ramification profile: dx has a "
                                 f"multiple zero at z={root}")
            inv = _deck_series(x, root, depth)
            out.append(RamPoint(root, x.eval_rational({Z: root}),
                                inv))
    # distinct critical values are checked in the admissibility report
    return out


def _deck_series(x: RationalFunction, a: Fraction, order: int) -> LaurentSeries:
    """Series s(t) with sigma(a + t) = a + s(t), solving x(a+s) = x(a+t),
    s = -t + O(t^2), coefficient by coefficient."""
    var = "t"
    a = QQ(a)
    depth = order + 2
    # F(u) := x(a+u) - x(a) = sum_{j>=2} c_j u^j at a simple ramification point
    fa = expand_at(x, Z, a, depth)
    c = {k: QQ(fa.coefficient(k)) for k in range(0, depth + 1)
         if fa.min_exp <= k}
    if fa.min_exp < 0:
        raise CurveError(f"x has a pole at the ramification candidate z={a}")
    c2 = c.get(2, QQ(0))
    if c.get(1, QQ(0)) != 0 or c2 == 0:
        raise CurveError(f"unsupported ramification profile at z={a}")

    def F_of(series: LaurentSeries, upto: int) -> LaurentSeries:
        acc = LaurentSeries.zero(var, upto)
        power = LaurentSeries.constant(var, QQ(1), upto)
        for j in range(1, upto + 1):
            power = (power * series).truncate(upto)
            cj = c.get(j, QQ(0))
            if cj:
                acc = acc + power * cj
            if power.is_zero() or power.min_exp > upto:
                break
        return acc

    coeffs = {1: QQ(-1)}
    for n in range(2, order + 1):
        s_low = LaurentSeries.from_coeff_map(var, dict(coeffs), n + 1)
        lhs = F_of(s_low, n + 1)
        t_series = LaurentSeries.monomial(var, 1, n + 1)
        rhs = F_of(t_series, n + 1)
        gap = QQ(rhs.coefficient(n + 1)) - QQ(lhs.coefficient(n + 1))
        coeffs[n] = gap / (-2 * c2)
    s = LaurentSeries.from_coeff_map(var, coeffs, order)
    # verify x(a + s(t)) = x(a + t) through the requested order
    resid = F_of(s, order) - F_of(LaurentSeries.monomial(var, 1, order), order)
    if not resid.is_zero():
        raise CurveError("deck involution recurrence failed; "
                         "expand deck involution further")
    return s


def _shift_poly(p: Poly, a: Fraction) -> Poly:
    """p(z) -> p(a + t) as a polynomial in t."""
    return p.subs({Z: Poly.var("t") + a})


def deck_involution(curve: SpectralCurve, a: RamPoint, order: int) -> LaurentSeries:
    if order <= curve.depth:
        return a.involution.truncate(order)
    return _deck_series(curve.x, a.z_value, order)


def spectral_times(curve: SpectralCurve, p: PolePoint) -> list[Fraction]:
    return list(p.times)


def _check_birational(x: RationalFunction, y: RationalFunction) -> None:
    for sample in (QQ(5), QQ(7), QQ(11), QQ(13)):
        try:
            xv = x.eval_rational({Z: sample})
            yv = y.eval_rational({Z: sample})
        except ZeroDivisionError:
            continue
        u = (x - xv).num
        v = (y - yv).num
        g = poly_gcd(u, v)
        if g.degree_in(Z) == 1:
            return
    raise CurveError("parametrization not birational")


# -- admissibility -----------------------------------------------------------------


@dataclass
class AdmissibilityReport:
    curve: str
    conditions: dict[str, bool] = field(default_factory=dict)
    strict_ramified: bool = True
    strict_all_poles: bool = True
    generalized: bool = True
    delta: dict[str, dict[int, int]] = field(default_factory=dict)
    verdict: str = ""
    notes: list[str] = field(default_factory=list)

    @property
    def admissible(self) -> bool:
        return self.verdict.startswith("admissible")


def check_admissibility(curve: SpectralCurve,
                        strict_mode: bool = False) -> AdmissibilityReport:
    """Literal and generalized admissibility.

    The literal test demands r_p >= 3 and t_{p, r_p - 2} != 0 at ramified
    poles (reported separately for the all-poles reading, which differs on
    curves with unramified poles of low order).  The generalized test asks
    that, at every ramified pole, the pole order delta_beta of
    (1 - sigma^beta) y dx is at least 3 for each nontrivial deck power;
    this is what the residue-vanishing argument actually needs.
    """
    rep = AdmissibilityReport(curve.name)

    # irreducibility via birationality of the parametrization
    try:
        _check_birational(curve.x, curve.y)
        rep.conditions["irreducible"] = True
    except CurveError:
        rep.conditions["irreducible"] = False

    # simple ramification was enforced during loading (errors otherwise)
    rep.conditions["simple_ramification"] = True

    # distinct critical values
    cvs = [a.critical_value for a in curve.ramification]
    rep.conditions["distinct_critical_values"] = len(set(cvs)) == len(cvs)

    # smoothness: dy does not vanish at ramification points
    yp = curve.yp()
    smooth = True
    for a in curve.ramification:
        try:
            val = yp.eval_rational({Z: a.z_value})
        except ZeroDivisionError:
            val = None
        if val == 0:
            smooth = False
            rep.notes.append(f"dy vanishes at ramification point z={a.z_value}")
    rep.conditions["smooth_ramification"] = smooth

    for p in curve.poles:
        ramified = p.d_p >= 2
        literal = p.r_p >= 3 and p.time(p.r_p - 2) != 0
        if not literal:
            rep.strict_all_poles = False
            if ramified:
                rep.strict_ramified = False
        if ramified:
            deltas = {}
            for beta in range(1, p.d_p):
                delta = 0
                for k in range(p.r_p - 1, -1, -1):
                    if p.time(k) != 0 and (k * beta) % p.d_p != 0:
                        delta = k + 1
                        break
                deltas[beta] = delta
                if delta < 3:
                    rep.generalized = False
                    rep.notes.append(
                        f"pole {p.label}: (1 - sigma^{beta}) y dx has pole "
                        f"order {delta} < 3")
            rep.delta[p.label] = deltas

    base_ok = all(rep.conditions.values())
    if not base_ok:
        rep.verdict = "inadmissible"
    elif rep.strict_ramified and (rep.strict_all_poles or not strict_mode):
        rep.verdict = "admissible (strict)" if rep.strict_ramified and rep.strict_all_poles \
            else ("inadmissible" if strict_mode else "admissible (strict, ramified poles)")
    elif rep.generalized and not strict_mode:
        rep.verdict = "admissible (generalized)"
    elif rep.generalized and strict_mode:
        rep.verdict = "inadmissible"
    else:
        rep.verdict = "inadmissible"

    if base_ok and not rep.strict_ramified and rep.generalized:
        rep.notes.append(
            "literal condition t_{p, r_p-2} != 0 fails at a ramified pole while "
            "the generalized residue-vanishing criterion holds; the literal "
            "reading rejects standard examples (e.g. the Airy curve).")
    if rep.strict_ramified and not rep.strict_all_poles:
        rep.notes.append(
            "the all-poles reading of the literal condition fails at an "
            "unramified pole; the ramified-poles reading passes (both are "
            "reported, neither is guessed).")
    return rep


# -- shipped fixtures ---------------------------------------------------------------


def airy_spec(order: int = 6) -> CurveSpec:
    z = RationalFunction.var(Z)
    return CurveSpec("airy", z ** 2, z, order=order)


def gaussian_spec(order: int = 5) -> CurveSpec:
    z = RationalFunction.var(Z)
    return CurveSpec("gaussian", z + 1 / z, z - 1 / z, order=order)


def higher_airy_spec(order: int = 5) -> CurveSpec:
    z = RationalFunction.var(Z)
    return CurveSpec("higher_airy", z ** 3 - 3 * z, z, order=order)
