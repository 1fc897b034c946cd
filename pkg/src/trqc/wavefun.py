"""Wave functions as WKB data on the curve.

The log-derivative of the regularized wave function, the family of
higher wave-function ratios, the residue-form KZ verification, the generic
two-point-divisor KZ verification with unit charges, and the formal
monodromy phases.  Everything is an hbar-series whose coefficients are
exact rational functions of the uniformizer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cas import INF, HbarSeries, Poly, QQ, RationalFunction, expand_at
from .curve import PolePoint, SpectralCurve
from .funfield import solve_linear
from .loop_eqs import LoopSystem, Spectators, VerificationReport
from .recursion import SLOT_VARS, OmegaTable, make_key

Z = "z"


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


class WaveSystem:
    """Wave-function data for one curve, one base branch and one hbar order."""

    def __init__(self, table: OmegaTable, order: int = 5):
        self.table = table
        self.curve = table.curve
        self.base = table.base
        self.order = order
        self.loop = LoopSystem(table)
        self._ratio_cache: dict[int, HbarSeries] = {}
        self._m_cache: HbarSeries | None = None

    # -- WKB log-derivative -----------------------------------------------------------

    def prime_form_term(self) -> RationalFunction:
        """d/dlam of the log of the regularization factor (the (0,2) part of
        the wave function): rational, with the base-branch puncture."""
        x = self.curve.x
        xp = x.derivative(Z)
        xpp = xp.derivative(Z)
        term = xpp / (2 * xp)
        if self.base.z_value is not INF:
            zv = QQ(self.base.z_value)
            term = term + (RationalFunction.var(Z) - zv).inverse()
        return -(term / xp)

    def wkb_log_derivative(self) -> HbarSeries:
        """M = d/dlam log psi-reg, exponents -1..order, coefficients in Q(z)."""
        if self._m_cache is not None:
            return self._m_cache
        coeffs: dict[int, RationalFunction] = {}
        xp = self.curve.xp()
        zvar = RationalFunction.var(Z)
        for k in range(-1, self.order + 1):
            acc = RationalFunction.zero()
            for h in range(0, (k + 2) // 2 + 1):
                n = k + 2 - 2 * h
                if n < 1 or (h, n) == (0, 2):
                    continue
                key = make_key(h, 1, (), ("w1",) * (n - 1))
                value = self.table.entry(key)
                value = value.subs({SLOT_VARS[0]: zvar, "w1": zvar})
                acc = acc + value * QQ(1, _factorial(n - 1))
            acc = acc / xp
            if k == 0:
                acc = acc + self.prime_form_term()
            if not acc.is_zero():
                coeffs[k] = acc
        self._m_cache = HbarSeries(coeffs, self.order)
        return self._m_cache

    # -- wave-function ratios -----------------------------------------------------------

    def psi_ratio(self, l: int) -> HbarSeries:
        """psi_l-reg / psi-reg as an hbar-series of rational functions."""
        got = self._ratio_cache.get(l)
        if got is not None:
            return got
        if l == 0:
            out = HbarSeries.constant(RationalFunction.one(), self.order)
            self._ratio_cache[l] = out
            return out
        coeffs: dict[int, RationalFunction] = {}
        zvar = RationalFunction.var(Z)
        for weight in range(0, self.order + 1):
            acc = RationalFunction.zero()
            for h in range(0, weight // 2 + 1):
                n = weight - 2 * h
                qv = self.loop.qhat(h, n, l, Spectators(integrated=n))
                if qv.is_zero():
                    continue
                qv = qv.subs({"w1": zvar})
                acc = acc + qv * QQ(1, _factorial(n))
            if not acc.is_zero():
                coeffs[weight] = acc
        out = HbarSeries(coeffs, self.order)
        self._ratio_cache[l] = out
        return out

    def psi_family(self) -> list[HbarSeries]:
        return [self.psi_ratio(l) for l in range(self.curve.d)]

    # -- derivative helpers ---------------------------------------------------------------

    def d_lam(self, f: RationalFunction) -> RationalFunction:
        return f.derivative(Z) / self.curve.xp()

    def d_lam_series(self, s: HbarSeries) -> HbarSeries:
        return s.map_coeffs(lambda c: self.d_lam(RationalFunction.of(c)))

    # -- regularized KZ ----------------------------------------------------------------------

    def kz_rhs(self, l: int) -> HbarSeries:
        """Residue-form right-hand side of the regularized KZ equation for
        psi_l, divided by psi-reg."""
        orders = self.curve.pole_orders_of_P()
        xz = self.curve.x
        coeffs: dict[int, RationalFunction] = {}
        for weight in range(0, self.order + 1):
            acc = RationalFunction.zero()
            for h in range(0, weight // 2 + 1):
                n = weight - 2 * h
                F = self.loop.q(h, n, l + 1, Spectators(integrated=n))
                if F.is_zero():
                    continue
                piece = RationalFunction.zero()
                for bp in self.curve.base_poles():
                    key = "inf" if bp is INF else str(QQ(bp))
                    r = orders[key][l]  # pole order of P_{l+1}
                    ks = range(0, r + 1) if bp is INF else range(1, r + 1)
                    if not ks:
                        continue
                    exp = expand_at(F, "lam", INF if bp is INF else QQ(bp), 0)
                    for k in ks:
                        if -k > exp.order or -k < exp.min_exp:
                            c = None
                        else:
                            c = exp.coefficient(-k)
                        if c is None or (isinstance(c, (int, Fraction)) and c == 0):
                            continue
                        c = RationalFunction.of(c)
                        if c.is_zero():
                            continue
                        if bp is INF:
                            xi_pow = xz ** k
                        else:
                            xi_pow = (xz - QQ(bp)) ** (-k)
                        acc_term = xi_pow * c.subs({"w1": RationalFunction.var(Z)})
                        piece = piece + acc_term
                acc = acc + piece * QQ(1, _factorial(n))
            if not acc.is_zero():
                coeffs[weight] = acc
        return HbarSeries(coeffs, self.order)

    def verify_kz_regularized(self, l: int, order: int | None = None) -> VerificationReport:
        """LHS hbar dpsi_l/dx + psi_{l+1} against the residue-form RHS,
        exactly, order by order in hbar after dividing by psi-reg."""
        order = min(order if order is not None else self.order, self.order)
        rep = VerificationReport(f"kz_regularized l={l}")
        ratio_l = self.psi_ratio(l)
        ratio_next = self.psi_ratio(l + 1) if l + 1 <= self.curve.d - 1 else \
            HbarSeries.zero(self.order)
        M = self.wkb_log_derivative()
        lhs = self.d_lam_series(ratio_l).shift(1) + ratio_l * M.shift(1) + ratio_next
        rhs = self.kz_rhs(l)
        diff = (lhs - rhs).truncate(order)
        for k in sorted(set(range(-1, order + 1))):
            if k > diff.order:
                continue
            c = diff.coefficient(k)
            ok = (isinstance(c, (int, Fraction)) and c == 0) or \
                (hasattr(c, "is_zero") and c.is_zero())
            rep.add(f"order_{k}", ok, f"residual at hbar^{k}: {c}")
        return rep

    # -- generic two-point divisor KZ (unit charges) ---------------------------------------------

    def verify_kz_generic(self, l: int, order: int = 1,
                          charges: tuple[int, ...] = (1, -1)) -> VerificationReport:
        """KZ equation at the first point of the divisor [z] - [w], exactly
        in both uniformizer symbols.  Only unit charges are supported."""
        rep = VerificationReport(f"kz_generic l={l}")
        if any(abs(a) != 1 for a in charges):
            raise ValueError("full KZ with charge corrections not implemented")
        if len(charges) != 2 or sum(charges) != 0:
            raise ValueError("only two-point degree-zero divisors are implemented")
        order = min(order, self.order)
        zvar = RationalFunction.var(Z)
        wvar = RationalFunction.var("zw")
        x1 = self.curve.x
        x2 = self.curve.x.subs({Z: wvar})
        xp = self.curve.xp()

        ratio1 = [self._divisor_ratio(ll, order, marked_second=False)
                  for ll in range(self.curve.d + 1)]
        ratio2 = [self._divisor_ratio(ll, order, marked_second=True)
                  for ll in range(self.curve.d + 1)]

        dlog = self._divisor_dlog(order)
        lhs = (self.d_lam_series(ratio1[l]).shift(1) + ratio1[l] * dlog.shift(1))

        rhs = -ratio1[l + 1]
        mix = (ratio1[l] - ratio2[l]) * (x1 - x2).inverse()
        rhs = rhs + mix.shift(1)  # -hbar * alpha2 * (r1-r2)/(x1-x2), alpha2 = -1
        rhs = rhs + self._qtilde_divisor_term(l, order)

        diff = (lhs - rhs).truncate(order)
        for k in range(-1, order + 1):
            if k > diff.order:
                continue
            c = diff.coefficient(k)
            ok = (isinstance(c, (int, Fraction)) and c == 0) or \
                (hasattr(c, "is_zero") and c.is_zero())
            rep.add(f"order_{k}", ok, f"residual at hbar^{k}: {c}")
        return rep

    def _divisor_spec(self, n: int):
        """(integrated slots against [z]-[w])^n expanded into endpoint labels."""
        out = []
        for j in range(n + 1):
            sign = (-1) ** (n - j)
            mult = _binom(n, j) * sign
            out.append((("w1",) * j + ("w2",) * (n - j), mult))
        return out

    def _divisor_ratio(self, l: int, order: int, marked_second: bool) -> HbarSeries:
        """psi_{l,i}/psi for the divisor [z]-[w]; i is the z-point (or the
        w-point when marked_second)."""
        if l == 0:
            return HbarSeries.constant(RationalFunction.one(), order)
        if l > self.curve.d - 1:
            return HbarSeries.zero(order)
        coeffs: dict[int, RationalFunction] = {}
        zvar = RationalFunction.var(Z)
        wvar = RationalFunction.var("zw")
        for weight in range(0, order + 1):
            acc = RationalFunction.zero()
            for h in range(0, weight // 2 + 1):
                n = weight - 2 * h
                for ends, mult in self._divisor_spec(n):
                    qv = self._qhat_two_ends(h, l, ends.count("w1"),
                                             ends.count("w2"))
                    if qv.is_zero():
                        continue
                    acc = acc + qv * QQ(mult, _factorial(n))
            if acc.is_zero():
                continue
            if marked_second:
                acc = acc.subs({Z: wvar})
            acc = acc.subs({"w1": zvar, "w2": wvar})
            coeffs[weight] = acc
        return HbarSeries(coeffs, order)

    def _qhat_two_ends(self, h: int, l: int, e1: int, e2: int) -> RationalFunction:
        spec = Spectators(integrated=e1 + e2)
        # recompute with explicit two-label endpoint split
        return self.loop.partition_sum(
            "punctured", l, h,
            _TwoEndSpec(e1, e2)) if l <= self.curve.d - 1 else RationalFunction.zero()

    def _divisor_dlog(self, order: int) -> HbarSeries:
        """d/dx(z) of log psi(D) for D = [z]-[w], as an hbar-series.

        The minimum exponent -1 carries y(z); the hbar^0 term contains the
        diagonal-subtracted second-kind integral."""
        zvar = RationalFunction.var(Z)
        wvar = RationalFunction.var("zw")
        x = self.curve.x
        xp = self.curve.xp()
        coeffs: dict[int, RationalFunction] = {}
        coeffs[-1] = self.curve.y
        xw = x.subs({Z: wvar})
        diag = xp.derivative(Z) / (2 * xp) \
            - ((zvar - wvar).inverse() - xp / (x - xw))
        coeffs[0] = diag / xp
        for k in range(1, order + 1):
            acc = RationalFunction.zero()
            for h in range(0, (k + 2) // 2 + 1):
                n = k + 2 - 2 * h
                if n < 1 or (h, n) == (0, 2):
                    continue
                for ends, mult in self._divisor_spec(n - 1):
                    key = make_key(h, 1, (), ends)
                    value = self.table.entry(key)
                    value = value.subs({SLOT_VARS[0]: zvar})
                    acc = acc + value * QQ(mult, _factorial(n - 1))
            if acc.is_zero():
                continue
            acc = (acc / xp).subs({"w1": zvar, "w2": wvar})
            coeffs[k] = acc
        return HbarSeries(coeffs, order)

    def _qtilde_divisor_term(self, l: int, order: int) -> HbarSeries:
        """sum over (h,n) of hbar^(2h+n)/n! (int_D)^n tildeQ^(l+1)(x(z); .)."""
        zvar = RationalFunction.var(Z)
        wvar = RationalFunction.var("zw")
        lam = RationalFunction.var("lam")
        xz = self.curve.x
        coeffs: dict[int, RationalFunction] = {}
        for weight in range(0, order + 1):
            acc_lam = RationalFunction.zero()
            for h in range(0, weight // 2 + 1):
                n = weight - 2 * h
                # bulk term: (int_D)^n Q^(l+1)(lam)/(dlam)^(l+1)
                bulk = RationalFunction.zero()
                for ends, mult in self._divisor_spec(n):
                    e1 = ends.count("w1")
                    e2 = ends.count("w2")
                    qv = self.loop.partition_sum("full", l + 1, h,
                                                 _TwoEndSpec(e1, e2)) \
                        if l + 1 <= self.curve.d else RationalFunction.zero()
                    if qv.is_zero():
                        continue
                    bulk = bulk + qv * QQ(mult)
                term = bulk
                # subtraction: n * [hatQ^(l)(s; (int_D)^(n-1)) / (lam - x(s))]
                # evaluated between the endpoints
                if n >= 1:
                    subpiece = RationalFunction.zero()
                    for ends, mult in self._divisor_spec(n - 1):
                        if l > self.curve.d - 1:
                            continue
                        if l == 0:
                            qh = RationalFunction.one() \
                                if (h, len(ends)) == (0, 0) else RationalFunction.zero()
                        else:
                            qh = self.loop.partition_sum(
                                "punctured", l, h,
                                _TwoEndSpec(ends.count("w1"), ends.count("w2")))
                        if qh.is_zero():
                            continue
                        subpiece = subpiece + qh * QQ(mult)
                    if not subpiece.is_zero():
                        at_z = subpiece / (lam - xz)
                        at_w = subpiece.subs({Z: wvar}) / (lam - xz.subs({Z: wvar}))
                        term = term - QQ(n) * (at_z - at_w)
                acc_lam = acc_lam + term * QQ(1, _factorial(n))
            if acc_lam.is_zero():
                continue
            val = acc_lam.subs({"w1": zvar, "w2": wvar})
            val = val.subs({"lam": xz})
            coeffs[weight] = val
        return HbarSeries(coeffs, order)

    # -- monodromy ----------------------------------------------------------------------------

    def monodromy_phase(self, p: PolePoint) -> "MonodromyPhase":
        sign = -1 if p.label == self.base.label else 1
        return MonodromyPhase(p.label, sign, p.time(0))


class _TwoEndSpec(Spectators):
    """Spectator block with two endpoint labels (w1^e1, w2^e2)."""

    def __init__(self, e1: int, e2: int):
        super().__init__(numeric=(), symbolic=(), integrated=e1 + e2)
        self._e1 = e1
        self._e2 = e2

    def labels(self):
        return [("end", "w1")] * self._e1 + [("end", "w2")] * self._e2


@dataclass(frozen=True)
class MonodromyPhase:
    """Formal phase (-1)^(at base) * exp(2 pi i t_{p,0} / hbar)."""
    pole: str
    sign: int
    exponent: Fraction  # coefficient of 2 pi i / hbar

    def compose(self, other: "MonodromyPhase") -> "MonodromyPhase":
        return MonodromyPhase(f"{self.pole}*{other.pole}",
                              self.sign * other.sign,
                              self.exponent + other.exponent)

    def __str__(self):
        s = "-" if self.sign < 0 else ""
        return f"{s}exp(2*pi*i*({self.exponent})/hbar)"


def _binom(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def total_residue_check(ws: WaveSystem, k: int) -> bool:
    """The k-th log-derivative coefficient times dx is a global rational
    one-form; the sum of all its residues on the sphere must vanish."""
    M = ws.wkb_log_derivative()
    mk = RationalFunction.of(M.coefficient(k))
    if mk.is_zero():
        return True
    form = mk * ws.curve.xp()          # coefficient of dz
    den = form.den
    total = QQ(0)
    from .curve import _rational_roots
    roots = _rational_roots(den, Z) if not den.is_constant() else []
    for root, _ in roots:
        s = expand_at(form, Z, QQ(root), 0)
        if s.min_exp <= -1 <= s.order:
            c = s.coefficient(-1)
            total += QQ(c) if isinstance(c, (int, Fraction)) else c.constant_value()
    s = expand_at(form, Z, INF, 2)
    # residue at infinity of f dz = -coefficient of z^{-1}
    if s.min_exp <= 1 <= s.order:
        c = s.coefficient(1)
        total -= QQ(c) if isinstance(c, (int, Fraction)) else c.constant_value()
    return total == 0
