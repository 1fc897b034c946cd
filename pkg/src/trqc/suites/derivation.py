"""Formal derivations on polynomial rings, given by their action on generators.

A derivation maps each generator to a polynomial image and extends to the
ring by linearity and the Leibniz rule; generators without a listed action
are annihilated.  Rational functions are handled by the quotient rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..cas import Poly, RationalFunction


class FormalDerivation:
    def __init__(self, name: str, actions: dict[str, Poly]):
        self.name = name
        self.actions = dict(actions)

    def apply_poly(self, p: Poly) -> Poly:
        out = Poly.zero()
        for gen, image in self.actions.items():
            if gen in p.vars:
                d = p.derivative(gen)
                if not d.is_zero():
                    out = out + d * image
        return out

    def apply(self, x):
        if isinstance(x, Poly):
            return self.apply_poly(x)
        if isinstance(x, RationalFunction):
            dn = self.apply_poly(x.num)
            dd = self.apply_poly(x.den)
            if dd.is_zero():
                return RationalFunction(dn, x.den)
            return RationalFunction(dn * x.den - x.num * dd, x.den * x.den)
        raise TypeError(f"cannot derive object of type {type(x)!r}")

    def __call__(self, x):
        return self.apply(x)

    def power(self, x, k: int):
        for _ in range(k):
            x = self.apply(x)
        return x


class LocalizedPoly:
    """Element N / ((pole)^a * (unit)^b) of a polynomial ring localized at a
    linear pole polynomial and an invertible scalar generator.

    Identity checks with entries rational in 1/(lam-q) and 1/hbar clear
    denominators into this ring; the zero test is the numerator's
    zero-normal-form, no polynomial gcd ever runs.
    """

    __slots__ = ("num", "a", "b", "ring")

    def __init__(self, ring: "LocalRing", num: Poly, a: int = 0, b: int = 0):
        # peel off exact pole factors to keep degrees small
        while a > 0 and not num.is_zero():
            q = ring.try_divide_pole(num)
            if q is None:
                break
            num, a = q, a - 1
        if num.is_zero():
            a = b = 0
        self.ring = ring
        self.num = num
        self.a = a
        self.b = b

    def _align(self, other: "LocalizedPoly"):
        a = max(self.a, other.a)
        b = max(self.b, other.b)
        n1 = self.num * self.ring.pole_pow(a - self.a) * self.ring.unit_pow(b - self.b)
        n2 = other.num * self.ring.pole_pow(a - other.a) * self.ring.unit_pow(b - other.b)
        return n1, n2, a, b

    def __add__(self, other):
        other = self.ring.coerce(other)
        n1, n2, a, b = self._align(other)
        return LocalizedPoly(self.ring, n1 + n2, a, b)

    __radd__ = __add__

    def __neg__(self):
        return LocalizedPoly(self.ring, -self.num, self.a, self.b)

    def __sub__(self, other):
        return self + (-self.ring.coerce(other))

    def __rsub__(self, other):
        return (-self) + self.ring.coerce(other)

    def __mul__(self, other):
        other = self.ring.coerce(other)
        return LocalizedPoly(self.ring, self.num * other.num,
                             self.a + other.a, self.b + other.b)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def d_lam(self) -> "LocalizedPoly":
        ring = self.ring
        dn = self.num.derivative(ring.lam_name)
        dpole = ring.pole.derivative(ring.lam_name)  # constant 1 for lam-q
        num = dn * ring.pole - self.num * dpole * self.a
        return LocalizedPoly(ring, num, self.a + 1, self.b)

    def flow(self, deriv: "FormalDerivation") -> "LocalizedPoly":
        ring = self.ring
        dn = deriv.apply_poly(self.num)
        dpole = deriv.apply_poly(ring.pole)
        num = dn * ring.pole - self.num * dpole * self.a
        return LocalizedPoly(ring, num, self.a + 1, self.b)

    def __repr__(self):
        return f"LocalizedPoly(({self.num})/(pole^{self.a} unit^{self.b}))"


class LocalRing:
    def __init__(self, pole: Poly, unit: Poly, lam_name: str):
        if pole.degree_in(lam_name) != 1:
            raise ValueError("localized ring expects a pole linear in the base variable")
        self.pole = pole
        self.unit = unit
        self.lam_name = lam_name
        # pole = c*lam - c*root with c the lam-coefficient; root = lam - pole/c
        co = pole.as_univariate(lam_name)
        c = co[1]
        if not c.is_constant():
            raise ValueError("pole must be monic-able in the base variable")
        cval = c.constant_value()
        self._root = co.get(0, Poly.zero()) * (-1 / cval)
        self._pole_pows = [Poly.one(), pole]
        self._unit_pows = [Poly.one(), unit]

    def pole_pow(self, k: int) -> Poly:
        while len(self._pole_pows) <= k:
            self._pole_pows.append(self._pole_pows[-1] * self.pole)
        return self._pole_pows[k]

    def unit_pow(self, k: int) -> Poly:
        while len(self._unit_pows) <= k:
            self._unit_pows.append(self._unit_pows[-1] * self.unit)
        return self._unit_pows[k]

    def try_divide_pole(self, num: Poly) -> Poly | None:
        """Synthetic division by the linear pole; None if not exact."""
        co = num.as_univariate(self.lam_name)
        if not co:
            return Poly.zero()
        n = max(co)
        if n == 0:
            return None
        c1 = self.pole.as_univariate(self.lam_name)[1].constant_value()
        b = co[n] * (1 / c1)
        quot = {n - 1: b}
        for k in range(n - 1, 0, -1):
            b = (co.get(k, Poly.zero()) + self._root * b * c1) * (1 / c1)
            quot[k - 1] = b
        rem = co.get(0, Poly.zero()) + self._root * b * c1
        if not rem.is_zero():
            return None
        return Poly.from_univariate(self.lam_name, quot)

    def coerce(self, x) -> LocalizedPoly:
        if isinstance(x, LocalizedPoly):
            return x
        if isinstance(x, Poly):
            return LocalizedPoly(self, x)
        return LocalizedPoly(self, Poly.const(x))

    def of(self, num, a: int = 0, b: int = 0) -> LocalizedPoly:
        if not isinstance(num, Poly):
            num = Poly.const(num)
        return LocalizedPoly(self, num, a, b)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class IdentitySuite:
    name: str
    checks: list[CheckResult] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def check_zero(self, name: str, value, detail: str = "") -> bool:
        if isinstance(value, (Poly, RationalFunction)):
            ok = value.is_zero()
        else:
            ok = value == 0
        self.checks.append(CheckResult(name, ok, detail if not ok else ""))
        return ok

    def check(self, name: str, passed: bool, detail: str = "") -> bool:
        self.checks.append(CheckResult(name, passed, detail if not passed else ""))
        return passed

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def first_failure(self) -> CheckResult | None:
        for c in self.checks:
            if not c.passed:
                return c
        return None

    def summary(self) -> str:
        lines = [f"suite {self.name}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            mark = "ok" if c.passed else "FAIL"
            lines.append(f"  [{mark}] {c.name}" + (f" -- {c.detail}" if c.detail else ""))
        for n in self.notes:
            lines.append(f"  note: {n}")
        return "\n".join(lines)
