"""Rational functions: reduced fractions of multivariate polynomials.

Normal form: gcd(numerator, denominator) = 1 and the denominator's leading
coefficient (graded lex) is 1.  Equality of normal forms is mathematical
equality, which is what every identity check in this package relies on.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import Poly, QQ, exact_divide, poly_gcd


class RationalFunction:
    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _reduced: bool = False):
        if isinstance(num, (int, Fraction)):
            num = Poly.const(num)
        if den is None:
            den = Poly.one()
        elif isinstance(den, (int, Fraction)):
            den = Poly.const(den)
        if den.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if num.is_zero():
            self.num = Poly.zero()
            self.den = Poly.one()
            return
        if _reduced:
            self.num = num
            self.den = den
            return
        num, den = _reduce(num, den)
        self.num = num
        self.den = den

    # -- constructors -----------------------------------------------------------

    @staticmethod
    def const(c) -> "RationalFunction":
        return RationalFunction(Poly.const(c), Poly.one(), _reduced=True)

    @staticmethod
    def var(name: str) -> "RationalFunction":
        return RationalFunction(Poly.var(name), Poly.one(), _reduced=True)

    @staticmethod
    def zero() -> "RationalFunction":
        return RationalFunction(Poly.zero(), Poly.one(), _reduced=True)

    @staticmethod
    def one() -> "RationalFunction":
        return RationalFunction(Poly.one(), Poly.one(), _reduced=True)

    @staticmethod
    def of(value) -> "RationalFunction":
        if isinstance(value, RationalFunction):
            return value
        if isinstance(value, Poly):
            return RationalFunction(value)
        return RationalFunction.const(value)

    # -- queries ----------------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        return self.num.constant_value() / self.den.constant_value()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_polynomial(self) -> Poly:
        if not self.is_polynomial():
            raise ValueError("rational function has a nontrivial denominator")
        return self.num * (1 / self.den.constant_value())

    def variables(self) -> tuple[str, ...]:
        from .poly import _sorted_vars
        return _sorted_vars(self.num.vars + self.den.vars)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            other = RationalFunction.of(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    # -- arithmetic ---------------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return RationalFunction.zero()
        # cross-reduce before multiplying to keep factors small
        n1, d2 = _reduce(self.num, other.den)
        n2, d1 = _reduce(other.num, self.den)
        return RationalFunction(n1 * n2, d1 * d2, _reduced=True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inverse()

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFunction(self.den, self.num)

    def __pow__(self, n: int):
        if n == 0:
            return RationalFunction.one()
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction(self.num ** n, self.den ** n, _reduced=True)

    # -- calculus / substitution ----------------------------------------------------

    def derivative(self, name: str) -> "RationalFunction":
        dn = self.num.derivative(name)
        dd = self.den.derivative(name)
        if dd.is_zero():
            return RationalFunction(dn, self.den)
        return RationalFunction(dn * self.den - self.num * dd, self.den * self.den)

    def subs(self, assignment: dict) -> "RationalFunction":
        """Substitute Poly/RationalFunction/Fraction values for variables."""
        simple = {}
        fancy = {}
        for k, v in assignment.items():
            if isinstance(v, RationalFunction):
                if v.is_polynomial():
                    simple[k] = v.as_polynomial()
                else:
                    fancy[k] = v
            else:
                simple[k] = v
        num = self.num.subs(simple) if simple else self.num
        den = self.den.subs(simple) if simple else self.den
        if not fancy:
            return RationalFunction(num, den)
        res_num = _poly_subs_rational(num, fancy)
        res_den = _poly_subs_rational(den, fancy)
        return res_num / res_den

    def eval_rational(self, point: dict[str, Fraction]) -> Fraction:
        d = self.den.eval_rational(point)
        if d == 0:
            raise ZeroDivisionError("evaluation hits a pole")
        return self.num.eval_rational(point) / d

    def __repr__(self):
        return f"RationalFunction({self!s})"

    def __str__(self):
        if self.den == Poly.one():
            return str(self.num)
        return f"({self.num})/({self.den})"


def _coerce(other):
    if isinstance(other, RationalFunction):
        return other
    if isinstance(other, (int, Fraction)):
        return RationalFunction.const(other)
    if isinstance(other, Poly):
        return RationalFunction(other)
    return NotImplemented


def _reduce(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    """Cancel the gcd and make the denominator monic (graded lex)."""
    if num.is_zero():
        return Poly.zero(), Poly.one()
    if den.is_constant():
        c = den.constant_value()
        return num * (1 / c), Poly.one()
    q = exact_divide(num, den)
    if q is not None:
        return q, Poly.one()
    num, den = _cancel(num, den)
    if den.is_constant():
        return num * (1 / den.constant_value()), Poly.one()
    lc = den.leading_coefficient()
    if lc != 1:
        num = num * (1 / lc)
        den = den * (1 / lc)
    return num, den


def _cancel(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    """Cancel common factors.  The denominators produced by the series engine
    are products of linear factors; those cancel by cached factorization and
    synthetic trial division, the general gcd only mops up the leftover."""
    from .poly import divide_linear, factor_linears, linear_factor_poly

    const, factors, leftover = factor_linears(den)
    if factors:
        new_den = Poly.const(const)
        for key, mult in factors:
            v, r = key
            root = Poly.var(r) if isinstance(r, str) else r
            remaining = mult
            while remaining:
                q = divide_linear(num, v, root)
                if q is None:
                    break
                num = q
                remaining -= 1
            if remaining:
                new_den = new_den * linear_factor_poly(key) ** remaining
        den = new_den * leftover
        if den.is_constant():
            return num, den
    if not leftover.is_constant():
        g = poly_gcd(num, leftover)
        if not g.is_constant():
            num2 = exact_divide(num, g)
            den2 = exact_divide(den, g)
            assert num2 is not None and den2 is not None
            num, den = num2, den2
    return num, den


def _poly_subs_rational(p: Poly, fancy: dict[str, RationalFunction]) -> RationalFunction:
    """Substitute rational functions into a polynomial (Horner per variable)."""
    result = RationalFunction.zero()
    name = next(iter(fancy))
    value = fancy[name]
    rest = {k: v for k, v in fancy.items() if k != name}
    coeffs = p.as_univariate(name)
    if not coeffs:
        return RationalFunction.zero()
    top = max(coeffs)
    acc = RationalFunction.zero()
    for k in range(top, -1, -1):
        acc = acc * value
        c = coeffs.get(k)
        if c is not None:
            if rest:
                acc = acc + _poly_subs_rational(c, rest)
            else:
                acc = acc + RationalFunction(c)
    result = acc
    return result


def normalize(f: RationalFunction) -> RationalFunction:
    """Return the canonical reduced form (idempotent by construction)."""
    return RationalFunction(f.num, f.den)
