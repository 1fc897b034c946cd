"""Truncated series in the quantization parameter hbar.

Coefficients live in a caller-chosen exact coefficient space (rational
functions, function-field elements, plain Fractions).  The minimum exponent
is -2; exponents -2 and -1 may be marked as exponential-prefactor data, in
which case multiplicative operations refuse to mix them into the power
series part (they belong to WKB exponents, not to the series ring).
"""

from __future__ import annotations

from fractions import Fraction

from .poly import QQ
from .series import c_is_zero, c_inv

MIN_EXPONENT = -2


class HbarSeries:
    __slots__ = ("coeffs", "order", "prefactor_exponents")

    def __init__(self, coeffs: dict[int, object], order: int,
                 prefactor_exponents: frozenset[int] = frozenset()):
        clean = {}
        for k, c in coeffs.items():
            if k < MIN_EXPONENT:
                raise ValueError("hbar exponent below -2 is not representable")
            if k > order:
                continue
            if not c_is_zero(c):
                clean[k] = c
        bad = set(prefactor_exponents) - {-2, -1}
        if bad:
            raise ValueError("only exponents -2 and -1 can be prefactor data")
        self.coeffs = clean
        self.order = order
        self.prefactor_exponents = frozenset(prefactor_exponents)

    # -- constructors ------------------------------------------------------------

    @staticmethod
    def zero(order: int) -> "HbarSeries":
        return HbarSeries({}, order)

    @staticmethod
    def constant(value, order: int) -> "HbarSeries":
        return HbarSeries({0: value}, order)

    @staticmethod
    def monomial(exp: int, value, order: int) -> "HbarSeries":
        return HbarSeries({exp: value}, order)

    # -- queries -----------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def min_exponent(self) -> int:
        if not self.coeffs:
            return self.order + 1
        return min(self.coeffs)

    def coefficient(self, k: int):
        if k > self.order:
            raise ValueError(f"hbar exponent {k} beyond truncation {self.order}")
        return self.coeffs.get(k, QQ(0))

    def exponents(self):
        return sorted(self.coeffs)

    def has_prefactor_data(self) -> bool:
        return bool(self.prefactor_exponents)

    def mark_prefactor(self) -> "HbarSeries":
        flags = frozenset(k for k in self.coeffs if k < 0)
        return HbarSeries(self.coeffs, self.order, flags)

    # -- arithmetic ---------------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, HbarSeries):
            other = HbarSeries.constant(other, self.order)
        order = min(self.order, other.order)
        flags = self.prefactor_exponents | other.prefactor_exponents
        for k in flags:
            fa = k in self.prefactor_exponents or k not in self.coeffs
            fb = k in other.prefactor_exponents or k not in other.coeffs
            if not (fa and fb):
                raise ValueError("cannot add prefactor data to series content "
                                 f"at hbar^{k}")
        out: dict[int, object] = {}
        for k in set(self.coeffs) | set(other.coeffs):
            if k > order:
                continue
            out[k] = self.coeffs.get(k, QQ(0)) + other.coeffs.get(k, QQ(0))
        return HbarSeries(out, order, flags)

    __radd__ = __add__

    def __neg__(self):
        return HbarSeries({k: -c for k, c in self.coeffs.items()}, self.order,
                          self.prefactor_exponents)

    def __sub__(self, other):
        if not isinstance(other, HbarSeries):
            other = HbarSeries.constant(other, self.order)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, HbarSeries):
            # scalar multiplication never mixes sectors
            return HbarSeries({k: c * other for k, c in self.coeffs.items()},
                              self.order, self.prefactor_exponents)
        if self.prefactor_exponents or other.prefactor_exponents:
            raise ValueError("prefactor data cannot enter series multiplication; "
                             "handle exponential prefactors explicitly")
        ma, mb = self.min_exponent(), other.min_exponent()
        if self.is_zero() or other.is_zero():
            if self.is_zero() and other.is_zero():
                return HbarSeries.zero(min(self.order, other.order))
            order = (self.order + mb) if self.is_zero() else (other.order + ma)
            return HbarSeries.zero(min(order, self.order + other.order))
        order = min(self.order + mb, other.order + ma)
        if ma + mb < MIN_EXPONENT:
            raise ValueError("product exponent below -2")
        out: dict[int, object] = {}
        for k1, c1 in self.coeffs.items():
            for k2, c2 in other.coeffs.items():
                k = k1 + k2
                if k > order:
                    continue
                if k in out:
                    out[k] = out[k] + c1 * c2
                else:
                    out[k] = c1 * c2
        return HbarSeries(out, order)

    __rmul__ = __mul__

    def shift(self, k: int) -> "HbarSeries":
        """Multiply by hbar**k (exact monomial shift)."""
        if self.prefactor_exponents:
            raise ValueError("cannot shift prefactor data")
        return HbarSeries({e + k: c for e, c in self.coeffs.items()},
                          self.order + k)

    def inverse(self) -> "HbarSeries":
        if self.prefactor_exponents:
            raise ValueError("prefactor data has no series inverse")
        if self.is_zero():
            raise ZeroDivisionError("inverse of truncated zero hbar-series")
        m = self.min_exponent()
        n = self.order - m + 1
        a = [self.coeffs.get(m + i, QQ(0)) for i in range(n)]
        inv0 = c_inv(a[0])
        out = [inv0] + [QQ(0)] * (n - 1)
        for k in range(1, n):
            acc = None
            for i in range(1, k + 1):
                if c_is_zero(a[i]):
                    continue
                term = a[i] * out[k - i]
                acc = term if acc is None else acc + term
            if acc is None:
                continue
            out[k] = -(inv0 * acc)
        if -m < MIN_EXPONENT:
            raise ValueError("inverse exponent below -2")
        return HbarSeries({-m + i: c for i, c in enumerate(out)}, -m + n - 1)

    def __truediv__(self, other):
        if isinstance(other, HbarSeries):
            return self * other.inverse()
        return HbarSeries({k: c * c_inv(other) for k, c in self.coeffs.items()},
                          self.order, self.prefactor_exponents)

    def __pow__(self, n: int):
        if n == 0:
            return HbarSeries.constant(QQ(1), self.order)
        if n < 0:
            return self.inverse() ** (-n)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def truncate(self, order: int) -> "HbarSeries":
        if order > self.order:
            raise ValueError("cannot extend hbar truncation order")
        return HbarSeries({k: c for k, c in self.coeffs.items() if k <= order},
                          order, frozenset(k for k in self.prefactor_exponents))

    def map_coeffs(self, fn) -> "HbarSeries":
        return HbarSeries({k: fn(c) for k, c in self.coeffs.items()}, self.order,
                          self.prefactor_exponents)

    def __eq__(self, other):
        if not isinstance(other, HbarSeries):
            return NotImplemented
        order = min(self.order, other.order)
        for k in range(MIN_EXPONENT, order + 1):
            a = self.coeffs.get(k, QQ(0))
            b = other.coeffs.get(k, QQ(0))
            if not c_is_zero(a - b):
                return False
        return True

    def __repr__(self):
        bits = [f"({self.coeffs[k]})*hbar^{k}" for k in sorted(self.coeffs)]
        body = " + ".join(bits) if bits else "0"
        return f"<{body} + O(hbar^{self.order + 1})>"
