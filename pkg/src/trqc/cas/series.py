"""Truncated Laurent series over an exact coefficient ring.

A series holds coefficients for exponents min_exp .. order (inclusive);
everything above `order` is unknown, everything below min_exp is zero.
Coefficients may be Fractions, Polys or RationalFunctions; mixed
arithmetic coerces through the operators of those types.  Operations
propagate the tightest valid truncation order and never silently extend
precision.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import Poly, QQ
from .ratfun import RationalFunction

INF = object()  # marker for expansion at infinity


def c_is_zero(c) -> bool:
    if isinstance(c, (int, Fraction)):
        return c == 0
    return c.is_zero()


def c_inv(c):
    if isinstance(c, int):
        return QQ(1, c)
    if isinstance(c, Fraction):
        return 1 / c
    if isinstance(c, Poly):
        return RationalFunction(Poly.one(), c)
    return c.inverse()


class LaurentSeries:
    __slots__ = ("var", "min_exp", "coeffs", "order")

    def __init__(self, var: str, min_exp: int, coeffs: list, order: int):
        if order < min_exp - 1:
            raise ValueError("truncation order below minimum exponent")
        if len(coeffs) != order - min_exp + 1:
            raise ValueError("coefficient list does not match exponent window")
        # strip leading zeros for canonical form
        i = 0
        while i < len(coeffs) and c_is_zero(coeffs[i]):
            i += 1
        self.var = var
        self.min_exp = min_exp + i
        self.coeffs = list(coeffs[i:])
        self.order = order

    # -- constructors -----------------------------------------------------------

    @staticmethod
    def zero(var: str, order: int) -> "LaurentSeries":
        return LaurentSeries(var, order + 1, [], order)

    @staticmethod
    def monomial(var: str, exp: int, order: int, coeff=QQ(1)) -> "LaurentSeries":
        if order < exp:
            return LaurentSeries.zero(var, order)
        coeffs = [QQ(0)] * (order - exp + 1)
        coeffs[0] = coeff
        return LaurentSeries(var, exp, coeffs, order)

    @staticmethod
    def constant(var: str, value, order: int) -> "LaurentSeries":
        return LaurentSeries.monomial(var, 0, order, value)

    @staticmethod
    def from_coeff_map(var: str, coeffs: dict[int, object], order: int) -> "LaurentSeries":
        if not coeffs:
            return LaurentSeries.zero(var, order)
        lo = min(coeffs)
        data = [coeffs.get(k, QQ(0)) for k in range(lo, order + 1)]
        return LaurentSeries(var, lo, data, order)

    # -- queries ----------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, exp: int):
        if exp > self.order:
            raise ValueError(f"exponent {exp} beyond truncation order {self.order}")
        if exp < self.min_exp:
            return QQ(0)
        return self.coeffs[exp - self.min_exp]

    def known_exponents(self):
        return range(self.min_exp, self.order + 1)

    def valuation(self) -> int:
        """Exponent of the first nonzero coefficient (min_exp by canonicity)."""
        if self.is_zero():
            raise ValueError("zero series has no valuation")
        return self.min_exp

    # -- arithmetic ---------------------------------------------------------------

    def _check_var(self, other: "LaurentSeries"):
        if self.var != other.var:
            raise ValueError(f"series variable mismatch: {self.var} vs {other.var}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, Poly, RationalFunction)):
            other = LaurentSeries.constant(self.var, other, self.order)
        self._check_var(other)
        order = min(self.order, other.order)
        if self.is_zero():
            return other.truncate(order)
        if other.is_zero():
            return self.truncate(order)
        lo = min(self.min_exp, other.min_exp)
        if lo > order:
            return LaurentSeries.zero(self.var, order)
        out = []
        for k in range(lo, order + 1):
            a = self.coeffs[k - self.min_exp] if self.min_exp <= k <= self.order else QQ(0)
            b = other.coeffs[k - other.min_exp] if other.min_exp <= k <= other.order else QQ(0)
            out.append(a + b)
        return LaurentSeries(self.var, lo, out, order)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.var, self.min_exp, [-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, Poly, RationalFunction)):
            other = LaurentSeries.constant(self.var, other, self.order)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Poly, RationalFunction)):
            if c_is_zero(other):
                return LaurentSeries.zero(self.var, self.order)
            return LaurentSeries(self.var, self.min_exp,
                                 [c * other for c in self.coeffs], self.order)
        self._check_var(other)
        if self.is_zero() or other.is_zero():
            order = min(self.order + (other.min_exp if not other.is_zero() else 0),
                        other.order + (self.min_exp if not self.is_zero() else 0))
            if self.is_zero() and other.is_zero():
                order = min(self.order, other.order)
            elif self.is_zero():
                order = self.order + other.min_exp
            else:
                order = other.order + self.min_exp
            return LaurentSeries.zero(self.var, order)
        order = min(self.order + other.min_exp, other.order + self.min_exp)
        lo = self.min_exp + other.min_exp
        n = order - lo + 1
        out = [QQ(0)] * n
        for i, a in enumerate(self.coeffs):
            if c_is_zero(a):
                continue
            ei = self.min_exp + i
            for j, b in enumerate(other.coeffs):
                k = ei + other.min_exp + j - lo
                if k >= n:
                    break
                out[k] = out[k] + a * b
        return LaurentSeries(self.var, lo, out, order)

    __rmul__ = __mul__

    def inverse(self) -> "LaurentSeries":
        if self.is_zero():
            raise ZeroDivisionError("inverse of (truncated) zero series")
        m = self.min_exp
        a0 = self.coeffs[0]
        inv0 = c_inv(a0)
        n = len(self.coeffs)
        out = [inv0] + [QQ(0)] * (n - 1)
        # invert the tail 1/(1 + sum_{i>=1} (a_i/a0) t^i)
        for k in range(1, n):
            acc = QQ(0)
            for i in range(1, k + 1):
                ai = self.coeffs[i] if i < n else QQ(0)
                if c_is_zero(ai):
                    continue
                acc = acc + ai * out[k - i]
            out[k] = -(inv0 * acc)
        # result exponents: -m .. -m + n - 1
        return LaurentSeries(self.var, -m, out, -m + n - 1)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, Poly, RationalFunction)):
            return self * c_inv(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k == 0:
            return LaurentSeries.constant(self.var, QQ(1), self.order)
        if k < 0:
            return self.inverse() ** (-k)
        result = None
        base = self
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- reshaping ----------------------------------------------------------------

    def truncate(self, order: int) -> "LaurentSeries":
        if order >= self.order:
            if order > self.order:
                raise ValueError("cannot extend truncation order")
            return self
        if order < self.min_exp:
            return LaurentSeries.zero(self.var, order)
        return LaurentSeries(self.var, self.min_exp,
                             self.coeffs[: order - self.min_exp + 1], order)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by var**k."""
        return LaurentSeries(self.var, self.min_exp + k, list(self.coeffs), self.order + k)

    def map_coeffs(self, fn) -> "LaurentSeries":
        return LaurentSeries(self.var, self.min_exp, [fn(c) for c in self.coeffs], self.order)

    def derivative(self) -> "LaurentSeries":
        out = {}
        for i, c in enumerate(self.coeffs):
            k = self.min_exp + i
            if k != 0 and not c_is_zero(c):
                out[k - 1] = c * k
        return LaurentSeries.from_coeff_map(self.var, out, self.order - 1)

    def integrate(self) -> "LaurentSeries":
        """Termwise antiderivative; requires a vanishing residue term."""
        if self.min_exp <= -1 <= self.order:
            if not c_is_zero(self.coefficient(-1)):
                raise ValueError("nonzero residue: no Laurent antiderivative")
        out = {}
        for i, c in enumerate(self.coeffs):
            k = self.min_exp + i
            if k == -1 or c_is_zero(c):
                continue
            out[k + 1] = c * QQ(1, k + 1)
        return LaurentSeries.from_coeff_map(self.var, out, self.order + 1)

    def nth_root(self, n: int) -> "LaurentSeries":
        """n-th root; valuation divisible by n, leading coefficient a rational
        n-th power (needed for canonical coordinates at poles)."""
        if self.is_zero():
            raise ValueError("n-th root of zero series")
        if self.min_exp % n:
            raise ValueError("valuation not divisible by root order")
        lead = self.coeffs[0]
        if not isinstance(lead, (int, Fraction)):
            raise ValueError("series root needs a scalar leading coefficient")
        root = _rational_nth_root(QQ(lead), n)
        if root is None:
            raise ValueError(f"leading coefficient {lead} has no rational {n}-th root")
        # write self = lead * var^m * (1 + u); root via binomial series
        m = self.min_exp
        rel = self * self.monomial(self.var, -m, self.order - m).truncate(self.order - m)
        rel = rel * c_inv(lead)  # 1 + u, exponents 0..order-m
        u = rel - 1
        order = rel.order
        # (1+u)^(1/n) = sum binom(1/n, k) u^k
        result = LaurentSeries.constant(self.var, QQ(1), order)
        term = LaurentSeries.constant(self.var, QQ(1), order)
        alpha = QQ(1, n)
        k = 0
        while True:
            k += 1
            if u.is_zero() or (not u.is_zero() and k * u.min_exp > order):
                break
            term = term * u
            coeff = QQ(1)
            for j in range(k):
                coeff *= (alpha - j)
            coeff /= _factorial(k)
            result = result + term * coeff
        return result.shift(m // n) * root

    def __repr__(self):
        bits = []
        for i, c in enumerate(self.coeffs):
            k = self.min_exp + i
            if not c_is_zero(c):
                bits.append(f"({c})*{self.var}^{k}")
        body = " + ".join(bits) if bits else "0"
        return f"<{body} + O({self.var}^{self.order + 1})>"


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def _rational_nth_root(x: Fraction, n: int) -> Fraction | None:
    if x == 0:
        return QQ(0)
    sign = 1
    if x < 0:
        if n % 2 == 0:
            return None
        sign = -1
        x = -x
    p = _int_nth_root(x.numerator, n)
    q = _int_nth_root(x.denominator, n)
    if p is None or q is None:
        return None
    return QQ(sign * p, q)


def _int_nth_root(m: int, n: int) -> int | None:
    if m == 0:
        return 0
    r = round(m ** (1.0 / n))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** n == m:
            return cand
    return None


def series_residue(s: LaurentSeries):
    """Coefficient of exponent -1 (the residue in the local coordinate)."""
    if s.order < -1:
        raise ValueError("insufficient expansion depth")
    if s.min_exp > -1:
        return QQ(0)
    return s.coefficient(-1)


# -- expansion of rational functions ---------------------------------------------


def expand_at(f: RationalFunction, var: str, point, order: int) -> LaurentSeries:
    """Laurent expansion of f around var=point (or infinity).

    For a finite point the local coordinate is t = var - point; exponents
    refer to powers of t.  For ``point is INF`` the local coordinate is
    t = 1/var.  Remaining variables stay symbolic inside the coefficients.
    """
    num, den = f.num, f.den
    pad = 0
    while True:
        if point is INF:
            ns = _poly_series_at_inf(num, var, order + pad)
            ds = _poly_series_at_inf(den, var, order + pad)
        else:
            ns = _poly_series_at_point(num, var, QQ(point), order + pad)
            ds = _poly_series_at_point(den, var, QQ(point), order + pad)
        if ds.is_zero():
            if pad > 4 * (den.total_degree() + 1) + 8:
                raise ZeroDivisionError("denominator vanishes identically")
            pad += den.total_degree() + 1
            continue
        res = ns * ds.inverse()
        if res.order >= order:
            return res.truncate(order)
        pad += order - res.order


def _poly_series_at_point(p: Poly, var: str, point: Fraction, order: int) -> LaurentSeries:
    coeffs = p.as_univariate(var)
    t = LaurentSeries.monomial(var, 1, order + max(coeffs, default=0) + 1)
    # evaluate p(point + t) by Horner in t
    acc = LaurentSeries.zero(var, order + max(coeffs, default=0) + 1)
    shifted = LaurentSeries.constant(var, point, t.order) + t
    for k in range(max(coeffs, default=0), -1, -1):
        acc = acc * shifted
        c = coeffs.get(k)
        if c is not None:
            acc = acc + (c if not c.is_constant() else c.constant_value())
    return acc.truncate(order)


def _poly_series_at_inf(p: Poly, var: str, order: int) -> LaurentSeries:
    coeffs = p.as_univariate(var)
    if not coeffs:
        return LaurentSeries.zero(var, order)
    out: dict[int, object] = {}
    for k, c in coeffs.items():
        out[-k] = c if not c.is_constant() else c.constant_value()
    lo = min(out)
    data = [out.get(k, QQ(0)) for k in range(lo, order + 1)]
    if order < lo:
        return LaurentSeries.zero(var, order)
    return LaurentSeries(var, lo, data, order)


def eval_poly_at_series(p: Poly, var: str, s: LaurentSeries) -> LaurentSeries:
    """Evaluate p with `var` replaced by the series s (other vars symbolic)."""
    coeffs = p.as_univariate(var)
    if not coeffs:
        return LaurentSeries.zero(s.var, s.order)
    top = max(coeffs)
    acc = LaurentSeries.zero(s.var, s.order + max(0, top * min(0, s.min_exp)))
    for k in range(top, -1, -1):
        acc = acc * s
        c = coeffs.get(k)
        if c is not None:
            acc = acc + (c.constant_value() if c.is_constant() else c)
    return acc


def eval_ratfun_at_series(f: RationalFunction, var: str, s: LaurentSeries) -> LaurentSeries:
    ns = eval_poly_at_series(f.num, var, s)
    ds = eval_poly_at_series(f.den, var, s)
    return ns * ds.inverse()


def eval_ratfun_at_series2(f: RationalFunction, var1: str, s1: LaurentSeries,
                           var2: str, s2: LaurentSeries) -> LaurentSeries:
    """Evaluate with two variables replaced by series in the same local
    coordinate (used for substituting both z and its deck image)."""
    def eval_poly2(p: Poly) -> LaurentSeries:
        by1 = p.as_univariate(var1)
        if not by1:
            return LaurentSeries.zero(s1.var, min(s1.order, s2.order))
        # cache powers of s1
        acc = None
        for k in sorted(by1, reverse=True):
            inner = eval_poly_at_series(by1[k], var2, s2)
            if acc is None:
                acc = inner
            else:
                acc = acc * s1 ** (prev_k - k) + inner
            prev_k = k
        assert acc is not None
        if prev_k:
            acc = acc * s1 ** prev_k
        return acc

    ns = eval_poly2(f.num)
    ds = eval_poly2(f.den)
    return ns * ds.inverse()


# -- rational reconstruction -------------------------------------------------------


def rational_reconstruct(tail: LaurentSeries, var: str,
                         pole_support: list[tuple[object, int]]) -> RationalFunction:
    """Unique rational function with the declared pole support matching an
    expansion at infinity.

    `tail` is the Laurent expansion at var=infinity in the local coordinate
    t = 1/var (exponent k means var**(-k)).  `pole_support` lists
    (point, max_order) pairs; use INF for a polynomial part of the given
    degree.  The result, re-expanded, must reproduce the input through its
    truncation order.
    """
    unknown_cols: list[tuple[object, int]] = []
    for point, max_order in pole_support:
        if point is INF:
            for j in range(0, max_order + 1):
                unknown_cols.append((INF, j))
        else:
            for j in range(1, max_order + 1):
                unknown_cols.append((QQ(point), j))
    # constant term is part of the INF block; ensure it exists at least once
    if not any(p is INF for p, _ in pole_support):
        unknown_cols.append((INF, 0))
    exps = list(tail.known_exponents())
    if len(exps) < len(unknown_cols) + 1:
        raise ValueError("reconstruction failed: pole support insufficient "
                         "(expansion too short for the declared support)")
    # column expansions in t
    lo, hi = exps[0], exps[-1]
    cols = []
    for point, j in unknown_cols:
        col = {}
        if point is INF:
            col[-j] = QQ(1)
        else:
            # 1/(var-p)^j = t^j * (1-p t)^(-j) = sum_i C(j+i-1, i) p^i t^(j+i)
            for i in range(0, hi - j + 1):
                col[j + i] = QQ(_binom(j + i - 1, i)) * (QQ(point) ** i)
        cols.append([col.get(k, QQ(0)) for k in range(lo, hi + 1)])
    rhs = [tail.coefficient(k) for k in range(lo, hi + 1)]
    rhs = [QQ(c) if isinstance(c, int) else c for c in rhs]
    for c in rhs:
        if not isinstance(c, (int, Fraction)):
            raise ValueError("rational reconstruction needs scalar coefficients")
    sol = _solve_overdetermined(cols, rhs)
    if sol is None:
        raise ValueError("reconstruction failed: pole support insufficient")
    lam = RationalFunction.var(var)
    result = RationalFunction.zero()
    for (point, j), a in zip(unknown_cols, sol):
        if a == 0:
            continue
        if point is INF:
            result = result + RationalFunction.const(a) * lam ** j
        else:
            result = result + RationalFunction.const(a) / (lam - point) ** j
    # internal verification: re-expansion reproduces the input
    check = expand_at(result, var, INF, tail.order)
    for k in exps:
        got = check.coefficient(k) if k >= check.min_exp else QQ(0)
        want = tail.coefficient(k)
        if isinstance(got, RationalFunction):
            got = got.constant_value()
        if QQ(got) != QQ(want):
            raise ValueError("reconstruction failed: pole support insufficient")
    return result


def _binom(n: int, k: int) -> int:
    if k < 0:
        return 0
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def _solve_overdetermined(cols: list[list[Fraction]], rhs: list[Fraction]):
    """Solve the overdetermined exact system cols * x = rhs; None if inconsistent."""
    m = len(rhs)
    n = len(cols)
    aug = [[cols[j][i] for j in range(n)] + [rhs[i]] for i in range(m)]
    row = 0
    pivots = []
    for col in range(n):
        piv = None
        for r in range(row, m):
            if aug[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        pv = aug[row][col]
        aug[row] = [x / pv for x in aug[row]]
        for r in range(m):
            if r != row and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
        if row == m:
            break
    # inconsistency?
    for r in range(row, m):
        if aug[r][n] != 0:
            return None
    sol = [QQ(0)] * n
    for r, col in enumerate(pivots):
        sol[col] = aug[r][n]
    return sol
