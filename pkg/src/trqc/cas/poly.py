"""Sparse multivariate polynomials over the exact rationals.

Polynomials are dictionaries mapping exponent tuples to nonzero Fractions.
Each polynomial carries the ordered tuple of variable names its exponents
refer to; binary operations align the two variable tuples first.  Variable
order is fixed once per process by a global registry so that normal forms
are canonical: equal polynomials always compare equal structurally.

The monomial order is graded lexicographic with respect to the registry
order.  Zero coefficients are never stored.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator

QQ = Fraction

_REGISTRY: dict[str, int] = {}


def register_variable(name: str) -> int:
    """Assign (or look up) the global order index of a variable name."""
    idx = _REGISTRY.get(name)
    if idx is None:
        idx = len(_REGISTRY)
        _REGISTRY[name] = idx
    return idx


def variable_index(name: str) -> int:
    return register_variable(name)


def _sorted_vars(names: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(set(names), key=register_variable))


class Poly:
    """Immutable sparse polynomial with Fraction coefficients."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars: tuple[str, ...], terms: dict[tuple[int, ...], Fraction],
                 _trusted: bool = False):
        if _trusted:
            self.vars = vars
            self.terms = terms
            return
        for name in vars:
            register_variable(name)
        clean = {e: QQ(c) for e, c in terms.items() if c != 0}
        self.vars = tuple(vars)
        self.terms = clean
        self._drop_unused()

    # -- construction helpers -------------------------------------------------

    @staticmethod
    def const(c) -> "Poly":
        c = QQ(c)
        if c == 0:
            return Poly((), {}, _trusted=True)
        return Poly((), {(): c}, _trusted=True)

    @staticmethod
    def var(name: str, exp: int = 1, coeff=1) -> "Poly":
        register_variable(name)
        coeff = QQ(coeff)
        if coeff == 0:
            return Poly.zero()
        if exp == 0:
            return Poly.const(coeff)
        return Poly((name,), {(exp,): coeff}, _trusted=True)

    @staticmethod
    def zero() -> "Poly":
        return Poly((), {}, _trusted=True)

    @staticmethod
    def one() -> "Poly":
        return Poly.const(1)

    def _drop_unused(self) -> None:
        """Remove variables with zero exponent everywhere (canonical form)."""
        if not self.terms:
            self.vars = ()
            return
        n = len(self.vars)
        used = [False] * n
        for e in self.terms:
            for i in range(n):
                if e[i]:
                    used[i] = True
        if all(used):
            # also enforce registry-sorted order
            order = sorted(range(n), key=lambda i: register_variable(self.vars[i]))
            if order != list(range(n)):
                self.vars = tuple(self.vars[i] for i in order)
                self.terms = {tuple(e[i] for i in order): c for e, c in self.terms.items()}
            return
        keep = [i for i in range(n) if used[i]]
        vars2 = tuple(self.vars[i] for i in keep)
        order = sorted(range(len(keep)), key=lambda j: register_variable(vars2[j]))
        self.vars = tuple(vars2[j] for j in order)
        self.terms = {tuple(e[keep[j]] for j in order): c for e, c in self.terms.items()}

    # -- basic queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.vars or all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if self.is_zero():
            return QQ(0)
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        if name not in self.vars:
            return 0
        i = self.vars.index(name)
        return max((e[i] for e in self.terms), default=0)

    def leading_term(self) -> tuple[tuple[int, ...], Fraction]:
        """Leading term in graded lex order over self.vars."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        key = max(self.terms, key=lambda e: (sum(e), e))
        return key, self.terms[key]

    def leading_coefficient(self) -> Fraction:
        return self.leading_term()[1]

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    # -- alignment -------------------------------------------------------------

    def _aligned(self, other: "Poly") -> tuple[tuple[str, ...], dict, dict]:
        if self.vars == other.vars:
            return self.vars, self.terms, other.terms
        vars_ = _sorted_vars(self.vars + other.vars)
        return vars_, _remap(self, vars_), _remap(other, vars_)

    # -- ring operations --------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        vars_, a, b = self._aligned(other)
        out = dict(a)
        for e, c in b.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        p = Poly(vars_, out, _trusted=True)
        p._drop_unused()
        return p

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.vars, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QQ(other)
            if other == 0:
                return Poly.zero()
            return Poly(self.vars, {e: c * other for e, c in self.terms.items()},
                        _trusted=True)
        if not isinstance(other, Poly):
            return NotImplemented
        if not self.terms or not other.terms:
            return Poly.zero()
        vars_, a, b = self._aligned(other)
        if len(a) > len(b):
            a, b = b, a
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = out.get(e)
                if s is None:
                    out[e] = c1 * c2
                else:
                    s = s + c1 * c2
                    if s:
                        out[e] = s
                    else:
                        del out[e]
        p = Poly(vars_, out, _trusted=True)
        p._drop_unused()
        return p

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative polynomial power")
        result = Poly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- structure helpers -------------------------------------------------------

    def as_univariate(self, name: str) -> dict[int, "Poly"]:
        """View as a polynomial in `name` with Poly coefficients in the rest."""
        if name not in self.vars:
            return {0: self} if self.terms else {}
        i = self.vars.index(name)
        rest = self.vars[:i] + self.vars[i + 1:]
        out: dict[int, dict] = {}
        for e, c in self.terms.items():
            k = e[i]
            re = e[:i] + e[i + 1:]
            out.setdefault(k, {})[re] = c
        return {k: Poly(rest, d, _trusted=True) for k, d in out.items()}

    @staticmethod
    def from_univariate(name: str, coeffs: dict[int, "Poly"]) -> "Poly":
        total = Poly.zero()
        xv = Poly.var(name)
        for k in sorted(coeffs):
            c = coeffs[k]
            if isinstance(c, (int, Fraction)):
                c = Poly.const(c)
            if not c.is_zero():
                total = total + c * xv ** k
        return total

    def coefficient_of(self, name: str, k: int) -> "Poly":
        return self.as_univariate(name).get(k, Poly.zero())

    def derivative(self, name: str) -> "Poly":
        if name not in self.vars:
            return Poly.zero()
        i = self.vars.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[e2] = out.get(e2, QQ(0)) + c * e[i]
        p = Poly(self.vars, {e: c for e, c in out.items() if c}, _trusted=True)
        p._drop_unused()
        return p

    def subs(self, assignment: dict[str, "Poly | Fraction | int"]) -> "Poly":
        """Substitute polynomials/constants for variables."""
        relevant = {k: v for k, v in assignment.items() if k in self.vars}
        if not relevant:
            return self
        result = Poly.zero()
        for e, c in self.terms.items():
            term = Poly.const(c)
            for name, k in zip(self.vars, e):
                if not k:
                    continue
                if name in relevant:
                    v = relevant[name]
                    if isinstance(v, (int, Fraction)):
                        term = term * (QQ(v) ** k)
                    else:
                        term = term * v ** k
                else:
                    term = term * Poly.var(name, k)
            result = result + term
        return result

    def eval_rational(self, point: dict[str, Fraction]) -> Fraction:
        """Evaluate at a fully rational point."""
        total = QQ(0)
        for e, c in self.terms.items():
            v = c
            for name, k in zip(self.vars, e):
                if k:
                    v *= point[name] ** k
            total += v
        return total

    # -- printing ---------------------------------------------------------------

    def __repr__(self):
        return f"Poly({self!s})"

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for e in sorted(self.terms, key=lambda e: (-sum(e), tuple(-x for x in e))):
            c = self.terms[e]
            mono = "*".join(
                f"{n}^{k}" if k > 1 else n
                for n, k in zip(self.vars, e) if k
            )
            if mono:
                if c == 1:
                    bits.append(mono)
                elif c == -1:
                    bits.append(f"-{mono}")
                else:
                    bits.append(f"{c}*{mono}")
            else:
                bits.append(str(c))
        s = " + ".join(bits)
        return s.replace("+ -", "- ")


def _remap(p: Poly, vars_: tuple[str, ...]) -> dict:
    if p.vars == vars_:
        return p.terms
    pos = [vars_.index(v) for v in p.vars]
    n = len(vars_)
    out = {}
    for e, c in p.terms.items():
        e2 = [0] * n
        for i, k in zip(pos, e):
            e2[i] = k
        out[tuple(e2)] = c
    return out


# -- division and gcd -------------------------------------------------------------


def exact_divide(a: Poly, b: Poly) -> Poly | None:
    """Return a/b if b divides a exactly, else None."""
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if a.is_zero():
        return Poly.zero()
    if b.is_constant():
        inv = 1 / b.constant_value()
        return a * inv
    vars_, ta, tb = a._aligned(b)
    rem = dict(ta)
    lead_b = max(tb, key=lambda e: (sum(e), e))
    cb = tb[lead_b]
    quot: dict[tuple[int, ...], Fraction] = {}
    while rem:
        lead_r = max(rem, key=lambda e: (sum(e), e))
        diff = tuple(x - y for x, y in zip(lead_r, lead_b))
        if any(d < 0 for d in diff):
            return None
        c = rem[lead_r] / cb
        quot[diff] = c
        for e, cc in tb.items():
            e2 = tuple(x + y for x, y in zip(diff, e))
            s = rem.get(e2, QQ(0)) - c * cc
            if s:
                rem[e2] = s
            else:
                rem.pop(e2, None)
    q = Poly(vars_, quot, _trusted=True)
    q._drop_unused()
    return q


def _gcd_univariate(a: Poly, b: Poly, name: str) -> Poly:
    """Monic Euclid over QQ for polynomials in a single variable."""
    fa = {e[0] if e else 0: c for e, c in _remap(a, (name,)).items()} if a.vars else (
        {0: a.constant_value()} if not a.is_zero() else {})
    fb = {e[0] if e else 0: c for e, c in _remap(b, (name,)).items()} if b.vars else (
        {0: b.constant_value()} if not b.is_zero() else {})

    def deg(f):
        return max(f) if f else -1

    def rem(f, g):
        dg = deg(g)
        lg = g[dg]
        f = dict(f)
        while f and deg(f) >= dg:
            df = deg(f)
            c = f[df] / lg
            for k, ck in g.items():
                kk = k + df - dg
                s = f.get(kk, QQ(0)) - c * ck
                if s:
                    f[kk] = s
                else:
                    f.pop(kk, None)
        return f

    while fb:
        fa, fb = fb, rem(fa, fb)
    if not fa:
        return Poly.zero()
    lead = fa[deg(fa)]
    return Poly((name,), {(k,): c / lead for k, c in fa.items()}, _trusted=True)


def _content_and_primitive(coeffs: list[Poly]) -> tuple[Poly, list[Poly]]:
    cont = Poly.zero()
    for c in coeffs:
        cont = poly_gcd(cont, c)
        if cont.is_constant() and not cont.is_zero():
            cont = Poly.one()
            break
    if cont.is_zero():
        return Poly.zero(), coeffs
    prim = [exact_divide(c, cont) for c in coeffs]
    assert all(p is not None for p in prim)
    return cont, prim  # type: ignore[return-value]


def _pseudo_rem(f: dict[int, Poly], g: dict[int, Poly]) -> dict[int, Poly]:
    df = max(f)
    dg = max(g)
    lg = g[dg]
    rem = dict(f)
    while rem:
        dr = max(rem)
        if dr < dg:
            break
        lr = rem[dr]
        # rem <- lg*rem - lr*x^(dr-dg)*g
        new: dict[int, Poly] = {}
        for k, c in rem.items():
            new[k] = c * lg
        for k, c in g.items():
            kk = k + dr - dg
            new[kk] = new.get(kk, Poly.zero()) - lr * c
        rem = {k: c for k, c in new.items() if not c.is_zero()}
    return rem


_EVAL_POINT_SETS = ((QQ(3), QQ(5), QQ(7), QQ(11), QQ(13), QQ(17)),
                    (QQ(-2), QQ(9), QQ(4), QQ(-5), QQ(8), QQ(23)),
                    (QQ(12), QQ(-7), QQ(19), QQ(6), QQ(-11), QQ(29)))


def _certified_coprime(a: Poly, b: Poly, common: list[str]) -> bool:
    """Exact coprimality certificate: specialize all variables but one at
    sample points preserving the leading degree; a degree-zero specialized
    gcd bounds the true gcd's degree in that variable by zero.  If that
    succeeds for every common variable the gcd is constant."""
    for v in common:
        proven = False
        for points in _EVAL_POINT_SETS:
            assign = {}
            i = 0
            for name in set(a.vars) | set(b.vars):
                if name != v:
                    assign[name] = points[i % len(points)]
                    i += 1
            fa = _specialize(a, v, assign)
            fb = _specialize(b, v, assign)
            if fa is None or fb is None:
                continue
            if max(fa) != a.degree_in(v) or max(fb) != b.degree_in(v):
                continue
            if _univ_gcd_degree(fa, fb) == 0:
                proven = True
                break
        if not proven:
            return False
    return True


def _specialize(p: Poly, keep: str, assign: dict[str, Fraction]):
    out: dict[int, Fraction] = {}
    ki = p.vars.index(keep) if keep in p.vars else None
    for e, c in p.terms.items():
        val = c
        k = 0
        for name, exp in zip(p.vars, e):
            if name == keep:
                k = exp
                continue
            if exp:
                val = val * assign[name] ** exp
        out[k] = out.get(k, QQ(0)) + val
    out = {k: v for k, v in out.items() if v}
    return out or None


def _univ_gcd_degree(f: dict[int, Fraction], g: dict[int, Fraction]) -> int:
    def deg(h):
        return max(h) if h else -1

    def rem(h1, h2):
        d2 = deg(h2)
        l2 = h2[d2]
        h1 = dict(h1)
        while h1 and deg(h1) >= d2:
            d1 = deg(h1)
            c = h1[d1] / l2
            for k, ck in h2.items():
                kk = k + d1 - d2
                s = h1.get(kk, QQ(0)) - c * ck
                if s:
                    h1[kk] = s
                else:
                    h1.pop(kk, None)
        return h1

    while g:
        f, g = g, rem(f, g)
    return deg(f)


def monomial_content(p: Poly) -> Poly:
    """Largest monomial dividing p (coefficient 1)."""
    if p.is_zero() or not p.vars:
        return Poly.one()
    n = len(p.vars)
    mins = None
    for e in p.terms:
        if mins is None:
            mins = list(e)
        else:
            mins = [min(x, y) for x, y in zip(mins, e)]
        if not any(mins):
            return Poly.one()
    return Poly(p.vars, {tuple(mins): QQ(1)}, _trusted=True)


def _strip_monomial(p: Poly) -> tuple[Poly, Poly]:
    m = monomial_content(p)
    if m == Poly.one():
        return Poly.one(), p
    q = exact_divide(p, m)
    return m, q


def divide_linear(p: Poly, var: str, root) -> Poly | None:
    """Exact division of p by (var - root); root is a Fraction or a Poly in
    other variables.  None when the division is not exact."""
    if var not in p.vars:
        return None
    co = p.as_univariate(var)
    n = max(co)
    if n == 0:
        return None
    if isinstance(root, (int, Fraction)):
        root = Poly.const(root)
    b = co[n]
    quot = {n - 1: b}
    for k in range(n - 1, 0, -1):
        b = co.get(k, Poly.zero()) + root * b
        quot[k - 1] = b
    rem = co.get(0, Poly.zero()) + root * b
    if not rem.is_zero():
        return None
    return Poly.from_univariate(var, quot)


_ROOT_PROBES = tuple(QQ(p) for p in
                     (0, 1, -1, 2, -2, 3, -3, 4, -4, 5, -5, 6, -6)) + \
    (QQ(1, 2), QQ(-1, 2), QQ(3, 2), QQ(-3, 2), QQ(1, 3), QQ(-1, 3),
     QQ(2, 3), QQ(-2, 3), QQ(1, 4), QQ(-1, 4))


def _found_rational_roots(f: dict[int, Fraction]) -> list[Fraction]:
    """Rational roots of a univariate coefficient dict; found ones only.

    Exhaustive divisor search runs only for small coefficients; otherwise a
    fixed probe set is used (missing roots merely skip an optimization)."""
    if not f:
        return []
    from math import lcm
    den = 1
    for c in f.values():
        den = lcm(den, QQ(c).denominator)
    ic = {k: int(QQ(c) * den) for k, c in f.items() if c}
    if not ic:
        return []
    out = []
    lo = min(ic)
    if lo > 0:
        out.append(QQ(0))
        ic = {k - lo: v for k, v in ic.items()}
    a0 = ic.get(0)
    an = ic[max(ic)]
    if a0 is None:
        return out

    def value(cand: Fraction) -> Fraction:
        total = QQ(0)
        for k, c in ic.items():
            total += c * cand ** k
        return total

    if abs(a0) < 10 ** 9 and abs(an) < 10 ** 9:
        for p in _divisors(abs(a0)):
            for q in _divisors(abs(an)):
                for sign in (1, -1):
                    cand = QQ(sign * p, q)
                    if cand not in out and value(cand) == 0:
                        out.append(cand)
        return out
    for cand in _ROOT_PROBES:
        if cand not in out and value(cand) == 0:
            out.append(cand)
    return out


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
    return out


def _peel_linear_common(a: Poly, b: Poly, common: list[str]):
    """Extract the common linear factors (v - root) with root rational or a
    plain variable; returns (product of factors, reduced a, reduced b)."""
    out = Poly.one()
    allvars = set(a.vars) | set(b.vars)
    for v in common:
        cands: list = [name for name in allvars if name != v]
        cands += list(_ROOT_PROBES)
        for points in _EVAL_POINT_SETS[:1]:
            assign = {}
            i = 0
            for name in allvars:
                if name != v:
                    assign[name] = points[i % len(points)]
                    i += 1
            fa = _specialize(a, v, assign)
            fb = _specialize(b, v, assign)
            if fa is None or fb is None:
                continue
            g = _univ_gcd_dict(fa, fb)
            if g and max(g) > 0:
                cands = _found_rational_roots(g) + cands
        for r in cands:
            root = Poly.var(r) if isinstance(r, str) else QQ(r)
            while True:
                qa = divide_linear(a, v, root)
                if qa is None:
                    break
                qb = divide_linear(b, v, root)
                if qb is None:
                    break
                a, b = qa, qb
                factor = Poly.var(v) - (Poly.var(r) if isinstance(r, str) else r)
                out = out * factor
    return out, a, b


_FACTOR_CACHE: dict[Poly, tuple[tuple[tuple[str, object], int], ...] | None] = {}


def factor_linears(p: Poly):
    """Factor out monomials and linear factors (v - root), root a probe
    rational or another variable.  Returns (constant, [((var, root), mult)],
    leftover); None-cached when nothing factors.  Results are memoized: the
    engine reuses a small set of denominators enormously often."""
    cached = _FACTOR_CACHE.get(p)
    if cached is not None:
        const, factors, leftover = cached
        return const, list(factors), leftover
    work = p
    factors: list[tuple[tuple[str, object], int]] = []
    mono = monomial_content(work)
    if mono != Poly.one():
        q = exact_divide(work, mono)
        work = q
        e = next(iter(mono.terms))
        for name, k in zip(mono.vars, e):
            if k:
                factors.append(((name, QQ(0)), k))
    progress = True
    while progress and not work.is_constant():
        progress = False
        for v in tuple(work.vars):
            cands: list = [name for name in work.vars if name != v]
            cands += list(_ROOT_PROBES)
            for r in cands:
                root = Poly.var(r) if isinstance(r, str) else QQ(r)
                mult = 0
                while True:
                    q = divide_linear(work, v, root)
                    if q is None:
                        break
                    work = q
                    mult += 1
                if mult:
                    factors.append(((v, r), mult))
                    progress = True
            if work.is_constant():
                break
    const = QQ(1)
    if work.is_constant():
        const = work.constant_value()
        work = Poly.one()
    result = (const, tuple(factors), work)
    if len(_FACTOR_CACHE) < 200_000:
        _FACTOR_CACHE[p] = result
    return const, list(factors), work


def linear_factor_poly(key: tuple[str, object]) -> Poly:
    v, r = key
    if isinstance(r, str):
        return Poly.var(v) - Poly.var(r)
    return Poly.var(v) - QQ(r)


def _univ_gcd_dict(f: dict[int, Fraction], g: dict[int, Fraction]):
    def deg(h):
        return max(h) if h else -1

    def rem(h1, h2):
        d2 = deg(h2)
        l2 = h2[d2]
        h1 = dict(h1)
        while h1 and deg(h1) >= d2:
            d1 = deg(h1)
            c = h1[d1] / l2
            for k, ck in h2.items():
                kk = k + d1 - d2
                s = h1.get(kk, QQ(0)) - c * ck
                if s:
                    h1[kk] = s
                else:
                    h1.pop(kk, None)
        return h1

    while g:
        f, g = g, rem(f, g)
    return f


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """GCD over QQ, normalized with leading coefficient 1 (graded lex)."""
    if a.is_zero():
        return _monic(b)
    if b.is_zero():
        return _monic(a)
    if a.is_constant() or b.is_constant():
        return Poly.one()
    # fast paths
    if a.vars == b.vars and a.terms == b.terms:
        return _monic(a)
    # common monomial content splits off; the rest is coprime to monomials
    ma, a2 = _strip_monomial(a)
    mb, b2 = _strip_monomial(b)
    if ma != Poly.one() or mb != Poly.one():
        common = _monomial_gcd(ma, mb)
        return _monic(common * poly_gcd(a2, b2))
    if len(a.terms) == 1 or len(b.terms) == 1:
        return Poly.one()
    q = exact_divide(a, b)
    if q is not None:
        return _monic(b)
    q = exact_divide(b, a)
    if q is not None:
        return _monic(a)
    vars_ = _sorted_vars(a.vars + b.vars)
    common = [v for v in vars_ if v in a.vars and v in b.vars]
    if not common:
        return Poly.one()
    if len(a.vars) == 1 and len(b.vars) == 1 and a.vars == b.vars:
        return _gcd_univariate(a, b, a.vars[0])
    if _certified_coprime(a, b, common):
        return Poly.one()
    # peel common linear factors (the generic denominators of the engine)
    lin, a, b = _peel_linear_common(a, b, common)
    if lin != Poly.one():
        return _monic(lin * poly_gcd(a, b))
    if a.is_constant() or b.is_constant():
        return _monic(lin)
    # recursive subresultant PRS in the last common variable
    name = common[-1]
    fa = a.as_univariate(name)
    fb = b.as_univariate(name)
    ca, pa = _content_and_primitive([fa[k] for k in sorted(fa)])
    cb, pb = _content_and_primitive([fb[k] for k in sorted(fb)])
    cont = poly_gcd(ca, cb)
    f = dict(zip(sorted(fa), pa))
    g = dict(zip(sorted(fb), pb))
    if max(f) < max(g):
        f, g = g, f
    gg = Poly.one()
    hh = Poly.one()
    while g:
        delta = max(f) - max(g)
        r = _pseudo_rem(f, g)
        r = {k: c for k, c in r.items() if not c.is_zero()}
        if not r:
            break
        if max(r) == 0:
            # coprime up to content
            g = {0: Poly.one()}
            break
        divisor = gg * hh ** delta
        f, g = g, {k: _exact_div_checked(c, divisor) for k, c in r.items()}
        gg = f[max(f)]
        if delta == 0:
            hh = hh
        elif delta == 1:
            hh = gg
        else:
            hh = _exact_div_checked(gg ** delta, hh ** (delta - 1))
    gc = g if g else f
    if max(gc) == 0:
        result = Poly.one()
    else:
        _, gp = _content_and_primitive([gc[k] for k in sorted(gc)])
        result = Poly.from_univariate(name, dict(zip(sorted(gc), gp)))
    return _monic(cont * result)


def _exact_div_checked(a: Poly, b: Poly) -> Poly:
    q = exact_divide(a, b)
    if q is None:
        raise ArithmeticError("subresultant division was not exact")
    return q


def _monomial_gcd(a: Poly, b: Poly) -> Poly:
    """GCD of two monomials."""
    vars_ = [v for v in a.vars if v in b.vars]
    ea = next(iter(a.terms))
    eb = next(iter(b.terms))
    out = {}
    exps = []
    for v in vars_:
        exps.append(min(ea[a.vars.index(v)], eb[b.vars.index(v)]))
    if not vars_ or not any(exps):
        return Poly.one()
    return Poly(tuple(vars_), {tuple(exps): QQ(1)}, _trusted=True)


def _monic(p: Poly) -> Poly:
    if p.is_zero():
        return p
    lc = p.leading_coefficient()
    if lc == 1:
        return p
    return p * (1 / lc)


def poly_lcm(a: Poly, b: Poly) -> Poly:
    if a.is_zero() or b.is_zero():
        return Poly.zero()
    g = poly_gcd(a, b)
    q = exact_divide(a, g)
    assert q is not None
    return _monic(q * b)
