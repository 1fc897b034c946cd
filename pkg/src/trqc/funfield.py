"""Function-field machinery: sums over the fiber of the cover without root
extraction.

The fiber above a generic base value is handled through a splitting tower:
adjoin one root of the fiber polynomial, divide it off synthetically,
adjoin a root of the quotient, and so on.  Traces over the tower realize
sums over ordered tuples of pairwise-distinct fiber points, which is
exactly what the symmetric loop-equation combinations need.  Everything is
linear algebra over exact rational-function fields.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .cas import Poly, QQ, RationalFunction
from .curve import SpectralCurve

GENS = ("s1", "s2", "s3", "s4")


def solve_linear(M: list[list[RationalFunction]], rhs: list[RationalFunction]):
    """Exact Gaussian elimination; returns the solution or None if singular."""
    n = len(M)
    A = [row[:] + [rhs[i]] for i, row in enumerate(M)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if not A[r][col].is_zero():
                piv = r
                break
        if piv is None:
            return None
        A[col], A[piv] = A[piv], A[col]
        inv = A[col][col].inverse()
        A[col] = [x * inv for x in A[col]]
        for r in range(n):
            if r != col and not A[r][col].is_zero():
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [A[i][n] for i in range(n)]


class SheetTower:
    """Tower of distinct fiber points above a base value.

    ``fiber_poly`` is the monic-able polynomial (in `var`) whose roots are
    the fiber; levels adjoin successive roots s1, s2, ... with the previous
    ones divided off.  Coefficients live in rational functions of whatever
    symbols the fiber polynomial carries (lam, or z, or spectators).
    """

    def __init__(self, fiber_poly: Poly, var: str, levels: int):
        coeffs = fiber_poly.as_univariate(var)
        d = max(coeffs)
        lead = RationalFunction(coeffs[d])
        self.nlevels = levels
        self.degrees: list[int] = []
        self.rewrites: list[dict[tuple[int, ...], RationalFunction]] = []
        zero_key = tuple([0] * levels)
        # relation at the current level: power -> tower element over lower gens
        current: dict[int, dict] = {
            k: {zero_key: RationalFunction(c) / lead}
            for k, c in coeffs.items() if not c.is_zero()}
        for level in range(levels):
            deg = max(current)
            if deg < 1:
                raise ValueError("tower deeper than the fiber")
            # rewrite: gen_level^deg = -sum_{k<deg} current[k] * gen_level^k
            rw: dict[tuple[int, ...], RationalFunction] = {}
            for k, elem in current.items():
                if k == deg:
                    continue
                for key, c in elem.items():
                    if c.is_zero():
                        continue
                    nk = list(key)
                    nk[level] += k
                    nk = tuple(nk)
                    rw[nk] = rw.get(nk, RationalFunction.zero()) - c
            self.degrees.append(deg)
            self.rewrites.append({k: v for k, v in rw.items() if not v.is_zero()})
            if level + 1 < levels:
                # synthetic quotient by (u - s_level): q_k = sum_{j>k} rel_j s^(j-k-1),
                # computed with tower reduction at the freshly built level
                gen_elem = self.gen(level)
                nxt: dict[int, dict] = {}
                for k in range(deg - 1, -1, -1):
                    acc = self.zero()
                    for j in range(k + 1, deg + 1):
                        cj = current.get(j) if j < deg else self.one()
                        if not cj:
                            continue
                        acc = self.add(acc, self.mul(cj, self.power(gen_elem, j - k - 1)))
                    if acc:
                        nxt[k] = acc
                current = nxt

    # -- element arithmetic -----------------------------------------------------

    def basis(self):
        return list(product(*[range(d) for d in self.degrees]))

    def dim(self) -> int:
        out = 1
        for d in self.degrees:
            out *= d
        return out

    def zero(self):
        return {}

    def one(self):
        return {tuple([0] * self.nlevels): RationalFunction.one()}

    def const(self, c) -> dict:
        c = RationalFunction.of(c)
        if c.is_zero():
            return {}
        return {tuple([0] * self.nlevels): c}

    def gen(self, level: int) -> dict:
        key = [0] * self.nlevels
        key[level] = 1
        return {tuple(key): RationalFunction.one()}

    def from_ratfun(self, f: RationalFunction, slot_to_gen: dict[str, int]) -> dict:
        """Interpret a rational function by sending slot variables to tower
        generators; denominators are inverted inside the tower."""
        num = self._poly_to_elem(f.num, slot_to_gen)
        den = self._poly_to_elem(f.den, slot_to_gen)
        return self.mul(num, self.inverse(den))

    def _poly_to_elem(self, p: Poly, slot_to_gen: dict[str, int]) -> dict:
        elem = {}
        for e, c in p.terms.items():
            key = [0] * self.nlevels
            passive = Poly.const(c)
            for name, k in zip(p.vars, e):
                if not k:
                    continue
                if name in slot_to_gen:
                    key[slot_to_gen[name]] += k
                else:
                    passive = passive * Poly.var(name, k)
            key = tuple(key)
            add = RationalFunction(passive)
            if key in elem:
                elem[key] = elem[key] + add
            else:
                elem[key] = add
        return self.reduce(elem)

    def reduce(self, elem: dict) -> dict:
        work = dict(elem)
        done: dict[tuple[int, ...], RationalFunction] = {}
        while work:
            key, c = work.popitem()
            if c.is_zero():
                continue
            over = None
            for i in range(len(self.degrees)):
                if key[i] >= self.degrees[i]:
                    over = i
                    break
            if over is None:
                if key in done:
                    done[key] = done[key] + c
                else:
                    done[key] = c
                continue
            # key = key' * gen^deg; expand gen^deg via the rewrite element
            base = list(key)
            base[over] -= self.degrees[over]
            for rkey, rc in self.rewrites[over].items():
                rkey = tuple(rkey) + (0,) * (self.nlevels - len(rkey))
                nk = tuple(b + r for b, r in zip(base, rkey))
                add = c * rc
                if nk in work:
                    work[nk] = work[nk] + add
                else:
                    work[nk] = add
        return {k: v for k, v in done.items() if not v.is_zero()}

    def add(self, a: dict, b: dict) -> dict:
        out = dict(a)
        for k, c in b.items():
            if k in out:
                s = out[k] + c
                if s.is_zero():
                    del out[k]
                else:
                    out[k] = s
            else:
                out[k] = c
        return out

    def scale(self, a: dict, c) -> dict:
        c = RationalFunction.of(c)
        if c.is_zero():
            return {}
        return {k: v * c for k, v in a.items()}

    def mul(self, a: dict, b: dict) -> dict:
        raw: dict[tuple[int, ...], RationalFunction] = {}
        for k1, c1 in a.items():
            for k2, c2 in b.items():
                k = tuple(x + y for x, y in zip(k1, k2))
                add = c1 * c2
                if k in raw:
                    raw[k] = raw[k] + add
                else:
                    raw[k] = add
        return self.reduce(raw)

    def power(self, a: dict, n: int) -> dict:
        out = self.one()
        base = a
        while n:
            if n & 1:
                out = self.mul(out, base)
            n >>= 1
            if n:
                base = self.mul(base, base)
        return out

    def _mult_matrix(self, a: dict):
        basis = self.basis()
        index = {b: i for i, b in enumerate(basis)}
        cols = []
        for b in basis:
            eb = {tuple(b): RationalFunction.one()}
            prod = self.mul(a, eb)
            col = [RationalFunction.zero()] * len(basis)
            for k, c in prod.items():
                col[index[k]] = c
            cols.append(col)
        return basis, cols

    def inverse(self, a: dict) -> dict:
        if not a:
            raise ZeroDivisionError("inverse of zero tower element")
        if len(a) == 1 and tuple([0] * self.nlevels) in a:
            return {tuple([0] * self.nlevels): a[tuple([0] * self.nlevels)].inverse()}
        basis, cols = self._mult_matrix(a)
        n = len(basis)
        M = [[cols[j][i] for j in range(n)] for i in range(n)]
        rhs = [RationalFunction.zero()] * n
        rhs[basis.index(tuple([0] * self.nlevels))] = RationalFunction.one()
        sol = solve_linear(M, rhs)
        if sol is None:
            raise ZeroDivisionError("tower element is a zero divisor")
        return {tuple(b): c for b, c in zip(basis, sol) if not c.is_zero()}

    def trace(self, a: dict) -> RationalFunction:
        """Sum over ordered tuples of pairwise-distinct fiber points."""
        basis, cols = self._mult_matrix(a)
        tr = RationalFunction.zero()
        for i, b in enumerate(basis):
            tr = tr + cols[i][i]
        return tr


def fiber_polynomial(curve: SpectralCurve, u: str = "u") -> Poly:
    """Numerator of x(u) - lam: its roots are the fiber above lam."""
    lam = Poly.var("lam")
    sub = {"z": Poly.var(u)}
    return curve.x.num.subs(sub) - lam * curve.x.den.subs(sub)


def punctured_fiber_polynomial(curve: SpectralCurve, u: str = "u") -> Poly:
    """Numerator of (x(u) - x(z)) / (u - z): roots are the sheets other than
    the marked point z."""
    a = curve.x.num
    b = curve.x.den
    u_ = {"z": Poly.var(u)}
    num = a.subs(u_) * b - a * b.subs(u_)
    from .cas.poly import exact_divide
    q = exact_divide(num, Poly.var(u) - Poly.var("z"))
    if q is None:
        raise ValueError("marked point does not divide the fiber polynomial")
    return q


def full_tower(curve: SpectralCurve, levels: int) -> SheetTower:
    return SheetTower(fiber_polynomial(curve), "u", levels)


def punctured_tower(curve: SpectralCurve, levels: int) -> SheetTower:
    return SheetTower(punctured_fiber_polynomial(curve), "u", levels)
