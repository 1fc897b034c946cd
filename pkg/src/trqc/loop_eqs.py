"""Loop equations: the symmetric fiber combinations of recursion
differentials, their regularity at critical values, and the subtracted
variants used by the KZ system.

Sums over l-element subsets of the fiber with set partitions are evaluated
as traces over the splitting tower (ordered distinct tuples divided by l!),
never by root extraction.  Spectator slots are either frozen to rational
sample values, kept as symbols, or integrated from the base branch; the
corresponding recursion entries carry them natively.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct

from .cas import INF, Poly, QQ, RationalFunction, expand_at
from .curve import SpectralCurve
from .funfield import GENS, SheetTower, full_tower, punctured_tower
from .recursion import SLOT_VARS, OmegaTable, make_key

DEFAULT_SPECTATORS = (QQ(5), QQ(7), QQ(11), QQ(17), QQ(19))


def _partitions(items: list[int]):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


@dataclass
class Spectators:
    """Slots beyond the fiber: rational values, symbols, or integrated slots
    (all integrated slots share the endpoint label)."""
    numeric: tuple[Fraction, ...] = ()
    symbolic: tuple[str, ...] = ()
    integrated: int = 0
    endpoint: str = "w1"

    @property
    def count(self) -> int:
        return len(self.numeric) + len(self.symbolic) + self.integrated

    def labels(self) -> list[tuple[str, object]]:
        out: list[tuple[str, object]] = []
        out.extend(("num", v) for v in self.numeric)
        out.extend(("sym", s) for s in self.symbolic)
        out.extend(("end", self.endpoint) for _ in range(self.integrated))
        return out


class LoopSystem:
    """Q-differential evaluator bound to one recursion table."""

    def __init__(self, table: OmegaTable):
        self.table = table
        self.curve = table.curve
        self._towers: dict[tuple[str, int], SheetTower] = {}
        self._elem_cache: dict = {}

    # -- towers -------------------------------------------------------------------

    def tower(self, kind: str, levels: int) -> SheetTower:
        key = (kind, levels)
        got = self._towers.get(key)
        if got is None:
            if kind == "full":
                got = full_tower(self.curve, levels)
            else:
                got = punctured_tower(self.curve, levels)
            self._towers[key] = got
        return got

    # -- the partition sum ----------------------------------------------------------

    def _omega_value(self, g: int, block: int, spec: Spectators,
                     assign: tuple[int, ...], block_id: int) -> RationalFunction:
        """Recursion entry for one partition block: `block` fiber slots plus
        the spectators assigned to this block."""
        nums, syms, ends = [], [], []
        for (kind, val), b in zip(spec.labels(), assign):
            if b != block_id:
                continue
            if kind == "num":
                nums.append(val)
            elif kind == "sym":
                syms.append(val)
            else:
                ends.append(val)
        nsym = block + len(syms)
        key = make_key(g, nsym, tuple(sorted(nums)), tuple(ends))
        value = self.table.entry(key)
        # the symbolic spectators sit in slots after the fiber slots
        if syms:
            sub = {}
            for i, name in enumerate(sorted(syms)):
                old = SLOT_VARS[block + i]
                if old != name:
                    sub[old] = Poly.var(name)
            if sub:
                value = RationalFunction(value.num.subs(sub), value.den.subs(sub))
        return value

    def _to_tower(self, tower: SheetTower, value: RationalFunction,
                  gen_offset: tuple[int, ...]):
        slot_map = {SLOT_VARS[i]: g for i, g in enumerate(gen_offset)}
        cache_key = (id(tower), value, tuple(gen_offset))
        got = self._elem_cache.get(cache_key)
        if got is None:
            sub = {SLOT_VARS[i]: Poly.var(GENS[g]) for i, g in enumerate(gen_offset)}
            num = value.num.subs(sub)
            den = value.den.subs(sub)
            got = tower.from_ratfun(RationalFunction(num, den, _reduced=True), {
                GENS[g]: g for g in gen_offset})
            self._elem_cache[cache_key] = got
        return got

    def partition_sum(self, kind: str, l: int, h: int,
                      spec: Spectators) -> RationalFunction:
        """Sum over l-subsets of the fiber (or punctured fiber) and set
        partitions, divided by (d lam)^l; a rational function of the base
        variable, spectator symbols and the endpoint."""
        max_levels = self.curve.d if kind == "full" else self.curve.d - 1
        if l > max_levels:
            return RationalFunction.zero()
        if l == 0:
            return RationalFunction.one() if (h, spec.count) == (0, 0) \
                else RationalFunction.zero()
        tower = self.tower(kind, l)
        labels = spec.labels()
        total = tower.zero()
        xp = self.curve.xp()
        for part in _partitions(list(range(l))):
            blocks = len(part)
            extra = h + blocks - l
            if extra < 0:
                continue
            for assign in iproduct(range(blocks), repeat=len(labels)):
                for gs in _compositions(extra, blocks):
                    term = tower.one()
                    ok = True
                    for bi, block in enumerate(part):
                        value = self._omega_value(gs[bi], len(block), spec,
                                                  assign, bi)
                        elem = self._to_tower(tower, value, tuple(block))
                        term = tower.mul(term, elem)
                        if not term:
                            ok = False
                            break
                    if ok and term:
                        total = tower.add(total, term)
        if not total:
            return RationalFunction.zero()
        # measure conversion: one 1/x'(r) per fiber slot
        for i in range(l):
            xp_elem = self._to_tower(tower, _rename_to_slot(xp), (i,))
            total = tower.mul(total, tower.inverse(xp_elem))
        traced = tower.trace(total)
        fact = 1
        for i in range(2, l + 1):
            fact *= i
        return traced * QQ(1, fact)

    # -- public operations ------------------------------------------------------------

    def q(self, h: int, n: int, l: int, spec: Spectators | None = None) -> RationalFunction:
        """Q^(l)_{h,n+1}(lam; spectators) / (d lam)^l as a rational function."""
        if l == 0:
            return RationalFunction.one() if (h, n) == (0, 0) else RationalFunction.zero()
        if l > self.curve.d:
            return RationalFunction.zero()
        spec = spec or default_spectators(n)
        if spec.count != n:
            raise ValueError("spectator count does not match n")
        return self.partition_sum("full", l, h, spec)

    def qhat(self, h: int, n: int, l: int, spec: Spectators | None = None) -> RationalFunction:
        """hat-Q^(l)_{h,n+1}(z; spectators) / (dx(z))^l, in the uniformizer."""
        if l == 0:
            return RationalFunction.one() if (h, n) == (0, 0) else RationalFunction.zero()
        if l > self.curve.d - 1:
            return RationalFunction.zero()
        spec = spec or default_spectators(n)
        if spec.count != n:
            raise ValueError("spectator count does not match n")
        return self.partition_sum("punctured", l, h, spec)

    def qtilde(self, h: int, n: int, l: int,
               spec_points: tuple[Fraction, ...] | None = None) -> RationalFunction:
        """tilde-Q: Q/(d lam)^l minus the diagonal subtractions, rational in
        lam with numeric spectator points in the uniformizer."""
        if l == 0:
            return RationalFunction.one() if (h, n) == (0, 0) else RationalFunction.zero()
        pts = spec_points or DEFAULT_SPECTATORS[:n]
        if len(pts) != n:
            raise ValueError("need one uniformizer point per spectator")
        xs = [self.curve.x.eval_rational({"z": QQ(p)}) for p in pts]
        if len(set(xs)) != len(xs):
            raise ValueError("degenerate spectator configuration")
        lam = RationalFunction.var("lam")
        total = self.q(h, n, l, Spectators(numeric=tuple(QQ(p) for p in pts)))
        for j, p in enumerate(pts):
            others = tuple(QQ(x) for i, x in enumerate(pts) if i != j)
            # d/dz_j of hatQ^(l-1)(z_j; others) / (lam - x(z_j)), at z_j = p
            sym = "zs"
            qh = self.qhat(h, n - 1, l - 1,
                           Spectators(numeric=others)) if n - 1 >= 0 else None
            if qh is None:
                continue
            qh_sym = qh.subs({"z": RationalFunction.var(sym)})
            xj = self.curve.x.subs({"z": RationalFunction.var(sym)})
            expr = qh_sym / (lam - xj)
            dexpr = expr.derivative(sym)
            total = total - dexpr.subs({sym: QQ(p)})
        return total

    def critical_value_regularity(self, f: RationalFunction, depth: int = 4) -> dict:
        """Expand at every critical value and assert analyticity."""
        out = {}
        for a in self.curve.ramification:
            cv = a.critical_value
            s = expand_at(f, "lam", QQ(cv), depth)
            out[str(cv)] = s.is_zero() or s.min_exp >= 0
        return out


def _rename_to_slot(f: RationalFunction) -> RationalFunction:
    return f.subs({"z": RationalFunction.var(SLOT_VARS[0])})


def default_spectators(n: int) -> Spectators:
    return Spectators(numeric=tuple(DEFAULT_SPECTATORS[:n]))


# -- verification reports ---------------------------------------------------------------


@dataclass
class VerificationReport:
    name: str
    checks: dict[str, bool] = field(default_factory=dict)
    details: dict[str, str] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def add(self, key: str, ok: bool, detail: str = ""):
        self.checks[key] = ok
        if detail and not ok:
            self.details[key] = detail


def verify_loop_equations(system: LoopSystem, h: int, n: int, l: int,
                          depth: int = 4) -> VerificationReport:
    """Theorem: Q^(l)/(d lam)^l has no poles at critical values."""
    rep = VerificationReport(f"loop_eq h={h} n={n} l={l}")
    f = system.q(h, n, l)
    for cv, ok in system.critical_value_regularity(f, depth).items():
        rep.add(f"regular_at_{cv}", ok, "pole at critical value")
    return rep


def verify_linear_loop_equation(system: LoopSystem, h: int, n: int) -> VerificationReport:
    """The l=1 loop equation in closed form, with symbolic spectators."""
    rep = VerificationReport(f"linear_loop_eq h={h} n={n}")
    syms = tuple(f"y{i}" for i in range(1, n + 1))
    spec = Spectators(symbolic=syms)
    lhs = system.q(h, n, 1, spec)
    lam = RationalFunction.var("lam")
    rhs = RationalFunction.zero()
    if (h, n) == (0, 0):
        rhs = system.curve.P[1] * lam ** 0
    elif (h, n) == (0, 1):
        x1 = system.curve.x.subs({"z": RationalFunction.var(syms[0])})
        dx1 = system.curve.xp().subs({"z": RationalFunction.var(syms[0])})
        rhs = dx1 / (lam - x1) ** 2
    rep.add("identity", (lhs - rhs).is_zero(),
            f"residual {(lhs - rhs)}")
    return rep


def verify_interpolation_identity(system: LoopSystem, h: int, n: int,
                                  l: int) -> VerificationReport:
    """Fiber-splitting identity relating the full and punctured sums:
    Q^(l)(x(z)) = hatQ^(l)(z) + hatQ^(l-1)(z; z-slot) + split products."""
    rep = VerificationReport(f"interpolation h={h} n={n} l={l}")
    spec = default_spectators(n)
    lhs = system.q(h, n, l, spec).subs({"lam": system.curve.x})
    rhs = system.qhat(h, n, l, spec)
    # middle term: the marked point joins a block through an extra slot; the
    # duplicated slot converts one dz into dx
    if l >= 1 and h >= 1:
        extra = Spectators(numeric=spec.numeric, symbolic=("zdup",))
        mid = system.qhat(h - 1, n + 1, l - 1, extra)
        rhs = rhs + mid.subs({"zdup": RationalFunction.var("z")}) / system.curve.xp()
    # split products: hatQ^(l-1)(z; A) * omega_{h2, |B|+1}(z, B)/dx
    nums = spec.numeric
    for split in range(2 ** n):
        A = tuple(nums[i] for i in range(n) if split & (1 << i))
        B = tuple(nums[i] for i in range(n) if not split & (1 << i))
        for h1 in range(h + 1):
            h2 = h - h1
            qa = system.qhat(h1, len(A), l - 1, Spectators(numeric=A))
            if qa.is_zero():
                continue
            wb = _omega_at_marked(system, h2, B)
            if wb is None:
                continue
            rhs = rhs + qa * wb
    rep.add("identity", (lhs - rhs).is_zero(), "fiber-splitting mismatch")
    return rep


def _omega_at_marked(system: LoopSystem, h2: int, B: tuple[Fraction, ...]):
    """omega_{h2, |B|+1}(z, B) / dx(z), with numeric spectators."""
    n_tot = len(B) + 1
    if (h2, n_tot) == (0, 1):
        value = system.table.entry(make_key(0, 1))
    elif (h2, n_tot) == (0, 2):
        value = system.table.entry(make_key(0, 1, tuple(sorted(B))))
    else:
        if 2 * h2 - 2 + n_tot <= 0:
            return None
        value = system.table.entry(make_key(h2, 1, tuple(sorted(B))))
    value = value.subs({SLOT_VARS[0]: RationalFunction.var("z")})
    return value / system.curve.xp()
