"""Topological recursion on a genus-0 spectral curve, exactly.

The table stores correlation differentials omega_{h,n} divided by the
product of coordinate differentials, as rational functions of the
uniformizer slots.  A table entry is keyed by

    (h, number of symbolic slots, frozen numeric spectators, endpoint labels)

where endpoint labels mark slots that have been integrated from the chosen
base point at infinity up to a symbolic endpoint (w1 or w2).  Integrated
slots ride through the residue recursion: every term of the recursion
kernel sum distributes them binomially over the two factors, and they
bottom out on the closed-form second-kind integrals.

All residues are Laurent expansions at the (rational) ramification points;
no numeric contour integration anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .cas import (INF, LaurentSeries, Poly, QQ, RationalFunction, expand_at,
                  eval_poly_at_series, eval_ratfun_at_series,
                  eval_ratfun_at_series2, series_residue)
from .curve import PolePoint, RamPoint, SpectralCurve, canonical_coordinate, ydx_series

SLOT_VARS = ("u1", "u2", "u3", "u4", "u5", "u6")
ENDPOINT_VARS = ("w1", "w2")
T = "t"


class RecursionError(ValueError):
    pass


def _binom(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


@dataclass(frozen=True)
class EntryKey:
    h: int
    nsym: int
    specs: tuple[Fraction, ...]
    ends: tuple[str, ...]

    @property
    def total_slots(self) -> int:
        return self.nsym + len(self.specs) + len(self.ends)

    @property
    def chi(self) -> int:
        return 2 * self.h - 2 + self.total_slots


def make_key(h: int, nsym: int, specs=(), ends=()) -> EntryKey:
    return EntryKey(h, nsym, tuple(QQ(s) for s in specs), tuple(sorted(ends)))


class OmegaTable:
    """Memoized recursion differentials for one curve and one base branch.

    ``base`` is the pole point of x serving as the normalization point of
    all slot integrals (the chosen branch over infinity).
    """

    def __init__(self, curve: SpectralCurve, base: PolePoint | None = None,
                 chi_max: int = 4):
        self.curve = curve
        if base is None:
            cands = [p for p in curve.poles if p.base_point is INF]
            if not cands:
                raise RecursionError("curve has no branch over infinity")
            base = cands[0]
        self.base = base
        self.chi_max = chi_max
        self.entries: dict[EntryKey, RationalFunction] = {}
        self._deck_cache: dict[tuple[Fraction, int], LaurentSeries] = {}

    # -- public spec surface -----------------------------------------------------

    def omega(self, h: int, n: int) -> RationalFunction:
        """omega_{h,n} / (dz_1 ... dz_n) in the slot variables u1..un."""
        if (h, n) in ((0, 0), (1, 0)):
            raise RecursionError("use symbolic placeholders for omega_00 and "
                                 "omega_10")
        if h < 0 or n < 1:
            raise RecursionError("invalid recursion indices")
        return self.entry(make_key(h, n))

    def fill(self, chi_max: int | None = None) -> None:
        chi_max = chi_max if chi_max is not None else self.chi_max
        for chi in range(-1, chi_max + 1):
            for h in range(0, chi // 2 + 2):
                n = chi + 2 - 2 * h
                if n < 1 or (h, n) in ((0, 0), (1, 0)):
                    continue
                if (h, n) == (0, 1) or (h, n) == (0, 2) or chi > 0:
                    self.omega(h, n)

    # -- entries -------------------------------------------------------------------

    def entry(self, key: EntryKey) -> RationalFunction:
        got = self.entries.get(key)
        if got is not None:
            return got
        value = self._compute(key)
        self.entries[key] = value
        return value

    def _compute(self, key: EntryKey) -> RationalFunction:
        if key.nsym < 1:
            raise RecursionError("entries keep their first slot symbolic")
        if key.h == 0 and key.total_slots == 1:
            # omega_{0,1}/dz = y x'
            f = self.curve.y * self.curve.xp()
            return f.subs({"z": RationalFunction.var(SLOT_VARS[0])})
        if key.h == 0 and key.total_slots == 2:
            return self._second_kind(key)
        if key.chi <= 0:
            raise RecursionError(f"unstable entry {key} has no recursion")
        return self._residue_sum(key)

    def _second_kind(self, key: EntryKey) -> RationalFunction:
        u1 = RationalFunction.var(SLOT_VARS[0])
        if key.nsym == 2:
            u2 = RationalFunction.var(SLOT_VARS[1])
            return (u1 - u2) ** -2
        if key.specs:
            c = key.specs[0]
            return (u1 - c) ** -2
        # slot integrated from the base branch to the endpoint:
        # antiderivative of 1/(u1-s)^2 ds evaluated between the limits
        w = RationalFunction.var(key.ends[0])
        val = (u1 - w).inverse()
        if self.base.z_value is not INF:
            val = val - (u1 - QQ(self.base.z_value)).inverse()
        return val

    # -- the residue recursion -------------------------------------------------------

    def _deck(self, a: RamPoint, order: int) -> LaurentSeries:
        cache_key = (a.z_value, order)
        got = self._deck_cache.get(cache_key)
        if got is None:
            from .curve import _deck_series
            if order <= a.involution.order:
                got = a.involution.truncate(order)
            else:
                got = _deck_series(self.curve.x, a.z_value, order)
            self._deck_cache[cache_key] = got
        return got

    def _residue_sum(self, key: EntryKey) -> RationalFunction:
        order = 6 * key.h + 2 * key.total_slots + 8
        for attempt in range(4):
            try:
                return self._residue_sum_at_order(key, order)
            except _DepthError:
                order *= 2
        raise RecursionError(f"residue expansion did not stabilize for {key}")

    def _residue_sum_at_order(self, key: EntryKey, order: int) -> RationalFunction:
        total = RationalFunction.zero()
        for a in self.curve.ramification:
            total = total + self._residue_at(key, a, order)
        return total

    def _kernel(self, a: RamPoint, order: int):
        """Series data at the ramification point: (zeta, sigma, kernel_scalar)
        with kernel_scalar = (1/2)(1/(u1-z) - 1/(u1-sigma)) / Den * sigma',
        missing the W-tilde factor.

        The target-variable dependence is carried through the shifted symbol
        ka = u1 - a, so every kernel denominator is a monomial; the caller
        substitutes ka back at the very end."""
        av = QQ(a.z_value)
        s = self._deck(a, order + 2)
        zeta = LaurentSeries.monomial(T, 1, order + 2) + av       # z = a + t
        sigma = s + av                                            # sigma(z)
        ka = RationalFunction.var("ka")
        # 1/(ka - t): direct geometric series
        inv1 = _inv_linear_series(ka, order + 2)
        # 1/(ka - s(t))
        shifted = LaurentSeries.constant(T, ka, order + 2) - s
        inv2 = shifted.inverse()
        kpart = (inv1 - inv2) * QQ(1, 2)
        # denominator (y x')(a+t) - (y x')(sigma) * sigma'
        yxp = self.curve.y * self.curve.xp()
        den1 = eval_ratfun_at_series(yxp, "z", zeta)
        den2 = eval_ratfun_at_series(yxp, "z", sigma) * s.derivative()
        den = den1 - den2
        if den.is_zero():
            raise RecursionError("degenerate ramification")
        kscalar = kpart * den.inverse() * s.derivative()
        return zeta, sigma, kscalar

    def _residue_at(self, key: EntryKey, a: RamPoint, order: int) -> RationalFunction:
        zeta, sigma, kscalar = self._kernel(a, order)
        wt = self._w_tilde(key, zeta, sigma, order)
        if min(kscalar.order + wt.min_exp, wt.order + kscalar.min_exp) < -1:
            raise _DepthError
        res = _convolution_coefficient(kscalar, wt, -1)
        av = QQ(a.z_value)
        u1 = RationalFunction.var(SLOT_VARS[0])
        return res.subs({"ka": u1 - av})

    def _w_tilde(self, key: EntryKey, zeta: LaurentSeries, sigma: LaurentSeries,
                 order: int) -> LaurentSeries:
        h, nsym, specs, ends = key.h, key.nsym, key.specs, key.ends
        spect_names = [SLOT_VARS[i] for i in range(1, nsym)]
        total = LaurentSeries.zero(T, order)
        # subtracted-diagonal term omega_{h-1, .+2}
        if h >= 1:
            sub = make_key(h - 1, nsym + 1, specs, ends)
            val = self.entry(sub)
            total = total + self._eval_two_series(val, zeta, sigma, spect_names)
        # split terms
        end_counts = _count(ends)
        spec_idx = list(range(len(specs)))
        sym_idx = list(range(len(spect_names)))
        for s_gen in range(0, h + 1):
            for a_sym in _subsets(sym_idx):
                for a_spec in _subsets(spec_idx):
                    b_sym = [i for i in sym_idx if i not in a_sym]
                    b_spec = [i for i in spec_idx if i not in a_spec]
                    for a_ends, mult in _end_splits(end_counts):
                        b_ends = _end_complement(end_counts, a_ends)
                        ka = (s_gen, len(a_sym), tuple(a_spec), a_ends)
                        kb = (h - s_gen, len(b_sym), tuple(b_spec), b_ends)
                        if _is_unstable_01(*ka) or _is_unstable_01(*kb):
                            continue
                        key_a = make_key(s_gen, 1 + len(a_sym),
                                         [specs[i] for i in a_spec], a_ends)
                        key_b = make_key(h - s_gen, 1 + len(b_sym),
                                         [specs[i] for i in b_spec], b_ends)
                        fa = self._eval_one_series(
                            self.entry(key_a), zeta,
                            [spect_names[i] for i in a_sym])
                        fb = self._eval_one_series(
                            self.entry(key_b), sigma,
                            [spect_names[i] for i in b_sym])
                        term = fa * fb
                        if mult != 1:
                            term = term * QQ(mult)
                        total = total + term
        return total

    def _eval_one_series(self, value: RationalFunction, s: LaurentSeries,
                         spect_names: list[str]) -> LaurentSeries:
        # spectator renaming is simultaneous and never targets the live slot
        value = _rename_slots(value, spect_names)
        return eval_ratfun_at_series(value, SLOT_VARS[0], s)

    def _eval_two_series(self, value: RationalFunction, s1: LaurentSeries,
                         s2: LaurentSeries, spect_names: list[str]) -> LaurentSeries:
        # substitute the two live slots first; then shift the remaining slot
        # names down inside the coefficients (avoids renaming into a live slot)
        res = eval_ratfun_at_series2(value, SLOT_VARS[0], s1, SLOT_VARS[1], s2)
        sub = {}
        for i, name in enumerate(spect_names):
            old = SLOT_VARS[2 + i]
            if old != name:
                sub[old] = Poly.var(name)
        if sub:
            res = res.map_coeffs(lambda c: _subs_coeff(c, sub))
        return res


class _DepthError(Exception):
    pass


def _inv_linear_series(c: RationalFunction, order: int) -> LaurentSeries:
    """1/(c - t) = sum_k t^k / c^(k+1) as a series in t."""
    inv = c.inverse()
    coeffs = []
    power = inv
    for _ in range(order + 1):
        coeffs.append(power)
        power = power * inv
    return LaurentSeries(T, 0, coeffs, order)


def _convolution_coefficient(s1: LaurentSeries, s2: LaurentSeries,
                             target: int) -> RationalFunction:
    """Coefficient of t^target in s1*s2, summed over a lazily built common
    denominator (one final reduction instead of pairwise ones)."""
    from .cas.poly import exact_divide, poly_gcd
    num_acc = Poly.zero()
    den_acc = Poly.one()
    for i, ac in enumerate(s1.coeffs):
        k = s1.min_exp + i
        j = target - k
        if j < s2.min_exp or j > s2.order:
            continue
        bc = s2.coefficient(j)
        a = RationalFunction.of(ac)
        b = RationalFunction.of(bc)
        if a.is_zero() or b.is_zero():
            continue
        n = a.num * b.num
        d = a.den * b.den
        g = poly_gcd(den_acc, d)
        d_extra = exact_divide(d, g)
        num_acc = num_acc * d_extra + n * exact_divide(den_acc, g)
        den_acc = den_acc * d_extra
    return RationalFunction(num_acc, den_acc)


def _rename_slots(value: RationalFunction, spect_names: list[str],
                  first_free: int = 1) -> RationalFunction:
    sub = {}
    for i, name in enumerate(spect_names):
        old = SLOT_VARS[first_free + i]
        if old != name:
            sub[old] = Poly.var(name)
    if not sub:
        return value
    return RationalFunction(value.num.subs(sub), value.den.subs(sub))


def _subs_coeff(c, sub: dict):
    if isinstance(c, (int, Fraction)):
        return c
    if isinstance(c, Poly):
        return c.subs(sub)
    return RationalFunction(c.num.subs(sub), c.den.subs(sub))


def _count(items: tuple[str, ...]) -> dict[str, int]:
    out: dict[str, int] = {}
    for x in items:
        out[x] = out.get(x, 0) + 1
    return out


def _subsets(idx: list[int]):
    for r in range(len(idx) + 1):
        yield from (list(c) for c in combinations(idx, r))


def _end_splits(counts: dict[str, int]):
    """All ways to split an endpoint multiset, with binomial multiplicity."""
    labels = sorted(counts)

    def rec(i: int):
        if i == len(labels):
            yield (), 1
            return
        lab = labels[i]
        m = counts[lab]
        for rest, mult in rec(i + 1):
            for j in range(m + 1):
                yield (lab,) * j + rest, mult * _binom(m, j)

    for chosen, mult in rec(0):
        yield tuple(sorted(chosen)), mult


def _end_complement(counts: dict[str, int], chosen: tuple[str, ...]):
    got = _count(chosen)
    out = []
    for lab, m in counts.items():
        out.extend([lab] * (m - got.get(lab, 0)))
    return tuple(sorted(out))


def _is_unstable_01(h: int, n_extra_sym: int, specs, ends) -> bool:
    """Detects the excluded omega_{0,1} factor (genus 0, no extra slots)."""
    return h == 0 and n_extra_sym == 0 and not specs and not ends


# -- spec operations built on the table ------------------------------------------------


def recursion_kernel(table: OmegaTable, a: RamPoint, order: int) -> LaurentSeries:
    """The recursion kernel divided by (dz0 / dz), as a Laurent series in the
    local coordinate at the ramification point with coefficients rational in
    the target variable; includes the deck-differential factor."""
    _, _, kscalar = table._kernel(a, order)
    return kscalar.truncate(order)


def free_energy(table: OmegaTable, h: int) -> Fraction:
    """omega_{h,0} for h >= 2 via the dilaton-type residue pairing."""
    if h < 2:
        raise RecursionError("use symbolic placeholders for omega_00, omega_10")
    w_h1 = table.omega(h, 1)
    total = QQ(0)
    order = 6 * h + 10
    for a in table.curve.ramification:
        av = QQ(a.z_value)
        zeta = LaurentSeries.monomial(T, 1, order) + av
        ydx_loc = eval_ratfun_at_series(table.curve.y * table.curve.xp(), "z", zeta)
        phi = ydx_loc.integrate()
        w_loc = eval_ratfun_at_series(w_h1, SLOT_VARS[0], zeta)
        total += QQ(series_residue(w_loc * phi))
    return total / (2 - 2 * h)


def free_energy_shift_invariance(table: OmegaTable, h: int, shift: Fraction) -> bool:
    """Shifting the antiderivative by a constant must not change omega_{h,0}."""
    w_h1 = table.omega(h, 1)
    order = 6 * h + 10
    total = QQ(0)
    for a in table.curve.ramification:
        av = QQ(a.z_value)
        zeta = LaurentSeries.monomial(T, 1, order) + av
        ydx_loc = eval_ratfun_at_series(table.curve.y * table.curve.xp(), "z", zeta)
        phi = ydx_loc.integrate() + QQ(shift)
        w_loc = eval_ratfun_at_series(w_h1, SLOT_VARS[0], zeta)
        total += QQ(series_residue(w_loc * phi))
    return total / (2 - 2 * h) == free_energy(table, h)


def cycle_integral(table: OmegaTable, p: PolePoint, k: int, slot: int,
                   h: int, n: int) -> RationalFunction:
    """Residue at the pole of zeta_p^(-k) against one slot of omega_{h,n};
    the result is a rational function of the remaining slots."""
    if k <= 0:
        raise RecursionError("only strictly positive cycle indices supported")
    if not 1 <= slot <= n:
        raise RecursionError("slot out of range")
    if (h, n) == (0, 1):
        value = table.entry(make_key(0, 1))
    else:
        value = table.omega(h, n)
    # move the chosen slot into u1
    if slot != 1:
        swap = {SLOT_VARS[0]: Poly.var(SLOT_VARS[slot - 1]),
                SLOT_VARS[slot - 1]: Poly.var(SLOT_VARS[0])}
        value = RationalFunction(value.num.subs(swap), value.den.subs(swap))
    depth = table.curve.depth + 2 * k + 4
    zeta = canonical_coordinate(table.curve.x, p.z_value, p.base_point,
                                p.d_p, depth)
    # expansion of the slot at the pole, in the local uniformizer u
    if p.z_value is INF:
        zz = LaurentSeries.monomial("u", -1, depth)     # z = 1/u
        measure = LaurentSeries.monomial("u", -2, depth, QQ(-1))
    else:
        zz = LaurentSeries.monomial("u", 1, depth) + QQ(p.z_value)
        measure = LaurentSeries.constant("u", QQ(1), depth)
    zeta_u = LaurentSeries("u", zeta.min_exp, list(zeta.coeffs), zeta.order)
    val_u = eval_ratfun_at_series(value, SLOT_VARS[0], zz)
    integrand = (zeta_u ** (-k)) * val_u * measure
    res = series_residue(integrand)
    out = RationalFunction.of(res)
    # re-index remaining slots to u1..u_{n-1}
    if n > 1:
        ren = {}
        j = 0
        for i in range(n):
            name = SLOT_VARS[i]
            if i == slot - 1:
                continue
            ren[name] = Poly.var(SLOT_VARS[j])
            j += 1
        out = RationalFunction(out.num.subs(ren), out.den.subs(ren))
    return out


def omega_with_pole_residues(table: OmegaTable, h: int, n: int) -> RationalFunction:
    """Recompute omega_{h,n} including residues at two-cyclic ramified poles
    (admissible curves must give the same answer)."""
    base = table._residue_sum(make_key(h, n))
    extra = RationalFunction.zero()
    for p in table.curve.poles:
        if p.d_p != 2:
            continue
        extra = extra + _pole_residue_contribution(table, p, make_key(h, n))
    return base + extra


def _pole_residue_contribution(table: OmegaTable, p: PolePoint,
                               key: EntryKey) -> RationalFunction:
    order = 6 * key.h + 2 * key.total_slots + 14 + 2 * p.r_p
    curve = table.curve
    depth = order + p.r_p + 6
    # local coordinate u at the pole, z(u), and the local deck map
    if p.z_value is INF:
        z_of_u = LaurentSeries.monomial(T, -1, depth)
        measure_ok = True
    else:
        z_of_u = LaurentSeries.monomial(T, 1, depth) + QQ(p.z_value)
        measure_ok = True
    # canonical coordinate zeta(u); the deck map sends zeta -> -zeta, i.e.
    # u -> series solving zeta(u') = -zeta(u)
    zeta = canonical_coordinate(curve.x, p.z_value, p.base_point, p.d_p, depth)
    zeta_t = LaurentSeries(T, zeta.min_exp, list(zeta.coeffs), zeta.order)
    sigma_u = _invert_to(zeta_t, -zeta_t)
    sigma_z = eval_series_at_series(z_of_u, sigma_u)
    u1 = RationalFunction.var(SLOT_VARS[0])
    inv1 = (LaurentSeries.constant(T, u1, depth) - z_of_u).inverse()
    inv2 = (LaurentSeries.constant(T, u1, depth) - sigma_z).inverse()
    kpart = (inv1 - inv2) * QQ(1, 2)
    yxp = curve.y * curve.xp()
    den1 = eval_ratfun_at_series(yxp, "z", z_of_u) * z_of_u.derivative()
    den2 = eval_ratfun_at_series(yxp, "z", sigma_z) * sigma_z.derivative()
    den = den1 - den2
    kscalar = kpart * den.inverse() * sigma_z.derivative()
    # W-tilde with the local pair (z(u), sigma_z(u))
    wt = table._w_tilde(key, z_of_u, sigma_z, order)
    integrand = kscalar * wt * z_of_u.derivative()
    res = integrand.coefficient(-1) if integrand.min_exp <= -1 <= integrand.order \
        else QQ(0)
    return RationalFunction.of(res)


def eval_series_at_series(outer: LaurentSeries, inner: LaurentSeries) -> LaurentSeries:
    """outer(inner(t)); inner must have valuation 1 so that negative outer
    exponents can be realized by inverting inner."""
    if not outer.coeffs:
        return LaurentSeries.zero(inner.var, inner.order)
    inv = inner.inverse() if outer.min_exp < 0 else None
    total = None
    power = None
    for i, c in enumerate(outer.coeffs):
        k = outer.min_exp + i
        if k >= 0:
            piece = inner ** k if k else LaurentSeries.constant(inner.var, QQ(1), inner.order)
        else:
            piece = inv ** (-k)
        piece = piece * c
        total = piece if total is None else total + piece
    return total


def _invert_to(f: LaurentSeries, target: LaurentSeries) -> LaurentSeries:
    """Solve f(s(t)) = target(t) for a valuation-1 series s, coefficient by
    coefficient (f and target both have valuation 1)."""
    if f.min_exp != 1 or target.min_exp != 1:
        raise RecursionError("deck reversion expects valuation-one coordinates")
    order = min(f.order, target.order)
    lead_f = QQ(f.coeffs[0])
    coeffs: dict[int, Fraction] = {1: QQ(target.coeffs[0]) / lead_f}
    for n in range(2, order + 1):
        s = LaurentSeries.from_coeff_map(T, dict(coeffs), n)
        fs = eval_series_at_series(f.truncate(order), s)
        got = QQ(fs.coefficient(n)) if fs.min_exp <= n <= fs.order else QQ(0)
        want = QQ(target.coefficient(n))
        coeffs[n] = (want - got) / lead_f
    return LaurentSeries.from_coeff_map(T, coeffs, order)
