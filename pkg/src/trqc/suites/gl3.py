"""Degree-3 quantization identity suite: Hamiltonian structure, 3x3 Lax
compatibility, the third-order evolution equation for the apparent
singularity, and the time change diagonalizing the flow.

Everything is an exact zero-normal-form test over the spectral times
t_{i,j} (i=1..3, j=0..2, with t30 = -t10-t20 eliminated), the Darboux pair
(q, w = p2/hbar), hbar and lam.  p1 and H are eliminated through their
closed forms.
"""

from __future__ import annotations

from ..cas import Poly, QQ, RationalFunction
from .derivation import FormalDerivation, IdentitySuite

V = Poly.var
R = RationalFunction.of


def _data():
    names = ["lam", "y", "q", "w", "hb",
             "t12", "t22", "t32", "t11", "t21", "t31", "t10", "t20"]
    g = {n: V(n) for n in names}
    lam, q, w, hb = g["lam"], g["q"], g["w"], g["hb"]
    t12, t22, t32 = g["t12"], g["t22"], g["t32"]
    t11, t21, t31 = g["t11"], g["t21"], g["t31"]
    t10, t20 = g["t10"], g["t20"]
    t30 = -t10 - t20  # residue theorem

    p11 = -(t12 + t22 + t32)
    p10 = -(t11 + t21 + t31)
    p22 = t12 * t22 + t12 * t32 + t22 * t32
    p21 = (t11 * t22 + t11 * t32 + t21 * t12 + t21 * t32
           + t31 * t12 + t31 * t22)
    p20 = (t10 * t22 + t10 * t32 + t20 * t12 + t20 * t32
           + t30 * t12 + t30 * t22
           + t11 * t21 + t11 * t31 + t21 * t31)
    p33 = -t12 * t22 * t32
    p32 = -(t11 * t22 * t32 + t12 * t21 * t32 + t12 * t22 * t31)
    p31 = -(t10 * t22 * t32 + t11 * t21 * t32 + t11 * t22 * t31
            + t12 * t22 * t30 + t12 * t21 * t31 + t12 * t20 * t32)
    p30 = -(t10 * t21 * t32 + t10 * t22 * t31 + t11 * t21 * t31
            + t11 * t22 * t30 + t11 * t20 * t32 + t12 * t21 * t30
            + t12 * t20 * t31)

    def P1(x):
        return p11 * x + p10

    def P2(x):
        return p22 * x ** 2 + p21 * x + p20

    def P3(x):
        return p33 * x ** 3 + p32 * x ** 2 + p31 * x + p30

    def P1p(x):
        return p11 + 0 * x

    def P2p(x):
        return 2 * p22 * x + p21

    def P3p(x):
        return 3 * p33 * x ** 2 + 2 * p32 * x + p31

    # eliminated quantities
    w1 = w ** 2 + P1(q) * w + P2(q) + hb * t12  # p1/hbar
    H0 = (w ** 3 + 2 * P1(q) * w ** 2
          + (P2(q) + P1(q) ** 2 + hb * (p11 + 2 * t12)) * w
          - P3(q) + P1(q) * P2(q) + hb * (p11 * t12 - t22 * t32) * q)
    H = (-H0 + (t12 + p11) * hb * w - hb * p22 * q - hb * p21
         - hb * p10 * t12)

    Lq = (-3 * w ** 2 - 4 * P1(q) * w - P2(q) - P1(q) ** 2
          - hb * (p11 + 2 * t12))
    Lw = (2 * p11 * w ** 2 + (P2p(q) + 2 * P1p(q) * P1(q)) * w
          - P3p(q) + P2(q) * P1p(q) + P2p(q) * P1(q)
          + hb * (p11 * t12 - t22 * t32))
    deriv = FormalDerivation("L_gl3", {
        "q": Lq, "w": Lw,
        "t11": -hb * (t12 * t22 + t12 * t32 + t22 * t32),
        "t21": -hb * (t12 * t32 + t22 * t32 + t22 ** 2),
        "t31": -hb * (t12 * t22 + t22 * t32 + t32 ** 2),
    })

    return dict(g=g, lam=lam, q=q, w=w, hb=hb,
                t12=t12, t22=t22, t32=t32, t11=t11, t21=t21, t31=t31,
                t10=t10, t20=t20, t30=t30,
                p11=p11, p10=p10, p22=p22, p21=p21, p20=p20,
                p33=p33, p32=p32, p31=p31, p30=p30,
                P1=P1, P2=P2, P3=P3, P1p=P1p, P2p=P2p, P3p=P3p,
                w1=w1, H0=H0, H=H, deriv=deriv)


def _mat_mul(A, B):
    n = len(A)
    return [[sum((A[i][k] * B[k][j] for k in range(n)), RationalFunction.zero())
             for j in range(n)] for i in range(n)]


def _mat_sub(A, B):
    return [[A[i][j] - B[i][j] for j in range(len(A))] for i in range(len(A))]


def _det3(M):
    return (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
            - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
            + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]))


def lax_matrices(d=None):
    """Companion Lax matrix and flow matrix over the ring localized at
    (lam - q) and hbar; rows 2-3 of the flow matrix come from the vanishing
    first two rows of the compatibility equation."""
    from .derivation import LocalRing
    d = d or _data()
    lam, q, w, hb = d["lam"], d["q"], d["w"], d["hb"]
    ring = LocalRing(lam - q, hb, "lam")
    P1l, P2l, P3l = d["P1"](lam), d["P2"](lam), d["P3"](lam)
    P2pl = d["P2p"](lam)
    H, w1 = d["H"], d["w1"]
    t12, t22, t32 = d["t12"], d["t22"], d["t32"]
    p22 = d["p22"]
    zero, one = ring.of(0), ring.of(1)

    L = [[zero, one, zero],
         [zero, zero, one],
         [ring.of(P3l - hb * P2pl + hb * (p22 + t22 * t32) * lam - H)
          + ring.of(hb * w1, a=1),
          ring.of(-P2l - hb * t12) + ring.of(hb * w, a=1),
          ring.of(P1l) + ring.of(hb, a=1)]]

    A1 = [ring.of(p22 * lam * hb - H, b=1) + ring.of(w1, a=1),
          ring.of(w, a=1) + ring.of(t12),
          ring.of(Poly.one(), a=1)]
    hbp = ring.of(hb)

    def next_row(row):
        out = []
        for j in range(3):
            acc = row[j].d_lam() * hbp
            for k in range(3):
                acc = acc + row[k] * L[k][j]
            out.append(acc)
        return out

    A2 = next_row(A1)
    A3 = next_row(A2)
    return L, [A1, A2, A3], ring


def _Lcoeff(deriv: FormalDerivation, p: Poly) -> Poly:
    """Coefficientwise flow of a lam-polynomial (lam itself is inert)."""
    return deriv.apply_poly(p)


def gl3_suite() -> IdentitySuite:
    d = _data()
    suite = IdentitySuite("gl3")
    deriv: FormalDerivation = d["deriv"]
    g = d["g"]
    lam, q, w, hb = d["lam"], d["q"], d["w"], d["hb"]
    t12, t22, t32 = d["t12"], d["t22"], d["t32"]
    t11, t21, t31 = d["t11"], d["t21"], d["t31"]
    H0, H, w1 = d["H0"], d["H"], d["w1"]
    P1, P2, P3 = d["P1"], d["P2"], d["P3"]
    P1p, P2p, P3p = d["P1p"], d["P2p"], d["P3p"]
    p11, p22, p33 = d["p11"], d["p22"], d["p33"]

    # Hamiltonian structure
    suite.check_zero("hamilton_q", H0.derivative("w") + deriv(q))
    suite.check_zero("hamilton_p2", H0.derivative("q") - deriv(w))

    # flow of the curve coefficients, re-derived from the time flow
    suite.check_zero("flow_P1_top", deriv(d["p11"]))
    suite.check_zero("flow_P1_const",
                     deriv(d["p10"]) - hb * (p11 ** 2 + p22 + t12 * p11))
    suite.check_zero("flow_P2_l2", deriv(d["p22"]))
    suite.check_zero("flow_P2_l1",
                     deriv(d["p21"]) - hb * (-3 * p33 + 3 * p11 * p22
                                             + 2 * t12 * p22))
    suite.check_zero("flow_P2_l0",
                     deriv(d["p20"]) - hb * (d["p21"] * p11 - d["p32"]
                                             + d["p10"] * p22 + d["p21"] * t12))
    suite.check_zero("flow_P3_l3", deriv(d["p33"]))
    suite.check_zero("flow_P3_l2",
                     deriv(d["p32"]) - hb * (p11 * p33 + p22 ** 2
                                             + 3 * t12 * p33))
    suite.check_zero("flow_P3_l1",
                     deriv(d["p31"]) - hb * (-d["p10"] * p33 + p11 * d["p32"]
                                             + p22 * d["p21"] + 2 * t12 * d["p32"]))

    # Lax compatibility, all nine entries, in the localized ring
    L, A, ring = lax_matrices(d)
    hbp = ring.of(hb)
    for i in range(3):
        for j in range(3):
            resid = L[i][j].flow(deriv) - A[i][j].d_lam() * hbp
            for k in range(3):
                resid = resid - A[i][k] * L[k][j] + L[i][k] * A[k][j]
            suite.check(f"lax_compatibility_{i + 1}{j + 1}", resid.is_zero())

    # second flow of q as printed
    L2q = deriv.power(q, 2)
    rhs = ((2 * P1p(q) * P1(q) - 3 * P2p(q)) * w ** 2
           + (6 * P3p(q) - 2 * P1p(q) * P2(q) - 6 * P2p(q) * P1(q)
              + 4 * P1p(q) * P1(q) ** 2
              - hb * (4 * p22 + 2 * p11 * t12 - 6 * t22 * t32)) * w
           + (P2(q) + P1(q) ** 2) * (P2p(q) + 2 * P1p(q) * P1(q))
           + 4 * P1(q) * (P3p(q) - P1p(q) * P2(q) - P1(q) * P2p(q))
           - hb * ((t12 - t32) * (t12 - t22) * (2 * t12 + t32 + t22) * q
                   + (t12 - t32) * (t12 - t22) * (t31 + 2 * t11 + t21)))
    suite.check_zero("second_flow_q", L2q - rhs)

    # auxiliary polynomials of the evolution equation
    R0 = (6 * P3p(lam) - 2 * P2(lam) * P1p(lam) - 2 * P2p(lam) * P1(lam)
          + QQ(4, 3) * P1(lam) ** 2 * P1p(lam)
          + 2 * hb * (t12 - t22) * (t12 - t32))
    R3 = ((2 * P2p(lam) + QQ(4, 3) * P1p(lam) * P1(lam))
          * (P2(lam) + P1(lam) ** 2)
          + 4 * P1(lam) * (P3p(lam) - P1p(lam) * P2(lam)
                           - P1(lam) * P2p(lam)))
    R1 = (-((t12 - t32) * (t12 - t22) * (2 * t12 + t32 + t22) * lam
            + (t12 - t32) * (t12 - t22) * (t31 + 2 * t11 + t21))
          - QQ(1, 3) * (2 * P1p(lam) * P1(lam) - 3 * P2p(lam))
          * (p11 + 2 * t12))
    Gq = QQ(1, 3) * (2 * P1p(q) * P1(q) - 3 * P2p(q))

    def at_q(p: Poly) -> Poly:
        return p.subs({"lam": q})

    Lq1 = deriv(q)
    suite.check_zero("relation1",
                     L2q + Gq * Lq1 - (at_q(R0) * w + at_q(R3) + hb * at_q(R1)))
    T = (-3 * P3p(q) + P2(q) * P1p(q) + 3 * P2p(q) * P1(q)
         - 2 * P1p(q) * P1(q) ** 2
         - hb * (2 * p11 ** 2 + p11 * t12 + 3 * t22 * t32))
    suite.check_zero("relation2",
                     3 * deriv(w) + 2 * P1p(q) * Lq1
                     - (-(2 * P1p(q) * P1(q) - 3 * P2p(q)) * w + T))

    # evolution equation with the printed coefficient set; alpha2's curve
    # coefficient must be the lam^2 one (the printed subscript picks the
    # constant coefficient, which fails -- recorded below and in the ledger)
    L3q = deriv(L2q)
    R0q, R0pq = at_q(R0), at_q(R0.derivative("lam"))
    LcR0q, LcR3q, LcR1q = at_q(_Lcoeff(deriv, R0)), at_q(_Lcoeff(deriv, R3)), at_q(_Lcoeff(deriv, R1))
    R3pq, R1pq = at_q(R3.derivative("lam")), at_q(R1.derivative("lam"))
    F = 2 * P1p(lam) * P1(lam) - 3 * P2p(lam)
    Fq = at_q(F)
    LcFq = at_q(_Lcoeff(deriv, F))

    a0 = 3 * R0q
    a1 = -3 * R0pq
    a3 = 2 * R0q * Fq - 3 * LcR0q
    a4 = (R0q * LcFq + 3 * R0pq * (at_q(R3) + hb * at_q(R1))
          - QQ(1, 3) * Fq * (3 * LcR0q - R0q * Fq)
          + 2 * R0q ** 2 * P1p(q) - 3 * R0q * (R3pq + hb * R1pq))
    a5 = ((3 * LcR0q - R0q * Fq) * (at_q(R3) + hb * at_q(R1))
          + R0q ** 2 * (3 * P3p(q) - P2(q) * P1p(q) - 3 * P2p(q) * P1(q)
                        + 2 * P1p(q) * P1(q) ** 2)
          + hb * R0q ** 2 * (2 * p11 ** 2 + p11 * t12 + 3 * t22 * t32)
          - 3 * R0q * (LcR3q + hb * LcR1q))
    Lq1_sq = Lq1 ** 2
    base = (a0 * L3q + a1 * L2q * Lq1 + (-R0pq * Fq) * Lq1_sq + a3 * L2q
            + a4 * Lq1 + a5)
    resid_corrected = base + (2 * R0q * (p11 ** 2 - 3 * p22)) * Lq1_sq
    suite.check("evolution_equation", resid_corrected.is_zero(),
                "third-order evolution with corrected alpha2 fails")
    resid_printed = base + (2 * R0q * (p11 ** 2 - 3 * d["p20"])) * Lq1_sq
    if resid_printed.is_zero():
        suite.notes.append("printed alpha2 subscript also verifies (unexpected).")
    else:
        suite.notes.append(
            "alpha2 as printed picks the constant coefficient of the quadratic "
            "curve coefficient; the identity requires the lam^2 one "
            "(subscript typo; with it the evolution equation is exact).")

    # time change diagonalizing the flow
    Binv = [[-(t12 * t22 + t12 * t32 + t22 * t32), Poly.one(), t12],
            [-(t12 * t32 + t22 * t32 + t22 ** 2), Poly.one(), t22],
            [-(t12 * t22 + t22 * t32 + t32 ** 2), Poly.one(), t32]]
    detB = (Binv[0][0] * (Binv[1][1] * Binv[2][2] - Binv[1][2] * Binv[2][1])
            - Binv[0][1] * (Binv[1][0] * Binv[2][2] - Binv[1][2] * Binv[2][0])
            + Binv[0][2] * (Binv[1][0] * Binv[2][1] - Binv[1][1] * Binv[2][0]))
    target_det = -(t32 - t12) * (t32 - t22) * (t22 - t12)
    suite.check_zero("det_Binv", detB - target_det)

    minus_det_B = [[t32 - t22, -(t32 - t12), t22 - t12],
                   [t12 * (t32 ** 2 - t22 ** 2), -t22 * (t32 ** 2 - t12 ** 2),
                    t32 * (t22 ** 2 - t12 ** 2)],
                   [(t32 - t22) * (t32 + t22 - t12), -t32 * (t32 - t12),
                    t22 * (t22 - t12)]]
    # B * Binv = identity, using the printed -det(Binv) * B
    prod = [[sum((minus_det_B[i][k] * Binv[k][j] for k in range(3)),
                 Poly.zero()) for j in range(3)] for i in range(3)]
    ok = True
    for i in range(3):
        for j in range(3):
            want = target_det if i == j else Poly.zero()
            if not (prod[i][j] - want).is_zero():
                ok = False
    suite.check("B_times_Binv_identity", ok, "printed B is not the inverse")

    # first column of Binv carries the flow of the first times: L = hb d/dtau1
    col = [deriv(t11), deriv(t21), deriv(t31)]
    for i in range(3):
        suite.check_zero(f"flow_column_{i + 1}", col[i] - hb * Binv[i][0])

    # partition-function asymptotics: the flows of the three ln-Psi constants
    # read (q, w, H/hb) through the matrix below; its determinant matches the
    # Wronskian prefactor, so the extraction degenerates exactly where the
    # Wronskian normalization does
    M3 = [[t12 ** 2, -t12, Poly.const(-1)],
          [t22 ** 2, -t22, Poly.const(-1)],
          [t32 ** 2, -t32, Poly.const(-1)]]
    det3 = (M3[0][0] * (M3[1][1] * M3[2][2] - M3[1][2] * M3[2][1])
            - M3[0][1] * (M3[1][0] * M3[2][2] - M3[1][2] * M3[2][0])
            + M3[0][2] * (M3[1][0] * M3[2][1] - M3[1][1] * M3[2][0]))
    suite.check_zero("partition_elimination_det",
                     det3 + (t32 - t12) * (t32 - t22) * (t22 - t12))
    suite.notes.append(
        "the elimination determinant equals -(t32-t12)(t32-t22)(t22-t12), "
        "the Wronskian normalization prefactor itself.")
    # the H- and w-free combination recovers q times that determinant
    c1, c2, c3 = t22 - t32, t32 - t12, t12 - t22
    LS = [t12 ** 2 * q - t12 * w + t11 * t12,
          t22 ** 2 * q - t22 * w + t21 * (2 * t22 - t12),
          t32 ** 2 * q - t32 * w + t31 * (2 * t32 - t12)]
    combo = c1 * LS[0] + c2 * LS[1] + c3 * LS[2]
    suite.check_zero("partition_w_elimination",
                     combo.derivative("w"))
    suite.check_zero("partition_q_extraction",
                     combo.derivative("q") + (t32 - t12) * (t32 - t22) * (t22 - t12))

    return suite
