"""The semilinear group GammaL(2,q^n) acting on polynomial graphs and, through
slopes, on subsets of the projective line PG(1,q^n).

A SemilinearMap is an invertible 2x2 matrix (a,b,c,d) over F_{q^n} together
with a companion automorphism x -> x^(p^e).  Acting on a graph point
(x, f(x)) it produces (a x^s + b f(x)^s, c x^s + d f(x)^s); on the slope
z = f(x)/x it therefore acts as the Moebius-semilinear map

    z  ->  (c + d z^s) / (a + b z^s),

with the value INF when the denominator vanishes.  Slope values use the
field's int encoding plus the INF marker below.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateSet,
    InconsistentStructure,
    NotAdmissible,
    SingularMatrix,
)
from .gf import FieldCtx
from .imageset import ImageSet, image_of_ratio
from .qpoly import QPoly, moore_interpolate

INF = -1  # the projective point (0 : 1), used as a slope marker

_SEARCH_CHUNK = 1 << 18


@dataclass(frozen=True)
class SemilinearMap:
    ctx: FieldCtx
    a: int
    b: int
    c: int
    d: int
    sigma_exp: int = 0

    def __post_init__(self):
        ctx = self.ctx
        det = ctx.sub(ctx.mul(self.a, self.d), ctx.mul(self.b, self.c))
        if det == 0:
            raise SingularMatrix("matrix part of a semilinear map must be invertible")
        object.__setattr__(self, "sigma_exp", self.sigma_exp % ctx.m)

    @classmethod
    def identity(cls, ctx: FieldCtx) -> "SemilinearMap":
        return cls(ctx, 1, 0, 0, 1, 0)

    @property
    def matrix(self):
        return ((self.a, self.b), (self.c, self.d))

    def det(self) -> int:
        ctx = self.ctx
        return ctx.sub(ctx.mul(self.a, self.d), ctx.mul(self.b, self.c))

    def compose(self, other: "SemilinearMap") -> "SemilinearMap":
        """self o other (apply `other` first)."""
        ctx = self.ctx
        e = self.sigma_exp
        oa, ob, oc, od = (ctx.frobenius(v, e) for v in (other.a, other.b, other.c, other.d))
        return SemilinearMap(
            ctx,
            ctx.add(ctx.mul(self.a, oa), ctx.mul(self.b, oc)),
            ctx.add(ctx.mul(self.a, ob), ctx.mul(self.b, od)),
            ctx.add(ctx.mul(self.c, oa), ctx.mul(self.d, oc)),
            ctx.add(ctx.mul(self.c, ob), ctx.mul(self.d, od)),
            (self.sigma_exp + other.sigma_exp) % ctx.m,
        )

    def inverse(self) -> "SemilinearMap":
        ctx = self.ctx
        e_inv = (ctx.m - self.sigma_exp) % ctx.m
        a, b, c, d = (ctx.frobenius(v, e_inv) for v in (self.a, self.b, self.c, self.d))
        # projective inverse: adjugate of the sigma^{-1}-twisted matrix
        return SemilinearMap(ctx, d, ctx.neg(b), ctx.neg(c), a, e_inv)

    def canonical_scaled(self) -> "SemilinearMap":
        """Scale so the first nonzero entry in row-major order is 1."""
        ctx = self.ctx
        lead = next(v for v in (self.a, self.b, self.c, self.d) if v)
        s = ctx.inv(lead)
        return SemilinearMap(
            ctx,
            ctx.mul(self.a, s),
            ctx.mul(self.b, s),
            ctx.mul(self.c, s),
            ctx.mul(self.d, s),
            self.sigma_exp,
        )

    def apply_slope(self, z: int) -> int:
        """The slope action; z may be INF, and INF may be returned."""
        ctx = self.ctx
        if z == INF:
            num, den = self.d, self.b
        else:
            w = ctx.frobenius(z, self.sigma_exp)
            num = ctx.add(self.c, ctx.mul(self.d, w))
            den = ctx.add(self.a, ctx.mul(self.b, w))
        if den == 0:
            return INF
        return ctx.div(num, den)

    def serialize(self) -> str:
        f = self.ctx.fmt
        return (
            f"[[{f(self.a)},{f(self.b)}],[{f(self.c)},{f(self.d)}]];"
            f"sigma={self.ctx.p}^{self.sigma_exp}"
        )

    def __repr__(self):
        return f"SemilinearMap({self.serialize()})"


def is_admissible(f: QPoly, phi: SemilinearMap, im: ImageSet | None = None) -> bool:
    """True iff the transported polynomial f_phi exists.

    Equivalent to invertibility of k_f(x) = a x^s + b f(x)^s: either b = 0,
    or -(a/b)^(s^-1) avoids Im(f(x)/x).
    """
    ctx = f.ctx
    if phi.b == 0:
        return True
    w = ctx.neg(ctx.div(phi.a, phi.b))
    w = ctx.frobenius(w, (ctx.m - phi.sigma_exp) % ctx.m)
    if im is None:
        im = image_of_ratio(f)
    return w not in im


# ------------------------------------------------------- graph transport

def _fp_digits(ctx: FieldCtx, e: int) -> list[int]:
    v = int(ctx._pck[e])
    out = []
    for _ in range(ctx.m):
        v, r = divmod(v, ctx.p)
        out.append(r)
    return out


def _fp_from_digits(ctx: FieldCtx, digits) -> int:
    v = 0
    for d in reversed(digits):
        v = v * ctx.p + d
    return int(ctx._idx[v])


def _fp_matrix_inverse(mat, p):
    n = len(mat)
    aug = [row[:] + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(mat)]
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if aug[i][c] % p), None)
        if piv is None:
            return None
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = pow(aug[r][c], p - 2, p)
        aug[r] = [v * inv % p for v in aug[r]]
        for i in range(n):
            if i != r and aug[i][c] % p:
                fct = aug[i][c]
                aug[i] = [(v - fct * w) % p for v, w in zip(aug[i], aug[r])]
        r += 1
    return [row[n:] for row in aug]


def transform_poly(f: QPoly, phi: SemilinearMap, verify: bool = False) -> QPoly:
    """The transported q-polynomial f_phi with graph M * (graph f)^sigma.

    Writes k_f(x) = a x^s + b f(x)^s and h_f(x) = c x^s + d f(x)^s, inverts
    k_f as an F_p-linear map, and interpolates h_f o k_f^{-1} back into
    q-polynomial coefficients.  With verify=True the graph identity is
    re-checked on every field element.
    """
    ctx = f.ctx
    if not is_admissible(f, phi):
        raise NotAdmissible("k_f is singular for this map (footnote condition fails)")
    e = phi.sigma_exp

    def k_map(x):
        xs = ctx.frobenius(x, e)
        fs = ctx.frobenius(f.eval(x), e)
        return ctx.add(ctx.mul(phi.a, xs), ctx.mul(phi.b, fs))

    def h_map(x):
        xs = ctx.frobenius(x, e)
        fs = ctx.frobenius(f.eval(x), e)
        return ctx.add(ctx.mul(phi.c, xs), ctx.mul(phi.d, fs))

    cols = []
    for j in range(ctx.m):
        basis_el = int(ctx._idx[ctx.p**j])
        cols.append(_fp_digits(ctx, k_map(basis_el)))
    mat = [[cols[j][i] for j in range(ctx.m)] for i in range(ctx.m)]
    minv = _fp_matrix_inverse(mat, ctx.p)
    if minv is None:
        raise NotAdmissible("k_f is singular for this map")

    points, values = [], []
    for t in range(ctx.n):
        beta = ctx.from_exp(t)
        bd = _fp_digits(ctx, beta)
        xd = [sum(minv[i][j] * bd[j] for j in range(ctx.m)) % ctx.p for i in range(ctx.m)]
        x = _fp_from_digits(ctx, xd)
        points.append(beta)
        values.append(h_map(x))
    g = QPoly(ctx, moore_interpolate(ctx, points, values))

    if verify:
        X = np.arange(ctx.size, dtype=np.int64)
        xs = ctx.vfrob(X, e)
        fs = ctx.vfrob(f.eval_on(X), e)
        kv = ctx.vadd(ctx.vmul(phi.a, xs), ctx.vmul(phi.b, fs))
        hv = ctx.vadd(ctx.vmul(phi.c, xs), ctx.vmul(phi.d, fs))
        if not np.array_equal(g.eval_on(kv), hv):
            raise InconsistentStructure("transported polynomial fails graph identity")
    return g


# ------------------------------------------------------------ slope action

def moebius_image(S: ImageSet, phi: SemilinearMap) -> frozenset:
    """{(c + d z^s)/(a + b z^s) : z in S} as slopes, INF included when hit."""
    ctx = S.ctx
    z = S.indices()
    w = ctx.vfrob(z, phi.sigma_exp)
    den = ctx.vadd(phi.a, ctx.vmul(phi.b, w))
    num = ctx.vadd(phi.c, ctx.vmul(phi.d, w))
    vals = np.where(den == 0, INF, ctx.vmul(num, ctx.vinv(den)))
    return frozenset(int(v) for v in vals)


def _cross_ratio_matrix(ctx: FieldCtx, z1: int, z2: int, z3: int):
    # matrix sending slopes (z1, z2, z3) to (0, 1, INF)
    d21 = ctx.sub(z2, z1)
    d23 = ctx.sub(z2, z3)
    return (
        ctx.neg(ctx.mul(z3, d21)),  # a
        d21,  # b
        ctx.neg(ctx.mul(z1, d23)),  # c
        d23,  # d
    )


def find_set_equivalence(
    S: ImageSet, T: ImageSet, chunk: int = _SEARCH_CHUNK
) -> SemilinearMap | None:
    """Search GammaL(2,q^n) for phi with moebius_image(S, phi) = T (INF-free).

    Anchors the three smallest points of S^sigma, enumerates ordered distinct
    triples of T in lexicographic order per automorphism, solves the unique
    Moebius map through the anchors, and keeps candidates that carry all of
    S^sigma into T.  The first (lex-least) survivor is canonicalized,
    re-verified by direct application, and returned; None means the search
    space is exhausted.
    """
    if len(S) < 3:
        raise DegenerateSet(f"need at least 3 points, got {len(S)}")
    if len(S) != len(T):
        return None
    ctx = S.ctx
    t_idx = T.indices()
    t_mask = T.mask
    mlen = t_idx.size
    total = mlen**3

    for e in range(ctx.m):
        s_sig = np.sort(ctx.vfrob(S.indices(), e))
        s1, s2, s3 = (int(v) for v in s_sig[:3])
        rest = s_sig[3:]
        pa, pb, pc, pd = _cross_ratio_matrix(ctx, s1, s2, s3)

        for lo in range(0, total, chunk):
            G = np.arange(lo, min(lo + chunk, total), dtype=np.int64)
            i1 = G // (mlen * mlen)
            i2 = (G // mlen) % mlen
            i3 = G % mlen
            distinct = (i1 != i2) & (i1 != i3) & (i2 != i3)
            if not distinct.any():
                continue
            G = G[distinct]
            t1 = t_idx[i1[distinct]]
            t2 = t_idx[i2[distinct]]
            t3 = t_idx[i3[distinct]]

            d21 = ctx.vadd(t2, ctx.vneg(t1))
            d23 = ctx.vadd(t2, ctx.vneg(t3))
            qa = ctx.vneg(ctx.vmul(t3, d21))
            qb = d21
            qc = ctx.vneg(ctx.vmul(t1, d23))
            qd = d23
            # M = adj(Q) . P  maps s-anchors to (t1, t2, t3)
            nqb = ctx.vneg(qb)
            nqc = ctx.vneg(qc)
            ma = ctx.vadd(ctx.vmul(qd, pa), ctx.vmul(nqb, pc))
            mb = ctx.vadd(ctx.vmul(qd, pb), ctx.vmul(nqb, pd))
            mc = ctx.vadd(ctx.vmul(nqc, pa), ctx.vmul(qa, pc))
            md = ctx.vadd(ctx.vmul(nqc, pb), ctx.vmul(qa, pd))
            det = ctx.vadd(ctx.vmul(ma, md), ctx.vneg(ctx.vmul(mb, mc)))
            alive = det != 0

            for w in rest:
                if not alive.any():
                    break
                keep = np.flatnonzero(alive)
                if keep.size * 4 < alive.size:
                    G, ma, mb, mc, md = (arr[keep] for arr in (G, ma, mb, mc, md))
                    alive = np.ones(G.size, dtype=bool)
                w = int(w)
                den = ctx.vadd(ma, ctx.vmul(mb, w))
                num = ctx.vadd(mc, ctx.vmul(md, w))
                val = ctx.vmul(num, ctx.vinv(den))
                alive &= (den != 0) & t_mask[val]

            if alive.any():
                k = int(np.flatnonzero(alive)[0])  # G ascends, so first = lex-least
                phi = SemilinearMap(
                    ctx, int(ma[k]), int(mb[k]), int(mc[k]), int(md[k]), e
                ).canonical_scaled()
                if moebius_image(S, phi) != T.as_frozenset():
                    raise InconsistentStructure(
                        "set-equivalence witness failed its self-check"
                    )
                return phi
    return None
