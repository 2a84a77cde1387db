"""Algebra of q-polynomials f(x) = sum a_i x^{q^i} over F_{q^n}.

A QPoly stores exactly n coefficients (index i belongs to x^{q^i}) and
represents an F_q-linear map of the big field.  Everything here is pure;
QPoly values are immutable and hashable so they can flow through
exhaustive-search workers and be collected into sets.
"""

from __future__ import annotations

import math
import weakref

import numpy as np

from .errors import NotInvertible, ZeroPolynomial, ZeroScalar
from .gf import FieldCtx


class QPoly:
    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs):
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != ctx.n:
            raise ValueError(f"need exactly n = {ctx.n} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, *_):
        raise AttributeError("QPoly is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, QPoly)
            and self.ctx is other.ctx
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"QPoly[{self.ctx.p}^{self.ctx.h}^{self.ctx.n}]({self.to_string()})"

    def to_string(self) -> str:
        return ",".join(self.ctx.fmt(c) for c in self.coeffs)

    @classmethod
    def from_string(cls, ctx: FieldCtx, s: str) -> "QPoly":
        return cls(ctx, [ctx.parse(tok) for tok in s.split(",")])

    # ------------------------------------------------------------ evaluation

    def eval(self, x: int) -> int:
        ctx = self.ctx
        acc = 0
        for i, a in enumerate(self.coeffs):
            if a:
                acc = ctx.add(acc, ctx.mul(a, ctx.frobenius(x, (ctx.h * i) % ctx.m)))
        return acc

    __call__ = eval

    def eval_on(self, xs: np.ndarray) -> np.ndarray:
        """Vectorized evaluation on an array of element indices."""
        ctx = self.ctx
        acc = np.zeros_like(np.asarray(xs, dtype=np.int64))
        for i, a in enumerate(self.coeffs):
            if a:
                acc = ctx.vadd(acc, ctx.vmul(a, ctx.vfrob(xs, (ctx.h * i) % ctx.m)))
        return acc

    def ratio_values(self) -> np.ndarray:
        """f(x)/x over all nonzero x, ordered by discrete log of x."""
        ctx = self.ctx
        K = np.arange(ctx.order, dtype=np.int64)  # x = g^K
        acc = np.zeros(ctx.order, dtype=np.int64)
        for i, a in enumerate(self.coeffs):
            if a:
                # a * x^(q^i - 1) = g^(log a + K*(q^i - 1))
                e = (ctx.q**i - 1) % ctx.order if ctx.order > 1 else 0
                acc = ctx.vadd(acc, (a - 1 + K * e) % ctx.order + 1)
        return acc

    # --------------------------------------------------------------- algebra

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def compose(self, other: "QPoly") -> "QPoly":
        """Coefficients of self(other(x)) reduced mod x^{q^n} - x."""
        ctx = self.ctx
        if other.ctx is not ctx:
            raise ValueError("polynomials live in different field contexts")
        n = ctx.n
        out = [0] * n
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if not b:
                    continue
                k = (i + j) % n
                term = ctx.mul(a, ctx.frobenius(b, (ctx.h * i) % ctx.m))
                out[k] = ctx.add(out[k], term)
        return QPoly(ctx, out)

    def adjoint(self) -> "QPoly":
        """The adjoint w.r.t. the bilinear form Tr(xy): Tr(x f(y)) = Tr(y f^(x))."""
        ctx = self.ctx
        n = ctx.n
        out = [0] * n
        for i, a in enumerate(self.coeffs):
            j = (n - i) % n
            out[j] = ctx.frobenius(a, (ctx.h * j) % ctx.m)
        return QPoly(ctx, out)

    def scale_conjugate(self, lam: int) -> "QPoly":
        """f(lambda x)/lambda; coefficient i becomes a_i * lambda^(q^i - 1)."""
        ctx = self.ctx
        if lam == 0:
            raise ZeroScalar("scaling element must be nonzero")
        out = [
            ctx.mul(a, ctx.pow_int(lam, ctx.q**i - 1)) if a else 0
            for i, a in enumerate(self.coeffs)
        ]
        return QPoly(ctx, out)

    def max_field_of_linearity(self) -> int:
        """Largest s | n with a_i = 0 for every i not divisible by s."""
        if self.is_zero():
            raise ZeroPolynomial("the zero map has no field of linearity")
        n = self.ctx.n
        s = n
        for i, a in enumerate(self.coeffs):
            if a and i:
                s = math.gcd(s, i)
        return s

    def is_strictly_linear(self) -> bool:
        return not self.is_zero() and self.max_field_of_linearity() == 1

    # ------------------------------------------------- matrix representation

    def as_matrix(self):
        """Matrix of the induced F_q-linear map in the basis 1, g, ..., g^(n-1).

        Entries are field elements lying in F_q; column j holds the
        coordinates of f(g^j).
        """
        ctx = self.ctx
        n = ctx.n
        cols = [_coords_in_gen_basis(ctx, self.eval(ctx.from_exp(j))) for j in range(n)]
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    def kernel_dim(self) -> int:
        return self.ctx.n - _rank(self.ctx, self.as_matrix())

    def is_invertible(self) -> bool:
        return self.kernel_dim() == 0

    def inverse(self) -> "QPoly":
        """Compositional inverse: compose(f, inverse(f)) is the identity."""
        ctx = self.ctx
        n = ctx.n
        minv = _matrix_inverse(ctx, self.as_matrix())
        if minv is None:
            raise NotInvertible("kernel is nontrivial")
        # column j of minv = coordinates of f^(-1)(g^j); interpolate the
        # q-polynomial through those n evaluations
        points = [ctx.from_exp(j) for j in range(n)]
        values = []
        for j in range(n):
            acc = 0
            for i in range(n):
                acc = ctx.add(acc, ctx.mul(minv[i][j], ctx.from_exp(i)))
            values.append(acc)
        return QPoly(ctx, moore_interpolate(ctx, points, values))


# ------------------------------------------------------------- constructors

def zero_poly(ctx: FieldCtx) -> QPoly:
    return QPoly(ctx, [0] * ctx.n)


def identity_poly(ctx: FieldCtx) -> QPoly:
    return QPoly(ctx, [1] + [0] * (ctx.n - 1))


def monomial(ctx: FieldCtx, i: int, coeff: int = 1) -> QPoly:
    """coeff * x^{q^i}."""
    out = [0] * ctx.n
    out[i] = coeff
    return QPoly(ctx, out)


def trace_poly(ctx: FieldCtx) -> QPoly:
    """Tr(x) = x + x^q + ... + x^{q^{n-1}}."""
    return QPoly(ctx, [1] * ctx.n)


# ------------------------------------------------- linear algebra over F_q^n

def _rank(ctx: FieldCtx, mat) -> int:
    m = [row[:] for row in mat]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = ctx.inv(m[r][c])
        m[r] = [ctx.mul(inv, v) for v in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [ctx.sub(v, ctx.mul(f, w)) for v, w in zip(m[i], m[r])]
        r += 1
        if r == rows:
            break
    return r


def _matrix_inverse(ctx: FieldCtx, mat):
    n = len(mat)
    aug = [row[:] + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(mat)]
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if aug[i][c]), None)
        if piv is None:
            return None
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = ctx.inv(aug[r][c])
        aug[r] = [ctx.mul(inv, v) for v in aug[r]]
        for i in range(n):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [ctx.sub(v, ctx.mul(f, w)) for v, w in zip(aug[i], aug[r])]
        r += 1
    return [row[n:] for row in aug]


def solve_linear(ctx: FieldCtx, mat, rhs):
    """Solve mat * x = rhs over the field; None if singular."""
    n = len(mat)
    aug = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if aug[i][c]), None)
        if piv is None:
            return None
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = ctx.inv(aug[r][c])
        aug[r] = [ctx.mul(inv, v) for v in aug[r]]
        for i in range(n):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [ctx.sub(v, ctx.mul(f, w)) for v, w in zip(aug[i], aug[r])]
        r += 1
    return [aug[i][n] for i in range(n)]


def moore_interpolate(ctx: FieldCtx, points, values):
    """Coefficients of the q-polynomial taking the given values at the points.

    The points must be an F_q-basis of F_{q^n} (Moore matrix invertible).
    """
    n = ctx.n
    mat = [[ctx.pow_int(pt, ctx.q**k) if pt else 0 for k in range(n)] for pt in points]
    sol = solve_linear(ctx, mat, list(values))
    if sol is None:
        raise ValueError("interpolation points are not an F_q-basis")
    return sol


_MOORE_INV_CACHE: "weakref.WeakKeyDictionary[FieldCtx, list]" = weakref.WeakKeyDictionary()


def _gen_moore_inverse(ctx: FieldCtx):
    # inverse of the Moore matrix (g^(j q^k))_{k,j} of the basis 1, g, ..., g^(n-1)
    inv = _MOORE_INV_CACHE.get(ctx)
    if inv is None:
        n = ctx.n
        mat = [
            [ctx.pow_int(ctx.from_exp(j), ctx.q**k) for j in range(n)]
            for k in range(n)
        ]
        inv = _matrix_inverse(ctx, mat)
        assert inv is not None, "generator powers must form a basis"
        _MOORE_INV_CACHE[ctx] = inv
    return inv


def _coords_in_gen_basis(ctx: FieldCtx, y: int):
    """Coordinates of y in the F_q-basis 1, g, ..., g^(n-1).

    Solves the Moore system sum_j c_j g^(j q^k) = y^(q^k), k = 0..n-1, whose
    unique solution automatically lies in F_q.
    """
    n = ctx.n
    minv = _gen_moore_inverse(ctx)
    rhs = [ctx.pow_int(y, ctx.q**k) if y else 0 for k in range(n)]
    out = []
    for i in range(n):
        acc = 0
        for k in range(n):
            acc = ctx.add(acc, ctx.mul(minv[i][k], rhs[k]))
        out.append(acc)
    return out
