"""Rank-n linear sets of PG(1,q^n) built from q-polynomials.

A point of PG(1,q^n) is stored as a slope: the element m for (1 : m), or
the INF marker for (0 : 1).  The set L_f = {<(x, f(x))> : x != 0} consists
of the slopes f(x)/x, so it never contains INF and coincides with the ratio
image set of f.  Includes the four known maximum-scattered families, the
pseudoregulus test, PGammaL-equivalence of linear sets, and the
non-equivalence verification for the two-coefficient family delta x^{q^2} +
x^{q^3} against delta' x^q + x^{q^4}.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .errors import (
    InvalidParameters,
    NoSource,
    NotStrictlyLinear,
    PreconditionViolated,
)
from .gf import FieldCtx
from .imageset import image_of_ratio
from .moebius import INF, SemilinearMap, find_set_equivalence, moebius_image
from .qpoly import QPoly


class LinearSet:
    """A set of points of PG(1,q^n), with the defining polynomial if known."""

    __slots__ = ("ctx", "points", "source")

    def __init__(self, ctx: FieldCtx, points, source: QPoly | None = None):
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "points", frozenset(int(p) for p in points))
        object.__setattr__(self, "source", source)

    def __setattr__(self, *_):
        raise AttributeError("LinearSet is immutable")

    def __len__(self):
        return len(self.points)

    def __eq__(self, other):
        return (
            isinstance(other, LinearSet)
            and self.ctx is other.ctx
            and self.points == other.points
        )

    def __hash__(self):
        return hash(self.points)

    def __contains__(self, p):
        return int(p) in self.points

    def __repr__(self):
        return f"LinearSet(|L|={len(self.points)}, source={self.source!r})"


def linear_set(f: QPoly) -> LinearSet:
    """L_f = {(1 : f(x)/x) : x != 0}; its size equals |Im(f(x)/x)|."""
    im = image_of_ratio(f)
    pts = frozenset(int(i) for i in im.indices())
    assert INF not in pts
    return LinearSet(f.ctx, pts, f)


def max_scattered_size(ctx: FieldCtx) -> int:
    return (ctx.size - 1) // (ctx.q - 1)


def is_max_scattered(L: LinearSet) -> bool:
    """True iff |L| attains the rank-n bound (q^n - 1)/(q - 1)."""
    if L.source is None:
        raise NoSource("scatteredness is decided for polynomial-built sets")
    return len(L) == max_scattered_size(L.ctx)


# ------------------------------------------------------------- the families

def family_f(ctx: FieldCtx, s: int) -> QPoly:
    """x^{q^s} with gcd(s, n) = 1."""
    if not 1 <= s <= ctx.n - 1 or math.gcd(s, ctx.n) != 1:
        raise InvalidParameters(f"need 1 <= s <= n-1 with gcd(s, n) = 1; got s = {s}")
    coeffs = [0] * ctx.n
    coeffs[s] = 1
    return QPoly(ctx, coeffs)


def family_g(ctx: FieldCtx, s: int, delta: int) -> QPoly:
    """delta x^{q^s} + x^{q^{n-s}} with n >= 4, gcd(s, n) = 1, N(delta) not in {0, 1}."""
    if ctx.n < 4:
        raise InvalidParameters(f"family needs n >= 4; got n = {ctx.n}")
    if not 1 <= s <= ctx.n - 1 or math.gcd(s, ctx.n) != 1:
        raise InvalidParameters(f"need gcd(s, n) = 1; got s = {s}")
    nd = ctx.norm_rel(delta, 1)
    if nd in (0, 1):
        raise InvalidParameters(
            f"N(delta) = {ctx.fmt(nd)} must avoid {{0, 1}} (impossible at q = 2)"
        )
    coeffs = [0] * ctx.n
    coeffs[s] = delta
    coeffs[ctx.n - s] = 1
    return QPoly(ctx, coeffs)


def family_h(ctx: FieldCtx, s: int, delta: int) -> QPoly:
    """delta x^{q^s} + x^{q^{s + n/2}} with n in {6, 8}, gcd(s, n/2) = 1,
    N_{q^n/q^{n/2}}(delta) not in {0, 1}."""
    if ctx.n not in (6, 8):
        raise InvalidParameters(f"family needs n in {{6, 8}}; got n = {ctx.n}")
    half = ctx.n // 2
    if not 1 <= s < half or math.gcd(s, half) != 1:
        raise InvalidParameters(f"need 1 <= s < n/2 with gcd(s, n/2) = 1; got s = {s}")
    nd = ctx.norm_rel(delta, half)
    if nd in (0, 1):
        raise InvalidParameters("relative norm of delta must avoid {0, 1}")
    coeffs = [0] * ctx.n
    coeffs[s] = delta
    coeffs[s + half] = 1
    return QPoly(ctx, coeffs)


def family_k(ctx: FieldCtx, b: int) -> QPoly:
    """x^q + x^{q^3} + b x^{q^5} with n = 6, b^2 + b = 1, q = 0, +-1 mod 5."""
    if ctx.n != 6:
        raise InvalidParameters(f"family needs n = 6; got n = {ctx.n}")
    if ctx.q % 5 not in (0, 1, 4):
        raise InvalidParameters(f"need q = 0, +-1 (mod 5); got q = {ctx.q}")
    if ctx.add(ctx.mul(b, b), b) != 1:
        raise InvalidParameters("b must satisfy b^2 + b = 1")
    coeffs = [0] * 6
    coeffs[1] = 1
    coeffs[3] = 1
    coeffs[5] = b
    return QPoly(ctx, coeffs)


_FAMILY_BUILDERS = {
    "f_s": lambda ctx, p: family_f(ctx, int(p["s"])),
    "g_sdelta": lambda ctx, p: family_g(ctx, int(p["s"]), p["delta"]),
    "h_sdelta": lambda ctx, p: family_h(ctx, int(p["s"]), p["delta"]),
    "k_b": lambda ctx, p: family_k(ctx, p["b"]),
}


def family(ctx: FieldCtx, name: str, **params) -> QPoly:
    """Build a named maximum-scattered family member; parameters validated."""
    try:
        builder = _FAMILY_BUILDERS[name]
    except KeyError:
        raise InvalidParameters(
            f"unknown family {name!r}; choose from {sorted(_FAMILY_BUILDERS)}"
        ) from None
    return builder(ctx, params)


# ----------------------------------------------------------- equivalence

def _require_strict(f: QPoly):
    if not f.is_strictly_linear():
        raise NotStrictlyLinear(f"{f.to_string()} is not strictly F_q-linear")


def is_pseudoregulus_type(f: QPoly) -> SemilinearMap | None:
    """Witness that L_f is equivalent to L_{x^q}, or None."""
    _require_strict(f)
    ctx = f.ctx
    target = image_of_ratio(QPoly(ctx, [0, 1] + [0] * (ctx.n - 2)))
    return find_set_equivalence(image_of_ratio(f), target)


def pgammal_equivalent(f: QPoly, g: QPoly) -> SemilinearMap | None:
    """Witness phi with Im(f_phi(x)/x) = Im(g(x)/x) (so L_f ~ L_g), or None."""
    _require_strict(f)
    _require_strict(g)
    return find_set_equivalence(image_of_ratio(f), image_of_ratio(g))


# ----------------------------------------------- the new-example verification

@dataclass
class MuVerdict:
    mu: int
    norm: int
    witness: SemilinearMap | None
    elapsed: float

    def to_dict(self, ctx: FieldCtx) -> dict:
        return {
            "mu": ctx.fmt(self.mu),
            "norm": ctx.fmt(self.norm),
            "equivalent": self.witness is not None,
            "witness": None if self.witness is None else self.witness.serialize(),
            "elapsed_s": round(self.elapsed, 3),
        }


@dataclass
class NewExampleReport:
    field_spec: str
    delta: int
    delta_norm: int
    points: int
    expected_points: int
    max_scattered: bool
    mu_mode: str
    verdicts: list[MuVerdict]
    control_mu: int
    control_lambda: int
    control_witness: SemilinearMap | None
    elapsed_total: float = 0.0

    @property
    def all_nonequivalent(self) -> bool:
        return all(v.witness is None for v in self.verdicts)

    @property
    def passed(self) -> bool:
        return (
            self.max_scattered
            and self.all_nonequivalent
            and self.control_witness is not None
        )

    def to_dict(self, ctx: FieldCtx) -> dict:
        return {
            "field": self.field_spec,
            "delta": ctx.fmt(self.delta),
            "delta_norm": ctx.fmt(self.delta_norm),
            "points": self.points,
            "expected_points": self.expected_points,
            "max_scattered": self.max_scattered,
            "mu_mode": self.mu_mode,
            "mu_count": len(self.verdicts),
            "verdicts": [v.to_dict(ctx) for v in self.verdicts],
            "positive_control": {
                "mu": ctx.fmt(self.control_mu),
                "lambda": ctx.fmt(self.control_lambda),
                "witness": None
                if self.control_witness is None
                else self.control_witness.serialize(),
            },
            "all_nonequivalent": self.all_nonequivalent,
            "passed": self.passed,
        }


def mus_with_nontrivial_norm(ctx: FieldCtx) -> list[int]:
    """All mu with N(mu) not in {0, 1}; empty at q = 2.

    N(g^k) = g^(k (q^n-1)/(q-1)), so the condition is k not divisible by q-1.
    """
    if ctx.q == 2:
        return []
    return [ctx.from_exp(k) for k in range(ctx.order) if k % (ctx.q - 1) != 0]


def _sample_mus(ctx: FieldCtx, count: int, seed: int) -> list[int]:
    """`count` values spanning every norm class of F_q^* minus {1}."""
    import random

    rng = random.Random(seed)
    classes = list(range(1, ctx.q - 1))  # norm exponent j -> N(mu) = g^(jR)
    out, seen = [], set()
    while len(out) < count and len(seen) < ctx.order:
        j = classes[len(out) % len(classes)]
        k = rng.randrange(ctx.order // (ctx.q - 1)) * (ctx.q - 1) + j
        if k in seen:
            continue
        seen.add(k)
        out.append(ctx.from_exp(k))
    return out


def _check_one_mu(args):
    ctx, g2d_coeffs, mu = args
    f = QPoly(ctx, g2d_coeffs)
    g1m = family_g(ctx, 1, mu)
    t0 = time.perf_counter()
    w = pgammal_equivalent(f, g1m)
    return MuVerdict(mu, ctx.norm_rel(mu, 1), w, time.perf_counter() - t0)


def verify_new_example(
    ctx: FieldCtx,
    delta: int,
    all_mu: bool = False,
    sample_count: int = 8,
    seed: int = 0,
    threads: int = 1,
) -> NewExampleReport:
    """Check that L of delta x^{q^2} + x^{q^3} is maximum scattered and not
    equivalent to any L of mu x^q + x^{q^4}, over sampled or all admissible mu.

    Preconditions: n = 5, q > 2, N(delta) not in {0, 1} and N(delta)^5 != 1.
    A positive control (two scalings of the same degree-one family member)
    must produce a verified witness.
    """
    if ctx.n != 5:
        raise PreconditionViolated(f"the example lives over F_{{q^5}}; got n = {ctx.n}")
    if ctx.q == 2:
        raise PreconditionViolated("q > 2 required: no delta has N(delta) outside {0,1}")
    nd = ctx.norm_rel(delta, 1)
    if nd in (0, 1):
        raise PreconditionViolated(f"N(delta) = {ctx.fmt(nd)} must avoid {{0, 1}}")
    if ctx.pow_int(nd, 5) == 1:
        raise PreconditionViolated(
            f"N(delta)^5 = 1 (N(delta) = {ctx.fmt(nd)}); the non-equivalence "
            "argument needs N(delta)^5 != 1"
        )

    t_start = time.perf_counter()
    g2d = family_g(ctx, 2, delta)
    L = linear_set(g2d)
    expected = max_scattered_size(ctx)
    scattered = is_max_scattered(L)

    if all_mu:
        mus = mus_with_nontrivial_norm(ctx)
        mode = "all"
    else:
        mus = _sample_mus(ctx, sample_count, seed)
        mode = f"sampled({sample_count})"

    jobs = [(ctx, g2d.coeffs, mu) for mu in mus]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            verdicts = list(pool.map(_check_one_mu, jobs, chunksize=4))
    else:
        verdicts = [_check_one_mu(j) for j in jobs]

    # positive control: two scalings of g_{1,mu} must be found equivalent
    control_mu = mus[0] if mus else ctx.gen
    control_lambda = ctx.gen
    base = family_g(ctx, 1, control_mu)
    moved = base.scale_conjugate(control_lambda)
    control = pgammal_equivalent(base, moved)
    if control is not None:
        assert moebius_image(image_of_ratio(base), control) == image_of_ratio(
            moved
        ).as_frozenset()

    return NewExampleReport(
        field_spec=ctx.spec_string,
        delta=delta,
        delta_norm=nd,
        points=len(L),
        expected_points=expected,
        max_scattered=scattered,
        mu_mode=mode,
        verdicts=verdicts,
        control_mu=control_mu,
        control_lambda=control_lambda,
        control_witness=control,
        elapsed_total=time.perf_counter() - t_start,
    )
