"""Finite-field engine for towers F_p <= F_q <= F_{q^s} <= F_{q^n}, q = p^h.

Only the top field F_{p^{h*n}} is materialized; intermediate fields are
recognized as Frobenius-fixed subsets.  Elements are encoded as plain ints:

    0      -> the zero element
    k + 1  -> g^k, where g is the fixed multiplicative generator
              (the root of the modulus), 0 <= k < p^{h*n} - 1

This makes multiplication, inversion and Frobenius maps O(1) index
arithmetic; addition goes through a single Zech-logarithm table.  The int
encoding doubles as the canonical total order on elements (zero first,
then by discrete log).

The modulus is the lexicographically least primitive polynomial of degree
h*n over F_p, coefficient vectors compared low-degree-first, so field
construction is reproducible from (p, h, n) alone.  A caller-supplied
modulus can override the search, but it must itself be primitive because
the element encoding is built on discrete logs of its root.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    DivisionByZero,
    InvalidModulus,
    NotADivisor,
    NotPrime,
    TooLarge,
)

MAX_FIELD_SIZE = 2**24


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def _divisors(n: int) -> list[int]:
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


# -- dense polynomial arithmetic over F_p, used only for the modulus search --

def _poly_mul_mod(u, v, mod, p):
    # u, v, mod: coefficient lists low-degree-first; mod is monic
    m = len(mod) - 1
    out = [0] * (len(u) + len(v) - 1)
    for i, ui in enumerate(u):
        if ui:
            for j, vj in enumerate(v):
                out[i + j] = (out[i + j] + ui * vj) % p
    for i in range(len(out) - 1, m - 1, -1):
        c = out[i]
        if c:
            out[i] = 0
            for j in range(m):
                out[i - m + j] = (out[i - m + j] - c * mod[j]) % p
    out = out[:m]
    while len(out) < m:
        out.append(0)
    return out


def _poly_pow_x_mod(e, mod, p):
    # x^e mod (mod), binary exponentiation
    m = len(mod) - 1
    result = [1] + [0] * (m - 1)
    if m == 1:
        base = [(-mod[0]) % p]  # x mod (x + c) = -c
    else:
        base = [0, 1] + [0] * (m - 2)
    while e:
        if e & 1:
            result = _poly_mul_mod(result, base, mod, p)
        base = _poly_mul_mod(base, base, mod, p)
        e >>= 1
    return result


def _x_is_primitive(mod, p, order):
    # x generates the multiplicative group of F_p[x]/(mod) iff
    # x^order = 1 and x^(order/r) != 1 for every prime r | order.
    # That also forces mod to be irreducible.
    one = [1] + [0] * (len(mod) - 2)
    if _poly_pow_x_mod(order, mod, p) != one:
        return False
    for r in _prime_factors(order):
        if _poly_pow_x_mod(order // r, mod, p) == one:
            return False
    return True


def _search_modulus(p, m, order):
    """Lex-least monic primitive polynomial of degree m over F_p."""
    # Enumerate constant-first coefficient vectors (c_0, ..., c_{m-1});
    # candidates with c_0 = 0 are divisible by x and can be skipped.
    total = p**m
    for t in range(total):
        coeffs = []
        rem = t
        for i in range(m):
            coeffs.append(rem // p ** (m - 1 - i) % p)
        if coeffs[0] == 0:
            continue
        mod = coeffs + [1]
        if _x_is_primitive(mod, p, order):
            return mod
    raise RuntimeError(
        f"no primitive modulus of degree {m} over F_{p}; this cannot happen"
    )


class FieldCtx:
    """Arithmetic context for F_{p^{h*n}} with its F_{p^h}-tower structure.

    Immutable after construction; all operations are pure, so a single
    context can be shared freely across worker processes or threads.
    """

    def __init__(self, p: int, h: int, n: int, modulus: list[int] | None = None):
        if not _is_prime(p):
            raise NotPrime(f"p = {p} is not prime")
        if h < 1 or n < 1:
            raise InvalidModulus("h and n must be positive")
        m = h * n
        size = p**m
        if size > MAX_FIELD_SIZE:
            raise TooLarge(f"p^(h*n) = {size} exceeds table limit {MAX_FIELD_SIZE}")
        self.p = p
        self.h = h
        self.n = n
        self.m = m
        self.q = p**h
        self.size = size
        self.order = size - 1  # multiplicative group order

        if modulus is None:
            modulus = _search_modulus(p, m, self.order)
        else:
            modulus = [c % p for c in modulus]
            if len(modulus) != m + 1 or modulus[-1] != 1:
                raise InvalidModulus(f"modulus must be monic of degree {m}")
            if not _x_is_primitive(modulus, p, self.order):
                raise InvalidModulus(
                    "supplied modulus is not primitive; element encoding "
                    "requires the modulus root to generate the multiplicative group"
                )
        self.modulus = tuple(modulus)

        self._build_tables()

        # verify primitivity of g against every proper divisor of the order
        for k in _divisors(self.order):
            if k < self.order and self._alog[k] == 1:
                raise RuntimeError("modulus root is not primitive; construction bug")

        self.zero = 0
        self.one = 1
        self.gen = 2 if self.order > 1 else 1  # g = g^1; in F_2 it is g^0 = 1
        # -1 as an element: g^(order/2) in odd characteristic, 1 in char 2
        self.minus_one = 1 if p == 2 else (self.order // 2) + 1

    def _build_tables(self):
        p, m, size, order = self.p, self.m, self.size, self.order
        mod = list(self.modulus)
        alog = np.zeros(order, dtype=np.int64)  # alog[k] = packed repr of g^k
        cur = [1] + [0] * (m - 1)
        pw = [p**i for i in range(m)]
        for k in range(order):
            alog[k] = sum(c * w for c, w in zip(cur, pw))
            # multiply by x and reduce
            lead = cur[-1]
            cur = [0] + cur[:-1]
            if lead:
                for j in range(m):
                    cur[j] = (cur[j] - lead * mod[j]) % p
        log = np.full(size, -1, dtype=np.int64)
        log[alog] = np.arange(order, dtype=np.int64)
        if np.any(log[1:] < 0):
            raise RuntimeError("log table incomplete; modulus root not primitive")

        # zech[k] = log(1 + g^k), or -1 where 1 + g^k = 0
        low = alog % p
        plus1 = np.where(low == p - 1, alog - (p - 1), alog + 1)
        zech = np.where(plus1 == 0, -1, log[plus1])

        self._alog = alog
        self._log = log
        self._zech = zech
        # index -> packed and packed -> index, for conversions
        pck = np.zeros(size, dtype=np.int64)
        pck[1:] = alog
        self._pck = pck
        idx = np.zeros(size, dtype=np.int64)
        idx[alog] = np.arange(1, size, dtype=np.int64)
        self._idx = idx
        # python-list mirrors: scalar ops avoid numpy scalar overhead
        self._zech_l = zech.tolist()
        self._pe = [pow(self.p, e, order) if order > 1 else 0 for e in range(m)]

    # ---------------------------------------------------------------- misc

    @property
    def spec_string(self) -> str:
        coeffs = ",".join(str(c) for c in self.modulus)
        return f"{self.p}^{self.h}^{self.n}/{coeffs}"

    def __repr__(self):
        return f"FieldCtx({self.p}^{self.h}^{self.n}, |F|={self.size})"

    def elements(self):
        return range(self.size)

    def nonzero(self):
        return range(1, self.size)

    def fmt(self, e: int) -> str:
        if e == 0:
            return "0"
        return f"g^{e - 1}"

    def parse(self, s: str) -> int:
        s = s.strip()
        if s == "0":
            return 0
        if s == "1":
            return 1
        if s.startswith("g^"):
            k = int(s[2:])
            return k % self.order + 1
        raise ValueError(f"cannot parse field element {s!r}; use '0' or 'g^k'")

    def from_exp(self, k: int) -> int:
        """The element g^k."""
        return k % self.order + 1

    def exp_of(self, e: int) -> int:
        if e == 0:
            raise DivisionByZero("zero has no discrete log")
        return e - 1

    # ------------------------------------------------------------- scalars

    def add(self, a: int, b: int) -> int:
        if a == 0:
            return b
        if b == 0:
            return a
        i = a - 1
        j = b - 1
        z = self._zech_l[(j - i) % self.order]
        if z < 0:
            return 0
        return (i + z) % self.order + 1

    def neg(self, a: int) -> int:
        if a == 0 or self.p == 2:
            return a
        return (a - 1 + self.order // 2) % self.order + 1

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return (a + b - 2) % self.order + 1

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return (self.order - (a - 1)) % self.order + 1

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow_int(self, a: int, e: int) -> int:
        """a^e for an arbitrary integer exponent (negative allowed for a != 0)."""
        if a == 0:
            if e <= 0:
                raise DivisionByZero("0 cannot be raised to a non-positive power")
            return 0
        return (a - 1) * (e % self.order) % self.order + 1

    def frobenius(self, a: int, e: int) -> int:
        """a^(p^e) with 0 <= e < h*n."""
        if not 0 <= e < self.m:
            raise ValueError(f"frobenius exponent {e} outside [0, {self.m})")
        if a == 0:
            return 0
        return (a - 1) * self._pe[e] % self.order + 1

    def trace_rel(self, a: int, s: int) -> int:
        """Tr_{q^n/q^s}(a) = a + a^{q^s} + ... + a^{q^{n-s}}; requires s | n."""
        if s < 1 or self.n % s != 0:
            raise NotADivisor(f"s = {s} does not divide n = {self.n}")
        acc = 0
        step = (self.h * s) % self.m
        cur = a
        for _ in range(self.n // s):
            acc = self.add(acc, cur)
            cur = self.frobenius(cur, step)
        return acc

    def norm_rel(self, a: int, s: int) -> int:
        """N_{q^n/q^s}(a) = a^{(q^n-1)/(q^s-1)}; requires s | n."""
        if s < 1 or self.n % s != 0:
            raise NotADivisor(f"s = {s} does not divide n = {self.n}")
        if a == 0:
            return 0
        qs = self.p ** (self.h * s)
        e = (self.size - 1) // (qs - 1)
        return self.pow_int(a, e)

    def subfield_degree(self, a: int) -> int:
        """Smallest d | h*n with a^(p^d) = a."""
        for d in _divisors(self.m):
            if self.frobenius(a, d % self.m) == a:
                return d
        return self.m

    def in_subfield(self, a: int, s: int) -> bool:
        """True iff a lies in F_{q^s} (s | n), the fixed field of x -> x^{q^s}."""
        if s == self.n:
            return True
        return self.frobenius(a, (self.h * s) % self.m) == a

    # -------------------------------------------------------------- vectors
    #
    # Same encoding on numpy int64 arrays; inputs broadcast like numpy ops.

    def vadd(self, A, B):
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        i = A - 1
        j = B - 1
        z = self._zech[(j - i) % self.order]
        s = np.where(z < 0, 0, (i + z) % self.order + 1)
        return np.where(A == 0, B, np.where(B == 0, A, s))

    def vneg(self, A):
        if self.p == 2:
            return np.asarray(A, dtype=np.int64)
        A = np.asarray(A, dtype=np.int64)
        return np.where(A == 0, 0, (A - 1 + self.order // 2) % self.order + 1)

    def vmul(self, A, B):
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        return np.where((A == 0) | (B == 0), 0, (A + B - 2) % self.order + 1)

    def vinv(self, A):
        """Inverse on nonzero entries; zero entries pass through as zero."""
        A = np.asarray(A, dtype=np.int64)
        return np.where(A == 0, 0, (self.order - (A - 1)) % self.order + 1)

    def vpow(self, A, e: int):
        A = np.asarray(A, dtype=np.int64)
        if e <= 0:
            raise ValueError("vpow needs a positive exponent")
        return np.where(A == 0, 0, (A - 1) * (e % self.order) % self.order + 1)

    def vfrob(self, A, e: int):
        A = np.asarray(A, dtype=np.int64)
        return np.where(A == 0, 0, (A - 1) * self._pe[e % self.m] % self.order + 1)

    def vfold_add(self, A) -> int:
        """Field sum of all entries of A (tree reduction)."""
        A = np.asarray(A, dtype=np.int64).ravel()
        while A.size > 1:
            if A.size & 1:
                A = np.append(A, 0)
            A = self.vadd(A[0::2], A[1::2])
        return int(A[0]) if A.size else 0

    def packed(self, A):
        """Index encoding -> packed base-p coefficient encoding."""
        return self._pck[np.asarray(A, dtype=np.int64)]

    def unpacked(self, A):
        """Packed encoding -> index encoding."""
        return self._idx[np.asarray(A, dtype=np.int64)]


def build_field(p: int, h: int, n: int, modulus: list[int] | None = None) -> FieldCtx:
    """Construct the tower context; deterministic given (p, h, n)."""
    return FieldCtx(p, h, n, modulus)
