"""Exact coefficient fields: the rationals and prime fields F_p.

Rational coefficients are `fractions.Fraction` values; F_p coefficients are
ints in range(p). A small extension-field type GF(p^e) is provided for
random-evaluation rank tests where F_p itself is too small.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class FieldError(Exception):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Field:
    """The rationals (p is None) or the prime field F_p."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not _is_prime(self.p):
            raise FieldError(f"{self.p} is not prime")

    @property
    def is_rational(self) -> bool:
        return self.p is None

    def coerce(self, x):
        """Coerce an int, Fraction or coefficient string into this field."""
        if self.p is None:
            if isinstance(x, Fraction):
                return x
            if isinstance(x, int):
                return Fraction(x)
            if isinstance(x, str):
                return Fraction(x)
            raise FieldError(f"cannot coerce {x!r} into Q")
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise FieldError(f"denominator of {x} not invertible mod {self.p}")
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, str):
            return self.coerce(Fraction(x))
        raise FieldError(f"cannot coerce {x!r} into F_{self.p}")

    def zero(self):
        return Fraction(0) if self.p is None else 0

    def one(self):
        return Fraction(1) if self.p is None else 1

    def add(self, a, b):
        return a + b if self.p is None else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p is None else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.p is None else (a * b) % self.p

    def neg(self, a):
        return -a if self.p is None else (-a) % self.p

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero field element")
        return 1 / a if self.p is None else pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def random(self, rng):
        if self.p is None:
            return Fraction(rng.randint(-9, 9))
        return rng.randrange(self.p)

    def format(self, a) -> str:
        return str(a)

    def __str__(self):
        return "Q" if self.p is None else f"F{self.p}"


QQ = Field(None)


# ---------------------------------------------------------------------------
# GF(p^e) for evaluation-based rank probing.
# Elements are coefficient tuples of length e over F_p, multiplied modulo a
# monic irreducible found by exhaustive trial division (e stays tiny here).


def _poly_mod_mul(a, b, modulus, p):
    # a, b: coefficient lists (low degree first), modulus monic of degree e
    e = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            prod[i + j] = (prod[i + j] + ai * bj) % p
    for i in range(len(prod) - 1, e - 1, -1):
        c = prod[i]
        if c:
            prod[i] = 0
            for j in range(e):
                prod[i - e + j] = (prod[i - e + j] - c * modulus[j]) % p
    return tuple(prod[:e])


def _is_irreducible(coeffs, p) -> bool:
    # trial division by every monic polynomial of degree 1..deg/2
    deg = len(coeffs) - 1

    def all_polys(d):
        if d == 0:
            yield [1]
            return
        stack = [[]]
        for _ in range(d):
            stack = [s + [c] for s in stack for c in range(p)]
        for low in stack:
            yield low + [1]

    def divides(d, f):
        rem = list(f)
        while len(rem) >= len(d) and any(rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) < len(d):
                break
            factor = rem[-1]
            shift = len(rem) - len(d)
            for i, c in enumerate(d):
                rem[shift + i] = (rem[shift + i] - factor * c) % p
        return not any(rem)

    for d in range(1, deg // 2 + 1):
        for cand in all_polys(d):
            if divides(cand, coeffs):
                return False
    return True


def find_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Monic irreducible of degree e over F_p (coeffs low-first, monic)."""
    if e == 1:
        return (0, 1)
    count = p**e
    for code in range(count):
        coeffs = []
        c = code
        for _ in range(e):
            coeffs.append(c % p)
            c //= p
        coeffs.append(1)
        if _is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise FieldError(f"no irreducible of degree {e} over F_{p}")  # unreachable


class GFExt:
    """Element of GF(p^e) relative to a fixed modulus."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: "GFExtField", coeffs):
        self.ctx = ctx
        self.coeffs = tuple(c % ctx.p for c in coeffs)

    def __add__(self, other):
        return GFExt(self.ctx, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        return GFExt(self.ctx, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __mul__(self, other):
        return GFExt(
            self.ctx,
            _poly_mod_mul(self.coeffs, other.coeffs, self.ctx.modulus, self.ctx.p),
        )

    def __neg__(self):
        return GFExt(self.ctx, [-a for a in self.coeffs])

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, GFExt) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def inverse(self):
        # brute-force via Fermat: a^(q-2)
        q = self.ctx.p ** self.ctx.e
        out = self.ctx.one
        base = self
        n = q - 2
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        if not (out * self == self.ctx.one):
            raise ZeroDivisionError("not invertible")
        return out

    def __repr__(self):
        return f"GFExt{self.coeffs}"


class GFExtField:
    """GF(p^e) as a container of GFExt elements."""

    def __init__(self, p: int, e: int):
        self.p = p
        self.e = e
        self.modulus = find_irreducible(p, e)
        self.zero = GFExt(self, [0] * e)
        self.one = GFExt(self, [1] + [0] * (e - 1))

    def embed(self, a: int) -> GFExt:
        return GFExt(self, [a] + [0] * (self.e - 1))

    def random(self, rng) -> GFExt:
        return GFExt(self, [rng.randrange(self.p) for _ in range(self.e)])

    @property
    def size(self) -> int:
        return self.p**self.e
