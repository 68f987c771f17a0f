"""Exact multivariate polynomial rings over Q or F_p, with one optional
hypersurface modulus, optional gradings, and matrices over them.

Polynomials are sparse maps from exponent tuples to nonzero field
coefficients, kept in normal form: when the ring has a modulus f, no stored
monomial is divisible by the leading monomial of f under graded-lex order.
With a single modulus whose leading coefficient is a unit, this normal form
is plain one-divisor division; no Groebner machinery is needed or wanted.

All values are immutable after construction and all operations are pure.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (
    ArityMismatch,
    DimensionMismatch,
    ModulusPresent,
    NonInvertibleLeadCoeff,
    ParseError,
    RingMismatch,
    UnknownVariable,
    ZeroInput,
)
from .fields import Field


def _mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _mono_divides(a, b):
    """True when monomial a divides monomial b."""
    return all(x <= y for x, y in zip(a, b))


def _mono_div(b, a):
    return tuple(y - x for x, y in zip(a, b))


class Ring:
    """A polynomial ring k[x1..xn], optionally modulo one polynomial.

    ``weights`` (one positive int per variable) fixes the grading used for
    weighted degrees; when absent, every variable has weight 1 but the ring
    is not considered explicitly graded.
    """

    def __init__(self, field: Field, variables, modulus=None, weights=None):
        self.field = field
        self.vars = tuple(variables)
        if len(set(self.vars)) != len(self.vars):
            raise ParseError("duplicate variable names")
        if weights is not None:
            weights = tuple(int(w) for w in weights)
            if len(weights) != len(self.vars):
                raise ArityMismatch("one weight per variable required")
            if any(w < 1 for w in weights):
                raise ParseError("grading weights must be >= 1")
        self.weights = weights
        self.modulus = None
        self._cache = {}
        if modulus is not None:
            free = Ring(self.field, self.vars, None, self.weights)
            f = modulus if isinstance(modulus, Poly) else free.poly(modulus)
            if f.ring != free:
                raise RingMismatch("modulus must live in the free ring")
            if f.is_zero:
                raise ZeroInput("zero modulus")
            if f.degree() == 0:
                raise ParseError("modulus must be a non-unit")
            if not f.lc():
                raise NonInvertibleLeadCoeff("modulus leading coefficient is zero")
            if weights is not None and not f.is_homogeneous():
                raise ParseError("graded ring requires a homogeneous modulus")
            self.modulus = f

    # -- identity ------------------------------------------------------

    def _key(self):
        mod = None
        if self.modulus is not None:
            mod = tuple(sorted(self.modulus._terms.items()))
        return (self.field, self.vars, mod, self.weights)

    def __eq__(self, other):
        return isinstance(other, Ring) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        base = f"{self.field}[{','.join(self.vars)}]"
        if self.modulus is not None:
            base += f"/({self.modulus})"
        return base

    # -- constructors ----------------------------------------------------

    def free_ring(self) -> "Ring":
        if self.modulus is None:
            return self
        return Ring(self.field, self.vars, None, self.weights)

    def quotient(self, f) -> "Ring":
        if self.modulus is not None:
            raise ModulusPresent("only one modulus is supported")
        f = f if isinstance(f, Poly) else self.poly(f)
        return Ring(self.field, self.vars, f, self.weights)

    # -- degrees and monomial order ------------------------------------

    def wdeg(self, mono) -> int:
        if self.weights is None:
            return sum(mono)
        return sum(e * w for e, w in zip(mono, self.weights))

    def order_key(self, mono):
        """Graded-lex key: weighted degree first, then lex on exponents."""
        return (self.wdeg(mono), mono)

    # -- element construction -------------------------------------------

    @property
    def zero(self) -> "Poly":
        return Poly(self, {})

    @property
    def one(self) -> "Poly":
        return Poly(self, {(0,) * len(self.vars): self.field.one()})

    def gen(self, name: str) -> "Poly":
        if name not in self.vars:
            raise UnknownVariable(name)
        mono = tuple(1 if v == name else 0 for v in self.vars)
        return self.from_terms({mono: self.field.one()})

    def constant(self, c) -> "Poly":
        c = self.field.coerce(c)
        if not c:
            return self.zero
        return Poly(self, {(0,) * len(self.vars): c})

    def from_terms(self, terms: dict) -> "Poly":
        """Build a polynomial from raw terms, reducing to normal form."""
        clean = {}
        for mono, coeff in terms.items():
            coeff = self.field.coerce(coeff)
            if coeff:
                clean[tuple(mono)] = coeff
        return Poly(self, self._reduce(clean))

    def poly(self, x) -> "Poly":
        if isinstance(x, Poly):
            if x.ring == self:
                return x
            if x.ring == self.free_ring():
                return self.from_terms(x._terms)
            raise RingMismatch(f"{x} is not over {self!r}")
        if isinstance(x, (int, Fraction)):
            return self.constant(x)
        if isinstance(x, str):
            return parse_poly(x, self)
        raise ParseError(f"cannot interpret {x!r} as a polynomial")

    def lift(self, p: "Poly") -> "Poly":
        """Lift a normal-form element of a quotient to the free ring."""
        return Poly(self.free_ring(), dict(p._terms))

    # -- normal form -----------------------------------------------------

    def _reduce(self, terms: dict) -> dict:
        f = self.modulus
        if f is None or not terms:
            return terms
        lmf = f.lm()
        lcf = f.lc()
        field = self.field
        tail = [(m, c) for m, c in f._terms.items() if m != lmf]
        work = dict(terms)
        while True:
            reducible = [m for m in work if _mono_divides(lmf, m)]
            if not reducible:
                return work
            m = max(reducible, key=self.order_key)
            c = work.pop(m)
            q = _mono_div(m, lmf)
            factor = field.div(c, lcf)
            for fm, fc in tail:
                mm = _mono_mul(q, fm)
                nc = field.sub(work.get(mm, field.zero()), field.mul(factor, fc))
                if nc:
                    work[mm] = nc
                else:
                    work.pop(mm, None)

    # -- monomial enumeration (reduced monomials only) -------------------

    def _excluded(self):
        return None if self.modulus is None else self.modulus.lm()

    def monomials_of_degree(self, d: int) -> tuple:
        """All normal-form monomials of exact weighted degree d."""
        if d < 0:
            return ()
        key = ("deg", d)
        if key in self._cache:
            return self._cache[key]
        weights = self.weights or (1,) * len(self.vars)
        excl = self._excluded()
        out = []

        def rec(idx, remaining, prefix):
            if idx == len(weights):
                if remaining == 0:
                    mono = tuple(prefix)
                    if excl is None or not _mono_divides(excl, mono):
                        out.append(mono)
                return
            w = weights[idx]
            for e in range(remaining // w + 1):
                rec(idx + 1, remaining - e * w, prefix + [e])

        rec(0, d, [])
        res = tuple(sorted(out, key=self.order_key))
        self._cache[key] = res
        return res

    def monomials_upto(self, bound: int) -> tuple:
        key = ("upto", bound)
        if key in self._cache:
            return self._cache[key]
        out = []
        for d in range(max(bound, -1) + 1):
            out.extend(self.monomials_of_degree(d))
        res = tuple(out)
        self._cache[key] = res
        return res

    # -- sampling ----------------------------------------------------------

    def random_poly(self, rng, degree, homogeneous=False, terms=3, nonzero=False):
        """Random polynomial with at most ``terms`` monomials.

        With homogeneous=True ``degree`` is the exact weighted degree.
        """
        pool = (
            self.monomials_of_degree(degree)
            if homogeneous
            else self.monomials_upto(degree)
        )
        if not pool:
            return self.zero
        while True:
            chosen = {}
            for _ in range(terms):
                mono = pool[rng.randrange(len(pool))]
                chosen[mono] = self.field.random(rng)
            p = self.from_terms(chosen)
            if not nonzero or not p.is_zero:
                return p


class Poly:
    """Sparse polynomial in normal form; construct via Ring methods."""

    __slots__ = ("ring", "_terms")

    def __init__(self, ring: Ring, terms: dict):
        self.ring = ring
        self._terms = terms

    def terms(self):
        return self._terms.items()

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Weighted total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(self.ring.wdeg(m) for m in self._terms)

    def lm(self):
        if not self._terms:
            raise ZeroInput("zero polynomial has no leading monomial")
        return max(self._terms, key=self.ring.order_key)

    def lc(self):
        return self._terms[self.lm()]

    @property
    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def constant_value(self):
        zero = self.ring.field.zero()
        return self._terms.get((0,) * len(self.ring.vars), zero)

    # -- arithmetic -----------------------------------------------------

    def _coerce_other(self, other):
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise RingMismatch("polynomials over different rings")
            return other
        return self.ring.poly(other)

    def __add__(self, other):
        other = self._coerce_other(other)
        field = self.ring.field
        out = dict(self._terms)
        for m, c in other._terms.items():
            nc = field.add(out.get(m, field.zero()), c)
            if nc:
                out[m] = nc
            else:
                out.pop(m, None)
        return Poly(self.ring, out)  # sum of normal forms is normal

    __radd__ = __add__

    def __neg__(self):
        field = self.ring.field
        return Poly(self.ring, {m: field.neg(c) for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce_other(other))

    def __rsub__(self, other):
        return self._coerce_other(other) - self

    def __mul__(self, other):
        other = self._coerce_other(other)
        field = self.ring.field
        out = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                nc = field.add(out.get(m, field.zero()), field.mul(c1, c2))
                if nc:
                    out[m] = nc
                else:
                    del out[m]
        return Poly(self.ring, self.ring._reduce(out))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = self.ring.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def scale(self, c):
        c = self.ring.field.coerce(c)
        if not c:
            return self.ring.zero
        field = self.ring.field
        return Poly(self.ring, {m: field.mul(v, c) for m, v in self._terms.items()})

    def __eq__(self, other):
        if not isinstance(other, Poly):
            try:
                other = self._coerce_other(other)
            except Exception:
                return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self):
        return hash((self.ring, tuple(sorted(self._terms.items()))))

    # -- structure -------------------------------------------------------

    def homogeneous_components(self) -> dict:
        comps = {}
        for m, c in self._terms.items():
            comps.setdefault(self.ring.wdeg(m), {})[m] = c
        return {d: Poly(self.ring, t) for d, t in comps.items()}

    def is_homogeneous(self, degree=None) -> bool:
        if not self._terms:
            return True
        degs = {self.ring.wdeg(m) for m in self._terms}
        if len(degs) > 1:
            return False
        return degree is None or degs == {degree}

    def evaluate(self, point):
        """Evaluate at a point given per variable; free rings only."""
        ring = self.ring
        if ring.modulus is not None:
            raise ModulusPresent("evaluation requires a free ring")
        if isinstance(point, dict):
            missing = [v for v in ring.vars if v not in point]
            extra = [v for v in point if v not in ring.vars]
            if missing or extra:
                raise ArityMismatch(f"missing={missing} extra={extra}")
            values = [point[v] for v in ring.vars]
        else:
            values = list(point)
            if len(values) != len(ring.vars):
                raise ArityMismatch(
                    f"expected {len(ring.vars)} values, got {len(values)}"
                )
        field = ring.field
        values = [field.coerce(v) for v in values]
        acc = field.zero()
        for m, c in self._terms.items():
            term = c
            for v, e in zip(values, m):
                for _ in range(e):
                    term = field.mul(term, v)
            acc = field.add(acc, term)
        return acc

    def exact_div(self, d: "Poly") -> "Poly":
        """Exact quotient self / d; raises ZeroDivisionError when not exact."""
        d = self._coerce_other(d)
        if d.is_zero:
            raise ZeroDivisionError("division by zero polynomial")
        ring = self.ring
        field = ring.field
        lmd, lcd = d.lm(), d.lc()
        rem = dict(self._terms)
        quo = {}
        while rem:
            m = max(rem, key=ring.order_key)
            if not _mono_divides(lmd, m):
                raise ZeroDivisionError(f"{d} does not divide exactly")
            c = rem.pop(m)
            qm = _mono_div(m, lmd)
            qc = field.div(c, lcd)
            quo[qm] = qc
            for dm, dc in d._terms.items():
                if dm == lmd:
                    continue
                mm = _mono_mul(qm, dm)
                nc = field.sub(rem.get(mm, field.zero()), field.mul(qc, dc))
                if nc:
                    rem[mm] = nc
                else:
                    rem.pop(mm, None)
        return Poly(ring, ring._reduce(quo))

    # -- printing ----------------------------------------------------------

    def __str__(self):
        if not self._terms:
            return "0"
        ring = self.ring
        monos = sorted(self._terms, key=ring.order_key, reverse=True)
        pieces = []
        for m in monos:
            c = self._terms[m]
            factors = []
            for name, e in zip(ring.vars, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            body = "*".join(factors)
            if ring.field.is_rational:
                neg = c < 0
                mag = -c if neg else c
                if not body:
                    text = str(mag)
                elif mag == 1:
                    text = body
                else:
                    text = f"{mag}*{body}"
                pieces.append(("-" if neg else "+", text))
            else:
                text = body if (c == 1 and body) else (f"{c}*{body}" if body else str(c))
                pieces.append(("+", text))
        sign, first = pieces[0]
        out = ("-" if sign == "-" else "") + first
        for sign, text in pieces[1:]:
            out += f" {sign} {text}"
        return out

    def __repr__(self):
        return f"<{self} over {self.ring!r}>"


# ---------------------------------------------------------------------------
# Parsing


_WORD_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ")
_WORD_BODY = _WORD_START | set("0123456789")


def _tokenize(text: str):
    tokens = []
    i, line, col = 0, 1, 1
    while i < len(text):
        ch = text[i]
        if ch in " \t":
            i += 1
            col += 1
            continue
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in "+-*^()":
            tokens.append((ch, ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            if j < len(text) and text[j] == "/":
                k = j + 1
                while k < len(text) and text[k].isdigit():
                    k += 1
                if k == j + 1:
                    raise ParseError("bad fraction", line, col)
                tokens.append(("num", text[i:k], line, col))
                col += k - i
                i = k
            else:
                tokens.append(("num", text[i:j], line, col))
                col += j - i
                i = j
            continue
        if ch in _WORD_START:
            j = i
            while j < len(text) and text[j] in _WORD_BODY:
                j += 1
            tokens.append(("name", text[i:j], line, col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    return tokens


def parse_poly(text: str, ring: Ring) -> Poly:
    """Parse the canonical polynomial syntax, e.g. ``3*x1^2*x3 - 1/2``."""
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty polynomial text")
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None, 0, 0)

    def take(kind=None):
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError("unexpected end of polynomial")
        tok = tokens[pos]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind}, found {tok[1]!r}", tok[2], tok[3])
        pos += 1
        return tok

    def parse_factor():
        kind, value, line, col = peek()
        if kind == "num":
            take()
            return ring.constant(Fraction(value))
        if kind == "name":
            take()
            if value not in ring.vars:
                raise UnknownVariable(value)
            exp = 1
            if peek()[0] == "^":
                take("^")
                _, raw, line, col = take("num")
                if "/" in raw:
                    raise ParseError("exponents must be integers", line, col)
                exp = int(raw)
            return ring.gen(value) ** exp
        if kind == "(":
            take("(")
            inner = parse_expr()
            take(")")
            return inner
        raise ParseError(f"unexpected token {value!r}", line, col)

    def parse_term():
        acc = parse_factor()
        while peek()[0] == "*":
            take("*")
            acc = acc * parse_factor()
        return acc

    def parse_expr():
        sign = 1
        while peek()[0] in ("+", "-"):
            if take()[0] == "-":
                sign = -sign
        acc = parse_term().scale(sign)
        while peek()[0] in ("+", "-"):
            sign = 1
            while peek()[0] in ("+", "-"):
                if take()[0] == "-":
                    sign = -sign
            acc = acc + parse_term().scale(sign)
        return acc

    result = parse_expr()
    if pos != len(tokens):
        _, value, line, col = tokens[pos]
        raise ParseError(f"trailing input {value!r}", line, col)
    return result


def normalize(text, ring: Ring) -> Poly:
    """Parse raw polynomial text into canonical reduced form (idempotent)."""
    return ring.poly(text)


# ---------------------------------------------------------------------------
# Multivariate gcd by content/primitive-part recursion


def _univ(p: Poly, v: int) -> dict:
    """View p as univariate in variable v with Poly coefficients."""
    out = {}
    for m, c in p._terms.items():
        e = m[v]
        rest = m[:v] + (0,) + m[v + 1 :]
        coeff = out.setdefault(e, {})
        coeff[rest] = c
    return {e: Poly(p.ring, t) for e, t in out.items()}


def _from_univ(coeffs: dict, v: int, ring: Ring) -> Poly:
    out = {}
    for e, poly in coeffs.items():
        for m, c in poly._terms.items():
            out[m[:v] + (e,) + m[v + 1 :]] = c
    return Poly(ring, out)


def _univ_prem(f: dict, g: dict, ring: Ring) -> dict:
    """Pseudo-remainder of univariate views (coefficients are Polys)."""
    df = max(f) if f else -1
    dg = max(g)
    lg = g[dg]
    r = dict(f)
    while r and max(r) >= dg:
        dr = max(r)
        lr = r[dr]
        shift = dr - dg
        nr = {}
        for e, c in r.items():
            nr[e] = c * lg
        for e, c in g.items():
            ee = e + shift
            cur = nr.get(ee, ring.zero) - c * lr
            if cur.is_zero:
                nr.pop(ee, None)
            else:
                nr[ee] = cur
        r = {e: c for e, c in nr.items() if not c.is_zero}
    return r


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Exact gcd over the free ring, normalized to leading coefficient 1."""
    ring = a.ring
    if ring.modulus is not None:
        raise ModulusPresent("gcd is computed in the free ring")
    if b.ring != ring:
        raise RingMismatch("gcd of polynomials over different rings")
    if a.is_zero:
        g = b
    elif b.is_zero:
        g = a
    else:
        g = _gcd_rec(a, b)
    if g.is_zero:
        return g
    return g.scale(ring.field.inv(g.lc()))


def _gcd_rec(a: Poly, b: Poly) -> Poly:
    ring = a.ring
    main = None
    for v in range(len(ring.vars)):
        if any(m[v] for m in a._terms) or any(m[v] for m in b._terms):
            main = v
            break
    if main is None:  # both constants, not both zero
        return ring.one

    fa, fb = _univ(a, main), _univ(b, main)

    def content(u: dict) -> Poly:
        c = ring.zero
        for coeff in u.values():
            c = poly_gcd(c, coeff) if not c.is_zero else coeff
        return c

    def pp(u: dict, cont: Poly) -> dict:
        if cont.is_zero:
            return u
        return {e: c.exact_div(cont) for e, c in u.items()}

    ca, cb = content(fa), content(fb)
    cont_gcd = _gcd_rec(ca, cb) if (not ca.is_constant or not cb.is_constant) else ring.one
    f, g = pp(fa, ca), pp(fb, cb)
    if (max(f) if f else -1) < (max(g) if g else -1):
        f, g = g, f
    while g:
        r = _univ_prem(f, g, ring)
        f, g = g, pp(r, content(r)) if r else {}
    result = _from_univ(pp(f, content(f)), main, ring)
    return result * cont_gcd


def is_nonzerodivisor(omega: Poly, ring: Ring) -> bool:
    """Exact non-zerodivisor test on the (possibly quotient) ring.

    A free polynomial ring over a field is a domain; modulo f, an element is
    a zerodivisor exactly when it shares an irreducible factor with f, i.e.
    when gcd(lift, f) is not a unit.
    """
    if omega.ring != ring:
        raise RingMismatch("omega not over the given ring")
    if omega.is_zero:
        raise ZeroInput("omega must be nonzero")
    if ring.modulus is None:
        return True
    lifted = ring.lift(omega)
    g = poly_gcd(lifted, ring.modulus)
    return g.degree() == 0


# ---------------------------------------------------------------------------
# Matrices


class PolyMatrix:
    """Immutable matrix of polynomials over one ring, row-major."""

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring: Ring, rows: int, cols: int, entries):
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise DimensionMismatch(
                f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}"
            )
        for e in entries:
            if not isinstance(e, Poly) or e.ring != ring:
                raise RingMismatch("all entries must be polynomials over the ring")
        self.ring = ring
        self.rows = rows
        self.cols = cols
        self.entries = entries

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_rows(cls, ring: Ring, rows) -> "PolyMatrix":
        rows = [list(r) for r in rows]
        r = len(rows)
        c = len(rows[0]) if rows else 0
        if any(len(row) != c for row in rows):
            raise DimensionMismatch("ragged rows")
        ents = [ring.poly(x) for row in rows for x in row]
        return cls(ring, r, c, ents)

    @classmethod
    def zeros(cls, ring: Ring, rows: int, cols: int) -> "PolyMatrix":
        return cls(ring, rows, cols, [ring.zero] * (rows * cols))

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "PolyMatrix":
        ents = [ring.one if i == j else ring.zero for i in range(n) for j in range(n)]
        return cls(ring, n, n, ents)

    @classmethod
    def scalar(cls, ring: Ring, n: int, value) -> "PolyMatrix":
        v = ring.poly(value)
        ents = [v if i == j else ring.zero for i in range(n) for j in range(n)]
        return cls(ring, n, n, ents)

    # -- access ----------------------------------------------------------

    def entry(self, i: int, j: int) -> Poly:
        return self.entries[i * self.cols + j]

    def row_list(self):
        return [
            list(self.entries[i * self.cols : (i + 1) * self.cols])
            for i in range(self.rows)
        ]

    def submatrix(self, row_idx, col_idx) -> "PolyMatrix":
        row_idx, col_idx = list(row_idx), list(col_idx)
        ents = [self.entry(i, j) for i in row_idx for j in col_idx]
        return PolyMatrix(self.ring, len(row_idx), len(col_idx), ents)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def is_zero(self) -> bool:
        return all(e.is_zero for e in self.entries)

    def max_degree(self) -> int:
        return max((e.degree() for e in self.entries), default=-1)

    # -- arithmetic --------------------------------------------------------

    def _check_ring(self, other):
        if self.ring != other.ring:
            raise RingMismatch("matrices over different rings")

    def __add__(self, other):
        self._check_ring(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("shape mismatch in addition")
        ents = [a + b for a, b in zip(self.entries, other.entries)]
        return PolyMatrix(self.ring, self.rows, self.cols, ents)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return PolyMatrix(self.ring, self.rows, self.cols, [-e for e in self.entries])

    def __matmul__(self, other):
        return mat_mul(self, other)

    def scale(self, value) -> "PolyMatrix":
        v = self.ring.poly(value)
        return PolyMatrix(
            self.ring, self.rows, self.cols, [v * e for e in self.entries]
        )

    def transpose(self) -> "PolyMatrix":
        ents = [self.entry(i, j) for j in range(self.cols) for i in range(self.rows)]
        return PolyMatrix(self.ring, self.cols, self.rows, ents)

    def __eq__(self, other):
        return (
            isinstance(other, PolyMatrix)
            and self.ring == other.ring
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.ring, self.rows, self.cols, self.entries))

    def __str__(self):
        return "[" + "; ".join(
            ", ".join(str(self.entry(i, j)) for j in range(self.cols))
            for i in range(self.rows)
        ) + "]"

    def __repr__(self):
        return f"<{self.rows}x{self.cols} matrix {self}>"


def mat_mul(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    """Exact matrix product in normal form."""
    if a.ring != b.ring:
        raise RingMismatch("matrices over different rings")
    if a.cols != b.rows:
        raise DimensionMismatch(f"{a.rows}x{a.cols} times {b.rows}x{b.cols}")
    ring = a.ring
    out = []
    for i in range(a.rows):
        arow = a.entries[i * a.cols : (i + 1) * a.cols]
        for j in range(b.cols):
            acc = ring.zero
            for k in range(a.cols):
                left = arow[k]
                if left.is_zero:
                    continue
                right = b.entry(k, j)
                if right.is_zero:
                    continue
                acc = acc + left * right
            out.append(acc)
    return PolyMatrix(ring, a.rows, b.cols, out)


def hstack(*mats: PolyMatrix) -> PolyMatrix:
    ring = mats[0].ring
    rows = mats[0].rows
    if any(m.rows != rows or m.ring != ring for m in mats):
        raise DimensionMismatch("hstack needs equal row counts over one ring")
    ents = []
    for i in range(rows):
        for m in mats:
            ents.extend(m.entries[i * m.cols : (i + 1) * m.cols])
    return PolyMatrix(ring, rows, sum(m.cols for m in mats), ents)


def vstack(*mats: PolyMatrix) -> PolyMatrix:
    ring = mats[0].ring
    cols = mats[0].cols
    if any(m.cols != cols or m.ring != ring for m in mats):
        raise DimensionMismatch("vstack needs equal column counts over one ring")
    ents = []
    for m in mats:
        ents.extend(m.entries)
    return PolyMatrix(ring, sum(m.rows for m in mats), cols, ents)


def block_diag(*mats: PolyMatrix) -> PolyMatrix:
    ring = mats[0].ring
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = [[ring.zero] * cols for _ in range(rows)]
    r0 = c0 = 0
    for m in mats:
        for i in range(m.rows):
            for j in range(m.cols):
                out[r0 + i][c0 + j] = m.entry(i, j)
        r0 += m.rows
        c0 += m.cols
    return PolyMatrix(ring, rows, cols, [e for row in out for e in row])
