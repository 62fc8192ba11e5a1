"""Sparse multivariate polynomials with exact rational coefficients.

Exponent vectors are packed 4 bits per variable into an integer key
(nvars <= 16, per-variable degree <= 15), which keeps the term maps fast
for basis generating polynomials and their Rayleigh differences.  No
floating point enters this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import (
    DimensionMismatch,
    EmptyFace,
    EqualIndices,
    NotMultiaffine,
    ParseError,
)
from .matroid import Matroid, set_of

_SHIFT = 4
_DIGIT = 0xF


def pack(exps) -> int:
    key = 0
    for i, e in enumerate(exps):
        if e < 0 or e > _DIGIT:
            raise ValueError(f"exponent {e} outside 0..15")
        key |= e << (_SHIFT * i)
    return key


def unpack(key: int, nvars: int):
    return tuple(key >> (_SHIFT * i) & _DIGIT for i in range(nvars))


@dataclass(frozen=True)
class SupportPolytopeFace:
    """Face of the support polytope given by an integer functional and its
    minimal value: <functional, alpha> >= value on the support, with equality
    cutting out the face."""

    functional: tuple
    value: int


class Poly:
    """Immutable sparse polynomial over Q."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        object.__setattr__(self, "nvars", nvars)
        clean = {}
        if terms:
            for k, c in terms.items():
                c = Fraction(c)
                if c != 0:
                    clean[k] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):
        raise AttributeError("Poly is immutable")

    # -- basics -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        return f"Poly({self.to_string()!r})"

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(unpack(k, self.nvars)) for k in self.terms)

    def var_degree(self, i: int) -> int:
        if not self.terms:
            return -1
        sh = _SHIFT * (i - 1)
        return max(k >> sh & _DIGIT for k in self.terms)

    def is_multiaffine(self) -> bool:
        return all(
            all(e <= 1 for e in unpack(k, self.nvars)) for k in self.terms
        )

    def is_homogeneous(self) -> bool:
        degs = {sum(unpack(k, self.nvars)) for k in self.terms}
        return len(degs) <= 1

    def support(self):
        return set(self.terms)

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "Poly"):
        if self.nvars != other.nvars:
            raise DimensionMismatch(
                f"nvars mismatch: {self.nvars} vs {other.nvars}"
            )

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, Fraction(0)) + c
        return Poly(self.nvars, terms)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + other.scale(-1)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        terms = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = k1 + k2  # no per-variable carries: degrees stay <= 15
                terms[k] = terms.get(k, Fraction(0)) + c1 * c2
        return Poly(self.nvars, terms)

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        return Poly(self.nvars, {k: v * c for k, v in self.terms.items()})

    def evaluate(self, point):
        if len(point) != self.nvars:
            raise DimensionMismatch("point length != nvars")
        pt = [Fraction(x) for x in point]
        total = Fraction(0)
        for k, c in self.terms.items():
            v = c
            kk = k
            i = 0
            while kk:
                e = kk & _DIGIT
                if e:
                    v *= pt[i] ** e
                kk >>= _SHIFT
                i += 1
            total += v
        return total

    def partial(self, i: int) -> "Poly":
        sh = _SHIFT * (i - 1)
        terms = {}
        for k, c in self.terms.items():
            e = k >> sh & _DIGIT
            if e:
                terms[k - (1 << sh)] = terms.get(k - (1 << sh), Fraction(0)) + c * e
        return Poly(self.nvars, terms)

    def substitute(self, i: int, value) -> "Poly":
        """Freeze variable i at a rational value (nvars preserved)."""
        value = Fraction(value)
        sh = _SHIFT * (i - 1)
        terms = {}
        for k, c in self.terms.items():
            e = k >> sh & _DIGIT
            k0 = k & ~(_DIGIT << sh)
            c0 = c * value**e if e else c
            if c0 != 0:
                terms[k0] = terms.get(k0, Fraction(0)) + c0
        return Poly(self.nvars, terms)

    def substitute_many(self, assignments) -> "Poly":
        p = self
        for i, v in assignments.items():
            p = p.substitute(i, v)
        return p

    # -- forms and faces ---------------------------------------------------

    def facial_restriction(self, face: SupportPolytopeFace) -> "Poly":
        if len(face.functional) != self.nvars:
            raise DimensionMismatch("functional length != nvars")
        terms = {}
        seen_min = None
        for k, c in self.terms.items():
            exps = unpack(k, self.nvars)
            val = sum(a * e for a, e in zip(face.functional, exps))
            if seen_min is None or val < seen_min:
                seen_min = val
            if val == face.value:
                terms[k] = c
        if not terms:
            raise EmptyFace("no support point attains the face value")
        if seen_min is not None and seen_min < face.value:
            raise EmptyFace("functional drops below the face value on the support")
        return Poly(self.nvars, terms)

    def _extreme_form(self, sign: int) -> "Poly":
        if not self.terms:
            return self
        degs = {k: sum(unpack(k, self.nvars)) for k in self.terms}
        target = max(degs.values()) if sign > 0 else min(degs.values())
        return Poly(
            self.nvars, {k: c for k, c in self.terms.items() if degs[k] == target}
        )

    def initial_form(self) -> "Poly":
        return self._extreme_form(-1)

    def leading_form(self) -> "Poly":
        return self._extreme_form(+1)

    # -- printing / parsing ------------------------------------------------

    def to_string(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms):
            c = self.terms[k]
            factors = [str(c)]
            for i, e in enumerate(unpack(k, self.nvars), start=1):
                if e:
                    factors.append(f"x{i}^{e}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    @staticmethod
    def from_string(s: str, nvars: int) -> "Poly":
        terms = {}
        s = s.strip()
        if s == "0":
            return Poly(nvars, {})
        for part in s.split("+"):
            factors = part.strip().split("*")
            try:
                c = Fraction(factors[0])
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"bad coefficient {factors[0]!r}") from exc
            exps = [0] * nvars
            for f in factors[1:]:
                f = f.strip()
                if not f.startswith("x") or "^" not in f:
                    raise ParseError(f"bad factor {f!r}")
                var, _, e = f[1:].partition("^")
                i = int(var)
                if i < 1 or i > nvars:
                    raise ParseError(f"variable x{i} outside 1..{nvars}")
                exps[i - 1] += int(e)
            k = pack(exps)
            terms[k] = terms.get(k, Fraction(0)) + c
        return Poly(nvars, terms)


def monomial(nvars: int, exps, coeff=1) -> Poly:
    return Poly(nvars, {pack(exps): Fraction(coeff)})


def constant(nvars: int, c) -> Poly:
    return Poly(nvars, {0: Fraction(c)})


# -- matroid-specific operations ---------------------------------------------


def basis_polynomial(m: Matroid) -> Poly:
    """h_M: one squarefree monomial per basis, all coefficients 1."""
    terms = {}
    for b in m.bases:
        key = 0
        x = b
        while x:
            i = (x & -x).bit_length() - 1
            x &= x - 1
            key |= 1 << (_SHIFT * i)
        terms[key] = Fraction(1)
    return Poly(m.n, terms)


def rayleigh_difference(h: Poly, i: int, j: int) -> Poly:
    """d_i h * d_j h - d_i d_j h * h; free of x_i and x_j for multiaffine h."""
    if i == j:
        raise EqualIndices("rayleigh difference needs i != j")
    if not h.is_multiaffine():
        raise NotMultiaffine("rayleigh difference defined for multiaffine input")
    hi = h.partial(i)
    hj = h.partial(j)
    hij = hi.partial(j)
    delta = hi * hj - hij * h
    assert delta.var_degree(i) <= 0 and delta.var_degree(j) <= 0
    return delta


def abcd_decompose(h: Poly, i: int, j: int):
    """h = a*x_i*x_j + b*x_i + c*x_j + d with a,b,c,d free of x_i, x_j."""
    if not h.is_multiaffine():
        raise NotMultiaffine("abcd split defined for multiaffine input")
    shi = _SHIFT * (i - 1)
    shj = _SHIFT * (j - 1)
    parts = {(1, 1): {}, (1, 0): {}, (0, 1): {}, (0, 0): {}}
    for k, c in h.terms.items():
        ei = k >> shi & 1
        ej = k >> shj & 1
        k0 = k & ~(1 << shi) & ~(1 << shj)
        parts[(ei, ej)][k0] = c
    n = h.nvars
    return (
        Poly(n, parts[(1, 1)]),
        Poly(n, parts[(1, 0)]),
        Poly(n, parts[(0, 1)]),
        Poly(n, parts[(0, 0)]),
    )


def flat_face(m: Matroid, flat) -> SupportPolytopeFace:
    """The face of Newt(h_M) cut out by sum_{i in S} x_i = rk(S), written as a
    minimizing functional (the indicator of S negated)."""
    from .matroid import mask_of

    s = mask_of(flat)
    a = tuple(-1 if s >> i & 1 else 0 for i in range(m.n))
    return SupportPolytopeFace(a, -m.rank_mask(s))


def det_rank1_check(h: Poly, vectors) -> bool:
    """Exact Cauchy-Binet check that det(sum x_i a_i a_i^T) = h."""
    n = h.nvars
    if len(vectors) != n:
        raise DimensionMismatch("need one vector per variable")
    vecs = [[Fraction(x) for x in v] for v in vectors]
    r = len(vecs[0])
    if any(len(v) != r for v in vecs):
        raise DimensionMismatch("vectors must share a common length")
    remaining = dict(h.terms)
    for sub in combinations(range(n), r):
        d = _det([[vecs[c][row] for c in sub] for row in range(r)])
        coeff = d * d
        key = 0
        for c in sub:
            key |= 1 << (_SHIFT * c)
        have = remaining.pop(key, Fraction(0))
        if have != coeff:
            return False
    return not remaining


def _det(a):
    n = len(a)
    a = [row[:] for row in a]
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            for j in range(k, n):
                a[i][j] -= f * a[k][j]
    return det
