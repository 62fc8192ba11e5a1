"""Exact univariate real-rootedness (Sturm chains) and the {0,1}-direction
hyperbolicity sampling test.

Every decision here is a disproof certificate, so nothing is ever decided by
floating-point root finding: square-free deflation + Sturm sign variations,
with exact integer discriminant shortcuts for degrees 2-4.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import DimensionMismatch, ZeroPolynomial
from .poly import Poly, unpack


class UniPoly:
    """Dense univariate polynomial over Q, constant term first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({list(self.coeffs)})"

    def evaluate(self, t):
        t = Fraction(t)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def derivative(self) -> "UniPoly":
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        if self.is_zero() or other.is_zero():
            return UniPoly([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    def divmod(self, other: "UniPoly"):
        if other.is_zero():
            raise ZeroPolynomial("division by the zero polynomial")
        rem = list(self.coeffs)
        quo = [Fraction(0)] * max(0, len(rem) - len(other.coeffs) + 1)
        d = other.degree()
        lead = other.coeffs[-1]
        while len(rem) - 1 >= d and any(c != 0 for c in rem):
            shift = len(rem) - 1 - d
            f = rem[-1] / lead
            quo[shift] = f
            for i, c in enumerate(other.coeffs):
                rem[shift + i] -= f * c
            while rem and rem[-1] == 0:
                rem.pop()
        return UniPoly(quo), UniPoly(rem)


def gcd(p: UniPoly, q: UniPoly) -> UniPoly:
    while not q.is_zero():
        p, q = q, p.divmod(q)[1]
    if p.is_zero():
        return p
    return UniPoly([c / p.coeffs[-1] for c in p.coeffs])


def _sign_variations(signs):
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a * b < 0)


def sturm_real_root_count(p: UniPoly) -> int:
    """Number of distinct real roots, via sign variations at -inf and +inf."""
    if p.is_zero():
        raise ZeroPolynomial("zero polynomial has no well-defined root count")
    if p.degree() == 0:
        return 0
    chain = [p, p.derivative()]
    while not chain[-1].is_zero() and chain[-1].degree() > 0:
        rem = chain[-2].divmod(chain[-1])[1]
        chain.append(UniPoly([-c for c in rem.coeffs]))
    if chain[-1].is_zero():
        chain.pop()
    at_plus = []
    at_minus = []
    for q in chain:
        lead = q.coeffs[-1]
        s = 1 if lead > 0 else -1
        at_plus.append(s)
        at_minus.append(s if q.degree() % 2 == 0 else -s)
    return _sign_variations(at_minus) - _sign_variations(at_plus)


def is_real_rooted(p: UniPoly) -> bool:
    """All roots real, counted with multiplicity: the square-free part must
    have as many distinct real roots as its degree."""
    if p.is_zero():
        raise ZeroPolynomial("zero polynomial")
    if p.degree() <= 1:
        return True
    q = p.divmod(gcd(p, p.derivative()))[0]
    return sturm_real_root_count(q) == q.degree()


def restrict_line(h: Poly, e, v) -> UniPoly:
    """Exact coefficients of t -> h(e*t - v)."""
    n = h.nvars
    if len(e) != n or len(v) != n:
        raise DimensionMismatch("direction/offset length != nvars")
    if h.is_zero():
        raise ZeroPolynomial("cannot restrict the zero polynomial")
    ef = [Fraction(x) for x in e]
    vf = [Fraction(x) for x in v]
    total = {}
    for key, c in h.terms.items():
        prod = [c]
        for i, exp in enumerate(unpack(key, n)):
            for _ in range(exp):
                # multiply by (e_i t - v_i)
                nxt = [Fraction(0)] * (len(prod) + 1)
                for d, a in enumerate(prod):
                    nxt[d] -= a * vf[i]
                    nxt[d + 1] += a * ef[i]
                prod = nxt
        for d, a in enumerate(prod):
            total[d] = total.get(d, Fraction(0)) + a
    out = [Fraction(0)] * (max(total) + 1 if total else 0)
    for d, a in total.items():
        out[d] = a
    return UniPoly(out)


# -- integer fast path for all-real-roots decisions ---------------------------


def _int_all_real(coeffs) -> bool:
    """All roots real (with multiplicity) for an integer coefficient list,
    constant first, nonzero."""
    while coeffs and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    # strip t^k factors: real roots at 0
    z = 0
    while z < len(coeffs) and coeffs[z] == 0:
        z += 1
    coeffs = coeffs[z:]
    d = len(coeffs) - 1
    if d <= 1:
        return True
    if d == 2:
        c0, c1, c2 = coeffs
        return c1 * c1 - 4 * c0 * c2 >= 0
    if d == 3:
        dd, c, b, a = coeffs  # a t^3 + b t^2 + c t + d
        disc = (
            18 * a * b * c * dd
            - 4 * b**3 * dd
            + b * b * c * c
            - 4 * a * c**3
            - 27 * a * a * dd * dd
        )
        return disc >= 0
    if d == 4:
        ee, dd, c, b, a = coeffs  # a t^4 + b t^3 + c t^2 + d t + e
        disc = (
            256 * a**3 * ee**3
            - 192 * a * a * b * dd * ee * ee
            - 128 * a * a * c * c * ee * ee
            + 144 * a * a * c * dd * dd * ee
            - 27 * a * a * dd**4
            + 144 * a * b * b * c * ee * ee
            - 6 * a * b * b * dd * dd * ee
            - 80 * a * b * c * c * dd * ee
            + 18 * a * b * c * dd**3
            + 16 * a * c**4 * ee
            - 4 * a * c**3 * dd * dd
            - 27 * b**4 * ee * ee
            + 18 * b**3 * c * dd * ee
            - 4 * b**3 * dd**3
            - 4 * b * b * c**3 * ee
            + b * b * c * c * dd * dd
        )
        if disc != 0:
            p = 8 * a * c - 3 * b * b
            dq = (
                64 * a**3 * ee
                - 16 * a * a * c * c
                + 16 * a * b * b * c
                - 16 * a * a * b * dd
                - 3 * b**4
            )
            return disc > 0 and p <= 0 and dq <= 0
        # repeated roots: fall through to the exact generic test
    return is_real_rooted(UniPoly(coeffs))


@dataclass(frozen=True)
class NonRealWitness:
    """A pair (e, v) in {0,1}^n x {0,1}^n with h(e*t - v) not real-rooted;
    disproves the half-plane property of h."""

    e: tuple
    v: tuple
    degree: int
    real_root_count: int


def _pair_poly_coeffs(bases_masks, r, e: int, v: int):
    """Integer coefficients of sum over bases of prod_{i in B} (e_i t - v_i)
    for 0/1 masks e, v.  Each factor is t, (t-1), -1 or 0, so a basis only
    contributes t^a (t-1)^b (-1)^c with a+b+c = r."""
    ev = e | v
    sig = {}
    for b in bases_masks:
        if b & ev != b:
            continue
        t1 = b & e
        bb = (t1 & v).bit_count()
        a = t1.bit_count() - bb
        cc = (b & v & ~e).bit_count()
        key = (a, bb)
        sig[key] = sig.get(key, 0) + (1 if cc % 2 == 0 else -1)
    coeffs = [0] * (r + 1)
    for (a, bb), cnt in sig.items():
        if cnt == 0:
            continue
        for k in range(bb + 1):
            coeffs[a + k] += cnt * comb(bb, k) * (-1) ** (bb - k)
    return coeffs


def _iter_pairs(h: Poly, require_lead_nonzero: bool):
    n = h.nvars
    bases_masks = []
    for key in h.terms:
        m = 0
        exps = unpack(key, n)
        for i, ee in enumerate(exps):
            if ee:
                m |= 1 << i
        bases_masks.append(m)
    for e in range(1 << n):
        lead = any(b & e == b for b in bases_masks)
        if require_lead_nonzero:
            if not lead:
                continue
        elif e == 0:
            continue
        for v in range(1 << n):
            yield e, v, bases_masks


def hyperbolicity_sample_test(h: Poly, pairs=None, require_lead_nonzero=True):
    """First witness pair for which the line restriction is not real-rooted,
    or None (pass).  `pairs` may supply explicit (e, v) 0/1 vectors."""
    n = h.nvars
    r = h.degree()
    if pairs is not None:
        for e, v in pairs:
            em = sum(1 << i for i, x in enumerate(e) if x)
            vm = sum(1 << i for i, x in enumerate(v) if x)
            bases_masks = []
            for key in h.terms:
                m = 0
                for i, ee in enumerate(unpack(key, n)):
                    if ee:
                        m |= 1 << i
                bases_masks.append(m)
            coeffs = _pair_poly_coeffs(bases_masks, r, em, vm)
            if any(coeffs) and not _int_all_real(list(coeffs)):
                p = UniPoly(coeffs)
                q = p.divmod(gcd(p, p.derivative()))[0]
                yield_w = NonRealWitness(
                    tuple(e), tuple(v), p.degree(), sturm_real_root_count(q)
                )
                return yield_w
        return None
    for e, v, bases_masks in _iter_pairs(h, require_lead_nonzero):
        coeffs = _pair_poly_coeffs(bases_masks, r, e, v)
        if any(coeffs) and not _int_all_real(list(coeffs)):
            p = UniPoly(coeffs)
            q = p.divmod(gcd(p, p.derivative()))[0]
            return NonRealWitness(
                tuple(e >> i & 1 for i in range(n)),
                tuple(v >> i & 1 for i in range(n)),
                p.degree(),
                sturm_real_root_count(q),
            )
    return None


def count_failing_pairs(h: Poly, require_lead_nonzero=True) -> int:
    """Number of (e, v) pairs in {0,1}^n x {0,1}^n whose line restriction has
    a non-real root.  Default convention: e with h(e) != 0, v unrestricted;
    the flag switches to e != 0 only (calibration against published counts)."""
    r = h.degree()
    count = 0
    for e, v, bases_masks in _iter_pairs(h, require_lead_nonzero):
        coeffs = _pair_poly_coeffs(bases_masks, r, e, v)
        if any(coeffs) and not _int_all_real(list(coeffs)):
            count += 1
    return count
