"""Search for exactly-negative Rayleigh difference values.

A negative value of some Delta_ij at a real point disproves the half-plane
property.  The search itself is heuristic (integer grids and float descent);
every returned certificate is confirmed by exact rational evaluation, so
nothing downstream ever depends on floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from math import gcd

import numpy as np

from .poly import Poly, abcd_decompose, rayleigh_difference, unpack


@dataclass(frozen=True)
class NegativePointCertificate:
    """Exact rational point with Delta_ij(h)(point) = value < 0; coordinates
    at positions i, j are irrelevant (Delta is free of them) and stored as 0."""

    i: int
    j: int
    point: tuple
    value: Fraction


@dataclass(frozen=True)
class SearchBudget:
    grid_bound: int = 5
    grid_samples: int = 20000
    multistarts: int = 24
    descent_iters: int = 200


def _abcd_masks(h: Poly, i: int, j: int):
    """Support masks and the a/b/c/d bucket of every term of a multiaffine h,
    for fast exact evaluation of Delta_ij = bc - ad at integer points."""
    n = h.nvars
    buckets = {"a": [], "b": [], "c": [], "d": []}
    for key, c in h.terms.items():
        exps = unpack(key, n)
        has_i, has_j = exps[i - 1] > 0, exps[j - 1] > 0
        mask = 0
        for t, e in enumerate(exps):
            if e and t not in (i - 1, j - 1):
                mask |= 1 << t
        name = "a" if has_i and has_j else "b" if has_i else "c" if has_j else "d"
        buckets[name].append((mask, c))
    return buckets


def delta_value(h: Poly, i: int, j: int, point) -> Fraction:
    """Exact Delta_ij(h)(point) through the a,b,c,d split (never expands the
    Delta polynomial)."""
    pt = [Fraction(x) for x in point]
    buckets = _abcd_masks(h, i, j)
    sums = {}
    for name, terms in buckets.items():
        acc = Fraction(0)
        for mask, c in terms:
            v = c
            mm = mask
            while mm:
                t = (mm & -mm).bit_length() - 1
                mm &= mm - 1
                v *= pt[t]
            acc += v
        sums[name] = acc
    return sums["b"] * sums["c"] - sums["a"] * sums["d"]


def _float_arrays(delta: Poly):
    n = delta.nvars
    keys = list(delta.terms)
    exps = np.array([unpack(k, n) for k in keys], dtype=np.int64)
    coeffs = np.array([float(delta.terms[k]) for k in keys])
    return exps, coeffs


def _eval_batch(exps, coeffs, pts):
    # pts: (batch, n); exponents are tiny so the dense power is fine
    return (pts[:, None, :] ** exps[None, :, :]).prod(axis=2) @ coeffs


def _primitive_int_point(x, free, n, scale=1.0):
    """Round a float direction to a primitive integer vector on the free
    coordinates."""
    mx = max(abs(v) for v in x) or 1.0
    ints = [round(v / mx * 100 * scale) for v in x]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    pt = [0] * n
    for t, v in zip(free, ints):
        pt[t] = v
    return tuple(pt)


def search_negative(h: Poly, i: int, j: int, budget: SearchBudget = SearchBudget(), seed: int = 0):
    """Exactly-confirmed negative point of Delta_ij(h), or None (inconclusive).
    Deterministic for a fixed seed: the lexicographically smallest confirmed
    point wins."""
    delta = rayleigh_difference(h, i, j)
    if delta.is_zero():
        return None
    n = h.nvars
    free = sorted({t for k in delta.terms for t, e in enumerate(unpack(k, n)) if e})
    if not free:
        return None
    exps, coeffs = _float_arrays(delta)
    rng = np.random.default_rng(seed)
    candidates = []

    def confirm(pt):
        val = delta_value(h, i, j, pt)
        if val < 0:
            candidates.append((tuple(Fraction(x) for x in pt), val))

    # stage 1: signed integer grid, subsampled
    b = budget.grid_bound
    full = (2 * b + 1) ** len(free)
    if full <= budget.grid_samples:
        from itertools import product

        grid = np.array(list(product(range(-b, b + 1), repeat=len(free))), dtype=float)
    else:
        grid = rng.integers(-b, b + 1, size=(budget.grid_samples, len(free))).astype(float)
    pts = np.zeros((grid.shape[0], n))
    pts[:, free] = grid
    vals = _eval_batch(exps, coeffs, pts)
    order = np.argsort(vals)
    for idx in order[:32]:
        if vals[idx] < 0:
            pt = [0] * n
            for t, v in zip(free, grid[idx]):
                pt[t] = int(v)
            confirm(pt)
    # stage 2: multistart gradient descent (float heuristic only)
    if not candidates:
        grads = [_float_arrays(delta.partial(t + 1)) for t in free]
        for _ in range(budget.multistarts):
            x = rng.standard_normal(len(free)) * b
            for _ in range(budget.descent_iters):
                pts = np.zeros((1, n))
                pts[0, free] = x
                g = np.array([_eval_batch(e, c, pts)[0] for e, c in grads])
                ng = np.linalg.norm(g)
                if ng < 1e-12:
                    break
                step = 1.0
                cur = _eval_batch(exps, coeffs, pts)[0]
                while step > 1e-8:
                    x2 = x - step * g / ng
                    p2 = np.zeros((1, n))
                    p2[0, free] = x2
                    if _eval_batch(exps, coeffs, p2)[0] < cur:
                        x = x2
                        break
                    step /= 2
                else:
                    break
                nx = np.linalg.norm(x)
                if nx > 1e3:  # homogeneous: renormalize the direction
                    x *= 100 / nx
            pts = np.zeros((1, n))
            pts[0, free] = x
            if _eval_batch(exps, coeffs, pts)[0] < 0:
                for scale in (0.25, 0.5, 1.0, 2.0, 4.0):
                    confirm(_primitive_int_point(list(x), free, n, scale))
                if candidates:
                    break
    if not candidates:
        return None
    point, value = min(candidates)
    return NegativePointCertificate(i, j, point, value)


def relabeled_point_negative(m, i: int, j: int, values):
    """Search all ground-set relabelings of the matroid for one under which
    Delta_ij of the relabeled basis polynomial is negative at the given point
    (coordinates, in ascending label order, for the variables other than i
    and j).  Returns (perm, exact negative value) with perm[e-1] = new label
    of element e, or None.

    Under a relabeling sigma the coordinate seen by old element e is
    x_{sigma(e)}, so the scan runs over the old preimage pair {p, q} of
    {i, j} and all assignments of the point values to the other elements."""
    n = m.n
    if len(values) != n - 2:
        raise ValueError("need one coordinate per variable other than i, j")
    new_slots = [lab for lab in range(1, n + 1) if lab not in (i, j)]
    vals = [Fraction(v) for v in values]
    as_int = all(v.denominator == 1 for v in vals)
    vnum = [v.numerator if as_int else v for v in vals]
    bases = list(m.bases)
    for p, q in combinations(range(n), 2):
        pm, qm = 1 << p, 1 << q
        buckets = []  # (bucket id, rest element indices)
        for bm in bases:
            rest = bm & ~pm & ~qm
            elems = []
            mm = rest
            while mm:
                t = (mm & -mm).bit_length() - 1
                mm &= mm - 1
                elems.append(t)
            which = (1 if bm & pm else 0) + (2 if bm & qm else 0)
            buckets.append((which, tuple(elems)))
        others = [t for t in range(n) if t not in (p, q)]
        pos = {t: s for s, t in enumerate(others)}
        for assign in permutations(range(n - 2)):
            coord = [None] * n
            for t in others:
                coord[t] = vnum[assign[pos[t]]]
            a = b = c = d = 0
            for which, elems in buckets:
                v = 1
                for t in elems:
                    v = v * coord[t]
                if which == 3:
                    a += v
                elif which == 1:
                    b += v
                elif which == 2:
                    c += v
                else:
                    d += v
            val = b * c - a * d
            if val < 0:
                perm = [0] * n
                perm[p] = i
                perm[q] = j
                for t in others:
                    perm[t] = new_slots[assign[pos[t]]]
                return tuple(perm), Fraction(val)
    return None


@dataclass(frozen=True)
class OrthantCounterexample:
    i: int
    j: int
    point: tuple
    value: Fraction


def rayleigh_orthant_test(h: Poly, samples: int = 4000, seed: int = 0):
    """Exact counterexample to Delta_ij(h) >= 0 on the closed nonnegative
    orthant, or None (passed on all samples)."""
    n = h.nvars
    rng = np.random.default_rng(seed)
    for i, j in combinations(range(1, n + 1), 2):
        delta = rayleigh_difference(h, i, j)
        if delta.is_zero():
            continue
        exps, coeffs = _float_arrays(delta)
        pts = rng.integers(0, 5, size=(samples, n)).astype(float)
        vals = _eval_batch(exps, coeffs, pts)
        for idx in np.argsort(vals)[:16]:
            if vals[idx] >= 0:
                break
            pt = tuple(int(x) for x in pts[idx])
            val = delta_value(h, i, j, pt)
            if val < 0:
                return OrthantCounterexample(
                    i, j, tuple(Fraction(x) for x in pt), val
                )
    return None


@dataclass(frozen=True)
class CorrelationEstimate:
    """Sampled lower bounds for both orientations of the cross-term ratio;
    `defined` is False when no sample had a nonzero denominator (both bounds
    then read 0)."""

    bc_over_ad: Fraction
    ad_over_bc: Fraction
    defined: bool

    @property
    def exceeds_one(self):
        flags = []
        if self.bc_over_ad > 1:
            flags.append("bc/ad")
        if self.ad_over_bc > 1:
            flags.append("ad/bc")
        return tuple(flags)


def correlation_ratio_estimate(h: Poly, samples: int = 500, seed: int = 0) -> CorrelationEstimate:
    """Exact maxima of bc/ad and ad/bc over sampled nonnegative points (a
    lower bound for the correlation constant in either orientation)."""
    n = h.nvars
    rng = np.random.default_rng(seed)
    best_bc = None
    best_ad = None
    for i, j in combinations(range(1, n + 1), 2):
        a, b, c, d = abcd_decompose(h, i, j)
        pts = rng.integers(1, 6, size=(samples, n))
        for row in pts:
            x = [Fraction(int(v)) for v in row]
            av, bv, cv, dv = (p.evaluate(x) for p in (a, b, c, d))
            ad = av * dv
            bc = bv * cv
            if ad > 0:
                r = bc / ad
                if best_bc is None or r > best_bc:
                    best_bc = r
            if bc > 0:
                r = ad / bc
                if best_ad is None or r > best_ad:
                    best_ad = r
    defined = best_bc is not None or best_ad is not None
    return CorrelationEstimate(
        best_bc if best_bc is not None else Fraction(0),
        best_ad if best_ad is not None else Fraction(0),
        defined,
    )
