"""Exact finite matroids on ground sets {1..n}, n <= 16.

Subsets of the ground set are n-bit masks (element i <-> bit i-1); basis
families are frozensets of such masks.  All operations are pure and the
Matroid object is immutable, so values can be shared freely.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .errors import (
    EmptyBases,
    EmptyGroundSet,
    ExchangeAxiomViolation,
    NotACircuitHyperplane,
    NotAFlat,
    SizeMismatch,
    ZeroMatrix,
)

MAX_GROUND_SET = 16


def mask_of(elements) -> int:
    """Bitmask of an iterable of elements from {1..n}."""
    m = 0
    for e in elements:
        m |= 1 << (e - 1)
    return m


def set_of(mask: int) -> frozenset:
    """Elements of a bitmask."""
    return frozenset(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


def _popcount(x: int) -> int:
    return x.bit_count()


@dataclass(frozen=True)
class MinorWitness:
    """Witness that contracting `contracted` and deleting `deleted` from M,
    then applying `relabeling` (minor element -> remaining element of M),
    yields the target matroid."""

    deleted: frozenset
    contracted: frozenset
    relabeling: tuple  # relabeling[i-1] = element of M playing the minor's role i


@dataclass(frozen=True)
class Matroid:
    n: int
    r: int
    bases: frozenset  # frozenset of n-bit masks, each of popcount r

    # -- constructors ------------------------------------------------------

    @staticmethod
    def _make(n: int, r: int, bases) -> "Matroid":
        """Internal constructor; skips the exchange-axiom check (callers
        guarantee the family is a matroid)."""
        return Matroid(n, r, frozenset(bases))

    def validate(self) -> None:
        """Exhaustively verify the basis exchange axiom; raise on failure."""
        if not self.bases:
            raise EmptyBases("matroid has no bases")
        for b in self.bases:
            if _popcount(b) != self.r:
                raise SizeMismatch(f"basis {sorted(set_of(b))} has size != r={self.r}")
            if b >> self.n:
                raise SizeMismatch("basis uses elements outside the ground set")
        blist = sorted(self.bases)
        bset = self.bases
        for b1 in blist:
            for b2 in blist:
                if b1 == b2:
                    continue
                only1 = b1 & ~b2
                only2 = b2 & ~b1
                x = only1
                while x:
                    xb = x & -x
                    x ^= xb
                    rest = b1 ^ xb
                    y = only2
                    ok = False
                    while y:
                        yb = y & -y
                        y ^= yb
                        if (rest | yb) in bset:
                            ok = True
                            break
                    if not ok:
                        raise ExchangeAxiomViolation(
                            set_of(b1), set_of(b2), next(iter(set_of(xb)))
                        )

    # -- basic structure ---------------------------------------------------

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def basis_sets(self):
        """Bases as sorted tuples of elements, in mask order."""
        return [tuple(sorted(set_of(b))) for b in sorted(self.bases)]

    def nonbases(self) -> frozenset:
        """Dependent r-subsets, as masks."""
        allr = {mask_of(c) for c in combinations(range(1, self.n + 1), self.r)}
        return frozenset(allr - self.bases)

    def rank_mask(self, s: int) -> int:
        return _rank_table(self)[s]

    def rank(self, subset) -> int:
        """Rank of a subset of the ground set."""
        return self.rank_mask(mask_of(subset))

    def is_independent_mask(self, s: int) -> bool:
        return self.rank_mask(s) == _popcount(s)

    def closure_mask(self, s: int) -> int:
        rs = self.rank_mask(s)
        c = s
        for i in range(self.n):
            b = 1 << i
            if not s & b and self.rank_mask(s | b) == rs:
                c |= b
        return c

    def loops(self) -> frozenset:
        union = 0
        for b in self.bases:
            union |= b
        return set_of(self.full_mask & ~union)

    def coloops(self) -> frozenset:
        inter = self.full_mask
        for b in self.bases:
            inter &= b
        return set_of(inter)

    def is_simple(self) -> bool:
        if self.loops():
            return False
        for i, j in combinations(range(self.n), 2):
            if self.rank_mask((1 << i) | (1 << j)) <= 1:
                return False
        return True

    def is_connected(self) -> bool:
        """Connected iff no proper bipartition has additive rank."""
        if self.n <= 1:
            return True
        full = self.full_mask
        # fix element 1 on one side to halve the enumeration
        for s in range(1, 1 << (self.n - 1)):
            sm = (s << 1) | 1
            if sm == full:
                continue
            if self.rank_mask(sm) + self.rank_mask(full & ~sm) == self.r:
                return False
        return True

    # -- minors, duality, sums --------------------------------------------

    def dual(self) -> "Matroid":
        full = self.full_mask
        return Matroid._make(self.n, self.n - self.r, {full & ~b for b in self.bases})

    def _delete_mask_unrelabeled(self, s: int):
        """Bases of M \\ S as masks over the original labels, plus new rank."""
        keep = self.full_mask & ~s
        inter = {b & keep for b in self.bases}
        m = max(_popcount(x) for x in inter)
        return {x for x in inter if _popcount(x) == m}, m

    def delete(self, subset) -> "Matroid":
        s = mask_of(subset)
        keep = self.full_mask & ~s
        if keep == 0:
            raise EmptyGroundSet("cannot delete the entire ground set")
        newb, m = self._delete_mask_unrelabeled(s)
        return Matroid._make(_popcount(keep), m, {_compress(b, keep) for b in newb})

    def contract(self, subset) -> "Matroid":
        s = mask_of(subset)
        if self.full_mask & ~s == 0:
            raise EmptyGroundSet("cannot contract the entire ground set")
        return self.dual().delete(subset).dual()

    def direct_sum(self, other: "Matroid") -> "Matroid":
        n = self.n + other.n
        if n > MAX_GROUND_SET:
            raise SizeMismatch("direct sum exceeds the 16-element cap")
        bases = {
            b1 | (b2 << self.n) for b1 in self.bases for b2 in other.bases
        }
        return Matroid._make(n, self.r + other.r, bases)

    def relax(self, subset) -> "Matroid":
        h = mask_of(subset)
        if (
            _popcount(h) != self.r
            or h in self.bases
            or self.rank_mask(h) != self.r - 1
            or self.closure_mask(h) != h
        ):
            raise NotACircuitHyperplane(
                f"{sorted(set_of(h))} is not a circuit hyperplane"
            )
        return Matroid._make(self.n, self.r, self.bases | {h})

    def free_extension(self) -> "Matroid":
        if self.n + 1 > MAX_GROUND_SET:
            raise SizeMismatch("extension exceeds the 16-element cap")
        new = 1 << self.n
        indep = set()
        for b in self.bases:
            x = b
            while x:
                bit = x & -x
                x ^= bit
                indep.add(b ^ bit)
        bases = set(self.bases) | {i | new for i in indep}
        return Matroid._make(self.n + 1, self.r, bases)

    def free_coextension(self) -> "Matroid":
        return self.dual().free_extension().dual()

    # -- flats and polytope faces ------------------------------------------

    def flats(self):
        """All flats, as frozensets, ordered by (size, mask)."""
        out = [
            s
            for s in range(1 << self.n)
            if self.closure_mask(s) == s
        ]
        out.sort(key=lambda s: (_popcount(s), s))
        return [set_of(s) for s in out]

    def polytope_face_matroid(self, flat) -> "Matroid":
        """The matroid M|S (+) M/S of the polytope face sum_{i in S} x_i = rk(S),
        kept on the original labeled ground set."""
        s = mask_of(flat)
        if self.closure_mask(s) != s:
            raise NotAFlat(f"{sorted(set_of(s))} is not a flat")
        # restriction to S: bases of M \ (E-S), unrelabeled
        rest, _ = self._delete_mask_unrelabeled(self.full_mask & ~s)
        # contraction by S, unrelabeled: I with rk(I|S)=r, |I| = r - rk(S)
        rs = self.rank_mask(s)
        keep = self.full_mask & ~s
        con = set()
        for c in combinations([i + 1 for i in range(self.n) if keep >> i & 1],
                              self.r - rs):
            cm = mask_of(c)
            if self.rank_mask(cm | s) == self.r and self.rank_mask(cm) == self.r - rs:
                con.add(cm)
        bases = {a | b for a in rest for b in con}
        return Matroid._make(self.n, self.r, bases)

    # -- structural predicates ----------------------------------------------

    def is_sparse_paving(self) -> bool:
        for h in self.nonbases():
            if self.rank_mask(h) != self.r - 1 or self.closure_mask(h) != h:
                return False
        return True

    def vamos_like_witness(self):
        """Disjoint 2-sets P1..P4 and an (r-4)-set K with K u Pi u Pj dependent
        for the five pairs (i,j) != (3,4) and K u P3 u P4 a basis; None if no
        such witness exists."""
        if self.r < 4 or not self.is_sparse_paving():
            return None
        nonb = sorted(self.nonbases())
        nonbset = set(nonb)

        def pair_splits(mask):
            els = sorted(set_of(mask))
            out = []
            for c in combinations(els, 2):
                p = mask_of(c)
                out.append((p, mask & ~p))
            return out

        elements = list(range(1, self.n + 1))
        for kset in combinations(elements, self.r - 4):
            k = mask_of(kset)
            # P1 u P2 comes from a nonbasis containing K
            for nb in nonb:
                if nb & k != k:
                    continue
                rest = nb & ~k
                if _popcount(rest) != 4:
                    continue
                for p1, p2 in pair_splits(rest):
                    # candidates for P3: pairs q with K u P1 u q and K u P2 u q nonbases
                    used = k | p1 | p2
                    cands = []
                    for c in combinations(
                        [e for e in elements if not used >> (e - 1) & 1], 2
                    ):
                        q = mask_of(c)
                        if (k | p1 | q) in nonbset and (k | p2 | q) in nonbset:
                            cands.append(q)
                    for i3 in range(len(cands)):
                        for i4 in range(len(cands)):
                            if i3 == i4:
                                continue
                            p3, p4 = cands[i3], cands[i4]
                            if p3 & p4:
                                continue
                            if (k | p3 | p4) in self.bases:
                                return (
                                    set_of(p1),
                                    set_of(p2),
                                    set_of(p3),
                                    set_of(p4),
                                    set_of(k),
                                )
        return None


def _compress(mask: int, keep: int) -> int:
    """Drop the bits outside `keep` and pack the remaining ones densely."""
    out = 0
    pos = 0
    k = keep
    while k:
        bit = k & -k
        k ^= bit
        if mask & bit:
            out |= 1 << pos
        pos += 1
    return out


@lru_cache(maxsize=4096)
def _rank_table(m: Matroid):
    """rank of every subset mask; memoized per matroid."""
    size = 1 << m.n
    table = [0] * size
    bases = sorted(m.bases)
    for s in range(size):
        best = 0
        for b in bases:
            c = _popcount(b & s)
            if c > best:
                best = c
                if best == m.r:
                    break
        table[s] = best
    return table


# -- construction ------------------------------------------------------------


def from_bases(n: int, r: int, bases) -> Matroid:
    """Build and exhaustively validate a matroid from its basis family."""
    if n < 1 or n > MAX_GROUND_SET:
        raise SizeMismatch(f"ground set size {n} outside 1..{MAX_GROUND_SET}")
    masks = set()
    for b in bases:
        bm = b if isinstance(b, int) else mask_of(b)
        masks.add(bm)
    if not masks:
        raise EmptyBases("matroid has no bases")
    m = Matroid(n, r, frozenset(masks))
    m.validate()
    return m


def from_matrix(columns, p=None) -> Matroid:
    """Matroid of the column vectors, over Q (exact rationals) or GF(p)."""
    n = len(columns)
    if n == 0 or n > MAX_GROUND_SET:
        raise SizeMismatch(f"{n} columns outside 1..{MAX_GROUND_SET}")
    d = len(columns[0])
    if p is None:
        cols = [[Fraction(x) for x in c] for c in columns]
        if all(all(x == 0 for x in c) for c in cols):
            raise ZeroMatrix("all columns are zero")
        r = _rank_q(cols, d)
        bases = set()
        for c in combinations(range(n), r):
            if _det_q([cols[i] for i in c], r) != 0:
                bases.add(sum(1 << i for i in c))
    else:
        cols = [[x % p for x in c] for c in columns]
        if all(all(x == 0 for x in c) for c in cols):
            raise ZeroMatrix("all columns are zero")
        r = _rank_gf(cols, d, p)
        bases = set()
        for c in combinations(range(n), r):
            if _det_gf([cols[i] for i in c], r, p) != 0:
                bases.add(sum(1 << i for i in c))
    return Matroid._make(n, r, bases)


def _rank_q(cols, d):
    rows = [[cols[j][i] for j in range(len(cols))] for i in range(d)]
    return _row_reduce_rank(rows, lambda x: x == 0, lambda a, b: a / b)


def _rank_gf(cols, d, p):
    rows = [[cols[j][i] % p for j in range(len(cols))] for i in range(d)]
    return _row_reduce_rank(
        rows, lambda x: x % p == 0, lambda a, b: (a * pow(b, -1, p)) % p, p
    )


def _row_reduce_rank(rows, is_zero, div, p=None):
    rank = 0
    ncols = len(rows[0]) if rows else 0
    col = 0
    while rank < len(rows) and col < ncols:
        piv = next((i for i in range(rank, len(rows)) if not is_zero(rows[i][col])), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pr = rows[rank]
        for i in range(rank + 1, len(rows)):
            if not is_zero(rows[i][col]):
                f = div(rows[i][col], pr[col])
                for j in range(col, ncols):
                    rows[i][j] = rows[i][j] - f * pr[j]
                    if p is not None:
                        rows[i][j] %= p
        rank += 1
        col += 1
    return rank


def _det_q(cols, r):
    a = [[cols[j][i] for j in range(r)] for i in range(r)]
    det = Fraction(1)
    for k in range(r):
        piv = next((i for i in range(k, r) if a[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, r):
            f = a[i][k] / a[k][k]
            for j in range(k, r):
                a[i][j] -= f * a[k][j]
    return det


def _det_gf(cols, r, p):
    a = [[cols[j][i] % p for j in range(r)] for i in range(r)]
    det = 1
    for k in range(r):
        piv = next((i for i in range(k, r) if a[i][k] % p), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det = det * a[k][k] % p
        inv = pow(a[k][k], -1, p)
        for i in range(k + 1, r):
            f = a[i][k] * inv % p
            for j in range(k, r):
                a[i][j] = (a[i][j] - f * a[k][j]) % p
    return det % p


def uniform(r: int, n: int) -> Matroid:
    return Matroid._make(
        n, r, {mask_of(c) for c in combinations(range(1, n + 1), r)}
    )


# -- isomorphism and canonical labeling ---------------------------------------


def relabel(m: Matroid, perm) -> Matroid:
    """Apply a permutation (perm[i-1] = new label of element i)."""
    table = list(perm)
    bases = set()
    for b in m.bases:
        nb = 0
        x = b
        while x:
            i = (x & -x).bit_length() - 1
            x &= x - 1
            nb |= 1 << (table[i] - 1)
        bases.add(nb)
    return Matroid._make(m.n, m.r, bases)


def _decided_cmp(d1, d2, nonbasis_mode):
    """Compare two decided-family mask lists; -1 if the first labeling yields
    the lexicographically smaller basis family."""
    i = j = 0
    while i < len(d1) and j < len(d2):
        if d1[i] == d2[j]:
            i += 1
            j += 1
        elif d1[i] < d2[j]:
            return 1 if nonbasis_mode else -1
        else:
            return -1 if nonbasis_mode else 1
    if i < len(d1):
        return 1 if nonbasis_mode else -1
    if j < len(d2):
        return -1 if nonbasis_mode else 1
    return 0


@lru_cache(maxsize=4096)
def canonical_labeling(m: Matroid):
    """(perm, canonical matroid): perm[k-1] is the original element that
    receives new label k; the canonical basis family is the lexicographically
    smallest (as a sorted mask tuple) over all relabelings."""
    bases = sorted(m.bases)
    nonb = sorted(m.nonbases())
    nonbasis_mode = len(nonb) < len(bases)
    family = nonb if nonbasis_mode else bases
    # state: (prefix, used_mask, partials[(newmask, remaining)], decided list)
    init = ((), 0, tuple((0, _popcount(f)) for f in family), ())
    cands = {(0, init[2]): init}
    for level in range(1, m.n + 1):
        bit = 1 << (level - 1)
        best = None
        nxt = {}
        for prefix, used, partials, decided in cands.values():
            for e in range(1, m.n + 1):
                eb = 1 << (e - 1)
                if used & eb:
                    continue
                newpart = []
                newly = []
                for idx, (pm, rem) in enumerate(partials):
                    if family[idx] & eb:
                        pm |= bit
                        rem -= 1
                        if rem == 0:
                            newly.append(pm)
                    newpart.append((pm, rem))
                dec = decided + tuple(sorted(newly))
                if best is not None:
                    c = _decided_cmp(dec, best, nonbasis_mode)
                    if c > 0:
                        continue
                    if c < 0:
                        nxt = {}
                best = dec
                key = (used | eb, tuple(newpart))
                cand = (prefix + (e,), used | eb, tuple(newpart), dec)
                old = nxt.get(key)
                if old is None or cand[0] < old[0]:
                    nxt[key] = cand
        cands = nxt
    prefix, _, _, decided = min(cands.values())
    if nonbasis_mode:
        allr = sorted(
            mask_of(c) for c in combinations(range(1, m.n + 1), m.r)
        )
        decset = set(decided)
        fam = frozenset(x for x in allr if x not in decset)
    else:
        fam = frozenset(decided)
    # perm in relabel() convention: position of element i in prefix
    perm = [0] * m.n
    for k, e in enumerate(prefix, start=1):
        perm[e - 1] = k
    return tuple(perm), Matroid._make(m.n, m.r, fam)


def canonical_form(m: Matroid) -> Matroid:
    return canonical_labeling(m)[1]


def _invariant(m: Matroid):
    degs = sorted(
        sum(1 for b in m.bases if b >> (i - 1) & 1) for i in range(1, m.n + 1)
    )
    return (m.n, m.r, len(m.bases), tuple(degs))


def find_isomorphism(m1: Matroid, m2: Matroid):
    """Permutation mapping m1 onto m2 (sigma[i-1] = image of element i),
    or None."""
    if _invariant(m1) != _invariant(m2):
        return None
    p1, c1 = canonical_labeling(m1)
    p2, c2 = canonical_labeling(m2)
    if c1.bases != c2.bases:
        return None
    inv2 = [0] * m2.n
    for i, k in enumerate(p2, start=1):
        inv2[k - 1] = i
    return tuple(inv2[p1[i] - 1] for i in range(m1.n))


def is_isomorphic(m1: Matroid, m2: Matroid) -> bool:
    return find_isomorphism(m1, m2) is not None


# -- minor containment --------------------------------------------------------


def has_minor(m: Matroid, target: Matroid):
    """A MinorWitness with m / contracted \\ deleted isomorphic to target,
    or None."""
    if target.n > m.n or target.r > m.r or m.n - m.r < target.n - target.r:
        return None
    ncon = m.r - target.r
    ndel = m.n - target.n - ncon
    if ndel < 0:
        return None
    tinv = _invariant(target)
    # contraction sets among independent sets (standard reduction)
    indep = sorted(
        {mask_of(c) for b in m.bases for c in combinations(sorted(set_of(b)), ncon)}
    ) if ncon else [0]
    elements = list(range(1, m.n + 1))
    for cm in indep:
        avail = [e for e in elements if not cm >> (e - 1) & 1]
        contracted = m.contract(set_of(cm)) if cm else m
        for dset in combinations(avail, ndel):
            dm = mask_of(dset)
            minor = (
                contracted.delete(_compress_elements(dm, m.full_mask & ~cm))
                if dm
                else contracted
            )
            if minor.r != target.r:
                continue
            if _invariant(minor) != tinv:
                continue
            sigma = find_isomorphism(target, minor)
            if sigma is not None:
                remaining = sorted(set_of(m.full_mask & ~cm & ~dm))
                relab = tuple(remaining[sigma[i] - 1] for i in range(target.n))
                return MinorWitness(set_of(dm), set_of(cm), relab)
    return None


def _compress_elements(mask: int, keep: int):
    """Elements of `mask` in the relabeled ground set induced by `keep`."""
    out = []
    pos = 0
    k = keep
    while k:
        bit = k & -k
        k ^= bit
        pos += 1
        if mask & bit:
            out.append(pos)
    return out


# -- Ingleton -----------------------------------------------------------------


def ingleton_check(m: Matroid, p1, p2, p3, p4):
    """(lhs, rhs, holds) for the Ingleton inequality on four subsets."""
    a, b, c, d = (mask_of(p) for p in (p1, p2, p3, p4))
    rk = m.rank_mask
    lhs = rk(a | b) + rk(a | c) + rk(a | d) + rk(b | c) + rk(b | d)
    rhs = rk(a) + rk(b) + rk(a | b | c) + rk(a | b | d) + rk(c | d)
    return lhs, rhs, lhs >= rhs


def ingleton_search(m: Matroid, max_size: int = 2):
    """First violating quadruple of pairwise disjoint nonempty subsets of
    size <= max_size (exploiting the P1<->P2 and P3<->P4 symmetries), or
    None."""
    subs = []
    elements = list(range(1, m.n + 1))
    for k in range(1, max_size + 1):
        subs.extend(mask_of(c) for c in combinations(elements, k))
    subs.sort()
    rk = m.rank_mask
    ns = len(subs)
    for i1 in range(ns):
        a = subs[i1]
        for i2 in range(i1 + 1, ns):
            b = subs[i2]
            if a & b:
                continue
            rab = rk(a | b)
            base = rk(a) + rk(b)
            for i3 in range(ns):
                c = subs[i3]
                if c & (a | b):
                    continue
                for i4 in range(i3 + 1, ns):
                    d = subs[i4]
                    if d & (a | b | c):
                        continue
                    lhs = rab + rk(a | c) + rk(a | d) + rk(b | c) + rk(b | d)
                    rhs = base + rk(a | b | c) + rk(a | b | d) + rk(c | d)
                    if lhs < rhs:
                        return (set_of(a), set_of(b), set_of(c), set_of(d))
    return None
