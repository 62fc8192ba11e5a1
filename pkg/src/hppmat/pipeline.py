"""Classification driver: per-matroid half-plane-property verdicts with
machine-checkable certificates.

Stage order per matroid: structural reductions, excluded-minor scan,
recursive verification that every proper minor has the property (the
precondition of the one-pair sufficiency criterion), exact SOS certification
of a Rayleigh difference, {0,1}-direction hyperbolicity sampling, and
negative-point search.  Verdicts keep the honest buckets CANDIDATE_HPP
(numeric-only SOS evidence) and UNDETECTED (everything inconclusive).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from . import catalog as _catalog
from .matroid import Matroid, canonical_form, has_minor
from .negsearch import SearchBudget, search_negative
from .poly import basis_polynomial, rayleigh_difference
from .realroot import hyperbolicity_sample_test
from .sos import certify_sos, dual_psd_certificate, gram_system

HPP = "HPP"
NOT_HPP = "NOT_HPP"
CANDIDATE_HPP = "CANDIDATE_HPP"
UNDETECTED = "UNDETECTED"


@dataclass(frozen=True)
class ForbiddenMinorWitness:
    """M has a minor isomorphic to a known non-HPP matroid."""

    forbidden_name: str
    deleted: tuple
    contracted: tuple
    relabeling: tuple


@dataclass(frozen=True)
class Verdict:
    status: str
    stage: str  # which test decided
    certificates: tuple = ()
    reason: str = ""


@dataclass
class PipelineConfig:
    forbidden: tuple = None  # (name, Matroid) pairs; None = classical defaults
    sos_tol: float = 1e-9
    sos_max_pairs: int = None  # None = all pairs
    negative_budget: SearchBudget = field(default_factory=SearchBudget)
    seed: int = 0


def default_forbidden():
    """Classical minor-minimal non-HPP matroids: the Fano relaxation family
    and the extended M(K4), with duals (the property is closed under
    duality, so dual obstructions obstruct too)."""
    names = ["F7", "F7-", "F7--", "F7-3", "MK4+e"]
    out = []
    for name in names:
        m = _catalog.builtin(name).matroid
        out.append((name, m))
        out.append((name + "*", m.dual()))
    return tuple(out)


def constructible_forbidden():
    """The full constructible list of rank-4 minor-minimal non-HPP matroids
    on 8 elements, plus the classical ones."""
    out = list(default_forbidden())
    for name in ("P8", "P8'", "P8''", "P8'''", "CoExtP7", "M548", "M431"):
        out.append((name, _catalog.builtin(name).matroid))
    out.append(("M431*", _catalog.builtin("M431").matroid.dual()))
    return tuple(out)


class Classifier:
    """Memoized classifier; verdicts are shared across minors and entries,
    keyed by canonical form."""

    def __init__(self, config: PipelineConfig = None):
        self.config = config or PipelineConfig()
        if self.config.forbidden is None:
            self.config.forbidden = default_forbidden()
        self._memo = {}

    # -- public entry points ------------------------------------------------

    def classify(self, m: Matroid) -> Verdict:
        key = canonical_form(m)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        verdict = self._classify(key)
        self._memo[key] = verdict
        return verdict

    def sos_rayleigh_status(self, m: Matroid):
        """('SOS_RAYLEIGH' | 'NOT_SOS_RAYLEIGH' | 'INCONCLUSIVE', per-pair
        detail dict keyed by (i, j))."""
        h = basis_polynomial(m)
        detail = {}
        all_exact = True
        found_dual = False
        for i, j in combinations(range(1, m.n + 1), 2):
            delta = rayleigh_difference(h, i, j)
            if delta.is_zero():
                detail[(i, j)] = ("zero", None)
                continue
            status, payload = certify_sos(delta, i, j, tol=self.config.sos_tol)
            if status == "sos":
                detail[(i, j)] = ("sos", payload)
                continue
            all_exact = False
            dual = dual_psd_certificate(
                gram_system(delta, i, j), seed=self.config.seed
            )
            if dual is not None:
                detail[(i, j)] = ("not_sos", dual)
                found_dual = True
            else:
                detail[(i, j)] = ("inconclusive", payload)
        if all_exact:
            return "SOS_RAYLEIGH", detail
        if found_dual:
            return "NOT_SOS_RAYLEIGH", detail
        return "INCONCLUSIVE", detail

    # -- stages ---------------------------------------------------------------

    def _classify(self, m: Matroid) -> Verdict:
        # stage 0: structural reductions
        loops = m.loops()
        if loops:
            return self.classify(m.delete(loops))
        if not m.is_simple():
            core = _simplify(m)
            if core.n < m.n:
                return _restamp(self.classify(core), "reduce")
        if not m.is_connected() and m.n > 1:
            comps = _components(m)
            verdicts = [self.classify(c) for c in comps]
            worst = _combine(verdicts)
            return _restamp(worst, "reduce")
        if m.r <= 2 or m.n - m.r <= 2:
            return Verdict(HPP, "reduce", reason="rank or corank at most 2")
        if 2 * m.r > m.n:
            return _restamp(self.classify(m.dual()), "reduce")
        # stage 1: excluded minors
        for name, f in self.config.forbidden:
            w = has_minor(m, f)
            if w is not None:
                cert = ForbiddenMinorWitness(
                    name, w.deleted, w.contracted, w.relabeling
                )
                return Verdict(NOT_HPP, "excluded-minor", (cert,))
        # stage 2: all proper single-element minors
        minors_ok = True
        unverified = []
        for e in range(1, m.n + 1):
            for child in (m.delete({e}), m.contract({e})):
                v = self.classify(child)
                if v.status == NOT_HPP:
                    return Verdict(
                        NOT_HPP,
                        "minor",
                        v.certificates,
                        reason=f"single-element minor is not HPP",
                    )
                if v.status != HPP:
                    minors_ok = False
                    unverified.append(v.status)
        # stage 3: SOS certification of one Rayleigh difference
        h = basis_polynomial(m)
        numeric_only = False
        if minors_ok:
            pairs = _pairs_by_support(h, m.n)
            if self.config.sos_max_pairs is not None:
                pairs = pairs[: self.config.sos_max_pairs]
            for i, j, delta in pairs:
                status, payload = certify_sos(delta, i, j, tol=self.config.sos_tol)
                if status == "sos":
                    return Verdict(HPP, "sos", (payload,))
                if status == "numeric":
                    numeric_only = True
        # stage 4: hyperbolicity sampling on {0,1} directions
        witness = hyperbolicity_sample_test(h, require_lead_nonzero=False)
        if witness is not None:
            return Verdict(NOT_HPP, "hyperbolicity", (witness,))
        # stage 5: negative-point search
        for i, j in combinations(range(1, m.n + 1), 2):
            cert = search_negative(
                h, i, j, budget=self.config.negative_budget, seed=self.config.seed
            )
            if cert is not None:
                return Verdict(NOT_HPP, "negative-point", (cert,))
        # stage 6: honesty buckets
        if numeric_only:
            return Verdict(
                CANDIDATE_HPP, "sos", reason="numeric SOS evidence only"
            )
        if not minors_ok:
            return Verdict(
                UNDETECTED,
                "minor",
                reason="a proper minor is " + "/".join(sorted(set(unverified))),
            )
        return Verdict(UNDETECTED, "exhausted")


def _pairs_by_support(h, n):
    out = []
    for i, j in combinations(range(1, n + 1), 2):
        delta = rayleigh_difference(h, i, j)
        if delta.is_zero():
            continue
        out.append((i, j, delta))
    out.sort(key=lambda t: (len(t[2].terms), t[0], t[1]))
    return out


def _restamp(v: Verdict, stage: str) -> Verdict:
    return Verdict(v.status, stage, v.certificates, v.reason or v.stage)


def _combine(verdicts):
    order = {NOT_HPP: 0, UNDETECTED: 1, CANDIDATE_HPP: 2, HPP: 3}
    worst = min(verdicts, key=lambda v: order[v.status])
    if worst.status == HPP:
        return Verdict(HPP, "reduce", reason="all direct summands HPP")
    return worst


def _is_uniform(m: Matroid) -> bool:
    from math import comb

    return len(m.bases) == comb(m.n, m.r)


def _simplify(m: Matroid) -> Matroid:
    """Delete all but one element of every parallel class (HPP is preserved
    both ways by parallel extension)."""
    seen = {}
    drop = set()
    for e in range(1, m.n + 1):
        cl = m.closure_mask(1 << (e - 1))
        if cl in seen:
            drop.add(e)
        else:
            seen[cl] = e
    return m.delete(drop) if drop else m


def _components(m: Matroid):
    """Connected components as minors (restrictions) of m."""
    n = m.n
    remaining = set(range(1, n + 1))
    comps = []
    while remaining:
        e = min(remaining)
        comp = {e}
        changed = True
        while changed:
            changed = False
            for f in list(remaining - comp):
                sub = comp | {f}
                mask = 0
                for x in sub:
                    mask |= 1 << (x - 1)
                rest = ((1 << n) - 1) & ~mask
                if m.rank_mask(mask) + m.rank_mask(rest) != m.r:
                    comp.add(f)
                    changed = True
        comps.append(comp)
        remaining -= comp
    out = []
    for comp in comps:
        out.append(m.delete(set(range(1, n + 1)) - comp))
    return out


# -- catalog-level driver ------------------------------------------------------


@dataclass(frozen=True)
class Report:
    counts: dict
    verdicts: tuple  # (name, Verdict) in entry order


def classify_catalog(entries, config: PipelineConfig = None) -> Report:
    clf = Classifier(config)
    verdicts = []
    counts = {HPP: 0, NOT_HPP: 0, CANDIDATE_HPP: 0, UNDETECTED: 0}
    for entry in entries:
        v = clf.classify(entry.matroid)
        counts[v.status] += 1
        verdicts.append((entry.name, v))
    return Report(counts, tuple(verdicts))


def classify_one(m: Matroid, forbidden=None, config: PipelineConfig = None) -> Verdict:
    cfg = config or PipelineConfig()
    if forbidden is not None:
        cfg.forbidden = tuple(forbidden)
    return Classifier(cfg).classify(m)


def sos_rayleigh_status(m: Matroid, config: PipelineConfig = None):
    return Classifier(config).sos_rayleigh_status(m)
