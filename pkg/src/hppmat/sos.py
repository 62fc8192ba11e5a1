"""SOS certification of Rayleigh differences.

Numeric feasibility is decided by alternating projections between the PSD
cone and the affine Gram subspace (plus a supergradient ascent on the
smallest eigenvalue); the product of the module is always an exact rational
object re-verified with a pivoted LDL factorization over Q.  Infeasibility
is certified through the positive-definite trace-orthogonal dual matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .errors import NotRepresentable
from .poly import Poly, pack

_SHIFT = 4


def monomial_basis(delta: Poly, i: int, j: int):
    """Candidate square basis: all multiaffine monomials of degree d/2 in the
    variables other than i and j (per-variable degree bounds rule out
    anything else)."""
    d = delta.degree()
    if d < 0:
        return []
    if d % 2:
        raise NotRepresentable("odd degree target cannot be a sum of squares")
    half = d // 2
    variables = [v for v in range(1, delta.nvars + 1) if v not in (i, j)]
    keys = []
    for c in combinations(variables, half):
        exps = [0] * delta.nvars
        for v in c:
            exps[v - 1] = 1
        keys.append(pack(exps))
    return keys


@dataclass(frozen=True)
class GramSystem:
    """Monomial basis, particular Gram matrix G0 with m^T G0 m = target, and a
    basis G1..Gk of the symmetric matrices representing zero."""

    nvars: int
    i: int
    j: int
    monomials: tuple  # packed exponent keys
    g0: tuple  # rational symmetric matrix, rows of tuples
    kernel: tuple  # tuple of rational symmetric matrices
    target: Poly

    @property
    def dim(self):
        return len(self.monomials)


def _pair_index(m):
    """Upper-triangle coordinate order for an m x m symmetric matrix."""
    return [(p, q) for p in range(m) for q in range(p, m)]


def _sym_from_coords(m, coords, pairs):
    rows = [[Fraction(0)] * m for _ in range(m)]
    for (p, q), x in zip(pairs, coords):
        rows[p][q] = x
        rows[q][p] = x
    return tuple(tuple(r) for r in rows)


def gram_system(delta: Poly, i: int, j: int) -> GramSystem:
    mono = monomial_basis(delta, i, j)
    m = len(mono)
    pairs = _pair_index(m)
    prod_of = {}
    for idx, (p, q) in enumerate(pairs):
        prod_of.setdefault(mono[p] + mono[q], []).append(idx)
    # particular solution
    g0c = [Fraction(0)] * len(pairs)
    for key, c in delta.terms.items():
        hits = prod_of.get(key)
        if not hits:
            raise NotRepresentable(
                "target has a monomial outside the span of basis products"
            )
        idx = hits[0]
        p, q = pairs[idx]
        g0c[idx] = c if p == q else c / 2
    # kernel: nullspace of coords -> coefficient map
    prods = sorted(prod_of)
    rowidx = {k: t for t, k in enumerate(prods)}
    nrows, ncols = len(prods), len(pairs)
    mat = [[Fraction(0)] * ncols for _ in range(nrows)]
    for idx, (p, q) in enumerate(pairs):
        mat[rowidx[mono[p] + mono[q]]][idx] = Fraction(1 if p == q else 2)
    null = _nullspace(mat)
    return GramSystem(
        delta.nvars,
        i,
        j,
        tuple(mono),
        _sym_from_coords(m, g0c, pairs),
        tuple(_sym_from_coords(m, vec, pairs) for vec in null),
        delta,
    )


def _nullspace(mat):
    """Exact rational nullspace basis (list of coordinate vectors)."""
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    a = [row[:] for row in mat]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pr = a[r]
        inv = pr[c]
        a[r] = [x / inv for x in pr]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for ri, pc in enumerate(pivots):
            vec[pc] = -a[ri][fc]
        basis.append(vec)
    return basis


def _primitive(vec):
    """Scale a rational vector to coprime integers."""
    from math import gcd

    lcm = 1
    for x in vec:
        d = Fraction(x).denominator
        lcm = lcm * d // gcd(lcm, d)
    ints = [int(Fraction(x) * lcm) for x in vec]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return [Fraction(v) for v in ints]


def gram_to_poly(nvars, monomials, gram) -> Poly:
    terms = {}
    m = len(monomials)
    for p in range(m):
        for q in range(m):
            key = monomials[p] + monomials[q]
            terms[key] = terms.get(key, Fraction(0)) + Fraction(gram[p][q])
    return Poly(nvars, terms)


# -- exact pivoted LDL --------------------------------------------------------


@dataclass(frozen=True)
class LDL:
    perm: tuple  # row/column permutation applied before factorization
    pivots: tuple  # positive pivots d_1..d_rank
    lower: tuple  # unit lower triangular factor, full size


def psd_ldl(gram, strict: bool = False):
    """Pivoted LDL^T of a symmetric rational matrix; returns the factorization
    iff the matrix is PSD (strict: positive definite), else None."""
    n = len(gram)
    a = [[Fraction(x) for x in row] for row in gram]
    perm = list(range(n))
    low = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    pivots = []
    for k in range(n):
        jmax = max(range(k, n), key=lambda t: a[t][t])
        if a[jmax][jmax] <= 0:
            if any(a[s][t] != 0 for s in range(k, n) for t in range(k, n)):
                return None  # negative diagonal, or zero diagonal with residue
            break
        if jmax != k:
            a[k], a[jmax] = a[jmax], a[k]
            for row in a:
                row[k], row[jmax] = row[jmax], row[k]
            perm[k], perm[jmax] = perm[jmax], perm[k]
            for t in range(k):  # swap only the computed part of L
                low[k][t], low[jmax][t] = low[jmax][t], low[k][t]
        d = a[k][k]
        pivots.append(d)
        for s in range(k + 1, n):
            f = a[s][k] / d
            low[s][k] = f
            if f != 0:
                for t in range(k, n):
                    a[s][t] -= f * a[k][t]
    if strict and (len(pivots) < n or any(p <= 0 for p in pivots)):
        return None
    return LDL(tuple(perm), tuple(pivots), tuple(tuple(r) for r in low))


def ldl_reconstructs(gram, ldl: LDL) -> bool:
    """Exact check that P G P^T = L D L^T."""
    n = len(gram)
    piv = list(ldl.pivots) + [Fraction(0)] * (n - len(ldl.pivots))
    for s in range(n):
        for t in range(s, n):
            acc = Fraction(0)
            for k in range(min(s, t) + 1):
                acc += ldl.lower[s][k] * piv[k] * ldl.lower[t][k]
            if acc != Fraction(gram[ldl.perm[s]][ldl.perm[t]]):
                return False
    return True


# -- certificates -------------------------------------------------------------


@dataclass(frozen=True)
class SOSCertificate:
    i: int
    j: int
    nvars: int
    monomials: tuple
    gram: tuple  # rational symmetric PSD matrix
    ldl: LDL


@dataclass(frozen=True)
class DualPSDCertificate:
    i: int
    j: int
    matrix: tuple  # rational symmetric positive definite matrix
    ldl: LDL


def verify_sos(cert: SOSCertificate, delta: Poly) -> bool:
    if gram_to_poly(cert.nvars, cert.monomials, cert.gram) != delta:
        return False
    if any(p <= 0 for p in cert.ldl.pivots):
        return False
    fresh = psd_ldl(cert.gram)
    if fresh is None:
        return False
    return ldl_reconstructs(cert.gram, cert.ldl)


def verify_dual(cert: DualPSDCertificate, system: GramSystem) -> bool:
    a = cert.matrix
    m = system.dim
    if len(a) != m:
        return False
    if any(a[p][q] != a[q][p] for p in range(m) for q in range(m)):
        return False
    if psd_ldl(a, strict=True) is None:
        return False
    for g in (system.g0,) + system.kernel:
        tr = sum(Fraction(a[p][q]) * Fraction(g[q][p]) for p in range(m) for q in range(m))
        if tr != 0:
            return False
    return True


def extract_squares(cert: SOSCertificate, delta_nvars=None):
    """(weight, polynomial) pairs with sum w * s^2 equal to the target."""
    n = cert.nvars
    out = []
    m = len(cert.monomials)
    inv = list(cert.ldl.perm)
    for k, d in enumerate(cert.ldl.pivots):
        terms = {}
        for s in range(m):
            c = cert.ldl.lower[s][k]
            if c != 0:
                terms[cert.monomials[inv[s]]] = c
        out.append((d, Poly(n, terms)))
    return out


# -- numeric feasibility ------------------------------------------------------


@dataclass
class SDPResult:
    feasible: bool
    coeffs: tuple  # kernel coordinates of the returned point (floats)
    gram: object  # numpy array
    min_eig: float
    residual: float
    iterations: int


def _kernel_arrays(system: GramSystem):
    g0 = np.array(system.g0, dtype=float)
    ks = [np.array(k, dtype=float) for k in system.kernel]
    return g0, ks


def _lam_min(g0, ks, c):
    g = g0.copy()
    for ci, k in zip(c, ks):
        g += ci * k
    return float(np.linalg.eigvalsh(g)[0]), g


def _ascend_min_eig(g0, ks, c, iters=400, step0=0.5, ball=None, stall_limit=300):
    """Diminishing-step supergradient ascent on the concave function
    lambda_min(G0 + sum c_i K_i); keeps the best iterate.  With `ball` set,
    projects c back onto that radius (the dual search normalization)."""
    if not ks:
        return c
    c = np.asarray(c, dtype=float).copy()
    best, _ = _lam_min(g0, ks, c)
    bestc = c.copy()
    stall = 0
    for t in range(1, iters + 1):
        if stall > stall_limit:
            break
        g = g0.copy()
        for ci, k in zip(c, ks):
            g += ci * k
        w, u = np.linalg.eigh(g)
        if w[0] > best + 1e-12:
            best = w[0]
            bestc = c.copy()
            stall = 0
        else:
            stall += 1
        v = u[:, 0]
        grad = np.array([v @ k @ v for k in ks])
        nrm = np.linalg.norm(grad)
        if nrm < 1e-14:
            break
        c = c + (step0 / np.sqrt(t)) * grad / nrm
        if ball is not None:
            cn = np.linalg.norm(c)
            if cn > ball:
                c *= ball / cn
    return bestc


def sdp_feasible(system: GramSystem, tol: float = 1e-9, max_iter: int = 3000) -> SDPResult:
    """Approximate PSD point of the Gram spectrahedron, or a numeric
    infeasibility report (never a proof of emptiness)."""
    g0, ks = _kernel_arrays(system)
    m = g0.shape[0]
    if not ks:
        w = np.linalg.eigvalsh(g0)
        return SDPResult(bool(w[0] >= -tol), (), g0, float(w[0]), 0.0, 0)
    kmat = np.stack([k.reshape(-1) for k in ks], axis=1)
    v, _ = np.linalg.qr(kmat)
    g0v = g0.reshape(-1)
    x = g0.copy()
    it = 0
    prev = None
    for it in range(1, max_iter + 1):
        w, u = np.linalg.eigh((x + x.T) / 2)
        xp = (u * np.clip(w, 0, None)) @ u.T
        d = xp.reshape(-1) - g0v
        x = (g0v + v @ (v.T @ d)).reshape(m, m)
        if it % 50 == 0:
            cur = float(np.linalg.eigvalsh((x + x.T) / 2)[0])
            if cur >= -tol:
                break
            if prev is not None and abs(cur - prev) < 1e-8:
                break  # stalled: infeasible or boundary; ascent takes over
            prev = cur
    c = np.linalg.lstsq(kmat, x.reshape(-1) - g0v, rcond=None)[0]
    c = _ascend_min_eig(g0, ks, c)
    lam, g = _lam_min(g0, ks, c)
    resid = float(np.linalg.norm(kmat @ c - (g.reshape(-1) - g0v)))
    return SDPResult(bool(lam >= -tol), tuple(c), g, lam, resid, it)


_SMALL_BOUNDS = (1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64, 100, 1000)


def rationalize_and_verify(
    system: GramSystem, coeffs, denom_bound: int = 10**6
):
    """Round kernel coordinates to rationals, rebuild the Gram matrix exactly
    inside the affine subspace, and accept only on an exact PSD LDL.  Small
    denominators go first: boundary points of the spectrahedron tend to have
    tiny exact coordinates.  Returns an SOSCertificate or None
    (inconclusive)."""
    bounds = list(_SMALL_BOUNDS)
    b = denom_bound
    while b <= 10**12:
        bounds.append(b)
        b *= 100
    m = system.dim
    for bound in bounds:
        lam = [Fraction(float(c)).limit_denominator(bound) for c in coeffs]
        gram = [[Fraction(x) for x in row] for row in system.g0]
        for li, kmat in zip(lam, system.kernel):
            if li == 0:
                continue
            for p in range(m):
                for q in range(m):
                    gram[p][q] += li * kmat[p][q]
        ldl = psd_ldl(gram)
        if ldl is not None:
            return SOSCertificate(
                system.i,
                system.j,
                system.nvars,
                system.monomials,
                tuple(tuple(r) for r in gram),
                ldl,
            )
    return None


def certify_sos(delta: Poly, i: int, j: int, tol: float = 1e-9):
    """Full pipeline for one Rayleigh difference: returns
    ('sos', SOSCertificate) on exact success,
    ('numeric', SDPResult) when only approximately feasible,
    ('infeasible', SDPResult) when the solver reports no PSD point."""
    if delta.is_zero():
        system = gram_system(delta, i, j)
        cert = SOSCertificate(
            i, j, delta.nvars, system.monomials,
            tuple(tuple(Fraction(0) for _ in system.monomials) for _ in system.monomials),
            LDL(tuple(range(len(system.monomials))), (), tuple()),
        )
        return "sos", cert
    system = gram_system(delta, i, j)
    res = sdp_feasible(system, tol=tol)
    coeffs = res.coeffs
    if system.kernel:
        # refine toward the analytic center; exact rounding is the only judge
        g0, ks = _kernel_arrays(system)
        c = _ascend_min_eig(g0, ks, np.array(res.coeffs), iters=2000, step0=0.2)
        lam, g = _lam_min(g0, ks, c)
        if lam > res.min_eig:
            res = SDPResult(
                bool(lam >= -tol), tuple(c), g, lam, res.residual, res.iterations
            )
            coeffs = res.coeffs
    cert = rationalize_and_verify(system, coeffs)
    if cert is not None:
        return "sos", cert
    if res.min_eig < -10 * tol:
        return "infeasible", res
    return "numeric", res


def dual_psd_certificate(system: GramSystem, seed: int = 0):
    """Positive definite rational A with tr(A G_i) = 0 for i = 0..k, proving
    the Gram spectrahedron empty; None when the search is inconclusive."""
    m = system.dim
    pairs = _pair_index(m)
    weights = [Fraction(1) if p == q else Fraction(2) for p, q in pairs]
    span = [system.g0] + list(system.kernel)
    rows = []
    for g in span:
        rows.append([w * Fraction(g[p][q]) for w, (p, q) in zip(weights, pairs)])
    null = _nullspace(rows)
    if not null:
        return None
    null = [_primitive(vec) for vec in null]
    wmats = [_sym_from_coords(m, vec, pairs) for vec in null]
    wf = [np.array(wm, dtype=float) for wm in wmats]
    basis = np.stack([w.reshape(-1) for w in wf], axis=1)
    v, _ = np.linalg.qr(basis)
    vmats = [v[:, t].reshape(m, m) for t in range(v.shape[1])]
    zero = np.zeros((m, m))
    rng = np.random.default_rng(seed)
    best = None
    # start near the projection of the identity onto the complement
    mu0 = v.T @ np.eye(m).reshape(-1)
    for attempt in range(3):
        start = mu0 if attempt == 0 else rng.standard_normal(len(vmats))
        nrm = np.linalg.norm(start)
        if nrm > 0:
            start = start / nrm
        cc = _ascend_min_eig(zero, vmats, start, iters=6000, ball=1.0, stall_limit=2000)
        a = (v @ cc).reshape(m, m)
        a = (a + a.T) / 2
        lam = float(np.linalg.eigvalsh(a)[0])
        if best is None or lam > best[0]:
            best = (lam, a)
        if lam > 1e-4:
            break
    if best is None or best[0] < 1e-8:
        return None
    # back to coordinates in the exact complement basis for rounding
    c = np.linalg.lstsq(basis, best[1].reshape(-1), rcond=None)[0]
    c = c / np.abs(c).max()
    for denom in (10**3, 10**5, 10**7, 10**9):
        # a single common denominator keeps the integer certificate small
        mui = [round(float(x) * denom) for x in c]
        amat = [[Fraction(0)] * m for _ in range(m)]
        for q, wm in zip(mui, wmats):
            if q == 0:
                continue
            for p in range(m):
                for s in range(m):
                    amat[p][s] += q * wm[p][s]
        ldl = psd_ldl(amat, strict=True)
        if ldl is None:
            continue
        cert = DualPSDCertificate(
            system.i, system.j, tuple(tuple(r) for r in amat), ldl
        )
        if verify_dual(cert, system):
            return cert
    return None
