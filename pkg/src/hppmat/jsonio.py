"""JSON (de)serialization and re-verification of certificates.

Every rational is a string "p" or "p/q"; matrices are row-major with both
symmetric entries stored.  `verify_certificate` re-derives everything it
needs from the matroid and checks the certificate exactly.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import ValidationError
from .matroid import Matroid
from .negsearch import NegativePointCertificate, delta_value
from .poly import basis_polynomial, pack, rayleigh_difference, unpack
from .realroot import (
    NonRealWitness,
    UniPoly,
    gcd as _unigcd,
    restrict_line,
    sturm_real_root_count,
)
from .sos import (
    LDL,
    DualPSDCertificate,
    SOSCertificate,
    gram_system,
    verify_dual,
    verify_sos,
)

SCHEMA_VERSION = 1


def _rat(x) -> str:
    return str(Fraction(x))


def _unrat(s) -> Fraction:
    return Fraction(s)


def _matrix(rows):
    return [[_rat(x) for x in row] for row in rows]


def _unmatrix(rows):
    return tuple(tuple(_unrat(x) for x in row) for row in rows)


def certificate_to_dict(cert) -> dict:
    if isinstance(cert, SOSCertificate):
        return {
            "schema_version": SCHEMA_VERSION,
            "type": "sos",
            "i": cert.i,
            "j": cert.j,
            "nvars": cert.nvars,
            "monomials": [list(unpack(k, cert.nvars)) for k in cert.monomials],
            "gram": _matrix(cert.gram),
            "ldl": {
                "perm": list(cert.ldl.perm),
                "pivots": [_rat(p) for p in cert.ldl.pivots],
                "lower": _matrix(cert.ldl.lower),
            },
        }
    if isinstance(cert, DualPSDCertificate):
        return {
            "schema_version": SCHEMA_VERSION,
            "type": "dual_psd",
            "i": cert.i,
            "j": cert.j,
            "A": _matrix(cert.matrix),
        }
    if isinstance(cert, NegativePointCertificate):
        return {
            "schema_version": SCHEMA_VERSION,
            "type": "negative_point",
            "i": cert.i,
            "j": cert.j,
            "x": [_rat(x) for x in cert.point],
            "value": _rat(cert.value),
        }
    if isinstance(cert, NonRealWitness):
        return {
            "schema_version": SCHEMA_VERSION,
            "type": "nonreal_direction",
            "e": list(cert.e),
            "v": list(cert.v),
            "degree": cert.degree,
            "real_roots": cert.real_root_count,
        }
    from .pipeline import ForbiddenMinorWitness

    if isinstance(cert, ForbiddenMinorWitness):
        return {
            "schema_version": SCHEMA_VERSION,
            "type": "forbidden_minor",
            "forbidden": cert.forbidden_name,
            "deleted": sorted(cert.deleted),
            "contracted": sorted(cert.contracted),
            "relabeling": list(cert.relabeling),
        }
    raise ValidationError(f"unknown certificate object {type(cert).__name__}")


def certificate_from_dict(d: dict):
    kind = d.get("type")
    if kind == "sos":
        nvars = d["nvars"]
        ldl = d["ldl"]
        return SOSCertificate(
            d["i"],
            d["j"],
            nvars,
            tuple(pack(e) for e in d["monomials"]),
            _unmatrix(d["gram"]),
            LDL(
                tuple(ldl["perm"]),
                tuple(_unrat(p) for p in ldl["pivots"]),
                _unmatrix(ldl["lower"]),
            ),
        )
    if kind == "dual_psd":
        return DualPSDCertificate(d["i"], d["j"], _unmatrix(d["A"]), None)
    if kind == "negative_point":
        return NegativePointCertificate(
            d["i"],
            d["j"],
            tuple(_unrat(x) for x in d["x"]),
            _unrat(d["value"]),
        )
    if kind == "nonreal_direction":
        return NonRealWitness(
            tuple(d["e"]), tuple(d["v"]), d["degree"], d["real_roots"]
        )
    if kind == "forbidden_minor":
        from .pipeline import ForbiddenMinorWitness

        return ForbiddenMinorWitness(
            d["forbidden"],
            frozenset(d["deleted"]),
            frozenset(d["contracted"]),
            tuple(d["relabeling"]),
        )
    raise ValidationError(f"unknown certificate type {kind!r}")


def verify_certificate(d: dict, m: Matroid) -> bool:
    """Exact re-verification of a serialized certificate against a matroid.
    Classification verdicts are stated for the canonical relabeling, so that
    form is accepted too (the half-plane property is labeling-invariant)."""
    if _verify_one(d, m):
        return True
    from .matroid import canonical_form

    canon = canonical_form(m)
    return canon != m and _verify_one(d, canon)


def _verify_one(d: dict, m: Matroid) -> bool:
    cert = certificate_from_dict(d)
    h = basis_polynomial(m)
    if isinstance(cert, SOSCertificate):
        delta = rayleigh_difference(h, cert.i, cert.j)
        return verify_sos(cert, delta)
    if isinstance(cert, DualPSDCertificate):
        from .sos import psd_ldl

        delta = rayleigh_difference(h, cert.i, cert.j)
        system = gram_system(delta, cert.i, cert.j)
        ldl = psd_ldl(cert.matrix, strict=True)
        if ldl is None:
            return False
        cert = DualPSDCertificate(cert.i, cert.j, cert.matrix, ldl)
        return verify_dual(cert, system)
    if isinstance(cert, NegativePointCertificate):
        val = delta_value(h, cert.i, cert.j, cert.point)
        return val == cert.value and val < 0
    if isinstance(cert, NonRealWitness):
        p = restrict_line(h, cert.e, cert.v)
        if p.is_zero() or p.degree() != cert.degree:
            return False
        q = p.divmod(_unigcd(p, p.derivative()))[0]
        count = sturm_real_root_count(q)
        return count == cert.real_root_count and count < q.degree()
    from .pipeline import ForbiddenMinorWitness

    if isinstance(cert, ForbiddenMinorWitness):
        return _verify_forbidden_minor(cert, m)
    return False


def _verify_forbidden_minor(cert, m: Matroid) -> bool:
    from . import catalog
    from .matroid import relabel

    name = cert.forbidden_name
    try:
        if name.endswith("*"):
            target = catalog.builtin(name[:-1]).matroid.dual()
        else:
            target = catalog.builtin(name).matroid
    except Exception:
        return False
    try:
        minor = m.contract(cert.contracted)
    except Exception:
        return False
    # witness labels refer to m; translate through the contraction compression
    remaining = [e for e in range(1, m.n + 1) if e not in cert.contracted]
    pos = {e: t + 1 for t, e in enumerate(remaining)}
    try:
        minor = minor.delete({pos[e] for e in cert.deleted})
    except Exception:
        return False
    kept = [e for e in remaining if e not in cert.deleted]
    kpos = {e: t + 1 for t, e in enumerate(kept)}
    if len(cert.relabeling) != target.n or minor.n != target.n:
        return False
    perm = [0] * target.n
    for i, e in enumerate(cert.relabeling, start=1):
        if e not in kpos:
            return False
        perm[i - 1] = kpos[e]
    return relabel(target, tuple(perm)) == minor


def dump_certificate(cert, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(certificate_to_dict(cert), fh, indent=2)
        fh.write("\n")


def load_certificate(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
