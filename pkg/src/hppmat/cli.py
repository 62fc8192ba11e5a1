"""Command line interface.

Exit codes: 0 = decided, 2 = inconclusive, 1 = error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import catalog, jsonio, negsearch, pipeline, realroot, report, sos
from .errors import HppError, UnknownName
from .matroid import ingleton_check, ingleton_search
from .poly import basis_polynomial, rayleigh_difference

DECIDED, ERROR, INCONCLUSIVE = 0, 1, 2


def _load_entries(name):
    """A builtin name or a catalog file path -> list of CatalogEntry."""
    try:
        return [catalog.builtin(name)]
    except UnknownName:
        pass
    if Path(name).exists():
        return catalog.parse(name)
    raise UnknownName(f"{name!r} is neither a builtin name nor a file")


def _load_one(name):
    entries = _load_entries(name)
    if len(entries) != 1:
        raise click.UsageError(
            f"{name!r} holds {len(entries)} matroids; this command needs one"
        )
    return entries[0]


@click.group()
def main():
    """Half-plane-property toolkit for matroids, with exact certificates."""


def _verdict_dict(name, v):
    return {
        "schema_version": jsonio.SCHEMA_VERSION,
        "name": name,
        "status": v.status,
        "stage": v.stage,
        "reason": v.reason,
        "certificates": [jsonio.certificate_to_dict(c) for c in v.certificates],
    }


@main.command()
@click.argument("name")
@click.option("--json", "json_out", type=click.Path(), help="write the verdict as JSON")
def check(name, json_out):
    """Classify one matroid (or every entry of a catalog file)."""
    entries = _load_entries(name)
    clf = pipeline.Classifier()
    decided = True
    results = []
    for entry in entries:
        v = clf.classify(entry.matroid)
        click.echo(f"{entry.name}: {v.status} (stage: {v.stage})"
                   + (f" — {v.reason}" if v.reason else ""))
        results.append(_verdict_dict(entry.name, v))
        if v.status not in (pipeline.HPP, pipeline.NOT_HPP):
            decided = False
    if json_out:
        payload = results[0] if len(results) == 1 else results
        Path(json_out).write_text(json.dumps(payload, indent=2) + "\n")
    sys.exit(DECIDED if decided else INCONCLUSIVE)


@main.command()
@click.argument("name")
@click.option("--forbidden", type=click.Path(exists=True),
              help="catalog file of extra known non-HPP matroids")
@click.option("--jobs", type=int, default=1, show_default=True,
              help="accepted for interface stability; classification is serial")
@click.option("--outdir", type=click.Path(), default="hpp-report", show_default=True)
def classify(name, forbidden, jobs, outdir):
    """Classify a catalog; write verdicts.csv and summary figures."""
    entries = _load_entries(name)
    config = pipeline.PipelineConfig()
    if forbidden:
        extra = catalog.parse(forbidden)
        config.forbidden = pipeline.default_forbidden() + tuple(
            (e.name, e.matroid) for e in extra
        )
    rep = pipeline.classify_catalog(entries, config)
    paths = report.write_report(rep, outdir)
    for status in (pipeline.HPP, pipeline.NOT_HPP, pipeline.CANDIDATE_HPP,
                   pipeline.UNDETECTED):
        click.echo(f"{status}: {rep.counts.get(status, 0)}")
    for key, path in paths.items():
        click.echo(f"{key}: {path}")
    sys.exit(DECIDED)


@main.command(name="sos")
@click.option("--i", "i", type=int, required=True)
@click.option("--j", "j", type=int, required=True)
@click.argument("name")
@click.option("--json", "json_out", type=click.Path())
def sos_cmd(name, i, j, json_out):
    """Exact SOS certification of one Rayleigh difference."""
    entry = _load_one(name)
    h = basis_polynomial(entry.matroid)
    delta = rayleigh_difference(h, i, j)
    status, payload = sos.certify_sos(delta, i, j)
    if status == "sos":
        click.echo(f"{entry.name} Delta_{i}{j}: SOS "
                   f"(rank {len(payload.ldl.pivots)} Gram certificate)")
        if json_out:
            jsonio.dump_certificate(payload, json_out)
        sys.exit(DECIDED)
    click.echo(f"{entry.name} Delta_{i}{j}: no exact certificate "
               f"({status}, min eigenvalue {payload.min_eig:.3g})")
    sys.exit(INCONCLUSIVE)


@main.command(name="dual-cert")
@click.option("--i", "i", type=int, required=True)
@click.option("--j", "j", type=int, required=True)
@click.argument("name")
@click.option("--json", "json_out", type=click.Path())
def dual_cert(name, i, j, json_out):
    """Prove a Rayleigh difference is NOT a sum of squares."""
    entry = _load_one(name)
    h = basis_polynomial(entry.matroid)
    delta = rayleigh_difference(h, i, j)
    system = sos.gram_system(delta, i, j)
    cert = sos.dual_psd_certificate(system)
    if cert is not None:
        click.echo(f"{entry.name} Delta_{i}{j}: not SOS "
                   "(positive definite dual certificate)")
        if json_out:
            jsonio.dump_certificate(cert, json_out)
        sys.exit(DECIDED)
    click.echo(f"{entry.name} Delta_{i}{j}: no dual certificate found")
    sys.exit(INCONCLUSIVE)


@main.command()
@click.argument("name")
@click.option("--count", is_flag=True, help="count all failing direction pairs")
@click.option("--lead-nonzero", is_flag=True,
              help="restrict directions e to those with h(e) != 0")
@click.option("--json", "json_out", type=click.Path())
def hyperbolicity(name, count, lead_nonzero, json_out):
    """Sample {0,1}-direction line restrictions for non-real roots."""
    entry = _load_one(name)
    h = basis_polynomial(entry.matroid)
    if count:
        n = realroot.count_failing_pairs(h, require_lead_nonzero=lead_nonzero)
        click.echo(f"{entry.name}: {n} failing direction pairs")
        sys.exit(DECIDED)
    w = realroot.hyperbolicity_sample_test(h, require_lead_nonzero=lead_nonzero)
    if w is None:
        click.echo(f"{entry.name}: all sampled restrictions real-rooted")
        sys.exit(INCONCLUSIVE)
    click.echo(f"{entry.name}: non-real restriction at e={w.e} v={w.v} "
               f"(degree {w.degree}, {w.real_root_count} real roots)")
    if json_out:
        jsonio.dump_certificate(w, json_out)
    sys.exit(DECIDED)


@main.command()
@click.argument("name")
@click.option("--i", "i", type=int, default=None)
@click.option("--j", "j", type=int, default=None)
@click.option("--json", "json_out", type=click.Path())
def negative(name, i, j, json_out):
    """Search for an exactly-negative Rayleigh difference value."""
    entry = _load_one(name)
    m = entry.matroid
    h = basis_polynomial(m)
    pairs = ([(i, j)] if i and j else
             [(p, q) for p in range(1, m.n) for q in range(p + 1, m.n + 1)])
    for p, q in pairs:
        cert = negsearch.search_negative(h, p, q)
        if cert is not None:
            pt = ",".join(str(x) for x in cert.point)
            click.echo(f"{entry.name} Delta_{p}{q}({pt}) = {cert.value} < 0")
            if json_out:
                jsonio.dump_certificate(cert, json_out)
            sys.exit(DECIDED)
    click.echo(f"{entry.name}: no negative point found")
    sys.exit(INCONCLUSIVE)


@main.command()
@click.argument("name")
@click.option("--flat", required=True, help="comma-separated flat, e.g. 1,3")
def face(name, flat):
    """Basis polynomial of the polytope-face matroid of a flat."""
    entry = _load_one(name)
    elements = {int(x) for x in flat.split(",")}
    mf = entry.matroid.polytope_face_matroid(elements)
    h = basis_polynomial(mf)
    click.echo(f"face matroid bases: "
               + " ".join(
                   "{" + ",".join(map(str, sorted(b))) + "}"
                   for b in sorted(map(sorted, (set(_bits(b)) for b in mf.bases))))
               )
    click.echo(f"h = {h.to_string()}")
    sys.exit(DECIDED)


def _bits(mask):
    i = 1
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


@main.command()
@click.argument("name")
@click.option("--max-size", type=int, default=2, show_default=True)
def ingleton(name, max_size):
    """Search disjoint subsets for an Ingleton inequality violation."""
    entry = _load_one(name)
    hit = ingleton_search(entry.matroid, max_size=max_size)
    if hit is None:
        click.echo(f"{entry.name}: no Ingleton violation "
                   f"(disjoint subsets of size <= {max_size})")
    else:
        p1, p2, p3, p4 = hit
        lhs, rhs, _ = ingleton_check(entry.matroid, p1, p2, p3, p4)
        click.echo(f"{entry.name}: Ingleton violated by "
                   f"{sorted(p1)} {sorted(p2)} {sorted(p3)} {sorted(p4)} "
                   f"(lhs {lhs} < rhs {rhs})")
    sys.exit(DECIDED)


@main.command()
@click.argument("certificate", type=click.Path(exists=True))
@click.argument("name")
def verify(certificate, name):
    """Exactly re-verify a certificate JSON against a matroid."""
    entry = _load_one(name)
    data = jsonio.load_certificate(certificate)
    ok = jsonio.verify_certificate(data, entry.matroid)
    click.echo(f"{data.get('type')}: {'valid' if ok else 'INVALID'}")
    sys.exit(DECIDED if ok else ERROR)


def run():
    try:
        main(standalone_mode=False)
    except click.exceptions.Exit as exc:  # pragma: no cover
        sys.exit(exc.exit_code)
    except click.ClickException as exc:
        exc.show()
        sys.exit(ERROR)
    except HppError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(ERROR)


if __name__ == "__main__":
    run()
