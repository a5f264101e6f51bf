"""Command-line front end: lifts, spaces, Hecke action, congruences, L-values.

Every command emits canonical JSON (sorted keys, fixed layout, trailing
newline), so identical invocations produce byte-identical output; with --out
a JobManifest sidecar (<out>.manifest.json) records exactly what produced the
file.  Exit codes: 0 success, 1 computational failure (error JSON on stdout),
2 usage.
"""

import math
import os
import sys

import click

from . import wire
from .cache import CACHE_ENV
from .characters import TRIVIAL, KroneckerCharacter
from .coeffring import CoefficientError, PrecisionError
from .lfun import coefficients_needed, lvalue_numeric, script_L_valuation
from .qseries import newforms
from .siegel2 import eigenforms, hecke_T, scan_congruences, space
from .sklift import maass_relation_check, sk_lift


class JobManifest:
    """Everything that determines a run: command, parameters, paths, cache."""

    def __init__(self, command, parameters, out=None):
        self.command = command
        self.parameters = dict(parameters)
        self.out = out
        self.cache = os.environ.get(CACHE_ENV)

    def record(self):
        return {"command": self.command, "parameters": self.parameters,
                "out": self.out, "cache": self.cache}


def _deliver(payload, out, manifest):
    text = wire.canonical_json(payload)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
        with open(out + ".manifest.json", "w") as fh:
            fh.write(wire.canonical_json(manifest.record()))
    else:
        click.echo(text, nl=False)


def _fail(exc):
    msg = str(exc) or type(exc).__name__
    err = {"error": {"type": type(exc).__name__, "message": msg}}
    click.echo(wire.canonical_json(err), nl=False)
    sys.exit(1)


_COMPUTE_ERRORS = (PrecisionError, CoefficientError, ValueError,
                   AssertionError, ArithmeticError)


def _even_weight(k, low=4):
    if k % 2 or k < low:
        raise click.UsageError("weight must be even and >= %d, got %d" % (low, k))


def _load_records(path):
    import json
    with open(path) as fh:
        data = json.load(fh)
    recs = data if isinstance(data, list) else [data]
    return [wire.siegel_from_record(r) for r in recs], isinstance(data, list)


@click.group()
@click.option("--cache", default=None, metavar="DIR",
              help="expansion cache directory (overrides SKC_CACHE)")
def main(cache):
    """Exact Saito-Kurokawa lifts, genus-2 congruences, and critical L-values."""
    if cache:
        os.environ[CACHE_ENV] = cache


@main.command()
@click.option("--weight", type=int, required=True, help="Siegel weight k")
@click.option("--prec", type=int, default=6, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None,
              help="also write the coefficient table as CSV")
def lift(weight, prec, out, csv_path):
    """Saito-Kurokawa lifts of all newforms of weight 2k-2, as Siegel records."""
    _even_weight(weight, low=10)
    man = JobManifest("lift", {"weight": weight, "prec": prec}, out)
    try:
        forms = [sk_lift(f, prec) for f in newforms(2 * weight - 2, max(prec, 8))]
        recs = [wire.siegel_record(F) for F in forms]
        payload = recs[0] if len(recs) == 1 else recs
        if csv_path:
            with open(csv_path, "w") as fh:
                wire.siegel_csv(forms[0], fh)
        _deliver(payload, out, man)
    except _COMPUTE_ERRORS as exc:
        _fail(exc)


@main.command("maass-check")
@click.argument("record", type=click.Path(exists=True, dir_okay=False))
@click.option("--bound", type=int, default=None,
              help="check triples with n, m <= bound "
                   "(default: largest bound the box supports)")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def maass_check(record, bound, out):
    """Verify the Maass relation on stored Siegel records."""
    man = JobManifest("maass-check", {"record": record, "bound": bound}, out)
    try:
        forms, was_list = _load_records(record)
        reports = []
        for F in forms:
            # the divisor-sum side reads A(*, *, 1) through bound^2
            B = bound if bound is not None else math.isqrt(F.prec)
            res = maass_relation_check(F, B)
            reports.append({"bound": B, "holds": res["holds"],
                            "witnesses": [list(T) for T in res["witnesses"]]})
        _deliver(reports if was_list else reports[0], out, man)
    except _COMPUTE_ERRORS as exc:
        _fail(exc)


@main.command()
@click.option("--weight", type=int, required=True)
@click.option("--prec", type=int, default=2, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def basis(weight, prec, out):
    """Echelonized monomial basis of the weight-k space, with dimension data."""
    _even_weight(weight)
    man = JobManifest("basis", {"weight": weight, "prec": prec}, out)
    try:
        sp = space(weight, prec)
        payload = {"kind": "siegel-space", "weight": weight, "prec": prec,
                   "dims": sp.dims(),
                   "forms": [wire.siegel_record(F.truncate(prec))
                             for F in sp.basis]}
        _deliver(payload, out, man)
    except _COMPUTE_ERRORS as exc:
        _fail(exc)


@main.command()
@click.argument("record", type=click.Path(exists=True, dir_okay=False))
@click.option("--p", type=int, default=2, show_default=True,
              help="Hecke prime")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def hecke(record, p, out):
    """Apply the genus-2 Hecke operator T(p) to a stored Siegel record."""
    man = JobManifest("hecke", {"record": record, "p": p}, out)
    try:
        forms, was_list = _load_records(record)
        recs = [wire.siegel_record(hecke_T(F, p)) for F in forms]
        _deliver(recs if was_list else recs[0], out, man)
    except _COMPUTE_ERRORS as exc:
        _fail(exc)


@main.command()
@click.option("--weight", type=int, required=True)
@click.option("--prec", type=int, default=3, show_default=True,
              help="output box precision (computation uses a larger box)")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def eigen(weight, prec, out):
    """T(2)-eigenforms of the cusp space, classified lift / non-lift."""
    _even_weight(weight)
    man = JobManifest("eigen", {"weight": weight, "prec": prec}, out)
    try:
        sp = space(weight)
        payload = [{"class": cls, "lambda2": wire.elt_to_str(lam),
                    "record": wire.siegel_record(F.truncate(prec))}
                   for F, lam, cls in eigenforms(sp)]
        _deliver(payload, out, man)
    except _COMPUTE_ERRORS as exc:
        _fail(exc)


@main.command()
@click.option("--weight", type=int, required=True)
@click.option("--scan-primes", "lmax", type=int, default=200, show_default=True,
              help="scan prime moduli up to this bound")
@click.option("--lmin", type=int, default=None,
              help="lower cutoff, exclusive (default 2k-2)")
@click.option("--bound", type=int, default=4, show_default=True,
              help="verify coefficients on triples with n, m <= bound")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def congruence(weight, lmax, lmin, bound, out):
    """Scan for lift / non-lift Fourier congruences in one weight."""
    _even_weight(weight)
    man = JobManifest("congruence",
                      {"weight": weight, "scan_primes": lmax, "lmin": lmin,
                       "bound": bound}, out)
    try:
        sp = space(weight)
        lifts = [F for F, lam, cls in eigenforms(sp) if cls == "Maass"]
        others = [F for F, lam, cls in eigenforms(sp) if cls == "non-Maass"]
        hits = []
        for F in lifts:
            for G in others:
                for ell, ideal, rep in scan_congruences(
                        F, G, bound=bound, lmax=lmax, lmin=lmin):
                    hits.append({"ell": ell, "ideal": str(ideal),
                                 "exponent": rep.exponent,
                                 "witness": list(rep.witness) if rep.witness else None,
                                 "report": repr(rep)})
        payload = {"kind": "congruence-scan", "weight": weight,
                   "lmin": lmin if lmin is not None else 2 * weight - 2,
                   "lmax": lmax, "bound": bound,
                   "pairs_scanned": len(lifts) * len(others),
                   "hits": hits}
        _deliver(payload, out, man)
    except _COMPUTE_ERRORS as exc:
        _fail(exc)


@main.command()
@click.option("--weight", type=int, required=True, help="elliptic weight w")
@click.option("--s", type=int, required=True, help="critical point")
@click.option("--chi", "delta", type=int, default=1, show_default=True,
              help="fundamental discriminant of the quadratic twist")
@click.option("--bits", type=int, default=128, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def lvalue(weight, s, delta, bits, out):
    """Twisted critical L-value of the first newform of the given weight."""
    _even_weight(weight, low=12)
    man = JobManifest("lvalue",
                      {"weight": weight, "s": s, "chi": delta, "bits": bits}, out)
    try:
        chi = KroneckerCharacter(delta)
        forms = newforms(weight, coefficients_needed(weight, chi, bits) + 8)
        if not forms:
            raise ValueError("no newforms at weight %d" % weight)
        _deliver(wire.lvalue_record(lvalue_numeric(forms[0], s, chi, bits)),
                 out, man)
    except _COMPUTE_ERRORS as exc:
        _fail(exc)


@main.command("scriptL")
@click.option("--k", type=int, required=True, help="Siegel weight k")
@click.option("--disc", type=int, required=True,
              help="fundamental discriminant D of the inner twist")
@click.option("--chi", "delta", type=int, required=True,
              help="fundamental discriminant of the even character")
@click.option("--p", type=int, required=True, help="valuation prime")
@click.option("--bits", type=int, default=128, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def scriptl(k, disc, delta, p, bits, out):
    """Reconstructed critical-value combination and its valuation at p."""
    _even_weight(k, low=10)
    man = JobManifest("scriptL", {"k": k, "disc": disc, "chi": delta,
                                  "p": p, "bits": bits}, out)
    try:
        need = coefficients_needed(2 * k - 2, KroneckerCharacter(delta), bits) + 8
        for attempt in range(4):
            f = newforms(2 * k - 2, need)[0]
            try:
                rep = script_L_valuation(k, f, disc, KroneckerCharacter(delta),
                                         p, bits)
                break
            except PrecisionError:
                # the internal precision escalates with the value's size,
                # which is unknowable up front; grow and retry
                if attempt == 3:
                    raise
                need *= 2
        _deliver(wire.scriptL_record(rep), out, man)
    except _COMPUTE_ERRORS as exc:
        _fail(exc)


if __name__ == "__main__":
    main()
