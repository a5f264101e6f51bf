"""JSON and CSV wire formats for everything the tools emit.

Exact coefficients travel as the decimal-free strings of elt_to_str; numeric
quantities travel as integer-mantissa hex-floats "[-]0x<man>p<exp>" that
round-trip arbitrary-precision values bit for bit, with a decimal rendering
kept alongside for human eyes.  Emitters sort keys and fix the layout, so
equal inputs serialize to equal bytes.
"""

import csv
import json

import mpmath
from gmpy2 import mpq

from .coeffring import elt_from_str, elt_to_str
from .jacobi_kohnen import JacobiForm, PlusForm
from .qseries import QExpansion
from .sklift import SiegelForm


def hexfloat(x):
    """Integer-mantissa hex form of a finite mpmath float."""
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    if man == 0:
        return "0x0p+0"
    return "%s0x%xp%+d" % ("-" if sign else "", man, exp)


def parse_hexfloat(s):
    s = s.strip()
    neg = s.startswith("-")
    if neg:
        s = s[1:]
    if not s.startswith("0x"):
        raise ValueError("not a hex-float: %r" % s)
    man_s, exp_s = s[2:].split("p")
    man = int(man_s, 16)
    with mpmath.workprec(max(man.bit_length() + 8, 53)):
        v = mpmath.mpf(man) * mpmath.power(2, int(exp_s))
    return -v if neg else v


def canonical_json(obj):
    """The one serialization used everywhere: byte-stable for equal input."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _disc_of(values):
    for v in values:
        d = getattr(v, "d", 0)
        if d:
            return d
    return 0


def qexp_record(q):
    q = getattr(q, "qexp", q)  # a newform serializes as its expansion
    return {"kind": "qexp", "weight": q.weight, "prec": q.prec,
            "ring": {"disc": _disc_of(q.coeffs)},
            "coeffs": [elt_to_str(c) for c in q.coeffs]}


def qexp_from_record(rec):
    assert rec["kind"] == "qexp"
    return QExpansion(rec["weight"], [elt_from_str(s) for s in rec["coeffs"]])


def jacobi_record(phi):
    kind = "plus" if isinstance(phi, PlusForm) else "jacobi"
    weight = phi.jacobi_weight if kind == "plus" else phi.weight
    coeffs = [[n, elt_to_str(phi.coeffs[n])]
              for n in range(phi.prec + 1) if phi.coeffs[n]]
    rec = {"kind": kind, "weight": weight, "prec": phi.prec, "coeffs": coeffs}
    if kind == "jacobi":
        rec["index"] = 1
    return rec


def jacobi_from_record(rec):
    out = [mpq(0)] * (rec["prec"] + 1)
    for n, s in rec["coeffs"]:
        out[n] = elt_from_str(s)
    if rec["kind"] == "plus":
        return PlusForm(rec["weight"], out)
    assert rec["kind"] == "jacobi" and rec.get("index", 1) == 1
    return JacobiForm(rec["weight"], out)


def siegel_record(F):
    trips = sorted(F.coeffs)
    return {"kind": "siegel", "weight": F.weight, "prec": F.prec,
            "ring": {"disc": _disc_of(F.coeffs.values())},
            "coeffs": [[n, r, m, elt_to_str(F.coeffs[(n, r, m)])]
                       for (n, r, m) in trips]}


def siegel_from_record(rec):
    assert rec["kind"] == "siegel"
    coeffs = {(n, r, m): elt_from_str(s) for n, r, m, s in rec["coeffs"]}
    return SiegelForm(rec["weight"], coeffs, rec["prec"])


def lvalue_record(rep):
    dps = max(8, int(rep.bits / 3.33))
    return {"kind": "lvalue",
            "s": rep.s,
            "chi": rep.chi.delta if rep.chi is not None else None,
            "bits": rep.bits,
            "value": hexfloat(rep.value),
            "err": hexfloat(rep.err),
            "value_dec": mpmath.nstr(rep.value, dps),
            "err_dec": mpmath.nstr(rep.err, 5),
            "method": rep.method}


def scriptL_record(rep):
    raw = rep.raw if isinstance(rep.raw, tuple) else (rep.raw,)
    return {"kind": "scriptL-valuation",
            "k": rep.k, "disc": rep.disc, "chi": rep.chi.delta,
            "p": rep.prime, "bits": rep.bits,
            "confidence": rep.confidence,
            "value": elt_to_str(rep.value) if rep.value is not None else None,
            "pi_exponent": rep.pi_exponent,
            "i_power": rep.i_power,
            "ordp": rep.ordp,
            "raw": [[hexfloat(v.real), hexfloat(v.imag)] for v in raw],
            "rel_err": hexfloat(rep.err)}


def siegel_csv(F, fh):
    """Coefficient table with columns n,r,m,value (reduced triples, sorted)."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["n", "r", "m", "value"])
    for T in sorted(F.coeffs):
        w.writerow([T[0], T[1], T[2], elt_to_str(F.coeffs[T])])
