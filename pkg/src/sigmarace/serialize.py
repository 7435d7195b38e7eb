"""Versioned JSON serialization for witnesses, certificates, and criteria.

Schema family "sigma-race/1": big integers travel as decimal strings,
rationals as "p/q", exponents as their canonical string form, verdicts as
plain enums. `verify_document` re-derives every bound of a loaded document
from scratch and raises VerificationError on any mismatch.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import DomainError, VerificationError
from .numerics import Exact, Exponent, ScalarValue
from .primes import is_probable_prime
from . import theorems, witness as wit

SCHEMA = "sigma-race/1"


def _int_out(x: int) -> str:
    return str(int(x))


def _int_in(x) -> int:
    return int(x)


def _frac_out(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def _frac_in(text) -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    num, _, den = str(text).partition("/")
    return Fraction(int(num), int(den) if den else 1)


def _exp_out(s: Exponent) -> str:
    return str(s)


def _exp_in(text) -> Exponent:
    return Exponent.parse(str(text))


def scalar_out(v: ScalarValue) -> dict:
    if isinstance(v, Exact):
        return {"type": "exact", "value": _frac_out(v.value)}
    return {
        "type": "ball",
        "mid": _frac_out(v.mid),
        "rad": _frac_out(v.rad),
        "prec": v.prec,
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def loads(text: str) -> dict:
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA:
        raise DomainError(f"unsupported schema {doc.get('schema')!r}")
    return doc


# ---------------------------------------------------------------------------
# Encoders


def newman_to_doc(w: wit.NewmanWitness) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "newman-witness",
        "a": w.a,
        "b": w.b,
        "c": w.c,
        "d": w.d,
        "k": w.k,
        "p_k": w.p_k,
        "m_k": _int_out(w.m_k),
        "included_primes": [_int_out(p) for p in w.included_primes],
        "n0": _int_out(w.n0),
        "t": _int_out(w.t),
        "n": _int_out(w.n),
        "y": _int_out(w.y),
        "delta": _int_out(w.delta),
        "A": _int_out(w.A),
        "B": _int_out(w.B),
        "q": _int_out(w.q),
        "q_certainty": w.q_certainty,
        "D": w.D,
    }


def newman_from_doc(doc: dict) -> wit.NewmanWitness:
    return wit.NewmanWitness(
        a=doc["a"],
        b=doc["b"],
        c=doc["c"],
        d=doc["d"],
        k=doc["k"],
        p_k=doc["p_k"],
        m_k=_int_in(doc["m_k"]),
        included_primes=tuple(_int_in(p) for p in doc["included_primes"]),
        n0=_int_in(doc["n0"]),
        t=_int_in(doc["t"]),
        n=_int_in(doc["n"]),
        y=_int_in(doc["y"]),
        delta=_int_in(doc["delta"]),
        A=_int_in(doc["A"]),
        B=_int_in(doc["B"]),
        q=_int_in(doc["q"]),
        q_certainty=doc["q_certainty"],
        D=doc["D"],
    )


def certificate_to_doc(cert: wit.Certificate, w: wit.NewmanWitness) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "ratio-certificate",
        "witness": newman_to_doc(w),
        "s": _exp_out(cert.s),
        "prec": cert.prec,
        "upper_left": _frac_out(cert.upper_left),
        "lower_right": _frac_out(cert.lower_right),
        "ratio_power": _frac_out(cert.ratio_power),
        "ratio_bound": _frac_out(cert.ratio_bound),
        "verdict": cert.verdict,
        "q_certainty": cert.q_certainty,
    }


def omega_to_doc(cert: wit.OmegaCertificate, w: wit.NewmanWitness) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "omega-certificate",
        "witness": newman_to_doc(w),
        "omega_upper_left": cert.omega_upper_left,
        "omega_lower_right": cert.omega_lower_right,
        "omega_certified": cert.omega_certified,
        "big_omega_upper_left": cert.big_omega_upper_left,
        "big_omega_lower_right": cert.big_omega_lower_right,
        "big_omega_certified": cert.big_omega_certified,
    }


def triples_to_doc(triples: list[wit.PrimeTripleWitness]) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "prime-triples",
        "s": _exp_out(triples[0].s) if triples else None,
        "triples": [
            {
                "s": _exp_out(t.s),
                "n_ceil": t.n_ceil,
                "threshold": _int_out(t.threshold),
                "p": _int_out(t.p),
                "p_certainty": t.p_certainty,
                "left_greater": t.left_greater,
                "right_greater": t.right_greater,
            }
            for t in triples
        ],
    }


def crt_to_doc(w: wit.CrtWitness) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "crt-witness",
        "a": w.a,
        "b": w.b,
        "d": w.d,
        "swapped": w.swapped,
        "ell": w.ell,
        "k": w.k,
        "q": w.q,
        "p": _int_out(w.p),
        "p_certainty": w.p_certainty,
        "n": _int_out(w.n),
        "m": _int_out(w.m),
        "m_prime": _int_out(w.m_prime),
        "m_prime_certainty": w.m_prime_certainty,
        "s": _exp_out(w.s),
    }


def martin_to_doc(m: wit.MartinNumber) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "martin-number",
        "z": _int_out(m.z),
        "n": _int_out(m.n),
        "digit_count": m.digit_count,
        "z_mod_30": m.z_mod_30,
    }


def criterion_to_doc(c: theorems.DominanceCriterion, kind: str, inputs: dict) -> dict:
    return {
        "schema": SCHEMA,
        "kind": kind,
        "inputs": inputs,
        "s0": _exp_out(c.s0) if c.s0 else None,
        "certified": c.certified,
        "claim": c.claim,
        "clause_fired": c.clause_fired,
        "clauses": [list(pair) for pair in c.clauses],
        "epsilon": _frac_out(c.epsilon) if c.epsilon is not None else None,
        "M": c.M,
        "N": c.N,
    }


def signchange_to_doc(p: theorems.SignChangeParams) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "thma-min-d",
        "inputs": {
            "s0": _exp_out(p.s0),
            "M": p.M,
            "a": p.a,
            "b": p.b,
            "c": p.c,
            "check_d": p.checked_d,
        },
        "threshold_lo": _frac_out(p.threshold_lo),
        "threshold_hi": _frac_out(p.threshold_hi),
        "min_d": _int_out(p.min_d),
        "checked_verdict": p.checked_verdict,
        "claim": p.claim,
    }


def exact_signchange_to_doc(p: theorems.ExactSignChangeParams) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "thma-part2",
        "inputs": {
            "M": p.M,
            "a": p.a,
            "b": p.b,
            "c": p.c,
            "q1": p.q1,
            "q2": p.q2,
        },
        "d": _int_out(p.d),
        "x1": _frac_out(p.x1),
        "x2": _frac_out(p.x2),
        "s0": _exp_out(p.s0),
        "claim": p.claim,
    }


# ---------------------------------------------------------------------------
# From-scratch verification


def _require(ok: bool, label: str):
    if not ok:
        raise VerificationError(f"verification failed: {label}")


def _verify_newman_doc(doc: dict) -> dict:
    w = newman_from_doc(doc)
    wit._verify_newman(w)
    _require(is_probable_prime(w.q), "q passes the probable-prime battery")
    for p in w.included_primes:
        _require(is_probable_prime(p), f"modulus prime {p} is prime")
    rebuilt = wit.build_modulus(w.k, w.c)
    _require(rebuilt.included == w.included_primes, "modulus primes complete")
    _require(rebuilt.p_k == w.p_k, "p_k matches k")
    return {"kind": "newman-witness", "ok": True, "n_digits": len(str(w.n))}


def _verify_certificate_doc(doc: dict) -> dict:
    w = newman_from_doc(doc["witness"])
    wit._verify_newman(w)
    _require(is_probable_prime(w.q), "q passes the probable-prime battery")
    s = _exp_in(doc["s"])
    fresh = wit.certify_ratio(w, s, prec=doc["prec"])
    _require(fresh.upper_left == _frac_in(doc["upper_left"]), "upper_left reproduced")
    _require(fresh.lower_right == _frac_in(doc["lower_right"]), "lower_right reproduced")
    _require(fresh.ratio_bound == _frac_in(doc["ratio_bound"]), "ratio_bound reproduced")
    _require(fresh.verdict == doc["verdict"], "verdict reproduced")
    return {"kind": "ratio-certificate", "ok": True, "verdict": fresh.verdict}


def _verify_omega_doc(doc: dict) -> dict:
    w = newman_from_doc(doc["witness"])
    wit._verify_newman(w)
    fresh = wit.certify_omega(w)
    for field in (
        "omega_upper_left",
        "omega_lower_right",
        "omega_certified",
        "big_omega_upper_left",
        "big_omega_lower_right",
        "big_omega_certified",
    ):
        _require(getattr(fresh, field) == doc[field], f"{field} reproduced")
    return {"kind": "omega-certificate", "ok": True}


def _verify_triples_doc(doc: dict) -> dict:
    for t in doc["triples"]:
        s = _exp_in(t["s"])
        p = _int_in(t["p"])
        n = t["n_ceil"]
        _require(n == wit._ceil_exponent(s), "n = ceil(s)")
        _require(_int_in(t["threshold"]) == 1 + n * 2 ** (n + 1), "threshold formula")
        _require(p > _int_in(t["threshold"]), "p exceeds the threshold")
        _require(is_probable_prime(p), "p is prime")
        _require(wit._certified_sign(p - 1, p, s) > 0, "sigma_s(p-1) > sigma_s(p)")
        _require(wit._certified_sign(p + 1, p, s) > 0, "sigma_s(p+1) > sigma_s(p)")
    return {"kind": "prime-triples", "ok": True, "count": len(doc["triples"])}


def _verify_crt_doc(doc: dict) -> dict:
    a, b, d = doc["a"], doc["b"], doc["d"]
    s = _exp_in(doc["s"])
    q, p, n, m = doc["q"], _int_in(doc["p"]), _int_in(doc["n"]), _int_in(doc["m"])
    ell, k = doc["ell"], doc["k"]
    _require(ell == d - b and b < d, "ell = d - b with b < d")
    _require(k == wit._ceil_exponent(s), "k = ceil(s)")
    _require(is_probable_prime(q) and (a * ell) % q != 0, "auxiliary prime q")
    _require(p % q == ell % q, "p = ell (mod q)")
    _require(p % a == d % a, "p = d (mod a)")
    _require(p > max(d, ell + ell * k * q ** (k + 1)), "p above the threshold")
    _require(is_probable_prime(p), "p is prime")
    _require(a * n + d == p, "n = (p - d)/a")
    _require(wit._certified_sign(a * n + b, a * n + d, s) > 0, "n-side comparison")
    _require(is_probable_prime(a * m + b), "a*m+b is prime")
    _require(wit._certified_sign(a * m + b, a * m + d, s) < 0, "m-side comparison")
    return {"kind": "crt-witness", "ok": True}


def _verify_martin_doc(doc: dict) -> dict:
    fresh = wit.martin_number()
    _require(_int_in(doc["z"]) == fresh.z, "z reproduced")
    _require(_int_in(doc["n"]) == fresh.n, "n reproduced")
    _require(doc["digit_count"] == fresh.digit_count, "digit count reproduced")
    _require(doc["z_mod_30"] == fresh.z_mod_30, "z mod 30 reproduced")
    return {"kind": "martin-number", "ok": True, "digit_count": fresh.digit_count}


def _verify_criterion_doc(doc: dict) -> dict:
    kind = doc["kind"]
    ins = doc["inputs"]
    if kind == "dominance-s0":
        fresh = theorems.dominance_s0(ins["a"], ins["b"], ins["c"], ins["d"])
    elif kind == "dominance-eventual":
        fresh = theorems.dominance_eventual(ins["a"], ins["b"], ins["c"], ins["d"])
    elif kind == "always-less":
        fresh = theorems.always_less_check(
            ins["a"], ins["b"], ins["c"], ins["d"], _exp_in(ins["s0"])
        )
    elif kind == "always-less-sumform":
        fresh = theorems.always_less_check_sumform(
            ins["a"], ins["b"], ins["c"], ins["d"], _exp_in(ins["s0"])
        )
    else:  # pragma: no cover
        raise DomainError(f"unknown criterion kind {kind}")
    _require(fresh.certified == doc["certified"], "certified flag reproduced")
    _require(fresh.clause_fired == doc["clause_fired"], "fired clause reproduced")
    _require(
        (_exp_out(fresh.s0) if fresh.s0 else None) == doc["s0"], "s0 reproduced"
    )
    return {"kind": kind, "ok": True, "certified": fresh.certified}


def _verify_thma_min_d(doc: dict) -> dict:
    ins = doc["inputs"]
    fresh = theorems.thmA_min_d(
        _exp_in(ins["s0"]), ins["M"], ins["a"], ins["b"], ins["c"], ins["check_d"]
    )
    _require(_int_out(fresh.min_d) == doc["min_d"], "min_d reproduced")
    _require(fresh.checked_verdict == doc["checked_verdict"], "validation reproduced")
    return {"kind": "thma-min-d", "ok": True, "min_d": fresh.min_d}


def _verify_thma_part2(doc: dict) -> dict:
    ins = doc["inputs"]
    fresh = theorems.thmA_part2_params(
        ins["M"], ins["a"], ins["b"], ins["c"], ins["q1"], ins["q2"]
    )
    _require(_int_out(fresh.d) == doc["d"], "d reproduced")
    _require(_frac_out(fresh.x1) == doc["x1"], "x1 reproduced")
    _require(_frac_out(fresh.x2) == doc["x2"], "x2 reproduced")
    _require(_exp_out(fresh.s0) == doc["s0"], "s0 reproduced")
    return {"kind": "thma-part2", "ok": True, "s0": str(fresh.s0)}


_VERIFIERS = {
    "newman-witness": _verify_newman_doc,
    "ratio-certificate": _verify_certificate_doc,
    "omega-certificate": _verify_omega_doc,
    "prime-triples": _verify_triples_doc,
    "crt-witness": _verify_crt_doc,
    "martin-number": _verify_martin_doc,
    "dominance-s0": _verify_criterion_doc,
    "dominance-eventual": _verify_criterion_doc,
    "always-less": _verify_criterion_doc,
    "always-less-sumform": _verify_criterion_doc,
    "thma-min-d": _verify_thma_min_d,
    "thma-part2": _verify_thma_part2,
}


def verify_document(doc: dict) -> dict:
    """Re-check a sigma-race/1 document from scratch; raise on any mismatch."""
    if doc.get("schema") != SCHEMA:
        raise VerificationError(f"unsupported schema {doc.get('schema')!r}")
    kind = doc.get("kind")
    if kind not in _VERIFIERS:
        raise VerificationError(f"no verifier for kind {kind!r}")
    return _VERIFIERS[kind](doc)
