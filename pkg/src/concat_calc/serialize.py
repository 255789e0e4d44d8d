"""Certificate JSON (schema ``concat-cert/1``).

Every number is written as a string.  Exponential polynomials are stored both
as readable text and as structured terms; only the structured form is read
back, so bigfloat certificates survive a round trip without loss.
"""

from __future__ import annotations

import json
from typing import Any

from .concat_ode import Certificate, Closure, Counterexample, Report
from .distribution import ConcatFunction, DeltaComb, Distribution
from .exppoly import ExpPoly, Poly1, PolyOperator, format_exppoly
from .parser import parse_operator, print_operator
from .pde import MultiPoly, PlaneWaveCertificate
from .scalar import Field, field_from_json, field_to_json, scalar_from_json, scalar_to_json

SCHEMA = "concat-cert/1"


class CertificateFormatError(ValueError):
    pass


def _exppoly_to_json(fld: Field, a: ExpPoly) -> list[dict]:
    return [{"lambda": scalar_to_json(fld, lam), "poly": [scalar_to_json(fld, c) for c in q.coeffs]}
            for lam, q in a.terms]


def _exppoly_from_json(fld: Field, obj: list[dict]) -> ExpPoly:
    return ExpPoly([(scalar_from_json(fld, t["lambda"]),
                     Poly1([scalar_from_json(fld, c) for c in t["poly"]], fld)) for t in obj], fld)


def certificate_to_json(cert: Certificate, p: Poly1, report: Report | None = None) -> dict[str, Any]:
    fld = cert.field
    out: dict[str, Any] = {
        "schema": SCHEMA,
        "variant": cert.variant,
        "field": field_to_json(fld),
        "p": {"text": print_operator(p), "coeffs": [scalar_to_json(p.field, c) for c in p.coeffs],
              "field": field_to_json(p.field)},
        "lambda": scalar_to_json(fld, cert.lam),
    }
    if isinstance(cert, Counterexample):
        out.update({
            "kind": cert.kind,
            "mu": None if cert.mu is None else scalar_to_json(fld, cert.mu),
            "u1": format_exppoly(cert.u1),
            "u2": format_exppoly(cert.u2),
            "u1_terms": _exppoly_to_json(fld, cert.u1),
            "u2_terms": _exppoly_to_json(fld, cert.u2),
            "residual_comb": [scalar_to_json(fld, c) for c in cert.residual.singular.coeffs],
            "residual_left": _exppoly_to_json(fld, cert.residual.regular.left),
            "residual_right": _exppoly_to_json(fld, cert.residual.regular.right),
        })
    if report is not None:
        out["status"] = report.status
        out["checks"] = report.to_json()
    return out


def certificate_from_json(obj: dict[str, Any]) -> tuple[Certificate, PolyOperator]:
    if obj.get("schema") != SCHEMA:
        raise CertificateFormatError(f"expected schema {SCHEMA!r}, found {obj.get('schema')!r}")
    try:
        fld = field_from_json(obj["field"])
        pf = field_from_json(obj["p"]["field"])
        p = PolyOperator([scalar_from_json(pf, c) for c in obj["p"]["coeffs"]], pf)
        lam = scalar_from_json(fld, obj["lambda"])
        if obj["variant"] == "closure":
            return Closure(fld, lam), p
        if obj["variant"] != "counterexample":
            raise CertificateFormatError(f"unknown variant {obj['variant']!r}")
        mu = None if obj.get("mu") is None else scalar_from_json(fld, obj["mu"])
        residual = Distribution(
            ConcatFunction(_exppoly_from_json(fld, obj["residual_left"]),
                           _exppoly_from_json(fld, obj["residual_right"])),
            DeltaComb([scalar_from_json(fld, c) for c in obj["residual_comb"]], fld),
        )
        cert = Counterexample(fld, obj["kind"], lam, mu, _exppoly_from_json(fld, obj["u1_terms"]),
                              _exppoly_from_json(fld, obj["u2_terms"]), residual)
        return cert, p
    except (KeyError, TypeError) as exc:
        raise CertificateFormatError(f"malformed certificate: missing or bad field {exc}") from None


def plane_certificate_to_json(cert: PlaneWaveCertificate, P: MultiPoly,
                              report: Report | None = None) -> dict[str, Any]:
    out = certificate_to_json(cert.base, cert.specialized, report)
    out["operator"] = print_operator(P)
    out["d"] = str(P.d)
    out["xi"] = [scalar_to_json(cert.specialized.field, x) for x in cert.xi]
    out["mode"] = cert.mode
    return out


def plane_certificate_from_json(obj: dict[str, Any]) -> tuple[PlaneWaveCertificate, MultiPoly]:
    base, p_xi = certificate_from_json(obj)
    try:
        P = parse_operator(obj["operator"], int(obj["d"]))
        xi = tuple(scalar_from_json(p_xi.field, x) for x in obj["xi"])
        return PlaneWaveCertificate(xi, obj["mode"], base, p_xi), P
    except (KeyError, TypeError) as exc:
        raise CertificateFormatError(f"malformed certificate: missing or bad field {exc}") from None


def dumps(obj: dict[str, Any]) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
