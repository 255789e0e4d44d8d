import json
import random

import pytest

from concat_calc.concat_ode import certificate_ode, verify_certificate
from concat_calc.corpus import random_operator
from concat_calc.exppoly import PolyOperator
from concat_calc.parser import parse_operator
from concat_calc.pde import certificate_pde, verify_certificate_pde
from concat_calc.scalar import BigFloatField
from concat_calc.serialize import (SCHEMA, CertificateFormatError, certificate_from_json,
                                   certificate_to_json, dumps, plane_certificate_from_json,
                                   plane_certificate_to_json)


def roundtrip(obj):
    return json.loads(dumps(obj))


def test_exact_roundtrip():
    rng = random.Random(2)
    for _ in range(20):
        p = random_operator(rng, rng.randint(1, 5), "distinct")
        cert = certificate_ode(p)
        back, q = certificate_from_json(roundtrip(certificate_to_json(cert, p)))
        assert back == cert and q == PolyOperator(p.coeffs)


def test_bigfloat_roundtrip_is_lossless():
    fld = BigFloatField(160)
    p = PolyOperator([-2, 0, 1])
    cert = certificate_ode(p, "numeric", fld)
    obj = certificate_to_json(cert, p)
    assert obj["field"]["name"] == "bigfloat"
    back, _ = certificate_from_json(roundtrip(obj))
    assert back.lam == cert.lam and back.field == fld
    assert verify_certificate(back, p).passed


def test_plane_roundtrip_and_strings():
    P = parse_operator("t^2 + x1^4")
    cert = certificate_pde(P)
    obj = plane_certificate_to_json(cert, P, verify_certificate_pde(cert, P))
    assert obj["schema"] == SCHEMA
    text = dumps(obj)
    assert text.endswith("\n")

    def leaves(o):
        if isinstance(o, dict):
            for v in o.values():
                yield from leaves(v)
        elif isinstance(o, list):
            for v in o:
                yield from leaves(v)
        else:
            yield o

    assert all(v is None or isinstance(v, str) for v in leaves(json.loads(text)))
    back, P2 = plane_certificate_from_json(json.loads(text))
    assert P2 == P and back == cert


def test_bad_documents():
    p = PolyOperator([-1, 0, 1])
    obj = certificate_to_json(certificate_ode(p), p)
    with pytest.raises(CertificateFormatError):
        certificate_from_json({**obj, "schema": "other/2"})
    with pytest.raises(CertificateFormatError):
        certificate_from_json({**obj, "variant": "maybe"})
    broken = dict(obj)
    del broken["u1_terms"]
    with pytest.raises(CertificateFormatError):
        certificate_from_json(broken)
