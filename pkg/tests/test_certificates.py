import json
from fractions import Fraction

import pytest

from cantorembed.certificates import (
    ExpansionCertificate,
    FeasibilityCertificate,
    certificate_json,
    decode_certificate,
    encode_certificate,
    replay,
)
from cantorembed.embed import (
    EmbeddingProblem,
    decide_embedding_exact,
    feasible_offsets,
    lemma_ex1_family,
    refute_all_offsets_hole,
    unique_signed_expansion,
    verify_embedding,
)
from cantorembed.selfsimilar import CentralCantor

F = Fraction
C3, C4, C9 = (CentralCantor(F(1, k)) for k in (3, 4, 9))


def _certificates():
    yield decide_embedding_exact(EmbeddingProblem(C3, C9, 1, 0))
    yield decide_embedding_exact(EmbeddingProblem(C3, C9, 1, F(1, 3)))
    yield verify_embedding(EmbeddingProblem(C3, C4, 1, 0), 6)
    yield verify_embedding(EmbeddingProblem(C3, C9, 1, 0), 6)
    yield refute_all_offsets_hole(F(1, 5), F(1, 11), F(3, 2))
    yield FeasibilityCertificate(C3, C4, 1, 12, feasible_offsets(C3, C4, 1, 12))
    yield FeasibilityCertificate(C3, C9, 1, 5, feasible_offsets(C3, C9, 1, 5))
    yield ExpansionCertificate(F(2, 5), F(3, 7), 12, unique_signed_expansion(F(2, 5), F(3, 7), 12))
    yield ExpansionCertificate(F(9, 20), F(11, 29), 12, unique_signed_expansion(F(9, 20), F(11, 29), 12))


CERTS = list(_certificates())


@pytest.mark.parametrize("cert", CERTS, ids=[c.kind for c in CERTS])
def test_every_kind_replays_from_text(cert):
    text = certificate_json(cert)
    result = replay(text)
    assert result.ok, result.detail
    assert result.kind == cert.kind
    assert json.loads(text)["format"] == "cantorembed-certificate"


@pytest.mark.parametrize("cert", CERTS, ids=[c.kind for c in CERTS])
def test_serialisation_is_canonical(cert):
    text = certificate_json(cert)
    kind, decoded = decode_certificate(text)
    assert kind == cert.kind
    if not isinstance(decoded, dict):
        assert certificate_json(decoded) == text


def test_algebraic_certificate_replays():
    fam = lemma_ex1_family(2)
    cert = verify_embedding(EmbeddingProblem(CentralCantor(fam.alpha), CentralCantor(fam.beta), fam.lam, 0), 6)
    assert replay(certificate_json(cert)).ok


def test_tampered_certificates_fail():
    cert = decide_embedding_exact(EmbeddingProblem(C3, C9, 1, 0))
    obj = encode_certificate(cert)
    obj["verdict"]["states"] = obj["verdict"]["states"][:-1]
    obj["verdict"]["state_closure_size"] -= 1
    assert not replay(obj).ok

    hole = encode_certificate(refute_all_offsets_hole(F(1, 5), F(1, 11), 1))
    hole["verdict"]["m"] += 7
    assert not replay(hole).ok

    feas = encode_certificate(FeasibilityCertificate(C3, C4, 1, 12, feasible_offsets(C3, C4, 1, 12)))
    feas["verdict"]["empty_at"] = None
    assert not replay(feas).ok

    refuted = encode_certificate(verify_embedding(EmbeddingProblem(C3, C4, 1, 0), 6))
    refuted["problem"]["c"] = "0/1"
    refuted["problem"]["F"]["ratio"] = "1/9"
    refuted["problem"]["F"]["digits"] = ["0/1", "8/9"]
    assert not replay(refuted).ok


def test_malformed_input_is_reported():
    assert not replay({"format": "cantorembed-certificate", "kind": "ExactEmbeds"}).ok
    assert not replay({"format": "something-else"}).ok
    assert not replay('{"format": "cantorembed-certificate", "kind": "Nope", "problem": {}, "verdict": {}}').ok
