"""JSON serialisation and replay of certificates.

Every certificate is a self-contained JSON object: the problem data (as
exact "p/q" strings or algebraic descriptions), the parameters used and the
verdict.  ``replay`` rebuilds everything from the JSON alone.  Witness
verdicts (refutations, state closures, traces, hole certificates) are
re-checked directly; the others are recomputed and compared.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import algebraic as A
from .embed import (
    Branches,
    ConsistentToDepth,
    EmbeddingCertificate,
    EmbeddingProblem,
    ExactEmbeds,
    ExactRefuted,
    FeasibleOffsets,
    ForcedPrefix,
    HoleCertificate,
    RefutedAtDepth,
    check_hole_certificate,
    check_refutation,
    check_refuted_trace,
    check_state_closure,
    feasible_offsets,
    unique_signed_expansion,
    verify_embedding,
)
from .encoding import DecodeContext, decode_real, encode_real
from .errors import CantorEmbedError, ReplayFailed
from .selfsimilar import HomogeneousIFS

FORMAT = "cantorembed-certificate"
VERSION = 1


@dataclass
class FeasibilityCertificate:
    """feasible_offsets(E, F, lam, depth) together with its outcome."""

    E: HomogeneousIFS
    F: HomogeneousIFS
    lam: object
    depth: int
    result: FeasibleOffsets

    @property
    def kind(self) -> str:
        return "FeasibleOffsets"


@dataclass
class ExpansionCertificate:
    """unique_signed_expansion(alpha, u, depth) together with its outcome."""

    alpha: object
    u: object
    depth: int
    result: object

    @property
    def kind(self) -> str:
        return type(self.result).__name__


# -- encoding -----------------------------------------------------------------------------

def _ifs(ifs: HomogeneousIFS) -> dict:
    return {"ratio": encode_real(ifs.ratio), "digits": [encode_real(d) for d in ifs.digits]}


def _gap(gap):
    return [None if g is None else encode_real(g) for g in gap]


def _states(states):
    return [[e, encode_real(t)] for e, t in states]


def _cover(cover):
    return [[encode_real(a), encode_real(b)] for a, b in cover]


def _problem(prob: EmbeddingProblem) -> dict:
    return {
        "E": _ifs(prob.E),
        "F": _ifs(prob.F),
        "lambda": encode_real(prob.lam),
        "c": None if prob.c is None else encode_real(prob.c),
    }


def _verdict(v) -> dict:
    if isinstance(v, ConsistentToDepth):
        return {"depth_E": v.depth_E, "depth_F": v.depth_F,
                "cylinders_checked": v.cylinders_checked, "undecided_points": v.undecided_points}
    if isinstance(v, RefutedAtDepth):
        return {"depth_E": v.depth_E, "depth_F": v.depth_F, "witness_word": list(v.witness_word),
                "witness_interval": [encode_real(x) for x in v.witness_interval],
                "separating_gap": _gap(v.separating_gap)}
    if isinstance(v, ExactEmbeds):
        return {"state_closure_size": v.state_closure_size, "states": _states(v.states)}
    if isinstance(v, ExactRefuted):
        return {"unreachable_state_trace": _states(v.unreachable_state_trace),
                "endpoint": None if v.endpoint is None else encode_real(v.endpoint)}
    if isinstance(v, HoleCertificate):
        return {"ell": v.ell, "m": v.m, "n": v.n, "gamma": encode_real(v.gamma)}
    raise TypeError(f"unknown verdict {type(v).__name__}")


def encode_certificate(cert) -> dict:
    out = {"format": FORMAT, "version": VERSION, "kind": cert.kind}
    if isinstance(cert, EmbeddingCertificate):
        out["problem"] = _problem(cert.problem)
        out["verdict"] = _verdict(cert.verdict)
    elif isinstance(cert, FeasibilityCertificate):
        out["problem"] = {"E": _ifs(cert.E), "F": _ifs(cert.F), "lambda": encode_real(cert.lam)}
        out["parameters"] = {"depth": cert.depth}
        out["verdict"] = {"empty_at": cert.result.empty_at,
                          "depths": [[n, m, _cover(cov)] for n, m, cov in cert.result.per_depth]}
    elif isinstance(cert, ExpansionCertificate):
        out["problem"] = {"alpha": encode_real(cert.alpha), "u": encode_real(cert.u)}
        out["parameters"] = {"depth": cert.depth}
        r = cert.result
        if isinstance(r, ForcedPrefix):
            out["verdict"] = {"digits": list(r.digits)}
        else:
            out["verdict"] = {"first_branch_depth": r.first_branch_depth,
                              "digits": list(r.digits), "prefix": list(r.prefix)}
    else:
        raise TypeError(f"cannot encode {type(cert).__name__}")
    return out


def certificate_json(cert) -> str:
    """Canonical text: sorted keys, so equal certificates give equal bytes."""
    return json.dumps(encode_certificate(cert), sort_keys=True, indent=2)


# -- decoding -----------------------------------------------------------------------------

def _decode_ifs(obj, ctx) -> HomogeneousIFS:
    return HomogeneousIFS(decode_real(obj["ratio"], ctx), [decode_real(d, ctx) for d in obj["digits"]])


def _decode_states(rows, ctx):
    return tuple((int(e), decode_real(t, ctx)) for e, t in rows)


def _decode_gap(obj, ctx):
    return tuple(None if g is None else decode_real(g, ctx) for g in obj)


def decode_certificate(obj):
    if isinstance(obj, str):
        obj = json.loads(obj)
    if obj.get("format") != FORMAT:
        raise ReplayFailed("not a certificate")
    ctx = DecodeContext()
    kind = obj["kind"]
    p, v = obj["problem"], obj["verdict"]
    if kind == "FeasibleOffsets":
        E, F = _decode_ifs(p["E"], ctx), _decode_ifs(p["F"], ctx)
        lam = decode_real(p["lambda"], ctx)
        per_depth = [(n, m, [tuple(decode_real(x, ctx) for x in iv) for iv in cov])
                     for n, m, cov in v["depths"]]
        return kind, {"E": E, "F": F, "lam": lam, "depth": obj["parameters"]["depth"],
                      "empty_at": v["empty_at"], "per_depth": per_depth}
    if kind in ("ForcedPrefix", "Branches"):
        alpha, u = decode_real(p["alpha"], ctx), decode_real(p["u"], ctx)
        if kind == "ForcedPrefix":
            result = ForcedPrefix(tuple(v["digits"]))
        else:
            result = Branches(v["first_branch_depth"], tuple(v["digits"]), tuple(v["prefix"]))
        return kind, ExpansionCertificate(alpha, u, obj["parameters"]["depth"], result)
    E, F = _decode_ifs(p["E"], ctx), _decode_ifs(p["F"], ctx)
    lam = decode_real(p["lambda"], ctx)
    c = None if p["c"] is None else decode_real(p["c"], ctx)
    prob = EmbeddingProblem(E, F, lam, c)
    if kind == "ConsistentToDepth":
        verdict = ConsistentToDepth(v["depth_E"], v["depth_F"], v["cylinders_checked"], v["undecided_points"])
    elif kind == "RefutedAtDepth":
        verdict = RefutedAtDepth(v["depth_E"], v["depth_F"], tuple(v["witness_word"]),
                                 tuple(decode_real(x, ctx) for x in v["witness_interval"]),
                                 _decode_gap(v["separating_gap"], ctx))
    elif kind == "ExactEmbeds":
        verdict = ExactEmbeds(v["state_closure_size"], _decode_states(v["states"], ctx))
    elif kind == "ExactRefuted":
        endpoint = None if v["endpoint"] is None else decode_real(v["endpoint"], ctx)
        verdict = ExactRefuted(_decode_states(v["unreachable_state_trace"], ctx), endpoint)
    elif kind == "HoleCertificate":
        verdict = HoleCertificate(v["ell"], v["m"], v["n"], decode_real(v["gamma"], ctx))
    else:
        raise ReplayFailed(f"unknown certificate kind {kind!r}")
    return kind, EmbeddingCertificate(verdict, prob, {})


# -- replay -----------------------------------------------------------------------------------

@dataclass(frozen=True)
class ReplayResult:
    ok: bool
    kind: str
    detail: str = ""


def _same(x, y) -> bool:
    return A.compare(x, y) == 0


def _replay_embedding(cert: EmbeddingCertificate) -> tuple[bool, str]:
    prob, v = cert.problem, cert.verdict
    if isinstance(v, RefutedAtDepth):
        return check_refutation(prob, v), "witness image re-derived and found in a gap"
    if isinstance(v, ExactEmbeds):
        ok = len(v.states) == v.state_closure_size and check_state_closure(prob, v.states)
        return ok, "state set contains the root and is closed under the successor rule"
    if isinstance(v, ExactRefuted):
        return check_refuted_trace(prob, v.unreachable_state_trace), "trace re-walked to a refuted state"
    if isinstance(v, HoleCertificate):
        alpha, beta = prob.E.ratio, prob.F.ratio
        ok = (prob.E == HomogeneousIFS(alpha, [0, 1 - alpha])
              and prob.F == HomogeneousIFS(beta, [0, 1 - beta])
              and _same(v.gamma, beta ** v.ell)
              and check_hole_certificate(alpha, beta, prob.lam, v))
        return ok, "inequality chain re-checked exactly"
    if isinstance(v, ConsistentToDepth):
        again = verify_embedding(prob, v.depth_E, v.depth_F).verdict
        return again == v, "finite-depth check recomputed"
    return False, "unsupported verdict"


def _replay_feasible(data) -> tuple[bool, str]:
    result = feasible_offsets(data["E"], data["F"], data["lam"], data["depth"])
    if result.empty_at != data["empty_at"] or len(result.per_depth) != len(data["per_depth"]):
        return False, "emptiness depth differs"
    for (n, m, cov), (n2, m2, ivs) in zip(result.per_depth, data["per_depth"]):
        if (n, m) != (n2, m2) or len(cov) != len(ivs):
            return False, f"cover at depth {n} differs"
        if not all(_same(a, c) and _same(b, d) for (a, b), (c, d) in zip(cov, ivs)):
            return False, f"cover at depth {n} differs"
        if n > 0 and not cov.subset_of(result.per_depth[n - 1][2]):
            return False, f"cover at depth {n} is not inside the previous one"
    return True, "feasible covers recomputed and nested"


def replay(obj) -> ReplayResult:
    """Re-verify a certificate from its JSON text or decoded dict."""
    try:
        kind, cert = decode_certificate(obj)
        if kind == "FeasibleOffsets":
            ok, detail = _replay_feasible(cert)
        elif isinstance(cert, ExpansionCertificate):
            again = unique_signed_expansion(cert.alpha, cert.u, cert.depth)
            ok, detail = again == cert.result, "expansion search recomputed"
        else:
            ok, detail = _replay_embedding(cert)
    except (CantorEmbedError, KeyError, TypeError, ValueError) as exc:
        return ReplayResult(False, str(obj.get("kind", "?")) if isinstance(obj, dict) else "?",
                            f"malformed certificate: {exc}")
    return ReplayResult(bool(ok), kind, detail)
