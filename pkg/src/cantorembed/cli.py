"""Command-line interface.

Exit codes: 0 for a positive answer (Pisot, embeds, consistent, PASS,
replay succeeded), 1 for a negative one (not Pisot, refuted, FAIL,
replay rejected), 2 when a budget ran out or the method does not apply,
3 for input or internal errors.

Polynomials are given constant term first: ``--poly -2,0,1`` is x**2 - 2.
Exact parameters accept "p/q", integers, terminating decimals or a JSON
algebraic description such as '{"polynomial": [-1, -2, 1], "interval": ["2", "3"]}'.
Only the floating-point fourier commands accept "pi" in frequencies.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from fractions import Fraction

from . import algebraic as A
from .certificates import (
    ExpansionCertificate,
    FeasibilityCertificate,
    certificate_json,
    replay,
)
from .dimension import (
    attractor_dim_estimate,
    default_grid,
    furstenberg_sweep,
    intersection_dim_estimate,
)
from .embed import (
    Branches,
    ConsistentToDepth,
    EmbeddingProblem,
    ExactEmbeds,
    ForcedPrefix,
    decide_embedding_exact,
    feasible_offsets,
    lemma_ex1_family,
    refute_all_offsets_hole,
    translate_set,
    unique_signed_expansion,
    verify_embedding,
)
from .encoding import decode_real, encode_real, fraction_text, parse_fraction
from .errors import (
    BudgetExceeded,
    CantorEmbedError,
    DepthBudgetExceeded,
    IncommensurableRatios,
    NotApplicable,
    StateBudgetExceeded,
)
from .fourier import CantorMeasure, EtaConstruction, PiMultiple, probe_sequence, wiener_average
from .selfsimilar import CentralCantor, HomogeneousIFS, cantor_p_set

EXIT_YES, EXIT_NO, EXIT_UNDECIDED, EXIT_ERROR = 0, 1, 2, 3


class UsageError(CantorEmbedError):
    pass


# -- parsing helpers --------------------------------------------------------------------------

def parse_exact(text):
    """An exact real: rational text or a JSON algebraic description."""
    if isinstance(text, (int, Fraction)) or not isinstance(text, str):
        if isinstance(text, dict):
            return decode_real(text)
        return parse_fraction(text)
    text = text.strip()
    if text.startswith("{"):
        return decode_real(json.loads(text))
    try:
        return parse_fraction(text)
    except ValueError:
        raise UsageError(f"expected an exact number, got {text!r}") from None


def parse_int_list(text) -> list[int]:
    if isinstance(text, list):
        return [int(x) for x in text]
    return [int(x) for x in str(text).split(",") if x.strip()]


def parse_pair(text) -> tuple[Fraction, Fraction]:
    parts = text if isinstance(text, list) else str(text).split(",")
    if len(parts) != 2:
        raise UsageError(f"expected 'lo,hi', got {text!r}")
    return parse_fraction(parts[0]), parse_fraction(parts[1])


def parse_depths(text) -> list[int]:
    """"4..10" or "4,5,6"."""
    text = str(text)
    m = re.fullmatch(r"\s*(\d+)\s*\.\.\s*(\d+)\s*", text)
    if m:
        return list(range(int(m.group(1)), int(m.group(2)) + 1))
    return parse_int_list(text)


def parse_frequency(text):
    """A frequency for the floating-point commands: "pi", "k*pi", "p/q*pi" or a number."""
    text = str(text).strip().replace(" ", "")
    if text == "pi":
        return PiMultiple(Fraction(1))
    m = re.fullmatch(r"(.+)\*pi", text)
    if m:
        return PiMultiple(parse_fraction(m.group(1)))
    try:
        return parse_fraction(text)
    except ValueError:
        return float(text)


# -- output -----------------------------------------------------------------------------------

def emit(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _sets_from(args) -> tuple[HomogeneousIFS, HomogeneousIFS]:
    """C_alpha and C_beta from the --alpha and --beta flags, over one shared field."""
    for name in ("alpha", "beta"):
        if getattr(args, name, None) is None:
            raise UsageError(f"--{name} is required")
    alpha, beta = A.lift_all(parse_exact(args.alpha), parse_exact(args.beta))
    return CentralCantor(alpha), CentralCantor(beta)


# -- pisot-check ---------------------------------------------------------------------------------

def cmd_pisot(args) -> int:
    poly = parse_int_list(args.poly)
    if args.root:
        selector = parse_pair(args.root)
    else:
        selector = A.AlgebraicReal.largest_root(poly)
    verdict = A.is_pisot(poly, selector)
    lo, hi = verdict.root.interval if not verdict.root.is_rational else (verdict.root.value,) * 2
    out = {
        "polynomial": poly,
        "root_interval": [fraction_text(lo), fraction_text(hi)],
        "is_algebraic_integer": verdict.is_algebraic_integer,
        "is_pisot": verdict.is_pisot,
        "conjugate_modulus_upper_bound": fraction_text(verdict.conjugate_modulus_upper_bound),
        "conjugate_modulus_lower_bound": fraction_text(verdict.conjugate_modulus_lower_bound),
        "minimality": verdict.minimality,
    }
    emit(dumps(out), args.output)
    return EXIT_YES if verdict.is_pisot else EXIT_NO


# -- embed --------------------------------------------------------------------------------------

def _embed_exit(cert) -> int:
    if cert.embeds is True or isinstance(cert.verdict, ConsistentToDepth):
        return EXIT_YES
    return EXIT_NO


def cmd_embed(args) -> int:
    E, F = _sets_from(args)
    lam = parse_exact(args.lam)
    if args.action == "refute-hole":
        cert = refute_all_offsets_hole(E.ratio, F.ratio, lam)
        emit(certificate_json(cert), args.output)
        return EXIT_NO
    if args.action == "feasible":
        depth = int(args.depth or 8)
        result = feasible_offsets(E, F, lam, depth)
        emit(certificate_json(FeasibilityCertificate(E, F, lam, depth, result)), args.output)
        return EXIT_NO if result.is_empty else EXIT_YES
    c = parse_exact(args.c if args.c is not None else "0")
    prob = EmbeddingProblem(E, F, lam, c)
    if args.action == "verify":
        depth_F = int(args.depth_f) if args.depth_f is not None else None
        cert = verify_embedding(prob, int(args.depth or 8), depth_F)
    else:
        cert = decide_embedding_exact(prob, int(args.state_budget))
    emit(certificate_json(cert), args.output)
    return _embed_exit(cert)


def cmd_replay(args) -> int:
    with open(args.certificate, encoding="utf-8") as fh:
        text = fh.read()
    result = replay(text)
    emit(dumps({"kind": result.kind, "ok": result.ok, "detail": result.detail}), args.output)
    return EXIT_YES if result.ok else EXIT_NO


# -- repro -------------------------------------------------------------------------------------

def repro_lemma_ex1(k: int, depth: int = 16) -> dict:
    fam = lemma_ex1_family(k)
    lo, hi = A.enclose(fam.alpha, Fraction(1, 10 ** 12))
    prob = EmbeddingProblem(CentralCantor(fam.alpha), CentralCantor(fam.beta), fam.lam, 0)
    cert = verify_embedding(prob, depth)
    v = cert.verdict
    ok = isinstance(v, ConsistentToDepth) and v.depth_E == depth
    return {
        "k": k,
        "alpha_polynomial": fam.alpha_polynomial,
        "alpha_enclosure": [fraction_text(lo), fraction_text(hi)],
        "alpha_float": float(fam.alpha),
        "beta_float": float(fam.beta),
        "lambda_float": float(fam.lam),
        "verdict": cert.kind,
        "depth": depth,
        "status": "PASS" if ok else "FAIL",
        "certificate": json.loads(certificate_json(cert)),
    }


def repro_prop41(alpha, depth: int = 12) -> dict:
    """Signed expansions of u* = (1 - alpha)/(1 + alpha), the point coded by (+1, -1) repeated."""
    u = (1 - alpha) / (1 + alpha)
    result = unique_signed_expansion(alpha, u, depth)
    below = A.compare(alpha * alpha + 2 * alpha - 1, 0) < 0  # alpha < sqrt(2) - 1
    alternating = tuple((1, -1)[i % 2] for i in range(depth))
    if below:
        status = "PASS" if isinstance(result, ForcedPrefix) and result.digits == alternating else "FAIL"
    else:
        status = "EXPECTED_BRANCHING" if isinstance(result, Branches) else "UNEXPECTED_FORCING"
    out = {"alpha": encode_real(alpha), "u": encode_real(u), "depth": depth,
           "hypothesis_alpha_below_sqrt2_minus_1": below, "status": status,
           "certificate": json.loads(certificate_json(ExpansionCertificate(alpha, u, depth, result)))}
    if isinstance(result, ForcedPrefix):
        out["forced_prefix"] = list(result.digits)
    else:
        out["first_branch_depth"] = result.first_branch_depth
        out["branch_digits"] = list(result.digits)
    return out


def repro_thm14i(alpha, beta, lambdas) -> dict:
    """Exact embedding when beta is a power of alpha, hole certificates otherwise."""
    E, F = CentralCantor(alpha), CentralCantor(beta)
    try:
        cert = decide_embedding_exact(EmbeddingProblem(E, F, 1, 0))
        return {"mode": "power", "verdict": cert.kind,
                "status": "PASS" if isinstance(cert.verdict, ExactEmbeds) else "FAIL",
                "certificates": [json.loads(certificate_json(cert))]}
    except (IncommensurableRatios, NotApplicable):
        pass
    certs = [refute_all_offsets_hole(alpha, beta, lam) for lam in lambdas]
    return {"mode": "hole", "lambdas": [encode_real(l) for l in lambdas],
            "status": "PASS", "certificates": [json.loads(certificate_json(c)) for c in certs]}


def repro_translate_set(theta, digits) -> dict:
    points = translate_set(theta, digits)
    return {"theta": encode_real(theta), "digits": [encode_real(d) for d in digits],
            "cardinality": len(points), "points": [encode_real(p) for p in points],
            "points_float": [float(p) for p in points], "status": "PASS"}


def cmd_repro(args) -> int:
    if args.case == "lemma-ex1":
        report = repro_lemma_ex1(int(args.k or 2), int(args.depth or 16))
    elif args.case == "prop41":
        report = repro_prop41(parse_exact(args.alpha), int(args.depth or 12))
    elif args.case == "thm14i":
        lambdas = [parse_exact(x) for x in (args.lam or "1/2,1,3/2").split(",")]
        report = repro_thm14i(parse_exact(args.alpha), parse_exact(args.beta), lambdas)
    else:
        theta = parse_exact(args.theta)
        report = repro_translate_set(theta, [parse_exact(d) for d in str(args.digits).split(",")])
    emit(dumps(report), args.output)
    return EXIT_NO if report["status"] in ("FAIL", "UNEXPECTED_FORCING") else EXIT_YES


# -- fourier and dim ---------------------------------------------------------------------------

def cmd_fourier(args) -> int:
    if args.action == "eta":
        eta = EtaConstruction(parse_exact(args.alpha), parse_exact(args.beta),
                              int(args.grid or 1000), int(args.depth or 6))
        if len(eta.u) == 0:
            # no scale admits an offset: the construction fails, a negative finding
            emit(dumps({"feasible_points": 0, "grid_points": eta.grid, "status": "NotConstructible"}),
                 args.output)
            return EXIT_NO
        rows = []
        for n in parse_depths(args.n or "0..5"):
            est = eta.eta_hat(n)
            rows.append({"n": n, "real": est.value.real, "imag": est.value.imag,
                         "modulus": est.modulus, "bound": est.bound})
        emit(dumps({"feasible_points": len(eta.u), "grid_points": eta.grid, "rows": rows}), args.output)
        return EXIT_YES
    measure = CantorMeasure.central(parse_exact(args.rho))
    if args.action == "probe":
        series = probe_sequence(measure, parse_frequency(args.xi0 or "pi"),
                                parse_frequency(args.base or "3"), int(args.count or 12))
        if args.svg:
            series.to_svg(args.svg)
        emit(series.to_csv(), args.output)
        return EXIT_YES
    T = float(args.T or 1000)
    samples = int(args.samples or 10 ** 5)
    value = wiener_average(measure, T, samples)
    emit(dumps({"T": T, "samples": samples, "wiener_average": value}), args.output)
    return EXIT_YES


def _p_set(p, digits) -> HomogeneousIFS:
    return cantor_p_set(int(p), parse_int_list(digits))


def cmd_dim(args) -> int:
    if args.action == "attractor":
        ifs = CentralCantor(parse_exact(args.rho)) if args.rho else _p_set(args.p, args.pdigits)
        est = attractor_dim_estimate(ifs, parse_depths(args.depths or "4..10"))
        emit(dumps({"depths": est.scales, "counts": est.counts, "slope": est.slope,
                    "residual": est.residual}), args.output)
        return EXIT_YES
    E, F = _p_set(args.p, args.pdigits), _p_set(args.q, args.qdigits)
    if args.action == "intersect":
        est = intersection_dim_estimate(E, F, parse_exact(args.lam or "1"), parse_exact(args.c or "0"),
                                        parse_depths(args.depths or "4..10"))
        emit(dumps({"depths": est.scales, "counts": est.counts, "slope": est.slope,
                    "residual": est.residual, "empty": est.empty}), args.output)
        return EXIT_YES
    grid = int(args.grid or 20)
    lam_lo, lam_hi = parse_pair(args.lambda_range or "1/4,2")
    c_lo, c_hi = parse_pair(args.c_range or "-1,1")
    result = furstenberg_sweep(E, F, default_grid(grid, lam_lo, lam_hi), default_grid(grid, c_lo, c_hi),
                               int(args.depth or 9), jobs=int(args.jobs or 1))
    emit(result.to_json() if args.format == "json" else result.to_csv(), args.output)
    return EXIT_YES


# -- parser ------------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cantorembed",
        description="Affine embeddings of Cantor sets: exact checks and numerical probes.",
        epilog="Polynomial coefficients are listed constant term first.",
    )
    parser.add_argument("--config", help="JSON file whose keys supply defaults for the flags")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", "-o", help="write to this file instead of stdout")

    p = sub.add_parser("pisot-check", help="classify a root of an integer polynomial")
    p.add_argument("--poly", required=True, help="coefficients, constant term first, e.g. -1,-2,1")
    p.add_argument("--root", help="isolating interval lo,hi (default: the largest real root)")
    common(p)
    p.set_defaults(func=cmd_pisot)

    p = sub.add_parser("embed", help="embedding checks for lambda*C_beta + c in C_alpha")
    p.add_argument("action", choices=["verify", "decide", "refute-hole", "feasible"])
    p.add_argument("--alpha")
    p.add_argument("--beta")
    p.add_argument("--lambda", dest="lam", default="1")
    p.add_argument("--c")
    p.add_argument("--depth")
    p.add_argument("--depth-f", dest="depth_f")
    p.add_argument("--state-budget", dest="state_budget", default="200000")
    common(p)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("replay", help="re-verify a certificate file")
    p.add_argument("--certificate", required=True)
    common(p)
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("repro", help="run a reproduction pipeline and report PASS/FAIL")
    p.add_argument("case", choices=["lemma-ex1", "prop41", "thm14i", "translate-set"])
    p.add_argument("--k")
    p.add_argument("--alpha")
    p.add_argument("--beta")
    p.add_argument("--lambda", dest="lam", help="comma-separated scales for thm14i")
    p.add_argument("--theta")
    p.add_argument("--digits")
    p.add_argument("--depth")
    common(p)
    p.set_defaults(func=cmd_repro)

    p = sub.add_parser("fourier", help="transform probes for Cantor measures (floating point)")
    p.add_argument("action", choices=["probe", "wiener", "eta"])
    p.add_argument("--rho")
    p.add_argument("--xi0", help='start frequency; "pi" and "k*pi" are accepted')
    p.add_argument("--base")
    p.add_argument("--count")
    p.add_argument("--T")
    p.add_argument("--samples")
    p.add_argument("--alpha")
    p.add_argument("--beta")
    p.add_argument("--n", help='frequency indices, e.g. "1..20"')
    p.add_argument("--grid")
    p.add_argument("--depth")
    p.add_argument("--svg", help="also write a plot of modulus against log frequency")
    common(p)
    p.set_defaults(func=cmd_fourier)

    p = sub.add_parser("dim", help="box-counting estimates")
    p.add_argument("action", choices=["attractor", "intersect", "sweep"])
    p.add_argument("--rho")
    p.add_argument("--p")
    p.add_argument("--pdigits")
    p.add_argument("--q")
    p.add_argument("--qdigits")
    p.add_argument("--lambda", dest="lam")
    p.add_argument("--c")
    p.add_argument("--depths")
    p.add_argument("--depth")
    p.add_argument("--grid")
    p.add_argument("--lambda-range", dest="lambda_range")
    p.add_argument("--c-range", dest="c_range")
    p.add_argument("--jobs")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    common(p)
    p.set_defaults(func=cmd_dim)
    return parser


def _apply_config(args, path: str) -> None:
    with open(path, encoding="utf-8") as fh:
        config = json.load(fh)
    for key, value in config.items():
        key = key.replace("-", "_")
        if key == "lambda":
            key = "lam"
        if getattr(args, key, None) is None:
            setattr(args, key, value if isinstance(value, str) else json.dumps(value)
                    if isinstance(value, dict) else str(value))


def _attach_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--flag -1,2`` into ``--flag=-1,2`` so argparse does not read a value as an option."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if (tok.startswith("--") and "=" not in tok and nxt is not None
                and re.match(r"-[\d./]", nxt)):
            out.append(f"{tok}={nxt}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_attach_negative_values(argv))
    except SystemExit as exc:
        # argparse reports usage errors with status 2, which here means "undecided"
        return EXIT_ERROR if exc.code == 2 else int(exc.code or 0)
    try:
        if args.config:
            _apply_config(args, args.config)
        return args.func(args)
    except (StateBudgetExceeded, DepthBudgetExceeded, BudgetExceeded, NotApplicable,
            IncommensurableRatios) as exc:
        print(f"undecided: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED
    except (CantorEmbedError, ValueError, TypeError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
