"""Command-line front end.

Exit codes: 0 = representable / verified / search clean, 1 = negative outcome,
2 = usage, parse or budget error.

Settings are resolved as flags > CORRWIT_* environment variables > config
file (``key = value`` lines) > defaults.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from math import isqrt
from pathlib import Path
from typing import Any, Sequence

from . import construct, decide, oracle
from .construct import CertificateFormatError, WitnessCertificate
from .lattice import CorrwitError, FormKind, Triple

EXIT_OK, EXIT_NO, EXIT_USAGE = 0, 1, 2

ENV_PREFIX = "CORRWIT_"
DEFAULT_CONFIG = {
    "search_bound": None,
    "enumeration_cap": oracle.DEFAULT_CAP,
    "output_format": "text",
    "shard_count": 1,
    "default_ambient_override": None,
}
# config-file / environment key -> Config field
KEY_ALIASES = {
    "bound": "search_bound",
    "search_bound": "search_bound",
    "cap": "enumeration_cap",
    "enumeration_cap": "enumeration_cap",
    "format": "output_format",
    "output_format": "output_format",
    "shards": "shard_count",
    "shard_count": "shard_count",
    "n": "default_ambient_override",
    "default_ambient_override": "default_ambient_override",
}


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class Config:
    default_ambient_override: int | None
    search_bound: int | None
    enumeration_cap: int
    output_format: str
    shard_count: int

    def __post_init__(self):
        if self.enumeration_cap < 1:
            raise UsageError("enumeration cap must be positive")
        if self.search_bound is not None and self.search_bound < 0:
            raise UsageError("search bound must be nonnegative")
        if self.shard_count < 1:
            raise UsageError("shard count must be at least 1")
        if self.output_format not in ("text", "json"):
            raise UsageError(f"unknown output format {self.output_format!r}")


def _coerce(field: str, raw: Any) -> Any:
    if raw is None:
        return None
    if field == "output_format":
        return str(raw).strip().strip('"')
    try:
        return int(str(raw).strip())
    except ValueError:
        raise UsageError(f"{field} must be an integer, got {raw!r}") from None


def read_config_file(path: Path) -> dict[str, Any]:
    values: dict[str, Any] = {}
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        field = KEY_ALIASES.get(key.strip().lower())
        if field is None:
            raise UsageError(f"{path}:{lineno}: unknown key {key.strip()!r}")
        values[field] = _coerce(field, value)
    return values


def resolve_config(flags: dict[str, Any], env: dict[str, str] | None = None,
                   config_path: str | None = None) -> Config:
    env = os.environ if env is None else env
    merged = dict(DEFAULT_CONFIG)
    path = config_path or env.get(ENV_PREFIX + "CONFIG")
    if path:
        merged.update(read_config_file(Path(path)))
    for key, field in KEY_ALIASES.items():
        raw = env.get(ENV_PREFIX + key.upper())
        if raw is not None:
            merged[field] = _coerce(field, raw)
    merged.update({k: v for k, v in flags.items() if v is not None})
    return Config(**merged)


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------


def _emit(obj: Any, text: str, cfg: Config, out) -> None:
    if cfg.output_format == "json":
        print(json.dumps(obj, sort_keys=True), file=out)
    else:
        print(text, file=out)


def _decision_text(d: decide.Decision) -> str:
    line = f"{d.verdict.value} ({d.reason})"
    if d.note:
        line += f"\nnote: {d.note}"
    return line


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

SPACE_ARITY = {"p2xp2": 3, "p2xp1": 2, "p1xp1": 2, "p3xp3": 4}


def cmd_decide(args, cfg: Config, out) -> int:
    coeffs = args.coefficients
    if args.space == "multi":
        if args.ambient is None or args.k is None:
            raise UsageError("decide multi needs --ambient N M and --k K")
        n, m = args.ambient
        try:
            seq = decide.MultiDegreeSequence(n, m, args.k, tuple(coeffs))
        except decide.InvalidIndexRange as exc:
            raise UsageError(str(exc)) from None
        d = decide.decide_multiple(seq)
    else:
        if len(coeffs) != SPACE_ARITY[args.space]:
            raise UsageError(f"{args.space} takes {SPACE_ARITY[args.space]} coefficients, got {len(coeffs)}")
        if args.space == "p2xp2":
            d = decide.decide_p2p2(decide.ClassP2P2(*coeffs))
        elif args.space == "p2xp1":
            d = decide.decide_p2p1(*coeffs)
        elif args.space == "p1xp1":
            d = decide.decide_p1p1(*coeffs)
        else:
            d = decide.check_spatial(decide.ClassP3P3(*coeffs))
    _emit(d.to_dict(), _decision_text(d), cfg, out)
    return EXIT_OK if d.positive else EXIT_NO


def cmd_witness(args, cfg: Config, out) -> int:
    t = Triple(args.a, args.b, args.c)
    d = decide.decide_p2p2(decide.ClassP2P2(*t.as_tuple()))
    if not d.positive:
        _emit({"error": d.reason, "decision": d.to_dict()},
              f"error: {d.verdict.value} ({d.reason}); see `decide p2xp2`", cfg, out)
        return EXIT_NO
    if not t.positive():
        _emit({"error": construct.DegenerateTarget.code, "decision": d.to_dict()},
              "error: degenerate class (a zero entry) has no lattice witness; "
              "it is representable, see `decide p2xp2`", cfg, out)
        return EXIT_NO
    try:
        cert = construct.represent_general(t, cfg.default_ambient_override)
    except construct.PreconditionViolated as exc:
        raise UsageError(str(exc)) from None
    # never emit something that does not verify
    problems = construct.check_certificate(cert)
    if problems:
        raise CorrwitError(f"constructed certificate failed self-check: {problems}")
    if cfg.output_format == "json":
        print(cert.to_json(), file=out)
    else:
        print(construct.format_description(construct.linear_system_description(cert)), file=out)
    return EXIT_OK


def cmd_verify(args, cfg: Config, out) -> int:
    if args.path in (None, "-"):
        text = sys.stdin.read()
    else:
        text = Path(args.path).read_text()
    cert = WitnessCertificate.from_json(text)
    problems = construct.check_certificate(cert)
    report = {"ok": not problems, "reason": problems[0]["reason"] if problems else None,
              "failures": problems}
    if problems:
        detail = "\n".join(f"  {p['reason']}: " + ", ".join(f"{k}={v}" for k, v in p.items() if k != "reason")
                           for p in problems)
        _emit(report, f"FAIL {problems[0]['reason']}\n{detail}", cfg, out)
        return EXIT_NO
    _emit(report, "OK", cfg, out)
    return EXIT_OK


def cmd_search(args, cfg: Config, out) -> int:
    form = FormKind.LORENTZIAN if args.form == "lorentz" else FormKind.EUCLIDEAN
    bound = cfg.search_bound
    if bound is None:
        bound = _default_bound(form, args)
    try:
        spec = oracle.LatticeSpec.parse(args.lattice, bound)
    except ValueError as exc:
        raise UsageError(f"bad lattice {args.lattice!r}: {exc}") from None
    if args.triple:
        t = Triple(*args.triple)
        w = oracle.brute_search(spec, form, t, cfg.enumeration_cap)
        conclusive = oracle.is_conclusive(spec, form, t)
        obj = {"a": t.a, "b": t.b, "c": t.c, "witnessed": w is not None,
               "conclusive": w is not None or conclusive, "bound": spec.coordinate_bound}
        if w is not None:
            obj["x"], obj["y"] = list(w.x.coords), list(w.y.coords)
            text = f"witness x={w.x.coords} y={w.y.coords}"
        else:
            if conclusive:
                text = f"no witness exists (exhausted bound {spec.coordinate_bound}, conclusive)"
            else:
                text = f"no witness within bound {spec.coordinate_bound} (bound-relative)"
        _emit(obj, text, cfg, out)
        return EXIT_OK if w is not None else EXIT_NO
    if args.max_b is None:
        raise UsageError("search needs --max-b or --triple")
    report = oracle.completeness_scan(spec, form, args.max_b, ac_cap=args.ac_cap,
                                      shards=cfg.shard_count, cap=cfg.enumeration_cap)
    if cfg.output_format == "json":
        out.write(report.to_jsonl())
    else:
        s = report.summary()
        print(f"{s['lattice']} {s['form']} bound={s['bound']} max_b={s['max_b']}: "
              f"{s['triples']} triples, {s['witnessed']} witnessed, {s['unwitnessed']} unwitnessed",
              file=out)
        for t in report.unwitnessed:
            print(f"  unwitnessed {t.as_tuple()}", file=out)
    return EXIT_OK if not report.unwitnessed else EXIT_NO


def _default_bound(form: FormKind, args) -> int:
    """b^2 + b for Lorentzian searches; the smallest conclusive bound for Euclidean ones."""
    if args.triple:
        t = Triple(*args.triple)
        if form is FormKind.LORENTZIAN:
            return oracle.default_lorentzian_bound(t)
        return isqrt(max(t.a, t.c, 0))
    if args.max_b is None:
        raise UsageError("search needs --max-b or --triple")
    if form is FormKind.LORENTZIAN:
        return args.max_b * args.max_b + args.max_b
    # decides every triple with a, c <= bound^2 conclusively
    return 2 * args.max_b


def cmd_foursquares(args, cfg: Config, out) -> int:
    fs = construct.four_squares(args.n)
    _emit({"n": fs.n, "parts": list(fs.parts)}, " ".join(map(str, fs.parts)), cfg, out)
    return EXIT_OK


def cmd_decompositions(args, cfg: Config, out) -> int:
    reps = construct.sum_of_squares_representations(args.n, args.k)
    text = "\n".join(" ".join(map(str, r)) for r in reps) + f"\ncount {len(reps)}"
    _emit({"n": args.n, "k": args.k, "representations": [list(r) for r in reps], "count": len(reps)},
          text.lstrip("\n"), cfg, out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS so a subcommand's unset option does not clobber a top-level one
    common.add_argument("--format", dest="output_format", choices=["text", "json"],
                        default=argparse.SUPPRESS)
    common.add_argument("--config", help="key = value config file", default=argparse.SUPPRESS)

    p = _Parser(prog="corrwit", description=__doc__.splitlines()[0], parents=[common])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("decide", parents=[common], help="decide representability of a class")
    d.add_argument("space", choices=["p2xp2", "p2xp1", "p1xp1", "p3xp3", "multi"])
    d.add_argument("coefficients", nargs="+", type=int)
    d.add_argument("--ambient", nargs=2, type=int, metavar=("N", "M"))
    d.add_argument("--k", type=int)
    d.set_defaults(func=cmd_decide)

    w = sub.add_parser("witness", parents=[common], help="build a witness certificate for (a, b, c)")
    w.add_argument("a", type=int)
    w.add_argument("b", type=int)
    w.add_argument("c", type=int)
    w.add_argument("--n", dest="default_ambient_override", type=int)
    w.set_defaults(func=cmd_witness)

    v = sub.add_parser("verify", parents=[common], help="verify a JSON certificate (path or stdin)")
    v.add_argument("path", nargs="?")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", parents=[common], help="brute-force witness search or completeness scan")
    s.add_argument("--lattice", required=True, help="nat:W or int:W (W coordinates)")
    s.add_argument("--form", choices=["lorentz", "euclid"], default="lorentz")
    s.add_argument("--bound", dest="search_bound", type=int)
    s.add_argument("--max-b", type=int)
    s.add_argument("--triple", nargs=3, type=int, metavar=("A", "B", "C"))
    s.add_argument("--ac-cap", type=int, help="cap on a and c for Euclidean scans (default bound^2)")
    s.add_argument("--shards", dest="shard_count", type=int)
    s.add_argument("--cap", dest="enumeration_cap", type=int)
    s.set_defaults(func=cmd_search)

    f = sub.add_parser("foursquares", parents=[common], help="canonical four-squares decomposition")
    f.add_argument("n", type=int)
    f.set_defaults(func=cmd_foursquares)

    ds = sub.add_parser("decompositions", parents=[common], help="all ways to write n as k squares")
    ds.add_argument("n", type=int)
    ds.add_argument("k", type=int)
    ds.set_defaults(func=cmd_decompositions)
    return p


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        flags = {k: getattr(args, k, None) for k in
                 ("output_format", "search_bound", "enumeration_cap", "shard_count",
                  "default_ambient_override")}
        cfg = resolve_config(flags, config_path=getattr(args, "config", None))
        return args.func(args, cfg, out)
    except (UsageError, CertificateFormatError, oracle.BoundTooLargeForBudget) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except construct.PreconditionViolated as exc:
        print(f"error: {exc.code}: {exc}", file=err)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
