"""Command-line front end.

Exit status: 0 on success, 2 on a computed negative verdict, 1 on errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import __version__
from .errors import MasseyError
from .galois_q import SplittingPoint, SquareClass, galois_triple_check
from .magnus import canonical_decompose
from .massey import (
    DOES_NOT_VANISH,
    NOT_REALIZABLE,
    massey_check,
    obstruction_scan,
    parse_character,
    report_json,
)
from .unipotent import RepAssignment, separating_rep
from .words import PresentationSpec, load_presentation, parse_word

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NEGATIVE = 2


@dataclass
class RunConfig:
    command: str
    presentation: str | None = None
    word: str | None = None
    triple: str | None = None
    n: int | None = None
    budget: int | None = None
    threads: int = 1
    height_cap: int | None = None
    json: bool = False
    a: int | None = None
    b: int | None = None
    c: int | None = None
    p: int | None = None
    d: int | None = None
    verify: bool = False

    def validate(self) -> None:
        if self.budget is not None and self.budget <= 0:
            raise ValueError("--budget must be positive")
        if self.height_cap is not None and self.height_cap <= 0:
            raise ValueError("--height-cap must be positive")
        if self.threads < 1:
            raise ValueError("--threads must be at least 1")
        if self.n is not None and self.n < 3 and self.command == "check":
            raise ValueError("-n must be at least 3")


def _presentation(cfg: RunConfig) -> PresentationSpec:
    if cfg.presentation:
        return load_presentation(cfg.presentation)
    if cfg.p is None or cfg.d is None:
        raise ValueError("give a presentation file (-f) or both -p and -d")
    return PresentationSpec(cfg.p, cfg.d, ())


def _emit(cfg: RunConfig, payload: dict, lines: list[str]) -> None:
    if cfg.json:
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(lines))


def _matrix_lines(rep: RepAssignment) -> list[str]:
    out = []
    for g, m in enumerate(rep.images, 1):
        out.append(f"  x{g} -> " + " ".join("[" + " ".join(map(str, row)) + "]" for row in m.rows))
    return out


def _format_coefficients(nonzero: dict[str, int]) -> str:
    return " ".join(f"{k}={v}" for k, v in nonzero.items()) or "(trivial modulo S_(4))"


def run_decompose(cfg: RunConfig) -> int:
    spec = _presentation(cfg)
    if cfg.word is not None:
        targets = [("word", parse_word(cfg.word, spec.d))]
    else:
        targets = [(f"relator {i}", r) for i, r in enumerate(spec.relators)]
    payload = {"p": spec.p, "decompositions": []}
    lines = []
    for label, w in targets:
        dec = canonical_decompose(w, spec.p)
        payload["decompositions"].append({"label": label, "word": str(w),
                                          "coefficients": dec.nonzero()})
        text = _format_coefficients(dec.nonzero())
        lines.append(text if cfg.word is not None else f"{label}: {text}")
    _emit(cfg, payload, lines)
    return EXIT_OK


def _characters(cfg: RunConfig, spec: PresentationSpec):
    if not cfg.triple:
        raise ValueError("--triple is required")
    chars = [parse_character(t, spec.d, spec.p) for t in cfg.triple.split(",")]
    n = cfg.n or (len(chars) if len(chars) > 1 else 3)
    if len(chars) == 1:
        chars = chars * n
    if len(chars) != n:
        raise ValueError(f"{len(chars)} characters given for -n {n}")
    return chars


def run_check(cfg: RunConfig) -> int:
    spec = _presentation(cfg)
    chars = _characters(cfg, spec)
    report = massey_check(spec, chars, threads=cfg.threads, budget=cfg.budget)
    lines = [report.verdict, "product: <" + ", ".join(str(c) for c in report.chars) + ">"]
    if report.lift is not None:
        lines.append("lift:")
        lines += _matrix_lines(report.lift)
    elif report.verdict == DOES_NOT_VANISH:
        lines.append(f"defining representations exhausted: {report.defining}")
        lines.append(f"relator {report.relator} keeps corner {report.corner} under every lift of:")
        lines += _matrix_lines(report.sample)
    else:
        lines.append("no defining representation exists")
    _emit(cfg, report_json(report), lines)
    return EXIT_NEGATIVE if report.verdict == DOES_NOT_VANISH else EXIT_OK


def run_obstruct(cfg: RunConfig) -> int:
    spec = _presentation(cfg)
    witnesses = obstruction_scan(spec)
    verdict = "Obstructed" if witnesses else "NoWitness"
    lines = [verdict] + [w.describe() for w in witnesses]
    payload = report_json(None, witnesses)
    payload["verdict"] = verdict
    payload["triple"] = [str(c) for c in witnesses[0].triple] if witnesses else []
    if cfg.verify:
        checks = []
        for w in witnesses:
            verdict_w = massey_check(spec, w.triple, threads=cfg.threads, budget=cfg.budget).verdict
            checks.append(verdict_w)
            lines.append(f"re-check {w.pattern}{w.indices}: {verdict_w}")
        payload["rechecks"] = checks
    if witnesses and spec.p == 2:
        lines.append(f"group is {NOT_REALIZABLE}")
    _emit(cfg, payload, lines)
    return EXIT_NEGATIVE if witnesses else EXIT_OK


def run_galois(cfg: RunConfig) -> int:
    if None in (cfg.a, cfg.b, cfg.c):
        raise ValueError("--a, --b and --c are required")
    report = galois_triple_check(cfg.a, cfg.b, cfg.c, height_cap=cfg.height_cap)
    lines = [report.verdict]
    cert = report.certificate
    if isinstance(cert, SplittingPoint):
        coords = ", ".join(str(v) for v in cert.coordinates())
        lines.append(f"point (x, y1, y2, y3, y4) = ({coords})")
        lines.append(f"b*x^2 = {cert.lhs()} = {cert.rhs()}")
        rb = SquareClass(report.b).representative
        for key, (s, t) in report.norms.items():
            base = SquareClass(getattr(report, key)).representative
            lines.append(f"norm from Q(sqrt({base})): ({s})^2 - ({base})*({t})^2 = {rb}")
    elif cert is not None:
        lines.append(f"{cert.square} = {cert.value} is a square: product contains 0")
    _emit(cfg, report.to_json(), lines)
    return EXIT_OK if report.defined else EXIT_NEGATIVE


def run_separate(cfg: RunConfig) -> int:
    spec = _presentation(cfg)
    if cfg.word is None:
        raise ValueError("-w is required")
    w = parse_word(cfg.word, spec.d)
    n = cfg.n or 3
    rep = separating_rep(spec, w, n, budget=cfg.budget, threads=cfg.threads)
    verdict = "Separated" if rep is not None else "NotSeparated"
    lines = [verdict]
    if rep is not None:
        lines += _matrix_lines(rep)
    payload = {"verdict": verdict, "word": str(w), "n": n,
               "witness": ({f"x{g}": m.upper_entries() for g, m in enumerate(rep.images, 1)}
                           if rep is not None else None)}
    _emit(cfg, payload, lines)
    return EXIT_OK if rep is not None else EXIT_NEGATIVE


COMMANDS = {
    "decompose": run_decompose,
    "check": run_check,
    "obstruct": run_obstruct,
    "galois": run_galois,
    "separate": run_separate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="masseylift", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, presentation=True):
        if presentation:
            p.add_argument("-f", "--file", dest="presentation", help="presentation file")
            p.add_argument("-p", type=int, help="prime, when no file is given")
            p.add_argument("-d", type=int, help="generator count, when no file is given")
        p.add_argument("--json", action="store_true", help="print a JSON report")

    def search(p):
        p.add_argument("--budget", type=int,
                       help="enumeration cap (default: $MASSEY_BUDGET or 10^7)")
        p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("decompose", help="canonical decomposition modulo S_(4)")
    common(p)
    p.add_argument("-w", "--word", help="word to decompose (default: every relator)")

    p = sub.add_parser("check", help="decide an n-fold Massey product")
    common(p)
    search(p)
    p.add_argument("--triple", help="comma-separated characters, e.g. x1,x2,x3 or x1+x2,x3,x3")
    p.add_argument("-n", type=int, help="fold count (default: number of characters, or 3)")

    p = sub.add_parser("obstruct", help="scan relators for non-vanishing witnesses")
    common(p)
    search(p)
    p.add_argument("--verify", action="store_true", help="re-check each witness by enumeration")

    p = sub.add_parser("galois", help="triple Massey product of Kummer characters over Q")
    common(p, presentation=False)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--height-cap", type=int, dest="height_cap")

    p = sub.add_parser("separate", help="search U_(n+1)(F_p) for a rep not killing a word")
    common(p)
    search(p)
    p.add_argument("-w", "--word", required=True)
    p.add_argument("-n", type=int, default=3, help="matrices are (n+1)x(n+1)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(args).items()
                       if k in RunConfig.__dataclass_fields__})
    try:
        cfg.validate()
        return COMMANDS[cfg.command](cfg)
    except (MasseyError, ValueError, OSError, IndexError) as exc:
        print(f"masseylift {cfg.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
