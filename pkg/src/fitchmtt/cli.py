"""``fitchmtt`` command line: check, norm, model, laws.

Exit status: 0 success, 1 type error, 2 parse error, 3 semantic violation,
4 fuel exhausted, 5 out-of-fragment declarations under ``--strict``.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .conversion import DEFAULT_FUEL, Fuel, FuelExhausted, normalize
from .interpret import soundness_check
from .kernel import Kernel, TypeCheckError
from .model import check_laws
from .surface import ParseError, SourceFile, elaborate, parse, pretty

EXIT_OK, EXIT_TYPE, EXIT_PARSE, EXIT_SEMANTIC, EXIT_FUEL, EXIT_FRAGMENT = 0, 1, 2, 3, 4, 5


@dataclass(frozen=True)
class Config:
    fuel: int = DEFAULT_FUEL
    depth: int = 3
    size: int = 2
    trials: int = 200
    seed: int = 42
    format: str = "text"
    strict: bool = False
    figures: Optional[Path] = None

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("depth must be at least 1")
        if self.size < 1:
            raise ValueError("size must be at least 1")
        if self.fuel < 0 or self.trials < 0:
            raise ValueError("fuel and trials must be non-negative")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")
        if self.format not in ("text", "json-lines"):
            raise ValueError(f"unknown format {self.format!r}")


class Output:
    def __init__(self, cfg: Config, stream=None):
        self.cfg = cfg
        self.stream = stream or sys.stdout

    def emit(self, kind: str, name: str, status: str, detail: str = ""):
        if self.cfg.format == "json-lines":
            rec = {"kind": kind, "name": name, "status": status, "detail": detail}
            print(json.dumps(rec, sort_keys=True, ensure_ascii=False), file=self.stream)
        else:
            line = f"{name} : {detail} {status}" if detail else f"{name} {status}"
            print(line, file=self.stream)


def _load(path: str, out: Output) -> tuple[Optional[SourceFile], int]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        out.emit("file", path, "PARSE", str(exc))
        return None, EXIT_PARSE
    try:
        return parse(text), EXIT_OK
    except ParseError as exc:
        out.emit("file", path, "PARSE", f"{path}:{exc.diagnostic}")
        return None, EXIT_PARSE


def _worst(codes) -> int:
    # parse > fuel > type > ok
    for c in (EXIT_PARSE, EXIT_FUEL, EXIT_TYPE):
        if c in codes:
            return c
    return EXIT_OK


def cmd_check(paths, cfg: Config, out: Output) -> int:
    codes = []
    for path in paths:
        src, code = _load(path, out)
        if src is None:
            codes.append(code)
            continue
        kernel = Kernel(fuel=cfg.fuel)
        for d in elaborate(src):
            try:
                level = kernel.check_decl(d.annotation, d.body)
            except TypeCheckError as exc:
                out.emit("decl", d.name, exc.code, exc.message)
                codes.append(EXIT_TYPE)
            except FuelExhausted as exc:
                out.emit("decl", d.name, "FUEL", str(exc))
                codes.append(EXIT_FUEL)
            else:
                shown = src[d.name].annotation
                out.emit("decl", d.name, "OK", f"{pretty(shown)} @ U {level}")
    return _worst(codes)


def cmd_norm(path: str, name: str, cfg: Config, out: Output) -> int:
    src, code = _load(path, out)
    if src is None:
        return code
    decls = {d.name: d for d in elaborate(src)}
    if name not in decls:
        out.emit("decl", name, "UNBOUND", f"no declaration named {name!r}")
        return EXIT_TYPE
    d = decls[name]
    try:
        Kernel(fuel=cfg.fuel).check_decl(d.annotation, d.body)
        nf = normalize(d.body, Fuel(cfg.fuel))
    except TypeCheckError as exc:
        out.emit("decl", name, exc.code, exc.message)
        return EXIT_TYPE
    except FuelExhausted as exc:
        out.emit("decl", name, "FUEL", str(exc))
        return EXIT_FUEL
    if cfg.format == "json-lines":
        out.emit("norm", name, "OK", pretty(nf))
    else:
        print(pretty(nf), file=out.stream)
    return EXIT_OK


def cmd_model(paths, cfg: Config, out: Output) -> int:
    codes = []
    fragment = False
    for path in paths:
        src, code = _load(path, out)
        if src is None:
            codes.append(code)
            continue
        rep = soundness_check(src, cfg.depth, cfg.fuel)
        for e in rep.entries:
            status = "SKIP" if e.kind == "fragment" else ("OK" if e.ok else "VIOLATION")
            out.emit(e.kind, e.name, status, e.detail)
        if any(e.kind == "kernel" for e in rep.violations):
            codes.append(EXIT_TYPE)
        elif rep.violations:
            codes.append(EXIT_SEMANTIC)
        fragment = fragment or bool(rep.fragment)
        if cfg.figures is not None:
            from .report import soundness_figure

            soundness_figure(rep, cfg.figures, Path(path).stem)
    if EXIT_PARSE in codes:
        return EXIT_PARSE
    if EXIT_SEMANTIC in codes:
        return EXIT_SEMANTIC
    if EXIT_TYPE in codes:
        return EXIT_TYPE
    if fragment and cfg.strict:
        return EXIT_FRAGMENT
    return EXIT_OK


def cmd_laws(cfg: Config, out: Output, depths=None) -> int:
    reports = [check_laws(n, cfg.size, cfg.trials, cfg.seed) for n in (depths or [cfg.depth])]
    for rep in reports:
        for r in rep.laws.values():
            status = "OK" if r.violations == 0 and r.instances > 0 else "VIOLATION"
            detail = f"N={rep.depth} instances={r.instances} violations={r.violations}"
            if r.counterexamples:
                detail += f" first={r.counterexamples[0]}"
            out.emit("law", r.name, status, detail)
    if cfg.figures is not None:
        from .report import law_figure

        law_figure(reports, cfg.figures)
    bad = any(r.violations or r.instances == 0 for rep in reports for r in rep.laws.values())
    return EXIT_SEMANTIC if bad else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    common.add_argument("--depth", type=int, default=3)
    common.add_argument("--size", type=int, default=2)
    common.add_argument("--trials", type=int, default=200)
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--format", choices=("text", "json-lines"), default="text")
    common.add_argument("--strict", action="store_true")
    common.add_argument("--figures", type=Path, default=None, metavar="DIR",
                        help="also write PNG charts into DIR (model, laws)")

    p = argparse.ArgumentParser(prog="fitchmtt", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)
    c = sub.add_parser("check", parents=[common], help="type-check .mtt files")
    c.add_argument("paths", nargs="+")
    n = sub.add_parser("norm", parents=[common], help="print the normal form of a declaration")
    n.add_argument("path")
    n.add_argument("name")
    m = sub.add_parser("model", parents=[common], help="run the soundness oracle")
    m.add_argument("paths", nargs="+")
    lw = sub.add_parser("laws", parents=[common], help="check the model's laws on random instances")
    lw.add_argument("--depths", type=int, nargs="+", default=None,
                    help="run at several depths instead of --depth")
    return p


def main(argv=None, stream=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = Config(
            fuel=args.fuel,
            depth=args.depth,
            size=args.size,
            trials=args.trials,
            seed=args.seed,
            format=args.format,
            strict=args.strict,
            figures=args.figures,
        )
    except ValueError as exc:
        print(f"fitchmtt: {exc}", file=sys.stderr)
        return EXIT_PARSE
    out = Output(cfg, stream)
    if args.cmd == "check":
        return cmd_check(args.paths, cfg, out)
    if args.cmd == "norm":
        return cmd_norm(args.path, args.name, cfg, out)
    if args.cmd == "model":
        return cmd_model(args.paths, cfg, out)
    if args.depths and any(d < 1 for d in args.depths):
        print("fitchmtt: depth must be at least 1", file=sys.stderr)
        return EXIT_PARSE
    return cmd_laws(cfg, out, args.depths)


if __name__ == "__main__":
    sys.exit(main())
