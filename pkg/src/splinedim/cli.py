"""spline-dim command line interface.

Exit codes: 0 ok, 1 verification failure, 2 invalid mesh, 3 bad
configuration, 4 field failure, 5 I/O error.
"""
from __future__ import annotations

import argparse
import io
import sys
from dataclasses import dataclass
from math import comb

from . import bounds, oracle
from .complex import CellComplex, validate_manifold
from .errors import (
    DegenerateCell,
    DuplicateCell,
    FieldFailure,
    InvalidLattice,
    MeshFormatError,
    NoStabilization,
    NotFound,
    UnknownVertex,
)
from .examples import EXAMPLES, VARIANTS, generate_example
from .linalg import FieldSpec
from .meshio import read_mesh, write_mesh

EXIT_FAIL, EXIT_MESH, EXIT_CONFIG, EXIT_FIELD, EXIT_IO = 1, 2, 3, 4, 5


class ConfigError(Exception):
    pass


class MeshError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    source: str
    r: int
    degrees: list[int]
    seed: int
    field: str
    polytopal: bool
    fmt: str
    poly: bool = False
    binomials: str = "extended"

    @property
    def mode(self) -> str:
        return "polytopal_extended" if self.polytopal else "standard"

    def field_spec(self) -> FieldSpec:
        return FieldSpec(kind="exact_rational" if self.field == "rational" else "prime_field")


def parse_degrees(text: str) -> list[int]:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise ConfigError(f"bad degree specification {text!r}; use INT or A..B")
    if lo < 0 or hi < lo:
        raise ConfigError(f"empty or negative degree range {text!r}")
    return list(range(lo, hi + 1))


def _add_common(p, degrees: bool):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--example", choices=EXAMPLES + VARIANTS)
    src.add_argument("mesh", nargs="?", metavar="MESHFILE")
    p.add_argument("-r", type=int, required=True)
    if degrees:
        p.add_argument("-d", required=True, metavar="INT|A..B")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--field", choices=("prime", "rational"), default="prime")
    p.add_argument("--polytopal", action="store_true", help="polytopal mesh; extend the vertex sums")
    p.add_argument("--format", choices=("csv", "md"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="spline-dim", description="Dimension bounds and exact dimensions of spline spaces.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    lbp = sub.add_parser("lb", help="evaluate the closed-form lower bound")
    _add_common(lbp, True)
    lbp.add_argument("--poly", action="store_true", help="also print the bound as a cubic")
    lbp.add_argument("--binomials", choices=bounds.BINOMIALS, default="extended")
    _add_common(sub.add_parser("dim", help="exact dimension from the smoothness conditions"), True)
    vp = sub.add_parser("verify", help="compare the bound with the exact dimension")
    _add_common(vp, True)
    vp.add_argument("--binomials", choices=bounds.BINOMIALS, default="extended")
    _add_common(sub.add_parser("hilbert", help="fit the large-degree cubic"), False)
    gp = sub.add_parser("gen", help="write a bundled example as a JSON mesh")
    gp.add_argument("name", choices=EXAMPLES + VARIANTS)
    gp.add_argument("path")
    gp.add_argument("--seed", type=int, default=1)
    return p


def load_complex(cfg: RunConfig) -> CellComplex:
    if cfg.source.startswith("example:"):
        cx = generate_example(cfg.source.split(":", 1)[1], cfg.seed)
    else:
        try:
            cx = read_mesh(cfg.source)
        except OSError:
            raise
        except (MeshFormatError, DegenerateCell, DuplicateCell, InvalidLattice, UnknownVertex, ValueError) as exc:
            raise MeshError(str(exc))
    report = validate_manifold(cx)
    if not report.accepted:
        raise MeshError("; ".join(report.violations))
    if cx.kind == "polytopal" and not cfg.polytopal:
        raise ConfigError("polytopal mesh: pass --polytopal to use the extended vertex sums")
    return cx


def _header(cfg: RunConfig, extra: dict | None = None) -> list[str]:
    meta = {
        "command": cfg.command,
        "source": cfg.source,
        "r": cfg.r,
        "seed": cfg.seed,
        "field": cfg.field,
        "mode": cfg.mode,
    }
    meta.update(extra or {})
    return ["# " + " ".join(f"{k}={v}" for k, v in meta.items())]


def _table(cfg: RunConfig, cols: list[str], rows: list[list], meta: dict | None = None) -> str:
    out = io.StringIO()
    if cfg.fmt == "csv":
        for line in _header(cfg, meta):
            out.write(line + "\n")
        out.write(",".join(cols) + "\n")
        for row in rows:
            out.write(",".join(str(x) for x in row) + "\n")
    else:
        for line in _header(cfg, meta):
            out.write(line.replace("# ", "<!-- ", 1) + " -->\n")
        out.write("| " + " | ".join(cols) + " |\n")
        out.write("|" + "|".join("---" for _ in cols) + "|\n")
        for row in rows:
            out.write("| " + " | ".join(str(x) for x in row) + " |\n")
    return out.getvalue()


def cmd_lb(cfg: RunConfig, cx: CellComplex) -> str:
    rows = [[d, comb(d + 3, 3), bounds.lb(cx, d, cfg.r, cfg.mode, cfg.binomials)] for d in cfg.degrees]
    text = _table(cfg, ["d", "C(d+3;3)", "LB"], rows, {"binomials": cfg.binomials})
    if cfg.poly:
        p = bounds.lb_polynomial(cx, cfg.r, cfg.mode)
        text += f"# polynomial: {p} (valid for d >= {p.valid_from})\n"
    return text


def cmd_dim(cfg: RunConfig, cx: CellComplex) -> str:
    spec = cfg.field_spec()
    rows = [[d, comb(d + 3, 3), oracle.spline_dim(cx, d, cfg.r, spec, cfg.seed)] for d in cfg.degrees]
    return _table(cfg, ["d", "C(d+3;3)", "dim"], rows)


def verify_rows(lbs: dict[int, int], dims: dict[int, int]):
    degrees = sorted(lbs)
    threshold = None
    for d in reversed(degrees):
        if lbs[d] != dims[d]:
            break
        threshold = d
    rows = []
    for d in degrees:
        if threshold is not None and d >= threshold:
            status = "PASS" if lbs[d] <= dims[d] else "FAIL"
        else:
            status = "pre-threshold"
        rows.append([d, comb(d + 3, 3), lbs[d], dims[d], dims[d] - lbs[d], status])
    return threshold, rows


def cmd_verify(cfg: RunConfig, cx: CellComplex) -> tuple[str, bool]:
    spec = cfg.field_spec()
    lbs = {d: bounds.lb(cx, d, cfg.r, cfg.mode, cfg.binomials) for d in cfg.degrees}
    dims = {d: oracle.spline_dim(cx, d, cfg.r, spec, cfg.seed) for d in cfg.degrees}
    threshold, rows = verify_rows(lbs, dims)
    text = _table(cfg, ["d", "C(d+3;3)", "LB", "dim", "dim-LB", "status"], rows, {"binomials": cfg.binomials})
    if threshold is None:
        text += "# summary: LB and dim do not agree at the end of the range\n"
    else:
        text += f"# summary: LB = dim for all d in {threshold}..{cfg.degrees[-1]}\n"
    ok = all(row[-1] != "FAIL" for row in rows)
    return text, ok


def cmd_hilbert(cfg: RunConfig, cx: CellComplex) -> str:
    fit = oracle.hilbert_polynomial(cx, cfg.r, cfg.field_spec(), cfg.seed)
    rows = [[d, v] for d, v in fit.samples.items()]
    text = _table(cfg, ["d", "dim"], rows)
    text += f"# polynomial: {fit.poly} (stable from d = {fit.stabilized_at})\n"
    return text


def cmd_gen(name: str, path: str, seed: int) -> None:
    write_mesh(generate_example(name, seed), path)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
    try:
        if args.command == "gen":
            cmd_gen(args.name, args.path, args.seed)
            return 0
        if args.r < 0:
            raise ConfigError("r must be non-negative")
        cap = 10 * (args.r + 1)
        degrees = parse_degrees(args.d) if hasattr(args, "d") else []
        if degrees and degrees[-1] > cap:
            raise ConfigError(f"degree {degrees[-1]} exceeds the cap 10(r+1) = {cap}")
        source = f"example:{args.example}" if args.example else args.mesh
        cfg = RunConfig(
            args.command,
            source,
            args.r,
            degrees,
            args.seed,
            args.field,
            args.polytopal,
            args.format,
            getattr(args, "poly", False),
            getattr(args, "binomials", "extended"),
        )
        cx = load_complex(cfg)
        ok = True
        if cfg.command == "lb":
            text = cmd_lb(cfg, cx)
        elif cfg.command == "dim":
            text = cmd_dim(cfg, cx)
        elif cfg.command == "verify":
            text, ok = cmd_verify(cfg, cx)
        else:
            text = cmd_hilbert(cfg, cx)
        sys.stdout.write(text)
        return 0 if ok else EXIT_FAIL
    except ConfigError as exc:
        print(f"spline-dim: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MeshError as exc:
        print(f"spline-dim: invalid mesh: {exc}", file=sys.stderr)
        return EXIT_MESH
    except FieldFailure as exc:
        print(f"spline-dim: field failure: {exc}", file=sys.stderr)
        return EXIT_FIELD
    except (NoStabilization, NotFound) as exc:
        print(f"spline-dim: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"spline-dim: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
