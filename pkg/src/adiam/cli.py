"""Command-line driver.

Exit codes: 0 when the result is certified (an exact value, an infinite lower
bound, a verified file, a successful numeric decomposition), 2 when the search
was inconclusive, 1 on errors and failed verification.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import eqmorph, groupdiam, liediam, reproduce, spaces
from .exactlin import DimensionError
from .repkit import parse_rep

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    command: str
    rep: str | None = None
    sub: str | None = None
    max_k: int = 12
    seed: int = 0
    trials: int = 30
    mode: str = "exact"
    tol: float | None = None
    out: str | None = None


class _Emitter:
    def __init__(self, out: str | None, quiet: bool):
        self.out, self.quiet = out, quiet

    def json(self, obj) -> None:
        text = json.dumps(obj, sort_keys=True, indent=1) + "\n"
        if self.out:
            Path(self.out).write_text(text)
        elif not self.quiet:
            sys.stdout.write(text)

    def text(self, s: str) -> None:
        if not self.quiet:
            print(s)


def _finish_search(res, emit: _Emitter) -> int:
    """Emit a search result; Exact or an infinite lower bound is certified."""
    if isinstance(res, tuple):
        lower, upper = res
        emit.json({"type": "bounds", "lower": lower.to_json(), "upper": upper.to_json() if upper else None})
        return EXIT_OK if lower.value == groupdiam.INFINITE else EXIT_INCONCLUSIVE
    emit.json(res.to_json())
    return EXIT_OK


def cmd_diam(cfg: RunConfig, args, emit: _Emitter) -> int:
    rep = parse_rep(cfg.rep)
    U = spaces.parse_subspace(cfg.sub, rep)
    if args.lie:
        res = liediam.diameter_lie(rep, U, args.lie, max_k=cfg.max_k, seed=cfg.seed, trials=cfg.trials,
                                   max_degree=args.max_degree)
    else:
        res = groupdiam.diameter(rep, U, max_k=cfg.max_k, seed=cfg.seed, trials=cfg.trials)
    return _finish_search(res, emit)


def _floats(s: str) -> list[float]:
    return [float(Fraction(x)) for x in s.split(",")]


def cmd_waring(cfg: RunConfig, args, emit: _Emitter) -> int:
    f = eqmorph.parse_map(args.map)
    if cfg.mode == "float":
        if args.target is None or args.k is None:
            raise ValueError("float mode needs --target and --k")
        pts = eqmorph.numeric_decompose(f, _floats(args.target), args.k, seed=cfg.seed,
                                        restarts=cfg.trials, tol=cfg.tol if cfg.tol is not None else 1e-9)
        if pts is None:
            emit.json({"type": "numeric", "map": args.map, "found": False})
            return EXIT_INCONCLUSIVE
        total = sum(f.eval_float(p) for p in pts)
        residual = float(sum((a - b) ** 2 for a, b in zip(total, _floats(args.target))) ** 0.5)
        emit.json({"type": "numeric", "map": args.map, "found": True, "residual": residual,
                   "points": [[float(x) for x in p] for p in pts]})
        return EXIT_OK
    if args.point is None:
        raise ValueError("exact mode needs --point")
    w = [Fraction(x) for x in args.point.split(",")]
    try:
        cert = eqmorph.waring_bound(f, w, seed=cfg.seed, max_k=cfg.max_k, descriptor=args.map)
    except eqmorph.SubrepTrapError as exc:
        emit.json({"type": "waring_trapped", "map": args.map, "Z": exc.Z.to_json()})
        return EXIT_OK
    except RuntimeError as exc:
        emit.text(str(exc))
        return EXIT_INCONCLUSIVE
    emit.json(cert.to_json())
    return EXIT_OK


def cmd_enumerate(cfg: RunConfig, args, emit: _Emitter) -> int:
    found = spaces.enumerate_block_closed(args.n, args.dim, args.diag, seed=cfg.seed, trials=args.samples)
    emit.json({"type": "enumeration", "n": args.n, "dim": args.dim, "diag_mode": args.diag,
               "subspaces": [U.to_json() for U in found]})
    return EXIT_OK


def verify_object(obj) -> tuple[bool, str]:
    if not isinstance(obj, dict):
        return False, "certificate must be a JSON object"
    if obj.get("schema") != groupdiam.SCHEMA:
        return False, f"unsupported schema {obj.get('schema')!r}"
    kind = obj.get("type")
    if kind == "group":
        return groupdiam.verify_certificate(obj)
    if kind == "lie":
        return liediam.verify_lie_certificate(obj)
    if kind == "waring":
        return eqmorph.verify_waring(obj)
    return False, f"unknown certificate type {kind!r}"


def cmd_verify(cfg: RunConfig, args, emit: _Emitter) -> int:
    code = EXIT_OK
    for path in args.paths:
        try:
            obj = json.loads(Path(path).read_text())
            ok, msg = verify_object(obj)
        except (OSError, json.JSONDecodeError) as exc:
            ok, msg = False, f"unreadable: {exc}"
        except (ValueError, KeyError, TypeError, ZeroDivisionError, DimensionError) as exc:
            ok, msg = False, f"malformed certificate: {exc}"
        emit.text(f"{path}: {'OK' if ok else 'FAIL'} {msg}")
        if not ok:
            code = EXIT_ERROR
    return code


def cmd_reproduce(cfg: RunConfig, args, emit: _Emitter) -> int:
    selectors = None if args.all or not args.selectors else args.selectors
    chosen = reproduce.select(selectors, args.criterion)
    if not chosen:
        raise ValueError(f"no reproduction rows match {args.selectors}")
    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        rows = list(pool.map(reproduce.run_one, chosen))
    for r in rows:
        emit.text(r.line())
    if args.out:
        Path(args.out).write_text(json.dumps([r.__dict__ for r in rows], sort_keys=True, indent=1) + "\n")
    required = [r for r in rows if r.selector not in reproduce.INFORMATIONAL]
    return EXIT_OK if all(r.passed for r in required) else EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="adiam", description="Additive diameters of representations.")
    sub = p.add_subparsers(dest="command", required=True)

    def search_flags(sp):
        sp.add_argument("--rep", required=True, help="sl2:k, conj:sln:n or conj:Mn:n")
        sp.add_argument("--sub", required=True, help="upper:k:j, B:n:i:j, named:n:NAME, random:n:d:seed, file:PATH")
        sp.add_argument("--max-k", type=int, default=12)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--trials", type=int, default=30)
        sp.add_argument("--max-degree", type=int, default=3, help="monomial degree cap for random Lie witnesses")
        sp.add_argument("--out")

    sp = sub.add_parser("diam", help="G-additive diameter (or a Lie variant with --lie)")
    search_flags(sp)
    sp.add_argument("--lie", choices=liediam.VARIANTS)

    sp = sub.add_parser("liediam", help="Lie-additive diameter")
    search_flags(sp)
    sp.add_argument("--lie", choices=liediam.VARIANTS, default="mon")

    sp = sub.add_parser("waring", help="Waring-type bound for an equivariant map")
    sp.add_argument("--map", required=True, help="twisted_cubic, orbit:k, square:n, comm:n, trace:n:EXPR")
    sp.add_argument("--point", help="base point w, comma separated rationals")
    sp.add_argument("--mode", choices=("exact", "float"), default="exact")
    sp.add_argument("--target", help="float mode: vector to decompose")
    sp.add_argument("--k", type=int, help="float mode: number of points")
    sp.add_argument("--tol", type=float, help="float mode: residual tolerance")
    sp.add_argument("--max-k", type=int, default=12)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=100, help="float mode: random restarts")
    sp.add_argument("--out")

    sp = sub.add_parser("enumerate", help="upper right block closed subspaces of sl_n")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--diag", choices=("forced_only", "sampled"), default="forced_only")
    sp.add_argument("--samples", type=int, default=3)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")

    sp = sub.add_parser("verify", help="replay certificate files")
    sp.add_argument("paths", nargs="+")

    sp = sub.add_parser("reproduce", help="run the reproduction table")
    sp.add_argument("selectors", nargs="*")
    sp.add_argument("--all", action="store_true")
    sp.add_argument("--criterion", type=int)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--out", help="also write the rows as JSON")
    return p


def _config(args) -> RunConfig:
    mode = getattr(args, "mode", "exact")
    return RunConfig(
        command=args.command,
        rep=getattr(args, "rep", None),
        sub=getattr(args, "sub", None),
        max_k=getattr(args, "max_k", 12),
        seed=getattr(args, "seed", 0),
        trials=getattr(args, "trials", 30),
        mode=mode,
        tol=getattr(args, "tol", None) if mode == "float" else None,
        out=getattr(args, "out", None),
    )


COMMANDS = {
    "diam": cmd_diam,
    "liediam": cmd_diam,
    "waring": cmd_waring,
    "enumerate": cmd_enumerate,
    "verify": cmd_verify,
    "reproduce": cmd_reproduce,
}


def main(argv: list[str] | None = None, quiet: bool = False) -> int:
    args = build_parser().parse_args(argv)
    cfg = _config(args)
    emit = _Emitter(cfg.out if cfg.command != "reproduce" else None, quiet)
    try:
        return COMMANDS[cfg.command](cfg, args, emit)
    except (ValueError, DimensionError, groupdiam.PreconditionError, eqmorph.EquivarianceError) as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_ERROR


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
