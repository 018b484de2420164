"""Command-line interface: ``nonabtensor <command> ...``.

Exit codes: 0 success, 1 input error, 2 resource limit.  In ``verify``
a failing claim instance also exits 1.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from unittest.mock import patch

from . import config
from .abelian import abelian_invariants
from .catalog import build, catalog_names
from .errors import GroupError, ResourceLimitError
from .group import FiniteGroup, conjugation_action, load
from .series import (
    derived_series,
    frak_D,
    iterated_derivative,
    lower_central_series,
    predicates,
    upper_central_series,
)
from .tensor import (
    exterior_square,
    schur_multiplier,
    self_pair,
    tensor_square,
    tensor_summary,
)
from .tower import nilpotent_multiplier_bound, solvable_multiplier, tensor_power

EXIT_OK, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2
PAIRING_SAMPLE = 8


@dataclass(frozen=True)
class Config:
    coset_limit: int = config.DEFAULT_COSET_LIMIT
    order_cap: int = config.DEFAULT_ORDER_CAP
    worker_count: int = 1
    output_format: str = "table"
    report_path: str | None = None

    def __post_init__(self):
        if self.coset_limit <= 0 or self.order_cap <= 0 or self.worker_count <= 0:
            raise ValueError("limits and worker count must be positive")
        if self.output_format not in ("table", "json"):
            raise ValueError(f"unknown format {self.output_format!r}")


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--coset-limit", type=_positive, default=config.DEFAULT_COSET_LIMIT)
    p.add_argument("--order-cap", type=_positive, default=None,
                   help="defaults to $TENSOR_ORDER_CAP or %d" % config.DEFAULT_ORDER_CAP)
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--report", default=None, help="JSON-lines report path (verify)")


def _group_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("group", nargs="?", help="catalog name, e.g. D4 or C2xQ8")
    p.add_argument("--file", help="JSON Cayley table instead of a catalog name")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nonabtensor",
                                     description="Non-abelian tensor products of finite groups")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        _common(p)
        return p

    p = add("info", "order, abelian invariants and structural predicates")
    _group_args(p)
    p = add("series", "orders of a central or derived series")
    _group_args(p)
    p.add_argument("--type", choices=("lower", "upper", "derived"), default="lower")
    p.add_argument("-n", type=_positive, default=4)
    for name in ("tensor-square", "exterior-square"):
        p = add(name, f"the {name.replace('-', ' ')} of a group")
        _group_args(p)
        p.add_argument("--strategy", choices=("direct", "nu"), default="direct")
    p = add("tensor-power", "orders of the tensor power tower")
    _group_args(p)
    p.add_argument("-n", type=_positive, default=3)
    p = add("schur", "the Schur multiplier as the kernel of the commutator map")
    _group_args(p)
    p = add("multiplier", "kernel of mu_(k+1) (solvable, exact) or lambda_(k+1) (nilpotent bound)")
    _group_args(p)
    p.add_argument("-k", type=_positive, default=1)
    p.add_argument("--variant", choices=("solvable", "nilpotent"), default="solvable")
    p = add("derivative", "iterated derivative of the group under conjugation")
    _group_args(p)
    p.add_argument("-k", type=int, default=1)
    p = add("frakd", "the subgroup frak_D_n")
    _group_args(p)
    p.add_argument("-n", type=_positive, default=1)

    p = add("verify", "run claim checks over catalog groups, writing JSON lines")
    for claim in ("lemma1", "lemma2", "thm1", "prop1", "prop3", "dtech", "bjr", "schur-group"):
        p.add_argument(f"--{claim}", action="store_true")
    p.add_argument("--max-order", type=_positive, default=8)
    p.add_argument("-n", type=_positive, default=1)

    p = add("bench", "time both strategies over catalog groups")
    p.add_argument("--max-order", type=_positive, default=8)
    p.add_argument("groups", nargs="*")
    return parser


def _load_group(args) -> FiniteGroup:
    if args.file:
        return load(args.file, name=os.path.basename(args.file))
    if not args.group:
        raise GroupError("give a catalog group name or --file")
    return build(args.group)


def _orders(chain) -> list[int]:
    return [S.order for S in chain.terms]


def _tensor_record(tg) -> dict:
    G, H = tg.origin.G, tg.origin.H
    sample = [[g, h, int(tg.pairing[g, h])]
              for g in range(min(G.order, PAIRING_SAMPLE)) for h in range(min(H.order, 2))]
    return {"order": tg.order, "abelian_invariants": tg.abelian_invariants(),
            "strategy": tg.strategy, "cosets_defined": tg.cosets_defined, "pairing_sample": sample}


def compute(args, cfg: Config) -> dict:
    G = _load_group(args)
    out: dict = {"group": G.name, "order": G.order}
    lim = cfg.coset_limit
    cmd = args.command
    if cmd == "info":
        out["abelian_invariants"] = abelian_invariants(G)
        out["predicates"] = predicates(G).as_dict()
    elif cmd == "series":
        fn = {"lower": lower_central_series, "upper": upper_central_series, "derived": derived_series}
        out["type"] = args.type
        out["orders"] = _orders(fn[args.type](G, args.n))
    elif cmd == "tensor-square":
        try:
            out["tensor"] = _tensor_record(tensor_square(G, args.strategy, lim))
        except ResourceLimitError as e:
            if e.kind != "order":
                raise
            # above the order cap: order and invariants still come from the coset table
            s = tensor_summary(self_pair(G), args.strategy, lim)
            out["tensor"] = {"order": s.order, "abelian_invariants": s.invariants,
                             "strategy": s.strategy, "cosets_defined": s.cosets_defined,
                             "note": str(e)}
    elif cmd == "exterior-square":
        out["exterior"] = _tensor_record(exterior_square(G, lim, args.strategy))
    elif cmd == "tensor-power":
        tower = tensor_power(G, args.n, lim)
        out["levels"] = [{"n": i, "order": tower.level(i).group.order,
                          "lambda_image": tower.level(i).lam.image_subgroup().order}
                         for i in range(1, args.n + 1)]
    elif cmd == "schur":
        M = schur_multiplier(G, lim)
        Mg, _ = M.as_group()
        out["multiplier"] = {"order": M.order, "abelian_invariants": abelian_invariants(Mg)}
    elif cmd == "multiplier":
        if args.variant == "solvable":
            K, tag = solvable_multiplier(G, args.k, lim), "solvable-exact"
        else:
            K, tag = nilpotent_multiplier_bound(G, args.k, lim), "nilpotent-bound"
        Kg, _ = K.as_group()
        out["multiplier"] = {"variant": tag, "k": args.k, "order": K.order,
                             "abelian_invariants": abelian_invariants(Kg)}
    elif cmd == "derivative":
        D = iterated_derivative(G, G, conjugation_action(G), args.k)
        out["derivative"] = {"k": args.k, "order": D.order}
    elif cmd == "frakd":
        out["frakd"] = {"n": args.n, "order": frak_D(G, args.n).order}
    return out


def verify(args, cfg: Config) -> tuple[dict, int]:
    from .harness import CLAIMS, FAIL, consistent_reading, sweep

    claims = [c for c in CLAIMS if getattr(args, c.replace("-", "_"))]
    if not claims:
        raise GroupError("select at least one claim, e.g. --thm1")
    names = catalog_names(args.max_order)
    reports = sweep(claims, names, (args.n,), workers=cfg.worker_count, report=cfg.report_path)
    summary: dict = {}
    for r in reports:
        summary.setdefault(r.claim, {}).setdefault(r.status, 0)
        summary[r.claim][r.status] += 1
    out = {"claims": claims, "groups": names, "n": args.n, "summary": summary}
    if "bjr" in claims:
        out["bjr_reading"] = consistent_reading(r for r in reports if r.claim == "bjr")
    failures = [json.loads(r.to_json()) for r in reports if r.status == FAIL]
    out["failures"] = failures
    bad = bool(failures) or ("bjr" in claims and out["bjr_reading"] is None)
    return out, EXIT_INPUT if bad else EXIT_OK


def bench(args, cfg: Config) -> dict:
    names = args.groups or catalog_names(args.max_order)
    rows, timings = [], []
    for name in names:
        G = build(name)
        for strategy in ("direct", "nu"):
            t0 = time.perf_counter()
            try:
                tg = tensor_square(G, strategy, cfg.coset_limit)
                order, cosets = tg.order, tg.cosets_defined
            except ResourceLimitError:
                order, cosets = None, None
            ms = (time.perf_counter() - t0) * 1000
            rows.append({"group": name, "strategy": strategy, "order": order, "cosets_defined": cosets})
            timings.append(round(ms, 3))
    return {"results": rows, "timings_ms": timings}


def _print_table(out: dict) -> None:
    def walk(prefix, v):
        if isinstance(v, dict):
            for k, x in v.items():
                walk(f"{prefix}.{k}" if prefix else str(k), x)
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            for i, x in enumerate(v):
                walk(f"{prefix}[{i}]", x)
        else:
            print(f"{prefix:<40} {v}")
    walk("", out)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    # the cap override lasts for this call only
    env = {} if args.order_cap is None else {"TENSOR_ORDER_CAP": str(args.order_cap)}
    with patch.dict(os.environ, env):
        return _run(args)


def _run(args) -> int:
    try:
        cfg = Config(args.coset_limit, config.order_cap(), args.workers, args.format, args.report)
        code = EXIT_OK
        if args.command == "verify":
            out, code = verify(args, cfg)
        elif args.command == "bench":
            out = bench(args, cfg)
            if cfg.output_format == "table":
                for row, ms in zip(out.pop("results"), out.pop("timings_ms")):
                    print(f"{row['group']:<12} {row['strategy']:<7} order={row['order']} "
                          f"cosets={row['cosets_defined']} ms={ms}")
                return code
        else:
            out = compute(args, cfg)
    except ResourceLimitError as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return EXIT_LIMIT
    except (GroupError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    if cfg.output_format == "json":
        print(json.dumps(out, sort_keys=True))
    else:
        _print_table(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
