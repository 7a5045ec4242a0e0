"""Command-line driver: datum loading, suite selection, reporting.

Exit codes: 0 when every checked identity holds exactly, 1 on configuration
or datum errors, 2 when at least one check was inconclusive (budget-limited)
but nothing failed.
"""

from __future__ import annotations

import argparse
import json
import sys

from .cache import GramStore
from .cartan import BorcherdsCartanDatum, height
from .engine import CACHE_ENV, Engine, EngineConfig
from .errors import BudgetError, DatumError, DomainError, EngineError, InconclusiveError
from .identities import REGISTRY, run_identities
from .modules import IRREDUCIBLE, VERMA
from .scalars import format_scalar
from .symmetries import braid_verify_module
from .ualg import LPP


def _parse_degree(datum, text: str):
    beta = [0] * datum.n
    for part in text.split(","):
        name, _, val = part.partition("=")
        beta[datum.idx(name.strip())] = int(val)
    return tuple(beta)


def _parse_weight(datum, text: str):
    vals = {}
    for part in text.split(","):
        name, _, val = part.partition("=")
        vals[name.strip()] = int(val)
    return datum.weight_from_h_values(vals)


def _emit(records: list, fmt: str, stream=None) -> None:
    stream = stream or sys.stdout
    if fmt == "json":
        out = []
        for r in records:
            rr = {"identity": r["identity"], "params": r["params"]}
            if r["holds"] is None:
                rr["inconclusive"] = True
            else:
                rr["holds"] = r["holds"]
            if r.get("detail"):
                rr["detail"] = r["detail"]
            if r.get("lhs_minus_rhs"):
                rr["lhs_minus_rhs"] = r["lhs_minus_rhs"]
            out.append(rr)
        stream.write(json.dumps(out, sort_keys=True, indent=2) + "\n")
    else:
        for r in records:
            mark = "ok " if r["holds"] else ("??" if r["holds"] is None else "FAIL")
            params = " ".join(f"{k}={v}" for k, v in sorted(r["params"].items()))
            detail = f"  [{r['detail']}]" if r.get("detail") else ""
            stream.write(f"{mark:5s} {r['identity']} {params}{detail}\n")
            for line in r.get("lhs_minus_rhs", [])[:6]:
                stream.write(f"      {line}\n")


def _exit_code(records: list) -> int:
    if any(r["holds"] is False for r in records):
        return 1
    if any(r["holds"] is None for r in records):
        return 2
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="bozec",
        description="Exact verification engine for quantum Borcherds-Bozec algebras.",
    )
    p.add_argument("--datum", help="path to a datum JSON file")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled suites")
    p.add_argument("--cache-dir", help=f"gram cache directory (or ${CACHE_ENV})")
    p.add_argument("--no-cache", action="store_true", help="disable the on-disk cache")
    p.add_argument("--window", type=int, default=8, help="height window for U terms")
    p.add_argument("--height-budget", type=int, default=8, help="free-algebra height budget")
    p.add_argument("--depth", type=int, default=4, help="default module depth")
    p.add_argument("--max-m", type=int, default=3)
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("--max-p", type=int, default=3)
    p.add_argument("--max-level", type=int, default=2)
    p.add_argument("--sample", type=int, default=5, help="sampled vectors per module check")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gram", help="Gram table of one degree slice")
    g.add_argument("--degree", required=True, help='e.g. "i=2,j=1"')
    g.add_argument("--matrix", action="store_true", help="print the full matrix")

    pr = sub.add_parser("primitive", help="primitive generator report")
    pr.add_argument("--index", required=True)
    pr.add_argument("--level", type=int, required=True)

    sub.add_parser("serre-check", help="radical membership of the flanked Serre sums")
    sub.add_parser("radical-check", help="radical membership of the simple generating set")

    ids = sub.add_parser("identity-suite", help="run named identity checks")
    ids.add_argument("--section", action="append", choices=("1", "2", "3", "module"))
    ids.add_argument("--only", action="append", metavar="NAME", help="registry names")
    ids.add_argument("--list", action="store_true", help="list registry names and exit")

    br = sub.add_parser("braid-check", help="braid relations on U and modules")
    br.add_argument("--pair", required=True, help='e.g. "i,j"')
    br.add_argument("--target", choices=("u", "module", "both"), default="both")
    br.add_argument("--weight", help='highest weight, e.g. "i=1,j=0"')

    mo = sub.add_parser("module", help="build a module and dump its character")
    mo.add_argument("--weight", required=True)
    mo.add_argument("--kind", choices=(VERMA, IRREDUCIBLE), default=IRREDUCIBLE)

    sub.add_parser("form-invariance", help="bilinear-form invariance under the symmetries")

    ca = sub.add_parser("cache", help="inspect or clear the gram cache")
    ca.add_argument("action", choices=("inspect", "clear"))
    return p


def _engine(args) -> Engine:
    if not args.datum:
        raise DomainError("--datum is required for this command")
    with open(args.datum) as fh:
        datum = BorcherdsCartanDatum.from_json(json.load(fh))
    cfg = EngineConfig(
        height_budget=args.height_budget,
        window=args.window,
        max_m=args.max_m,
        max_n=args.max_n,
        max_p=args.max_p,
        max_level=args.max_level,
        depth=args.depth,
        sample=args.sample,
        seed=args.seed,
        cache_dir=args.cache_dir,
        use_cache=not args.no_cache,
    )
    return Engine(datum, cfg)


def cmd_gram(args) -> int:
    eng = _engine(args)
    beta = _parse_degree(eng.datum, args.degree)
    table = eng.alg.gram(beta)
    if args.format == "json":
        data = {
            "degree": {eng.datum.names[t]: beta[t] for t in range(eng.datum.n)},
            "basis": [[[eng.datum.names[i], l] for i, l in w] for w in table.words],
            "rank": table.rank,
            "pivots": table.pivots,
        }
        if args.matrix:
            data["matrix"] = [[format_scalar(x) for x in row] for row in table.matrix]
        print(json.dumps(data, sort_keys=True, indent=2))
    else:
        print(f"degree {args.degree}: {len(table.words)} monomials, rank {table.rank}")
        print("pivot monomials:")
        for pos in table.pivots:
            word = table.words[pos]
            body = "*".join(f"e[{eng.datum.names[i]},{l}]" for i, l in word) or "1"
            print(f"  {body}")
        if args.matrix:
            for row in table.matrix:
                print("  [" + ", ".join(format_scalar(x) for x in row) + "]")
    return 0


def cmd_primitive(args) -> int:
    eng = _engine(args)
    i = eng.datum.idx(args.index)
    gen = eng.prims.generator(i, args.level)
    coeffs = gen.correction_coefficients()
    if args.format == "json":
        data = {
            "index": args.index,
            "level": args.level,
            "tau": format_scalar(gen.tau),
            "gamma": {"+".join(map(str, c)): format_scalar(v) for c, v in sorted(coeffs.items())},
        }
        print(json.dumps(data, sort_keys=True, indent=2))
    else:
        name = args.index
        lead = f"e[{name},{args.level}]"
        parts = [lead]
        for comp, v in sorted(coeffs.items()):
            body = "*".join(f"e[{name},{p}]" for p in comp)
            parts.append(f"({format_scalar(v)})*{body}")
        print(f"a[{name},{args.level}] = " + " + ".join(parts))
        print(f"tau = {format_scalar(gen.tau)}")
    return 0


def cmd_serre_check(args, simple_set=False) -> int:
    eng = _engine(args)
    from .identities import check_commutator_radical, check_serre_radical, check_serre_in_u
    import random

    rng = random.Random(args.seed)
    records = check_serre_radical(eng, rng)
    if simple_set:
        records += check_commutator_radical(eng, rng)
        records += check_serre_in_u(eng, rng)
    records.sort(key=lambda r: (r["identity"], repr(sorted(r["params"].items()))))
    _emit(records, args.format)
    return _exit_code(records)


def cmd_identity_suite(args) -> int:
    if args.list:
        for name in sorted(REGISTRY):
            print(f"{name}  (section {REGISTRY[name][0]})")
        return 0
    eng = _engine(args)
    names = set(args.only) if args.only else None
    if names:
        unknown = names - set(REGISTRY)
        if unknown:
            raise DomainError(f"unknown identity names: {sorted(unknown)}")
    records = run_identities(eng, names=names, sections=args.section, seed=args.seed)
    _emit(records, args.format)
    return _exit_code(records)


def cmd_braid_check(args) -> int:
    eng = _engine(args)
    d = eng.datum
    iname, _, jname = args.pair.partition(",")
    i, j = d.idx(iname.strip()), d.idx(jname.strip())
    m_ij = d.braid_order(i, j)
    if m_ij is None:
        raise DomainError("the pair has infinite braid order; nothing to verify")
    records = []
    if args.target in ("u", "both"):
        word1 = tuple((i, j)[k % 2] for k in range(m_ij))
        word2 = tuple((j, i)[k % 2] for k in range(m_ij))
        gens = [eng.ua.a_gen(*lab) for lab in d.generators]
        gens += [eng.ua.b_gen(*lab) for lab in d.generators]
        gens += [eng.ua.q_h(d.coroot_h(t, 1)) for t in range(d.n)]
        for e in (1, -1):
            ok = all(
                eng.ua.braid_apply(LPP, word1, e, g) == eng.ua.braid_apply(LPP, word2, e, g)
                for g in gens
            )
            records.append(
                {
                    "identity": "thm-2.6-u",
                    "params": {"i": iname, "j": jname, "e": e, "m_ij": m_ij},
                    "holds": ok,
                    "detail": f"{len(gens)} generators",
                }
            )
    if args.target in ("module", "both"):
        lam = _parse_weight(d, args.weight) if args.weight else d.fundamental_weight(i)
        depth = max(args.depth, m_ij + 3)
        M = eng.module(lam, depth, IRREDUCIBLE)
        for e in (1, -1):
            records.append(braid_verify_module(i, j, e, M))
    records.sort(key=lambda r: (r["identity"], repr(sorted(r["params"].items()))))
    _emit(records, args.format)
    return _exit_code(records)


def cmd_module(args) -> int:
    eng = _engine(args)
    lam = _parse_weight(eng.datum, args.weight)
    M = eng.module(lam, args.depth, args.kind)
    print(json.dumps(M.character(), sort_keys=True, indent=2))
    return 0


def cmd_form_invariance(args) -> int:
    eng = _engine(args)
    records = run_identities(eng, names={"thm-3.6", "lemma-3.2"}, seed=args.seed)
    _emit(records, args.format)
    return _exit_code(records)


def cmd_cache(args) -> int:
    import os

    root = args.cache_dir or os.environ.get(CACHE_ENV)
    if not root:
        raise DomainError(f"no cache directory given (--cache-dir or ${CACHE_ENV})")
    store = GramStore(root)
    datum = None
    if args.datum:
        with open(args.datum) as fh:
            datum = BorcherdsCartanDatum.from_json(json.load(fh))
    if args.action == "inspect":
        print(json.dumps(store.inspect(datum), sort_keys=True, indent=2))
    else:
        removed = store.clear(datum)
        print(f"removed {removed} cached tables")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "gram":
            return cmd_gram(args)
        if args.command == "primitive":
            return cmd_primitive(args)
        if args.command == "serre-check":
            return cmd_serre_check(args)
        if args.command == "radical-check":
            return cmd_serre_check(args, simple_set=True)
        if args.command == "identity-suite":
            return cmd_identity_suite(args)
        if args.command == "braid-check":
            return cmd_braid_check(args)
        if args.command == "module":
            return cmd_module(args)
        if args.command == "form-invariance":
            return cmd_form_invariance(args)
        if args.command == "cache":
            return cmd_cache(args)
        raise DomainError(f"unknown command {args.command!r}")
    except (DatumError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (BudgetError, InconclusiveError) as exc:
        needed = getattr(exc, "needed", None)
        hint = f" (needed budget: {needed})" if needed is not None else ""
        print(f"inconclusive: {exc}{hint}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except EngineError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
