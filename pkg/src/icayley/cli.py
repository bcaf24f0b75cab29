"""Command-line entry point.

Exit codes: 0 all checks passed, 1 a verdict failed, 2 bad input (parse,
build or file errors), 3 a size ceiling was hit.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import analysis, group as group_mod, spectra
from .constructors import distinguished_automorphism
from .errors import GroupError, SizeCeilingError, UnknownName
from .group import (
    FiniteGroup,
    center,
    derived_subgroup,
    exponent,
    frattini_pgroup,
    is_special_2group,
    nilpotency_class,
    omega1,
    order_profile,
)
from .io import dumps_aut, load_group, save_group
from .morphisms import automorphism_group, find_order3_fpf, verify_frobenius
from .recipe import eval_recipe

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CEILING = 0, 1, 2, 3
CHECKS = ("p", "a3-theorem", "a3-spectral", "both", "lemmas", "minnonab", "frobenius", "family")


def resolve_group(arg: str) -> FiniteGroup:
    """A cgt1 path, or an inline recipe (anything containing '(')."""
    if "(" in arg:
        return eval_recipe(arg)
    return load_group(arg)


def _yn(v: bool) -> str:
    return "true" if v else "false"


# subcommands ---------------------------------------------------------------------


def cmd_build(args) -> int:
    G = eval_recipe(args.recipe)
    if args.out:
        save_group(G, args.out)
    print(f"order {G.n}")
    print(f"abelian {_yn(G.is_abelian)}")
    print(f"exponent {exponent(G)}")
    print(f"profile {order_profile(G)}")
    if args.out:
        print(f"wrote {args.out}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    G = resolve_group(args.group)
    print(f"order {G.n}")
    print(f"abelian {_yn(G.is_abelian)}")
    print(f"exponent {exponent(G)}")
    print(f"center {center(G).order}")
    print(f"derived {derived_subgroup(G).order}")
    print(f"omega1 {omega1(G).order}")
    cls = nilpotency_class(G)
    print(f"nilpotency_class {cls if cls is not None else 'not-nilpotent'}")
    if G.n & (G.n - 1) == 0:
        rep = is_special_2group(G)
        print(f"frattini {frattini_pgroup(G).order}")
        print(f"special {_yn(rep.verdict)}")
    else:
        print("special n/a")
    print(f"profile {order_profile(G)}")
    return EXIT_OK


def cmd_check(args) -> int:
    G = resolve_group(args.group)
    what = args.what
    ok = True
    if what == "p":
        rep = analysis.has_property_p(G, cap=args.cap)
        print(rep.line())
        ok = rep.verdict
    elif what == "a3-theorem":
        v = analysis.in_a3_theorem(G)
        print(f"check a3-theorem {'pass' if v.member else 'fail'} member={_yn(v.member)} reason={v.reason}")
        ok = v.member
    elif what == "a3-spectral":
        v = spectra.in_a3_spectral(G, ceiling=args.ceiling, override_size=args.override_size)
        extra = f" {v.witness.line()}" if v.witness else ""
        print(f"check a3-spectral {'pass' if v.member else 'fail'} member={_yn(v.member)} sets={v.checked}{extra}")
        ok = v.member
    elif what == "both":
        t = analysis.in_a3_theorem(G)
        s = spectra.in_a3_spectral(G, ceiling=args.ceiling, override_size=args.override_size)
        agree = t.member == s.member
        print(f"check a3-both {'pass' if agree else 'fail'} agree={_yn(agree)} member={_yn(t.member)} "
              f"theorem={_yn(t.member)} spectral={_yn(s.member)}")
        if s.witness:
            print(s.witness.line())
        ok = agree
    elif what == "lemmas":
        rep = analysis.lemma_suite(G)
        print(rep.text())
        ok = rep.accepted
    elif what == "minnonab":
        found = analysis.minimal_nonabelian_subgroups(G, override_size=args.override_size)
        tags = sorted({t for _, t in found})
        counts = {t: sum(1 for _, u in found if u == t) for t in tags}
        print(f"check minnonab pass count={len(found)} tags={json.dumps(counts, sort_keys=True)}")
    elif what == "frobenius":
        try:
            phi = distinguished_automorphism(G)
            rep = verify_frobenius(G, phi, 3)
            print(f"check frobenius {'pass' if rep else 'fail'} offending={list(rep.offending)}")
            ok = rep.verdict
        except UnknownName:
            rep = analysis.verify_family(G, "c")
            print(rep.text())
            ok = rep.accepted
    elif what == "family":
        rep = analysis.verify_family(G, args.tag)
        print(rep.text())
        ok = rep.accepted
    return EXIT_OK if ok else EXIT_FAIL


def cmd_aut(args) -> int:
    G = resolve_group(args.group)
    auts = automorphism_group(G, budget=args.budget, override_size=args.override_size)
    orders: dict[int, int] = {}
    for a in auts:
        orders[a.order] = orders.get(a.order, 0) + 1
    print(f"aut_order {len(auts)}")
    print("element_orders " + json.dumps(dict(sorted(orders.items()))))
    return EXIT_OK


def cmd_fpf(args) -> int:
    G = resolve_group(args.group)
    phi = find_order3_fpf(G, budget=args.budget, override_size=args.override_size)
    if phi is None:
        print("fpf none")
        return EXIT_FAIL
    print("fpf found")
    print("gens " + " ".join(map(str, G.gens)) + " -> " + " ".join(str(phi(g)) for g in G.gens))
    if args.out:
        Path(args.out).write_text(dumps_aut(phi))
        print(f"wrote {args.out}")
    return EXIT_OK


def cmd_spectrum(args) -> int:
    G = resolve_group(args.group)
    if args.set:
        sets = [spectra.ConnectionSet(G, tuple(int(v) for v in args.set.split(",")))]
    else:
        sets = spectra.enumerate_3_subsets(G)
    ok = True
    for X in sets:
        rep = spectra.integral_spectrum_3valent(G, X, ceiling=args.ceiling, override_size=args.override_size)
        print(rep.line())
        ok &= rep.integral
    return EXIT_OK if ok else EXIT_FAIL


# catalog -------------------------------------------------------------------------


@dataclass
class CatalogEntry:
    name: str
    recipe: str
    expected: dict
    provenance: str = ""
    lineno: int = 0


@dataclass
class EntryResult:
    name: str
    ok: bool
    observed: dict = field(default_factory=dict)
    mismatches: list = field(default_factory=list)
    error: str = ""

    def line(self) -> str:
        facts = " ".join(f"{k}={v}" for k, v in self.observed.items())
        out = f"entry {self.name} {'pass' if self.ok else 'fail'} {facts}".rstrip()
        if self.mismatches:
            out += " mismatch=" + ",".join(self.mismatches)
        if self.error:
            out += f" error={self.error}"
        return out


def parse_catalog(text: str) -> list[CatalogEntry]:
    """Lines ``name | recipe | key=value ...  # provenance``; blank and # lines skipped."""
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body, _, note = raw.partition("#")
        if not body.strip():
            continue
        parts = [p.strip() for p in body.split("|")]
        if len(parts) != 3:
            raise GroupError(f"catalog line {lineno}: expected 'name | recipe | facts'")
        facts = {}
        for item in parts[2].split():
            key, eq, value = item.partition("=")
            if not eq:
                raise GroupError(f"catalog line {lineno}: bad fact {item!r}")
            facts[key] = value
        entries.append(CatalogEntry(parts[0], parts[1], facts, note.strip(), lineno))
    return entries


def default_catalog_text() -> str:
    return resources.files("icayley").joinpath("data/default_catalog.txt").read_text()


def _observe(G: FiniteGroup, key: str, value: str, cfg: dict) -> str:
    if key == "order":
        return str(G.n)
    if key == "p":
        return _yn(analysis.has_property_p(G, cap=cfg["cap"]).verdict)
    if key == "a3":
        return _yn(analysis.in_a3_theorem(G).member)
    if key == "spectral":
        return _yn(spectra.in_a3_spectral(G, ceiling=cfg["ceiling"], override_size=cfg["override_size"]).member)
    if key == "family":
        return value if analysis.verify_family(G, value).accepted else "rejected"
    if key == "special":
        return _yn(is_special_2group(G).verdict)
    if key == "lemmas":
        return "pass" if analysis.lemma_suite(G).accepted else "fail"
    if key == "abelian":
        return _yn(G.is_abelian)
    raise UnknownName(f"unknown catalog fact {key!r}")


def run_entry(entry: CatalogEntry, cfg: dict) -> EntryResult:
    group_mod.set_default_seed(cfg["seed"])
    res = EntryResult(entry.name, True)
    try:
        G = eval_recipe(entry.recipe)
        for key, want in entry.expected.items():
            got = _observe(G, key, want, cfg)
            res.observed[key] = got
            if got != want:
                res.mismatches.append(f"{key}:{want}!={got}")
    except GroupError as err:
        res.error = f"{type(err).__name__}"
        res.observed["detail"] = json.dumps(str(err))
    res.ok = not res.mismatches and not res.error
    return res


def cmd_catalog(args) -> int:
    text = Path(args.path).read_text() if args.path else default_catalog_text()
    entries = parse_catalog(text)
    cfg = {"cap": args.cap, "ceiling": args.ceiling, "override_size": args.override_size, "seed": args.seed}
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(run_entry, entries, [cfg] * len(entries)))
    else:
        results = [run_entry(e, cfg) for e in entries]
    for r in results:
        print(r.line())
    passed = sum(r.ok for r in results)
    print(f"catalog {passed}/{len(results)} pass")
    return EXIT_OK if passed == len(results) else EXIT_FAIL


# argument parsing ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=int, default=analysis.PROPERTY_P_CAP,
                        help="closure cap for the property (P) pair scan")
    common.add_argument("--ceiling", type=int, default=spectra.SPECTRAL_CEILING,
                        help="largest order accepted by spectral checks")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for the catalog")
    common.add_argument("--seed", type=lambda s: int(s, 0), default=group_mod.DEFAULT_SEED,
                        help="seed for sampled associativity checks")
    common.add_argument("--override-size", action="store_true", help="lift advisory size ceilings")
    common.add_argument("--budget", type=int, default=5_000_000, help="node budget for backtracking searches")

    ap = argparse.ArgumentParser(prog="icayley", description="Finite groups and 3-valent Cayley integrality.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", parents=[common], help="build a group from a recipe")
    p.add_argument("recipe")
    p.add_argument("out", nargs="?", help="write the table in cgt1 format")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("analyze", parents=[common], help="print structural invariants")
    p.add_argument("group", help="cgt1 path or inline recipe")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("check", parents=[common], help="run one decision procedure")
    p.add_argument("group")
    p.add_argument("what", choices=CHECKS)
    p.add_argument("--tag", choices="abcd", default="c", help="family for 'check ... family'")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("aut", parents=[common], help="enumerate the automorphism group")
    p.add_argument("group")
    p.set_defaults(func=cmd_aut)

    p = sub.add_parser("fpf", parents=[common], help="search for an order-3 fixed-point-free automorphism")
    p.add_argument("group")
    p.add_argument("--out", help="write the automorphism in aut1 format")
    p.set_defaults(func=cmd_fpf)

    p = sub.add_parser("spectrum", parents=[common], help="integer spectrum of 3-valent Cayley graphs")
    p.add_argument("group")
    p.add_argument("--set", help="one connection set, e.g. 4,1,7 (default: all)")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("catalog", parents=[common], help="verify a catalog of expected facts")
    p.add_argument("path", nargs="?", help="catalog file (default: bundled catalog)")
    p.set_defaults(func=cmd_catalog)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    group_mod.set_default_seed(args.seed)
    try:
        return args.func(args)
    except SizeCeilingError as err:
        print(f"ceiling: {err}", file=sys.stderr)
        return EXIT_CEILING
    except (GroupError, OSError) as err:
        cause = err.__cause__
        if isinstance(cause, SizeCeilingError):
            print(f"ceiling: {err}", file=sys.stderr)
            return EXIT_CEILING
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
