"""Command line entry point ``cohwork``."""

from __future__ import annotations

import argparse
import sys

from .algebra import AlgebraError
from .cochains import normalized_cochain_complex
from .harness import (
    SUITES,
    Report,
    ScenarioError,
    SuiteContext,
    load_scenario,
    setup_to_scenario,
    suite_report,
    verify,
)
from .positive import (
    GlobalSetup,
    build_localization,
    h_plus,
    sha,
    sha_hat_plus,
    twist_z_pro,
    z_direct,
    z_formula,
)
from .random_gen import SetupBounds
from .tate import ArchPlace, arch_duality_check, complete_complex

COMMANDS = ("cohomology", "tate", "h-plus", "sha", "z-module", "twist-table", "verify")


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cohwork",
        description="Mapping cones, group cohomology and totally positive cohomology over Z/2^k.",
    )
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--scenario", help="scenario JSON file")
    p.add_argument("--suite", default="all", help=f"verification suite: {', '.join(SUITES)} or all")
    p.add_argument("--count", type=int, default=100, help="random instances per suite (default 100)")
    p.add_argument("--seed", type=int, default=None, help="seed for random instances")
    p.add_argument("--k", type=int, default=None, help="ring exponent for random instances (default 4)")
    p.add_argument("--max-degree", type=int, default=None, help="degree window D (default 4)")
    p.add_argument("--i", type=int, default=0, help="twist for twist-table")
    p.add_argument("--real", type=int, default=1, help="real places for twist-table")
    p.add_argument("--complex", type=int, default=0, help="complex places for twist-table")
    p.add_argument("--strict", action="store_true", help="twist-table: intersect with the honest diagonal")
    p.add_argument("--report", help="write the machine-readable JSON report to this file")
    p.add_argument("--json", action="store_true", help="print the JSON report instead of text")
    return p


def _factors(M) -> list[int]:
    return M.invariant_factors()


def _need_setup(args) -> GlobalSetup:
    if not args.scenario:
        raise ScenarioError("scenario", f"command {args.command!r} needs --scenario FILE")
    return load_scenario(args.scenario, k=args.k, D=args.max_degree).setup


def cmd_cohomology(args) -> Report:
    S = _need_setup(args)
    rows = []
    C = normalized_cochain_complex(S.G, S.module, S.D)
    for n in range(S.D):
        rows.append({"place": "global", "degree": n, "invariant_factors": _factors(C.cohomology(n))})
    B = build_localization(S)
    for p in S.places:
        Cv = B.local[p.label]
        for n in range(S.D):
            rows.append({"place": p.label, "degree": n, "invariant_factors": _factors(Cv.cohomology(n))})
    return Report("cohomology", True, {"scenario": setup_to_scenario(S)}, rows)


def cmd_tate(args) -> Report:
    S = _need_setup(args)
    rows = []
    ok = True
    for p in S.archimedean:
        place = ArchPlace(p.kind, p.subgroup, p.label)
        X = complete_complex(place, S.module, S.D)
        groups = {n: _factors(X.cohomology(n)) for n in range(-(S.D - 1), S.D)}
        for n, f in groups.items():
            rows.append({"place": p.label, "degree": n, "invariant_factors": f})
        periodic = all(groups[n] == groups[n + 2] for n in groups if n + 2 in groups)
        rows.append({"check": f"{p.label}: 2-periodic", "passed": periodic})
        ok &= periodic
        if p.kind == "real":
            for n in (0, 1, 2):
                rep = arch_duality_check(place, S.module, n, D=S.D)
                rows.append({"check": f"{p.label}: duality n={n}", "passed": rep.ok})
                ok &= rep.ok
    return Report("tate", ok, {"scenario": setup_to_scenario(S)}, rows)


def cmd_h_plus(args) -> Report:
    S = _need_setup(args)
    rows = []
    ok = True
    for n in range(1, S.D):
        a = _factors(h_plus(S, n, "definition"))
        b = _factors(h_plus(S, n, "cone"))
        rows.append({"check": f"H^{n}_+ definition = cone", "passed": a == b, "definition": a, "cone": b})
        ok &= a == b
    return Report("h-plus", ok, {"scenario": setup_to_scenario(S)}, rows)


def cmd_sha(args) -> Report:
    S = _need_setup(args)
    rows = []
    for n in range(1, S.D - 1):
        rows.append({"variant": "plain", "degree": n, "invariant_factors": _factors(sha(S, n, "plain"))})
        rows.append({"variant": "plus", "degree": n, "invariant_factors": _factors(sha(S, n, "plus"))})
    rows.append({"variant": "hat", "degree": 1, "invariant_factors": _factors(sha_hat_plus(S))})
    return Report("sha", True, {"scenario": setup_to_scenario(S)}, rows)


def cmd_z_module(args) -> Report:
    S = _need_setup(args)
    a = _factors(z_direct(S))
    b = _factors(z_formula(S))
    rows = [{"check": "Z(M) direct = formula", "passed": a == b, "direct": a, "formula": b}]
    return Report("z-module", a == b, {"scenario": setup_to_scenario(S)}, rows)


def cmd_twist_table(args) -> Report:
    if args.real < 0 or args.complex < 0 or args.real + args.complex < 1:
        raise ScenarioError("--real/--complex", "need nonnegative counts with at least one place")
    Z = twist_z_pro(args.i, args.real, args.complex, strict=args.strict)
    params = {"i": args.i, "real": args.real, "complex": args.complex, "strict": args.strict}
    return Report("twist-table", True, params, [{"module": str(Z), **Z.to_dict()}])


def cmd_verify(args) -> Report:
    if args.count < 1:
        raise ScenarioError("--count", "must be at least 1")
    if args.suite != "all" and args.suite not in SUITES:
        raise ScenarioError("--suite", f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)} or all")
    scenario = load_scenario(args.scenario, k=args.k, D=args.max_degree) if args.scenario else None
    seed = args.seed if args.seed is not None else (scenario.seed if scenario else 0)
    kw = {}
    if args.k is not None:
        if not 1 <= args.k <= 8:
            raise ScenarioError("--k", "must be between 1 and 8")
        kw["k"] = args.k
    if args.max_degree is not None:
        if not 3 <= args.max_degree <= 6:
            raise ScenarioError("--max-degree", "must be between 3 and 6")
        kw["D"] = args.max_degree
    ctx = SuiteContext(setup_bounds=SetupBounds(**kw), scenario=scenario)
    results = verify(args.suite, args.count, seed, ctx)
    params = {"suite": args.suite, "count": args.count, "seed": seed, **kw}
    if scenario is not None:
        params["scenario"] = setup_to_scenario(scenario.setup)
    return suite_report(results, params)


HANDLERS = {
    "cohomology": cmd_cohomology,
    "tate": cmd_tate,
    "h-plus": cmd_h_plus,
    "sha": cmd_sha,
    "z-module": cmd_z_module,
    "twist-table": cmd_twist_table,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        report = HANDLERS[args.command](args)
    except ScenarioError as e:
        print(f"input error: {e}", file=sys.stderr)
        return 2
    except AlgebraError as e:
        print(f"input error: {e}", file=sys.stderr)
        return 2
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
    print(report.to_json() if args.json else report.to_text(), end="\n" if not args.json else "")
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
