"""Scenario files, randomized verification suites and JSON reports."""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .algebra import AlgebraError, FinMod, ModHom
from .cochains import normalized_cochain_complex, shapiro
from .complexes import (
    cone,
    composite_cone_triangle,
    cube_verify,
    induces_isomorphisms,
    is_quasi_iso,
    ses_cone_maps,
    triangle_les_verify,
)
from .gmodules import Character, GModule, GModuleError
from .groups import CATALOG_NAMES, FinGroup, GroupError, catalog, catalog_group
from .positive import (
    GlobalSetup,
    Place,
    SetupError,
    defposigal_check,
    verify_paper_sequences,
    z_lemma_check,
)
from .random_gen import (
    ComplexBounds,
    SetupBounds,
    all_characters,
    random_cube,
    random_map_pair,
    random_real_module,
    random_setup,
    random_ses,
)
from .report import Verification
from .tate import ArchPlace, arch_duality_check

SUITES = ("cone-laws", "ses-qis", "cube", "shapiro", "defposigal", "z-lemma", "sequences", "arch-duality")
SETUP_SUITES = ("defposigal", "z-lemma", "sequences")


class ScenarioError(ValueError):
    """Invalid scenario input; ``path`` names the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


# -- scenario parsing ----------------------------------------------------------


def _int(value, path: str, lo: int | None = None, hi: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioError(path, f"expected an integer, got {value!r}")
    if lo is not None and value < lo:
        raise ScenarioError(path, f"must be at least {lo}")
    if hi is not None and value > hi:
        raise ScenarioError(path, f"must be at most {hi}")
    return value


def _group(spec, path: str) -> FinGroup:
    if isinstance(spec, str):
        try:
            return catalog_group(spec)
        except GroupError as e:
            raise ScenarioError(path, str(e)) from None
    if not isinstance(spec, dict):
        raise ScenarioError(path, "expected a catalog name or an object with elements and table")
    names = spec.get("elements")
    table = spec.get("table")
    if not isinstance(names, list) or not names:
        raise ScenarioError(f"{path}.elements", "expected a non-empty list of element names")
    if not isinstance(table, list) or len(table) != len(names):
        raise ScenarioError(f"{path}.table", f"expected {len(names)} rows")
    index = {str(x): i for i, x in enumerate(names)}
    rows = []
    for a, row in enumerate(table):
        if not isinstance(row, list) or len(row) != len(names):
            raise ScenarioError(f"{path}.table[{a}]", f"expected {len(names)} entries")
        out = []
        for b, x in enumerate(row):
            if str(x) not in index:
                raise ScenarioError(f"{path}.table[{a}][{b}]", f"unknown element {x!r}")
            out.append(index[str(x)])
        rows.append(out)
    try:
        return FinGroup(names, rows, name=str(spec.get("name", "G")))
    except GroupError as e:
        raise ScenarioError(f"{path}.table", str(e)) from None


def _element(G: FinGroup, name, path: str) -> int:
    try:
        return G.index(str(name))
    except GroupError as e:
        raise ScenarioError(path, str(e)) from None


def _closure_images(G: FinGroup, given: dict[int, Any], mul: Callable, one, path: str) -> list:
    """Extend images of some elements to all of ``G`` along products."""
    out: dict[int, Any] = {G.identity: one}
    out.update(given)
    frontier = list(out)
    while frontier:
        nxt = []
        for x in frontier:
            for g in given:
                y = G.mul(x, g)
                if y not in out:
                    out[y] = mul(out[x], given[g])
                    nxt.append(y)
        frontier = nxt
    if len(out) != G.order:
        missing = [G.names[g] for g in range(G.order) if g not in out]
        raise ScenarioError(path, f"given elements do not generate the group (missing {', '.join(missing)})")
    return [out[g] for g in range(G.order)]


def _module(spec, G: FinGroup, k: int, path: str) -> GModule:
    if not isinstance(spec, dict):
        raise ScenarioError(path, "expected an object with invariant_factors and action")
    inv = spec.get("invariant_factors", [])
    if not isinstance(inv, list):
        raise ScenarioError(f"{path}.invariant_factors", "expected a list")
    exps = []
    for t, q in enumerate(inv):
        q = _int(q, f"{path}.invariant_factors[{t}]", 2, 1 << k)
        if q & (q - 1):
            raise ScenarioError(f"{path}.invariant_factors[{t}]", f"{q} is not a power of two")
        exps.append(q.bit_length() - 1)
    base = FinMod(tuple(exps), k)
    action = spec.get("action", {})
    if not isinstance(action, dict):
        raise ScenarioError(f"{path}.action", "expected an object mapping element names to matrices")
    given = {}
    r = base.ngens
    for name, mat in action.items():
        p = f"{path}.action.{name}"
        g = _element(G, name, p)
        arr = np.asarray(mat, dtype=object)
        if r == 0:
            given[g] = base.identity()
            continue
        if arr.shape != (r, r) or not all(isinstance(x, int) and not isinstance(x, bool) for x in arr.ravel()):
            raise ScenarioError(p, f"expected a {r}x{r} integer matrix")
        try:
            given[g] = ModHom(base, base, arr.astype(np.int64))
        except AlgebraError as e:
            raise ScenarioError(p, str(e)) from None
    if not given and G.order > 1:
        given = {g: base.identity() for g in G.generators}
    try:
        mats = _closure_images(G, given, lambda a, b: a @ b, base.identity(), f"{path}.action")
        return GModule(G, base, mats, check=True)
    except GModuleError as e:
        raise ScenarioError(f"{path}.action", str(e)) from None


def _character(spec, G: FinGroup, k: int, path: str) -> Character:
    if spec is None:
        return Character.trivial(G, k)
    if not isinstance(spec, dict):
        raise ScenarioError(path, "expected an object mapping element names to odd integers")
    mod = 1 << k
    given = {}
    for name, val in spec.items():
        p = f"{path}.{name}"
        val = _int(val, p)
        if val % 2 == 0:
            raise ScenarioError(p, "character values must be odd")
        given[_element(G, name, p)] = val % mod
    if not given:
        return Character.trivial(G, k)
    vals = _closure_images(G, given, lambda a, b: a * b % mod, 1, path)
    try:
        return Character(G, vals, k)
    except GModuleError as e:
        raise ScenarioError(path, str(e)) from None


def _places(spec, G: FinGroup, path: str) -> list[Place]:
    if not isinstance(spec, list) or not spec:
        raise ScenarioError(path, "expected a non-empty list of places")
    out = []
    for t, p in enumerate(spec):
        pp = f"{path}[{t}]"
        if not isinstance(p, dict):
            raise ScenarioError(pp, "expected an object")
        label = str(p.get("label", f"v{t}"))
        where = f"{pp} (place {label!r})"
        kind = p.get("kind")
        if kind not in ("finite", "real", "complex"):
            raise ScenarioError(f"{where}.kind", f"must be finite, real or complex, got {kind!r}")
        els = p.get("subgroup", [G.names[G.identity]] if kind == "complex" else None)
        if not isinstance(els, list) or not els:
            raise ScenarioError(f"{where}.subgroup", "expected a list of element names")
        idx = [_element(G, x, f"{where}.subgroup") for x in els]
        try:
            H = G.subgroup(idx, name=f"<{','.join(str(x) for x in els)}>")
        except GroupError as e:
            raise ScenarioError(f"{where}.subgroup", str(e)) from None
        if kind == "real" and H.order != 2:
            raise ScenarioError(f"{where}.subgroup", "a real place needs a subgroup of order 2")
        if kind == "complex" and H.order != 1:
            raise ScenarioError(f"{where}.subgroup", "a complex place needs the trivial subgroup")
        out.append(Place(label, kind, H))
    labels = [p.label for p in out]
    if len(set(labels)) != len(labels):
        raise ScenarioError(path, "place labels must be distinct")
    return out


@dataclass
class Scenario:
    setup: GlobalSetup
    seed: int = 0
    raw: dict = field(default_factory=dict)


def parse_scenario(data: Any, *, k: int | None = None, D: int | None = None) -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioError("$", "scenario must be a JSON object")
    kk = _int(data.get("k", 4 if k is None else k), "k", 1, 20)
    DD = _int(data.get("max_degree", 4) if D is None else D, "max_degree", 3, 8)
    G = _group(data.get("group", "C1"), "group")
    if G.order > 16:
        raise ScenarioError("group", "groups of order above 16 are not supported")
    M = _module(data.get("module", {"invariant_factors": []}), G, kk, "module")
    chi = _character(data.get("character"), G, kk, "character")
    i = _int(data.get("twist", 0), "twist")
    places = _places(data.get("places"), G, "places")
    seed = _int(data.get("seed", 0), "seed", 0)
    try:
        setup = GlobalSetup(G, chi, M, i, places, DD)
    except SetupError as e:
        raise ScenarioError("$", str(e)) from None
    return Scenario(setup, seed, data)


def load_scenario(path: str, **kw) -> Scenario:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise ScenarioError("scenario", f"file {path!r} not found") from None
    except json.JSONDecodeError as e:
        raise ScenarioError("scenario", f"invalid JSON: {e}") from None
    return parse_scenario(data, **kw)


def setup_to_scenario(setup: GlobalSetup, seed: int | None = None) -> dict:
    """Scenario document that parses back to an equivalent setup."""
    G = setup.G
    if G.name in CATALOG_NAMES and catalog_group(G.name).table.tolist() == G.table.tolist():
        group: Any = G.name
    else:
        group = {
            "name": G.name,
            "elements": G.names,
            "table": [[G.names[G.mul(a, b)] for b in range(G.order)] for a in range(G.order)],
        }
    M = setup.M
    out = {
        "k": setup.k,
        "group": group,
        "module": {
            "invariant_factors": [1 << e for e in M.base.exps],
            "action": {G.names[g]: M.action[g].dense().tolist() for g in G.generators},
        },
        "character": {G.names[g]: setup.chi(g) for g in G.generators},
        "twist": setup.i,
        "places": [
            {"label": p.label, "kind": p.kind, "subgroup": [G.names[g] for g in p.subgroup.elements]}
            for p in setup.places
        ],
        "max_degree": setup.D,
    }
    if seed is not None:
        out["seed"] = seed
    return out


# -- suites --------------------------------------------------------------------


def _complex_dump(X) -> dict:
    return {
        "modules": {str(n): list(X.module(n).exps) for n in X.degrees()},
        "diffs": {str(n): X.d(n).dense().tolist() for n in X.degrees() if not X.d(n).is_zero()},
    }


def _map_dump(u) -> dict:
    degs = range(min(u.source.lo, u.target.lo), max(u.source.hi, u.target.hi) + 1)
    return {"source": _complex_dump(u.source), "target": _complex_dump(u.target),
            "maps": {str(n): u[n].dense().tolist() for n in degs if not u[n].is_zero()}}


def _cone_laws(rng: random.Random, ctx: "SuiteContext"):
    a, b = random_map_pair(rng, ctx.complex_bounds)
    rep = Verification("cone laws")
    rep.extend(triangle_les_verify(a), prefix="triangle of u")
    rep.add("Cone(id) is acyclic", cone(a.source.identity()).is_acyclic())
    rep.extend(composite_cone_triangle(a, b), prefix="composite")
    return rep, lambda: {"u": _map_dump(a), "v": _map_dump(b)}


def _ses_qis(rng: random.Random, ctx: "SuiteContext"):
    u, v = random_ses(rng, ctx.complex_bounds)
    m = ses_cone_maps(u, v)
    rep = Verification("cone of a short exact sequence")
    rep.add("q is a quasi-isomorphism", is_quasi_iso(m.q) and induces_isomorphisms(m.q))
    rep.add("l is a quasi-isomorphism", is_quasi_iso(m.ell) and induces_isomorphisms(m.ell))
    return rep, lambda: {"u": _map_dump(u), "v": _map_dump(v)}


def _cube(rng: random.Random, ctx: "SuiteContext"):
    c = random_cube(rng, ctx.complex_bounds)
    return cube_verify(c), lambda: {"f": _map_dump(c.f), "u": _map_dump(c.u), "v": _map_dump(c.v),
                                    "u1": _map_dump(c.u1), "vhat": _map_dump(c.vhat)}


def shapiro_catalog(k: int, max_order: int = 8) -> list[tuple[FinGroup, Any, str, GModule]]:
    """Catalog triples: every subgroup of every catalog group of order at most
    ``max_order``, with ``Z/2`` and ``Z/4`` trivial and ``Z/4`` twisted by a sign."""
    out = []
    for G in catalog():
        if G.order > max_order:
            continue
        for H in G.subgroups:
            mods = [("Z/2", GModule.trivial(H.group, FinMod((1,), k)))]
            if k >= 2:
                mods.append(("Z/4", GModule.trivial(H.group, FinMod((2,), k))))
                minus = (-1) % (1 << k)
                signs = [c for c in all_characters(H.group, k) if set(c.values) == {1, minus}]
                if signs:
                    mods.append(("Z/4(sign)", GModule.from_character(H.group, FinMod((2,), k), signs[0], 1)))
            out += [(G, H, name, M) for name, M in mods]
    return out


def _shapiro_instance(G, H, name, M, D):
    S = shapiro(G, H, M, D)
    rep = Verification(f"Shapiro {G.name} {H.name} {name}")
    for n in range(0, D):
        f = S.sh.induced(n)
        rep.add(f"H^{n} isomorphism", f.is_isomorphism(), induced=f.domain.invariant_factors(),
                local=f.codomain.invariant_factors())
    return rep


def _setup_suite(check: Callable[[GlobalSetup], Verification]):
    def run(rng: random.Random, ctx: "SuiteContext"):
        S = random_setup(rng, ctx.setup_bounds)
        return check(S), lambda: setup_to_scenario(S)

    return run


def _arch_duality(rng: random.Random, ctx: "SuiteContext"):
    k = rng.randint(1, min(4, ctx.setup_bounds.k))
    M = random_real_module(rng, k)
    place = ArchPlace.real(M.G, 1)
    rep = Verification("archimedean duality")
    for n in (0, 1, 2):
        rep.extend(arch_duality_check(place, M, n), prefix=f"n={n}")
    return rep, lambda: {"k": k, "invariant_factors": [1 << e for e in M.base.exps],
                         "sigma": M.action[1].dense().tolist()}


RUNNERS = {
    "cone-laws": _cone_laws,
    "ses-qis": _ses_qis,
    "cube": _cube,
    "defposigal": _setup_suite(defposigal_check),
    "z-lemma": _setup_suite(z_lemma_check),
    "sequences": _setup_suite(verify_paper_sequences),
    "arch-duality": _arch_duality,
}


@dataclass
class SuiteContext:
    complex_bounds: ComplexBounds = ComplexBounds()
    setup_bounds: SetupBounds = SetupBounds()
    scenario: Scenario | None = None


@dataclass
class SuiteResult:
    suite: str
    instances: int = 0
    passed: int = 0
    checks: int = 0
    failures: list[dict] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.instances == self.passed

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "instances": self.instances,
            "passed": self.passed,
            "failed": self.instances - self.passed,
            "checks": self.checks,
            "ok": self.ok,
            "failures": self.failures,
        }


MAX_FAILURES = 5


def _record(res: SuiteResult, label, key: str, rep: Verification | None, dump, error: str | None = None):
    res.instances += 1
    if rep is not None:
        res.checks += len(rep.checks)
    if rep is not None and rep.ok:
        res.passed += 1
        return
    if len(res.failures) < MAX_FAILURES:
        entry = {"instance": label, "rng_key": key}
        if rep is not None:
            entry["failed_checks"] = [c.to_dict() for c in rep.failures()]
        if error:
            entry["error"] = error
        try:
            entry["counterexample"] = dump() if dump else None
        except Exception as e:  # noqa: BLE001 - a dump failure must not hide the original failure
            entry["counterexample"] = f"unavailable: {e}"
        res.failures.append(entry)


def run_suite(name: str, count: int, seed: int, ctx: SuiteContext | None = None) -> SuiteResult:
    if name not in SUITES:
        raise ScenarioError("suite", f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    if count < 1:
        raise ScenarioError("count", "must be at least 1")
    ctx = ctx or SuiteContext()
    res = SuiteResult(name)
    t0 = time.perf_counter()
    if name == "shapiro":
        D = ctx.setup_bounds.D
        for t, (G, H, mname, M) in enumerate(shapiro_catalog(ctx.setup_bounds.k)):
            label = f"{G.name}/{H.name}/{mname}"
            dump = lambda G=G, H=H, mname=mname: {"group": G.name, "subgroup": [G.names[g] for g in H.elements], "module": mname}
            try:
                rep = _shapiro_instance(G, H, mname, M, D)
                _record(res, label, f"catalog:{t}", rep, dump)
            except Exception as e:  # noqa: BLE001 - a crash is recorded as a failed instance
                _record(res, label, f"catalog:{t}", None, dump, f"{type(e).__name__}: {e}")
    else:
        runner = RUNNERS[name]
        if ctx.scenario is not None and name in SETUP_SUITES:
            check = {"defposigal": defposigal_check, "z-lemma": z_lemma_check, "sequences": verify_paper_sequences}[name]
            S = ctx.scenario.setup
            try:
                _record(res, "scenario", "scenario", check(S), lambda: setup_to_scenario(S))
            except Exception as e:  # noqa: BLE001
                _record(res, "scenario", "scenario", None, lambda: setup_to_scenario(S), f"{type(e).__name__}: {e}")
        for index in range(count):
            key = f"{seed}:{name}:{index}"
            rng = random.Random(key)
            dump = None
            try:
                rep, dump = runner(rng, ctx)
                _record(res, index, key, rep, dump)
            except Exception as e:  # noqa: BLE001
                _record(res, index, key, None, dump, f"{type(e).__name__}: {e}")
    res.seconds = time.perf_counter() - t0
    return res


def verify(suite: str, count: int, seed: int, ctx: SuiteContext | None = None) -> list[SuiteResult]:
    names = SUITES if suite == "all" else (suite,)
    if suite != "all" and suite not in SUITES:
        raise ScenarioError("suite", f"unknown suite {suite!r}; choose from {', '.join(SUITES)} or all")
    return [run_suite(n, count, seed, ctx) for n in names]


# -- reports -------------------------------------------------------------------


@dataclass
class Report:
    command: str
    ok: bool
    parameters: dict = field(default_factory=dict)
    results: list[dict] = field(default_factory=list)
    seconds: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        """Machine-readable form; wall times are left out so reruns compare equal."""
        return {"command": self.command, "ok": self.ok, "parameters": self.parameters, "results": self.results}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def to_text(self) -> str:
        lines = [f"{self.command}: {'PASS' if self.ok else 'FAIL'}"]
        for r in self.results:
            lines.append(_result_line(r, self.seconds))
        return "\n".join(lines)


def _result_line(r: dict, seconds: dict) -> str:
    if "suite" in r:
        t = seconds.get(r["suite"])
        tail = f" in {t:.2f}s" if t is not None else ""
        status = "PASS" if r["ok"] else "FAIL"
        return f"  {r['suite']:<13} {status} {r['passed']}/{r['instances']} instances, {r['checks']} checks{tail}"
    if "check" in r:
        status = "PASS" if r["passed"] else "FAIL"
        extra = ", ".join(f"{k}={v}" for k, v in sorted(r.items()) if k not in ("check", "passed"))
        return f"  {status} {r['check']}" + (f" ({extra})" if extra else "")
    if "module" in r:
        return f"  Z = {r['module']}" + (f"  [{r['note']}]" if r.get("note") else "")
    return "  " + ", ".join(f"{k}={v}" for k, v in sorted(r.items()))


def suite_report(results: list[SuiteResult], parameters: dict) -> Report:
    return Report(
        "verify",
        all(r.ok for r in results),
        parameters,
        [r.to_dict() for r in results],
        {r.suite: r.seconds for r in results},
    )
