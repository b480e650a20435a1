"""Command-line front end: read an instance document, run one task, print a report.

Exit codes: 0 computed, 1 a theorem-implication check failed under
``--check`` (or a report failed ``--verify-report``), 2 invalid input,
3 resource limit exceeded.
"""

from __future__ import annotations

import argparse
import json
import signal
import sys
import time
from contextlib import contextmanager

from . import catalog
from .errors import InvalidInput, LiftFailed, PatchlabError, PreconditionFailed, ResourceLimit, limits

INSTANCE_SCHEMA = "patchlab-instance/1"
REPORT_SCHEMA = "patchlab-report/1"
TASKS = ("axioms", "classify-bitorsors", "h0", "h1-crossed", "myles", "les2", "factorize", "bitorsor-factorize",
         "patch", "mv", "local-global", "h2-band", "center-algorithm", "suite")

SEED_SUITES = {
    "smoke": {"systems": ["trivial-edge", "c2-split", "klein-split"], "max_order": 4},
    "trees": {"systems": [n for n in catalog.system_names() if "triangle" not in n], "max_order": 6},
    "full": {"systems": catalog.system_names(), "max_order": 6},
}


# ---------------------------------------------------------------- documents

def jsonable(x):
    """Convert results to plain JSON data (tuples to lists, sets sorted, keys to str)."""
    if hasattr(x, "to_dict"):
        return jsonable(x.to_dict())
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(jsonable(v) for v in x)
    if isinstance(x, range):
        return list(x)
    return x


class Instance:
    """Resolved named entities of an instance document."""

    def __init__(self, doc: dict):
        if not isinstance(doc, dict):
            raise InvalidInput("instance document must be a JSON object", location="$")
        schema = doc.get("schema", INSTANCE_SCHEMA)
        if schema != INSTANCE_SCHEMA:
            raise InvalidInput(f"unsupported schema {schema!r}", location="$.schema")
        self.doc = doc
        self.task = doc.get("task")
        if self.task not in TASKS:
            raise InvalidInput(f"unknown task {self.task!r}", location="$.task", known=list(TASKS))
        self.params = doc.get("params", {})
        self.limits = doc.get("limits", {})
        for key, val in self.limits.items():
            if not isinstance(val, (int, float)) or val <= 0:
                raise InvalidInput(f"limit {key} must be positive", location=f"$.limits.{key}")
        self._groups, self._gamma_groups, self._systems = {}, {}, {}

    def _located(self, location, fn, *args):
        try:
            return fn(*args)
        except PatchlabError as e:
            if isinstance(e, InvalidInput):
                e.detail.setdefault("location", location)
            raise
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidInput(f"malformed entry: {e}", location=location) from None

    def group(self, ref):
        from .groups import build_group
        if ref in self._groups:
            return self._groups[ref]
        specs = self.doc.get("groups", {})
        if isinstance(ref, str) and ref in specs:
            spec = specs[ref]
            g = self._located(f"$.groups.{ref}", lambda: catalog.group(spec["catalog"]) if "catalog" in spec
                              else build_group({"name": ref, **spec}))
        elif isinstance(ref, str):
            g = self._located(f"group {ref}", catalog.group, ref)
        else:
            raise InvalidInput("group references must be names", location=str(ref))
        self._groups[ref] = g
        return g

    def gamma_group(self, ref):
        from .galois import make_gamma_group
        if ref in self._gamma_groups:
            return self._gamma_groups[ref]
        specs = self.doc.get("gammaGroups", {})
        if ref not in specs:
            raise InvalidInput(f"unknown gamma group {ref!r}", location="$.gammaGroups")
        spec = specs[ref]
        loc = f"$.gammaGroups.{ref}"
        gamma = self.group(spec.get("gamma", "C1"))
        g = self.group(spec["g"])
        a = self._located(loc, make_gamma_group, gamma, g, spec.get("action"), ref)
        self._gamma_groups[ref] = a
        return a

    def system(self, ref):
        from .patching import build_system
        if ref in self._systems:
            return self._systems[ref]
        specs = self.doc.get("systems", {})
        if ref in specs:
            spec = specs[ref]
            if "catalog" in spec:
                s = self._located(f"$.systems.{ref}", catalog.system, spec["catalog"])
            else:
                resolved = dict(spec, name=ref)
                for key in ("master", "gamma_f"):
                    if key in resolved:
                        resolved[key] = self.group(resolved[key])
                if "indices" in resolved:
                    resolved["indices"] = {i: dict(d, group=self.group(d["group"]))
                                           for i, d in resolved["indices"].items()}
                s = self._located(f"$.systems.{ref}", build_system, resolved)
        else:
            s = self._located(f"system {ref}", catalog.system, ref)
        self._systems[ref] = s
        return s

    def param(self, key, default=KeyError):
        if key not in self.params:
            if default is KeyError:
                raise InvalidInput(f"missing parameter {key!r}", location=f"$.params.{key}")
            return default
        return self.params[key]


# ---------------------------------------------------------------- time budget

@contextmanager
def time_budget(seconds):
    if not seconds or not hasattr(signal, "SIGALRM"):
        yield
        return

    def handler(signum, frame):
        raise ResourceLimit(f"time budget of {seconds}s exceeded", time_budget=seconds)

    old = signal.signal(signal.SIGALRM, handler)
    signal.setitimer(signal.ITIMER_REAL, seconds)
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


# ---------------------------------------------------------------- tasks

def _gamma_group_param(inst: Instance):
    from .galois import make_gamma_group
    if "gammaGroup" in inst.params:
        return inst.gamma_group(inst.params["gammaGroup"])
    g = inst.group(inst.param("group"))
    return make_gamma_group(catalog.group("C1"), g)


def task_axioms(inst, opts):
    from .crossed import check_crossed_module, int_crossed_module, to_trivial_crossed_module, unit_crossed_module
    a = _gamma_group_param(inst)
    kind = inst.param("kind", "int")
    build = {"int": int_crossed_module, "to-trivial": to_trivial_crossed_module, "unit": unit_crossed_module}
    if kind not in build:
        raise InvalidInput(f"unknown crossed module kind {kind!r}", location="$.params.kind")
    rep = check_crossed_module(build[kind](a))
    rep["summary"] = "valid crossed module" if rep["valid"] else "not a crossed module"
    failed = kind == "int" and not rep["valid"]
    return rep, (["inner automorphism crossed module failed an axiom"] if failed else [])


def task_classify_bitorsors(inst, opts):
    from .bitorsors import enumerate_bitorsors, h0_pair
    from .crossed import H0
    a = _gamma_group_param(inst)
    objs = enumerate_bitorsors(a, a)
    h0 = H0(a)
    classes = []
    for b in objs:
        u, phi = h0_pair(b)
        classes.append({"h0_class": h0.class_of((u, a.aut.index[tuple(phi)])), "bitorsor": b.to_dict()})
    out = {"count": len(objs), "h0_count": len(h0), "agree": len(objs) == len(h0), "classes": classes}
    fails = [] if out["agree"] else ["bitorsor count differs from H0 count"]
    if a.is_trivial_action:
        out["out_order"] = a.aut.out[0].order
        if out["out_order"] != len(objs):
            fails.append("trivial Galois action but count differs from |Out(G)|")
    return out, fails


def task_h0(inst, opts):
    from .crossed import H0, calibrate_h0_orientation
    a = _gamma_group_param(inst)
    h0 = H0(a)
    return {"count": len(h0), "classes": [c.to_dict() for c in h0.classes()], "group_table": h0.mul,
            "neutral": [h0.is_neutral(k) for k in range(len(h0))],
            "calibration": calibrate_h0_orientation()["rows"]}, []


def task_h1_crossed(inst, opts):
    from .crossed import H1Crossed
    a = _gamma_group_param(inst)
    h1 = H1Crossed(a)
    by_band = {}
    for k in range(len(h1)):
        by_band.setdefault(",".join(map(str, h1.band(k))), []).append(k)
    return {"count": len(h1), "basepoint": h1.basepoint,
            "classes": [{"index": k, "band": h1.band(k), "neutral": h1.is_neutral(k), **z.to_dict()}
                        for k, z in enumerate(h1.classes())],
            "by_band": by_band}, []


def task_myles(inst, opts):
    from .crossed import myles_sequence
    rep = myles_sequence(_gamma_group_param(inst))
    return rep, ([] if rep["exact"] else ["myles sequence not exact"])


def task_les2(inst, opts):
    from .crossed import les2_sequence
    rep = les2_sequence(_gamma_group_param(inst), inst.param("center", None))
    bad = rep["exactness_asserted"] and not rep["exact"]
    return rep, (["les2 sequence not exact although asserted"] if bad else [])


def task_factorize(inst, opts):
    from .patching import factorization_holds, simultaneous_factorization
    s, a = inst.system(inst.param("system")), inst.gamma_group(inst.param("gammaGroup"))
    edges = inst.param("edgeElements", None)
    if edges is None:
        return factorization_holds(s, a), []
    return simultaneous_factorization(s, a, _edge_keys(s, edges)), []


def _edge_keys(s, data):
    out = {}
    for k in s.edges:
        if str(k) not in data:
            raise InvalidInput(f"no datum for edge {k}", location=f"$.params.edge {k}")
        out[k] = data[str(k)]
    return out


def task_bitorsor_factorize(inst, opts):
    from .patching import bitorsor_factorization, bitorsor_factorization_holds
    s, a = inst.system(inst.param("system")), inst.gamma_group(inst.param("gammaGroup"))
    edges = inst.param("edgeClasses", None)
    if edges is None:
        return bitorsor_factorization_holds(s, a, opts.edge_op), []
    rep = bitorsor_factorization(s, a, _edge_keys(s, edges), opts.edge_op)
    return rep, (["bitorsor factorization witness failed re-verification"] if rep["verified"] is False else [])


def task_patch(inst, opts):
    from .patching import patching_holds
    s, a = inst.system(inst.param("system")), inst.gamma_group(inst.param("gammaGroup"))
    return patching_holds(s, a, inst.param("kind", "bitorsor")), []


def task_mv(inst, opts):
    from .patching import mayer_vietoris_report
    s, a = inst.system(inst.param("system")), inst.gamma_group(inst.param("gammaGroup"))
    rep = mayer_vietoris_report(s, a)
    rep["adjacency"] = s.adjacency()
    return rep, ([] if rep["asserted_exact"] else ["asserted Mayer-Vietoris node not exact"])


def task_local_global(inst, opts):
    from .patching import local_global_report
    s, a = inst.system(inst.param("system")), inst.gamma_group(inst.param("gammaGroup"))
    rep = local_global_report(s, a, opts.edge_op)
    return rep, (["local-global equivalence failed"] if rep["counterexamples"] else [])


def task_h2_band(inst, opts):
    from .patching import Band, h2_band
    if "gammaGroup" in inst.params:
        from .patching import _band_from_action
        band = _band_from_action(inst.gamma_group(inst.params["gammaGroup"]))
    else:
        gamma, g = inst.group(inst.param("gamma")), inst.group(inst.param("group"))
        band = Band(gamma, g, inst.param("kappa"))
    rep = h2_band(band.gamma, band)
    return rep, ([] if rep["simply_transitive"] else ["Giraud action not simply transitive"])


def task_center_algorithm(inst, opts):
    from .groups import center
    from .patching import center_factorization_algorithm
    s, a = inst.system(inst.param("system")), inst.gamma_group(inst.param("gammaGroup"))
    z = inst.param("center", None)
    z = list(center(a.g).elements) if z is None else z
    edges = inst.param("edgeClasses", None)
    edges = {k: 0 for k in s.edges} if edges is None else _edge_keys(s, edges)
    try:
        rep = center_factorization_algorithm(s, a, z, edges)
    except PreconditionFailed as e:
        return {"status": "precondition-failed", **e.to_dict()}, []
    except LiftFailed as e:
        return {"status": "lift-failed", **e.to_dict()}, ["lift guaranteed by the vanishing boundary failed"]
    rep["status"] = "ok"
    ok = rep["verified_classes"] and rep["verified_objects"]
    return rep, ([] if ok else ["central reduction witness failed re-verification"])


def task_suite(inst, opts):
    from .patching import local_global_report, mayer_vietoris_report, theorem_instance
    names = inst.param("systems", None) or SEED_SUITES["smoke"]["systems"]
    max_order = inst.param("max_order", 4)
    rows, fails = [], []
    for name in names:
        s = inst.system(name)
        for a in catalog.system_instances(s, max_order):
            th = theorem_instance(s, a)
            mv = mayer_vietoris_report(s, a)
            lg = local_global_report(s, a, opts.edge_op)
            row = {"system": s.name, "group": a.name,
                   "theorems": {c["theorem"]: c["verdict"] for c in th["checks"]},
                   "mv_hypotheses": mv["hypotheses"], "mv_asserted_exact": mv["asserted_exact"],
                   "local_global": {"bitorsor": lg["bitorsor_equivalence"], "gerbe": lg["gerbe_equivalence"]}}
            rows.append(row)
            for c in th["checks"]:
                if c["verdict"] == "FAILED":
                    fails.append({"instance": [s.name, a.name], "theorem": c["theorem"], "dump": c})
            if not mv["asserted_exact"]:
                fails.append({"instance": [s.name, a.name], "theorem": "mayer-vietoris", "dump": mv})
            if lg["counterexamples"]:
                fails.append({"instance": [s.name, a.name], "theorem": "local-global", "dump": lg})
    return {"instances": rows, "count": len(rows), "all_hold": not fails}, fails


HANDLERS = {
    "axioms": task_axioms, "classify-bitorsors": task_classify_bitorsors, "h0": task_h0,
    "h1-crossed": task_h1_crossed, "myles": task_myles, "les2": task_les2, "factorize": task_factorize,
    "bitorsor-factorize": task_bitorsor_factorize, "patch": task_patch, "mv": task_mv,
    "local-global": task_local_global, "h2-band": task_h2_band, "center-algorithm": task_center_algorithm,
    "suite": task_suite,
}


# ---------------------------------------------------------------- reports

def conventions(edge_op: str) -> dict:
    from .cohomology import H1_CONVENTION, H2_CONVENTION
    from .crossed import H0_ORIENTATION, H0_ORIENTATIONS, H1_CROSSED_CONVENTION, calibrate_h0_orientation
    cal = calibrate_h0_orientation()
    return {"h0_orientation": H0_ORIENTATION, "h0_formula": H0_ORIENTATIONS[H0_ORIENTATION],
            "h0_calibrated": cal["orientation"] == H0_ORIENTATION, "h1": H1_CONVENTION, "h2": H2_CONVENTION,
            "h1_crossed": H1_CROSSED_CONVENTION, "edge_op": edge_op,
            "torsor_galois_action": "s(x) = ^s x * a(s)^-1"}


def run_task(inst: Instance, opts) -> tuple[dict, list]:
    """Return ``(report, implication_failures)``."""
    start = time.perf_counter()
    result, failures = HANDLERS[inst.task](inst, opts)
    report = {
        "schema": REPORT_SCHEMA,
        "task": inst.task,
        "params": inst.params,
        "conventions": conventions(opts.edge_op),
        "result": result,
        "counterexamples": failures,
    }
    if opts.timing:
        report["timing"] = {"seconds": round(time.perf_counter() - start, 3)}
    return jsonable(report), failures


def render_machine(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def render_table(report: dict) -> str:
    lines = [f"task: {report.get('task')}"]
    res = report.get("result", {})
    width = max([len(k) for k in res] + [4])
    for key in sorted(res):
        val = res[key]
        if isinstance(val, (str, int, float, bool)) or val is None:
            lines.append(f"  {key:<{width}}  {val}")
    for key in ("nodes", "checks", "instances"):
        rows = res.get(key)
        if isinstance(rows, list) and rows and isinstance(rows[0], dict):
            lines.append(f"{key}:")
            cols = [c for c in rows[0] if isinstance(rows[0][c], (str, int, float, bool)) or rows[0][c] is None]
            w = {c: max(len(c), *(len(str(r.get(c))) for r in rows)) for c in cols}
            lines.append("  " + "  ".join(f"{c:<{w[c]}}" for c in cols))
            for r in rows:
                lines.append("  " + "  ".join(f"{str(r.get(c)):<{w[c]}}" for c in cols))
    if report.get("counterexamples"):
        lines.append(f"counterexamples: {len(report['counterexamples'])}")
    if "timing" in report:
        lines.append(f"time: {report['timing']['seconds']}s")
    return "\n".join(lines) + "\n"


def verify_report(inst: Instance, report: dict, opts) -> dict:
    """Re-check the witnesses of a saved report against the core modules."""
    from .bitorsors import are_isomorphic
    from .patching import bitorsor_of_class, verify_bitorsor_witness
    checks = []
    if report.get("schema") != REPORT_SCHEMA or report.get("task") != inst.task:
        return {"verified": False, "checks": [{"check": "schema and task match", "ok": False}]}
    res = report.get("result", {})
    task = inst.task
    if task == "factorize" and "found" in res:
        s, a = inst.system(inst.param("system")), inst.gamma_group(inst.param("gammaGroup"))
        w = res.get("witness")
        if w is not None:
            g = a.g
            edges = _edge_keys(s, inst.param("edgeElements"))
            ok = all(g.mul[g.inv[w[str(r)]]][w[str(l)]] == edges[k] for l, r, k in s.triples)
            ok = ok and all(all(a.act[s.to_f[v].map[t]][w[str(v)]] == w[str(v)] for t in s.gamma[v].elements)
                            for v in s.vertices)
            checks.append({"check": "a_k = a_r^-1 a_l with fixed vertex elements", "ok": ok})
    if task in ("bitorsor-factorize", "center-algorithm") and res.get("witness"):
        s, a = inst.system(inst.param("system")), inst.gamma_group(inst.param("gammaGroup"))
        sysgroups = {i: s.restrict_group(a, i) for i in s.vertices + s.edges}
        w = res["witness"]
        vobj = {v: bitorsor_of_class(sysgroups[v], w[str(v)]["class"] if isinstance(w[str(v)], dict) else w[str(v)])
                for v in s.vertices}
        edges = _edge_keys(s, inst.param("edgeClasses", {str(k): 0 for k in s.edges}))
        from .patching import _h0_class_of_object
        eobj = {k: bitorsor_of_class(sysgroups[k], _h0_class_of_object(sysgroups[k], x)) for k, x in edges.items()}
        op = opts.edge_op if task == "bitorsor-factorize" else "definition"
        checks.append({"check": "restricted wedges match edge bitorsors",
                       "ok": verify_bitorsor_witness(s, a, vobj, eobj, op)})
    if task == "classify-bitorsors":
        from .bitorsors import Bitorsor
        a = _gamma_group_param(inst)
        objs = []
        ok = True
        for c in res.get("classes", []):
            b = c["bitorsor"]
            try:
                objs.append(Bitorsor(a, a, b["left"], b["right"], b["gamma_action"]))
            except PatchlabError:
                ok = False
        checks.append({"check": "every class is a valid bitorsor", "ok": ok})
        distinct = all(are_isomorphic(p, q) is None for i, p in enumerate(objs) for q in objs[i + 1:])
        checks.append({"check": "classes pairwise non-isomorphic", "ok": distinct})
    # every task: recomputation reproduces the saved result
    fresh, _ = run_task(inst, opts)
    checks.append({"check": "recomputed result identical", "ok": fresh["result"] == res})
    return {"verified": all(c["ok"] for c in checks), "checks": checks}


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="patchlab", description=__doc__.splitlines()[0])
    p.add_argument("instance", nargs="?", help="instance document (JSON); '-' reads stdin")
    p.add_argument("--check", action="store_true", help="exit 1 when a theorem implication fails")
    p.add_argument("--format", choices=("table", "machine"), default="table")
    p.add_argument("--seed-suite", choices=sorted(SEED_SUITES), help="run a built-in suite instead of a document")
    p.add_argument("--limit-order", type=int, help="largest group order allowed")
    p.add_argument("--edge-op", choices=("definition", "opposite"), default="definition")
    p.add_argument("--verify-report", metavar="REPORT", help="re-check the witnesses of a saved machine report")
    p.add_argument("--timing", action="store_true", help="include wall-clock timing (breaks byte-identity)")
    return p


def _load(args) -> Instance:
    if args.seed_suite:
        suite = SEED_SUITES[args.seed_suite]
        return Instance({"schema": INSTANCE_SCHEMA, "task": "suite",
                         "params": {"systems": suite["systems"], "max_order": suite["max_order"]}})
    if not args.instance:
        raise InvalidInput("an instance document or --seed-suite is required", location="argv")
    try:
        text = sys.stdin.read() if args.instance == "-" else open(args.instance, encoding="utf-8").read()
    except OSError as e:
        raise InvalidInput(f"cannot read instance: {e}", location=args.instance) from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidInput(f"invalid JSON: {e.msg}", location=f"line {e.lineno} column {e.colno}") from None
    return Instance(doc)


def _error_report(e: PatchlabError) -> dict:
    return jsonable({"schema": REPORT_SCHEMA, "status": "error", **e.to_dict()})


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = sys.stdout
    try:
        inst = _load(args)
        caps = {}
        if args.limit_order is not None:
            if args.limit_order <= 0:
                raise InvalidInput("--limit-order must be positive", location="--limit-order")
            caps["max_order"] = args.limit_order
        elif "max_order" in inst.limits:
            caps["max_order"] = int(inst.limits["max_order"])
        if "max_candidates" in inst.limits:
            caps["max_candidates"] = int(inst.limits["max_candidates"])
        with limits(**caps), time_budget(inst.limits.get("time_budget")):
            if args.verify_report:
                try:
                    saved = json.load(open(args.verify_report, encoding="utf-8"))
                except (OSError, json.JSONDecodeError) as e:
                    raise InvalidInput(f"cannot read report: {e}", location=args.verify_report) from None
                ver = verify_report(inst, saved, args)
                out.write(render_machine(ver) if args.format == "machine" else
                          "".join(f"{'ok ' if c['ok'] else 'BAD'} {c['check']}\n" for c in ver["checks"]))
                return 0 if ver["verified"] else 1
            report, failures = run_task(inst, args)
    except ResourceLimit as e:
        out.write(render_machine(_error_report(e)))
        return 3
    except InvalidInput as e:
        out.write(render_machine(_error_report(e)))
        return 2
    except PatchlabError as e:
        out.write(render_machine(_error_report(e)))
        return 2
    out.write(render_machine(report) if args.format == "machine" else render_table(report))
    return 1 if (args.check and failures) else 0


if __name__ == "__main__":
    sys.exit(main())
