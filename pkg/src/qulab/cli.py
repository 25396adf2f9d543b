"""Command-line front end: analyze instance files, verify laws, hunt separations.

Exit codes: 0 success, 1 law violation found, 2 invalid input, 3 usage error.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import re
import sys
from dataclasses import asdict
from typing import Any, Sequence

from . import __version__
from .enumerate import KINDS, MAX_POINTS, InstanceStream
from .harness import hunt_separations, regression_suite
from .laws import REGISTRY, SpaceContext, parse_invariant, resolve
from .monoid import MonoidError, canonical_quasi_uniformities, make_monoid, verify_monoid_properties
from .preuniformity import CANONICAL_KINDS, PreUniformity, PreconditionError, canonical
from .relation import Entourage, to_points
from .structure import commuting_profile, psi_bound_report, quasi_roelcke, theorem33_check
from .topology import AXIOMS, FiniteSpace, TopologyError, invariant_report

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_USAGE = 0, 1, 2, 3
SELECTORS = ("invariants", "classify", "canonical", "monoid", "profile(L,R)", "roelcke(L,R)")


class InputError(ValueError):
    """Instance file problem; the message starts with the offending key."""


class UsageError(ValueError):
    pass


# --- instance files ------------------------------------------------------------------

class Instance:
    def __init__(self, n: int, space: FiniteSpace | None, entourages: dict[str, Entourage],
                 bases: dict[str, list[str]], table: list[list[int]] | None):
        self.n, self.space, self.entourages, self.bases, self.table = n, space, entourages, bases, table

    def encoding(self) -> str:
        parts = [f"n={self.n}", "top=" + (self.space.encode() if self.space else "-")]
        parts += [f"E[{k}]={v.encode()}" for k, v in sorted(self.entourages.items())]
        parts += [f"B[{k}]={','.join(v)}" for k, v in sorted(self.bases.items())]
        if self.table:
            parts.append("M=" + ";".join(",".join(map(str, r)) for r in self.table))
        return "|".join(parts)

    def family(self, name: str) -> PreUniformity:
        if name in self.bases:
            return PreUniformity.generated_by([self.entourages[e] for e in self.bases[name]], self.space)
        if name in self.entourages:
            return PreUniformity.principal(self.entourages[name], self.space)
        raise InputError(f"name {name!r} is neither a base nor an entourage")


def _int(v: Any, key: str, n: int | None = None) -> int:
    if not isinstance(v, int) or isinstance(v, bool):
        raise InputError(f"{key}: expected an integer, got {v!r}")
    if n is not None and not 0 <= v < n:
        raise InputError(f"{key}: index {v} is not a point of the carrier 0..{n - 1}")
    return v


def _pairs(v: Any, key: str, n: int) -> list[tuple[int, int]]:
    if not isinstance(v, list):
        raise InputError(f"{key}: expected a list of [x, y] pairs")
    out = []
    for i, p in enumerate(v):
        if not isinstance(p, list) or len(p) != 2:
            raise InputError(f"{key}[{i}]: expected a pair [x, y]")
        out.append((_int(p[0], f"{key}[{i}][0]", n), _int(p[1], f"{key}[{i}][1]", n)))
    return out


def parse_instance(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise InputError("top level: expected an object")
    unknown = set(doc) - {"carrier", "topology", "entourages", "bases", "monoid"}
    if unknown:
        raise InputError(f"top level: unknown keys {sorted(unknown)}")
    if "carrier" not in doc:
        raise InputError("carrier: missing")
    n = _int(doc["carrier"], "carrier")
    if n < 1:
        raise InputError("carrier: must be at least 1")

    space = None
    if "topology" in doc:
        top = doc["topology"]
        if not isinstance(top, dict) or len(top) != 1 or next(iter(top)) not in ("opens", "preorder"):
            raise InputError("topology: expected exactly one of 'opens' or 'preorder'")
        try:
            if "opens" in top:
                opens = top["opens"]
                if not isinstance(opens, list):
                    raise InputError("topology.opens: expected a list of point lists")
                masks = []
                for i, o in enumerate(opens):
                    if not isinstance(o, list):
                        raise InputError(f"topology.opens[{i}]: expected a list of points")
                    masks.append(sum(1 << _int(p, f"topology.opens[{i}]", n) for p in set(o)))
                space = FiniteSpace.from_opens(n, masks)
            else:
                rel = Entourage.from_pairs(n, _pairs(top["preorder"], "topology.preorder", n))
                space = FiniteSpace.from_preorder(rel)
        except TopologyError as exc:
            raise InputError(f"topology: {exc}") from None

    ents: dict[str, Entourage] = {}
    raw = doc.get("entourages", {})
    if not isinstance(raw, dict):
        raise InputError("entourages: expected a map from names to pair lists")
    for name, pairs in raw.items():
        ents[name] = Entourage.from_pairs(n, _pairs(pairs, f"entourages.{name}", n))

    bases: dict[str, list[str]] = {}
    raw = doc.get("bases", {})
    if not isinstance(raw, dict):
        raise InputError("bases: expected a map from names to entourage-name lists")
    for name, members in raw.items():
        if not isinstance(members, list) or not members:
            raise InputError(f"bases.{name}: expected a non-empty list of entourage names")
        for i, m in enumerate(members):
            if m not in ents:
                raise InputError(f"bases.{name}[{i}]: entourage {m!r} is not defined")
        bases[name] = list(members)

    table = None
    if "monoid" in doc:
        t = doc["monoid"]
        if not isinstance(t, list) or len(t) != n or any(not isinstance(r, list) or len(r) != n for r in t):
            raise InputError(f"monoid: expected {n} rows of {n} integers")
        table = [[_int(v, f"monoid[{i}][{j}]", n) for j, v in enumerate(r)] for i, r in enumerate(t)]
    return Instance(n, space, ents, bases, table)


def instance_document(X: FiniteSpace) -> dict[str, Any]:
    """A re-loadable instance file for a space."""
    return {"carrier": X.n, "topology": {"preorder": [list(p) for p in X.preorder().off_diagonal()]}}


# --- reports ------------------------------------------------------------------------

def _jsonable(v: Any) -> Any:
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, Entourage):
        return [list(p) for p in v.off_diagonal()]
    if isinstance(v, (int, str, bool, float)) or v is None:
        return v
    return str(v)


def make_report(command: str, encoding: str, body: dict[str, Any]) -> dict[str, Any]:
    return {
        "tool": "qulab",
        "version": __version__,
        "command": command,
        "instance_sha256": hashlib.sha256(encoding.encode()).hexdigest(),
        "result": _jsonable(body),
    }


def render_machine(report: dict[str, Any]) -> str:
    return json.dumps(report, sort_keys=True, ensure_ascii=False) + "\n"


def parse_machine(text: str) -> dict[str, Any]:
    return json.loads(text)


def render_human(report: dict[str, Any]) -> str:
    lines = [f"{report['command']}  (qulab {report['version']}, instance {report['instance_sha256'][:12]})"]

    def walk(v: Any, prefix: str) -> None:
        if isinstance(v, dict) and set(v) == {"checked", "skipped", "violations"}:
            lines.append(f"  {prefix}: checked {v['checked']}, skipped {v['skipped']}, violations {v['violations']}")
        elif isinstance(v, list) and v and all(isinstance(x, dict) for x in v):
            for i, x in enumerate(v):
                walk(x, f"{prefix}[{i}]")
        elif isinstance(v, dict) and v:
            for k in sorted(v):
                walk(v[k], f"{prefix}.{k}" if prefix else k)
        else:
            lines.append(f"  {prefix}: {json.dumps(v, ensure_ascii=False)}")

    walk(report["result"], "")
    return "\n".join(lines) + "\n"


# --- commands --------------------------------------------------------------------

_PAIR_SEL = re.compile(r"^(profile|roelcke)\(\s*([^,\s()]+)\s*,\s*([^,\s()]+)\s*\)$")
ELL_REPORT = [f"{fam}ell{bar}_{mode}({k})" for fam in ("", "q") for bar in ("", "bar")
              for mode in ("pm", "mp", "wedge", "vee") for k in (1, 2, 3)] + ["ell_omega", "qell_omega", "uell"]


def _need_space(inst: Instance, what: str) -> FiniteSpace:
    if inst.space is None:
        raise UsageError(f"selector {what!r} needs a topology in the instance file")
    return inst.space


def cmd_analyze(inst: Instance, what: str) -> dict[str, Any]:
    what = what.strip()
    if what == "invariants":
        X = _need_space(inst, what)
        rep = invariant_report(X)
        ctx = SpaceContext(X)
        values = dict(rep.values)
        values.update({name: ctx.value(name) for name in ELL_REPORT})
        return {
            "invariants": values,
            "witnesses": rep.witnesses,
            "axioms": {a: X.separation_check(a).holds for a in AXIOMS},
            "components": [to_points(c) for c in sorted(set(X.components))],
        }
    if what == "classify":
        names = sorted(set(inst.entourages) | set(inst.bases))
        if not names:
            raise UsageError("selector 'classify' needs entourages or bases")
        out = {}
        for name in names:
            P = inst.family(name)
            c = P.classify(inst.space)
            out[name] = {**asdict(c), "min": P.min}
            if inst.space is not None:
                out[name]["generates_topology"] = P.generated_topology() == inst.space
        return {"classify": out}
    if what == "canonical":
        X = _need_space(inst, what)
        out = {}
        for kind in CANONICAL_KINDS:
            P = canonical(X, kind)
            out[kind] = {"min": P.min, "generates_topology": P.generated_topology() == X,
                         "is_quasi": P.is_quasi().holds, "is_uniformity": P.is_uniformity().holds}
        return {"canonical": out}
    if what == "monoid":
        X = _need_space(inst, what)
        if inst.table is None:
            raise UsageError("selector 'monoid' needs a monoid table")
        try:
            M = make_monoid(inst.table, X)
        except MonoidError as exc:
            raise InputError(f"monoid: {exc.kind}: {exc}") from None
        q = canonical_quasi_uniformities(M)
        rep = verify_monoid_properties(M)
        return {
            "monoid": {
                "unit": M.unit, "is_group": M.is_group, "is_abelian": M.is_abelian,
                "minima": {k: v.min for k, v in q.items()},
                "flags": rep.flags, "details": rep.details, "failures": rep.failures,
            }
        }
    m = _PAIR_SEL.match(what)
    if m:
        kind, a, b = m.groups()
        L, R = inst.family(a), inst.family(b)
        if kind == "profile":
            p = commuting_profile(L, R)
            return {"profile": {**asdict(p), "pair": [a, b]}}
        fu = quasi_roelcke(L, R)
        c = fu.classify(inst.space)
        t33 = theorem33_check(L, R)
        rows = psi_bound_report(L, R, inst.space)
        return {
            "roelcke": {
                "pair": [a, b], "min": fu.min, "classification": asdict(c),
                "full": fu.min == Entourage.full(inst.n),
                "separated": fu.min.is_diagonal(),
                "theorem33": None if t33 is None else {"holds": t33.holds, "witness": t33.witness},
                "psi_bounds": [asdict(r) for r in rows],
            }
        }
    raise UsageError(f"unknown selector {what!r}; choose from {', '.join(SELECTORS)}")


def cmd_verify(points: int, laws: str, jobs: int = 1) -> tuple[dict[str, Any], int]:
    top = max(MAX_POINTS.values())
    if not 1 <= points <= top:
        raise UsageError(f"--points must be between 1 and {top}")
    if jobs < 1:
        raise UsageError("--jobs must be at least 1")
    try:
        chosen = resolve(laws)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    streams, not_run = {}, {}
    for kind in KINDS:
        ids = [i for i in chosen if REGISTRY[i].kind == kind]
        if not ids:
            continue
        if points > MAX_POINTS[kind]:
            not_run[kind] = f"{kind} are enumerated up to {MAX_POINTS[kind]} points"
            continue
        streams[kind] = regression_suite(InstanceStream(kind, points), ids, jobs).to_dict()
    if not streams:
        raise UsageError(f"no selected law can run on {points} points")
    total = sum(len(s["violations"]) for s in streams.values())
    body = {"points": points, "laws": laws, "streams": streams, "not_run": not_run, "violations": total}
    return body, (EXIT_OK if total == 0 else EXIT_VIOLATION)


def cmd_search(points: int, pair: Sequence[str]) -> dict[str, Any]:
    if not 1 <= points <= MAX_POINTS["topologies"]:
        raise UsageError(f"--points must be between 1 and {MAX_POINTS['topologies']}")
    if len(pair) != 2:
        raise UsageError("--pair needs exactly two invariant names separated by a comma")
    for name in pair:
        try:
            parse_invariant(name)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    res = hunt_separations(InstanceStream("topologies", points), (pair[0], pair[1]))
    body: dict[str, Any] = {"points": points, "pair": list(pair), "searched": res.searched}
    if not res.found:
        body["result"] = "none"
    else:
        X = InstanceStream("topologies", points).items()[res.index]
        body["result"] = "witness"
        body["witness"] = {"index": res.index, "encoding": res.witness,
                           "values": {pair[0]: res.values[0], pair[1]: res.values[1]},
                           "instance": instance_document(X)}
    return body


def _split_pair(text: str) -> list[str]:
    """Split on commas that are not inside parentheses, so 'lstar(1),ell_mp(2)' works."""
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch == "," and depth == 0:
            parts.append(cur.strip())
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    parts.append(cur.strip())
    return parts


# --- entry point ------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse exits 2 by default; 2 is taken by input errors
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qulab", description="Finite topologies, quasi-uniformities and their invariants.")
    p.add_argument("--version", action="version", version=f"qulab {__version__}")
    p.add_argument("--format", choices=("machine", "human"), default="human")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    a = sub.add_parser("analyze", help="analyze an instance file")
    a.add_argument("file")
    a.add_argument("--what", required=True, help=", ".join(SELECTORS))
    v = sub.add_parser("verify", help="check laws over every instance on N points")
    v.add_argument("--points", type=int, required=True)
    v.add_argument("--laws", default="all", help="'all', group names or law ids, comma separated")
    v.add_argument("--jobs", type=int, default=1)
    s = sub.add_parser("search", help="look for a space separating two invariants")
    s.add_argument("--points", type=int, required=True)
    s.add_argument("--pair", required=True, help="two invariant names, e.g. 'c,d'")
    for sp in (a, v, s):
        sp.add_argument("--format", choices=("machine", "human"), default=argparse.SUPPRESS)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    code = EXIT_OK
    try:
        if args.command == "analyze":
            try:
                with open(args.file, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise InputError(f"{args.file}: {exc.strerror}") from None
            inst = parse_instance(text)
            body = cmd_analyze(inst, args.what)
            report = make_report(f"analyze --what {args.what}", inst.encoding(), body)
        elif args.command == "verify":
            body, code = cmd_verify(args.points, args.laws, args.jobs)
            report = make_report("verify", f"verify|points={args.points}|laws={args.laws}", body)
        else:
            pair = _split_pair(args.pair)
            body = cmd_search(args.points, pair)
            report = make_report("search", f"search|points={args.points}|pair={','.join(pair)}", body)
    except InputError as exc:
        print(f"qulab: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (UsageError, PreconditionError) as exc:
        print(f"qulab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = render_machine(report) if args.format == "machine" else render_human(report)
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
