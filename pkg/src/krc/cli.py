"""Command-line surface.

Subcommands: analyze, rlm, gm, rees, spc, flow verify, flow search,
divide, estimate, inverse demo, corpus run, replay.  Output is
deterministic byte for byte for fixed inputs and budgets.  Exit codes:
0 success, 2 usage or input error, 3 resource budget, 4 verification
failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .core import (
    FiniteGroup,
    PartialTransformation,
    is_aperiodic,
    regular_representation,
)
from .errors import InputError, ResourceError, VerificationError
from . import fileformats as ff
from .semilocal import (
    JClassRef,
    classify,
    gm_quotient,
    group_mapping_presentation,
    rees_coordinates,
    rlm_quotient,
)
from .products import DivisionWitness, check_division
from . import spc as spcmod
from . import flows as flowmod
from . import complexity as cx
from . import inverse as invmod

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RESOURCE = 3
EXIT_VERIFY = 4

CORPUS_DIR = Path(__file__).parent / "corpus"


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"bad value for {name}: {raw!r}") from None


def _jsonable(value):
    if isinstance(value, tuple):
        return [_jsonable(v) for v in value]
    if isinstance(value, list):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, PartialTransformation):
        return str(value)
    return value


def _dump_json(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n"


# -- individual commands -------------------------------------------------


def cmd_analyze(args) -> int:
    sgp = ff.load_semigroup(args.file, max_elements=args.budget_elements)
    gs = sgp.green()
    cls = classify(sgp)
    out = [
        f"order: {len(sgp)}",
        f"points: {sgp.degree}",
        f"generators: {' '.join(sgp.gen_names)}",
        f"aperiodic: {'yes' if is_aperiodic(sgp) else 'no'}",
        f"idempotents: {len(gs.idempotents)}",
        f"j-classes: {len(gs.j_classes)}",
        f"r-classes: {len(gs.r_classes)}",
        f"l-classes: {len(gs.l_classes)}",
        f"h-classes: {len(gs.h_classes)}",
        f"right-mapping: {'yes' if cls.right_mapping else 'no'}",
        f"left-mapping: {'yes' if cls.left_mapping else 'no'}",
        f"generalized-group-mapping: {'yes' if cls.generalized_group_mapping else 'no'}",
        f"group-mapping: {'yes' if cls.group_mapping else 'no'}",
    ]
    for j, members in enumerate(gs.j_classes):
        flag = "regular" if gs.regular[j] else "null"
        out.append(f"J{j}: size {len(members)} {flag}")
    print("\n".join(out))
    return EXIT_OK


def _jref(sgp, args) -> JClassRef:
    return JClassRef(sgp, args.jclass)


def cmd_rlm(args) -> int:
    sgp = ff.load_semigroup(args.file, max_elements=args.budget_elements)
    rq = rlm_quotient(sgp, _jref(sgp, args))
    sys.stdout.write(ff.dump_semigroup(rq.rlm))
    sidecar = {
        "jclass": args.jclass,
        "b_classes": len(rq.jref.b_classes),
        "order": len(rq.rlm),
        "morphism": sorted(
            [str(s), str(v)] for s, v in rq.morphism.items()
        ),
    }
    sys.stdout.write(_dump_json(sidecar))
    return EXIT_OK


def cmd_gm(args) -> int:
    sgp = ff.load_semigroup(args.file, max_elements=args.budget_elements)
    gq = gm_quotient(sgp, _jref(sgp, args))
    rep = regular_representation(gq.quotient)
    sys.stdout.write(ff.dump_semigroup(rep))
    sidecar = {
        "jclass": args.jclass,
        "order": len(gq.quotient),
        "generalized_only": gq.generalized_only,
        "injective_on_all_subgroups": gq.injective_on_all_subgroups,
        "classes": sorted(
            [str(s), gq.morphism[s]] for s in sgp.elements
        ),
    }
    sys.stdout.write(_dump_json(sidecar))
    return EXIT_OK


def cmd_rees(args) -> int:
    sgp = ff.load_semigroup(args.file, max_elements=args.budget_elements)
    rc = rees_coordinates(sgp, _jref(sgp, args))
    sidecar = {
        "jclass": args.jclass,
        "group_order": len(rc.group),
        "a_classes": rc.a_classes,
        "b_classes": rc.b_classes,
        "matrix": rc.matrix,
        "group_table": rc.group.table,
        "coordinates": sorted(
            [str(sgp.elements[u]), list(c)] for u, c in rc.coord.items()
        ),
    }
    sys.stdout.write(_dump_json(sidecar))
    return EXIT_OK


def cmd_spc(args) -> int:
    with open(args.group, encoding="ascii") as fh:
        group = ff.parse_group(fh.read())
    if args.op == "enumerate":
        for s in spcmod.enumerate_spcs(args.size, group):
            print(ff.dump_spc(s))
        return EXIT_OK
    x = ff.parse_spc(args.spc1, args.size, group)
    y = ff.parse_spc(args.spc2, args.size, group)
    if args.op == "leq":
        print("true" if spcmod.leq(x, y, group) else "false")
    elif args.op == "meet":
        print(ff.dump_spc(spcmod.meet(x, y, group)))
    else:
        j = spcmod.join(x, y, group)
        print("TOP" if j is spcmod.TOP else ff.dump_spc(j))
    return EXIT_OK


def cmd_flow_verify(args) -> int:
    sgp = ff.load_semigroup(args.semigroup, max_elements=args.budget_elements)
    pres = group_mapping_presentation(sgp)
    with open(args.flow, encoding="ascii") as fh:
        flow = ff.parse_flow(fh.read(), pres)
    verdict = flowmod.verify_flow(flow)
    if verdict is True:
        print("ok")
        return EXIT_OK
    print(
        f"violation: {verdict.condition} at state {verdict.state} "
        f"letter {verdict.letter}: {verdict.detail}"
    )
    return EXIT_VERIFY


def cmd_flow_search(args) -> int:
    sgp = ff.load_semigroup(args.semigroup, max_elements=args.budget_elements)
    pres = group_mapping_presentation(sgp)
    result = flowmod.flow_search(
        pres,
        max_states=args.max_states,
        cap=args.cap,
        automata_budget=args.automata_budget,
    )
    if isinstance(result, flowmod.FlowSearchExhausted):
        print(
            f"unknown: exhausted after {result.automata_tried} automata "
            f"(budget {result.budget})"
        )
        return EXIT_RESOURCE
    sys.stdout.write(ff.dump_flow(result))
    return EXIT_OK


def cmd_divide(args) -> int:
    source = ff.load_semigroup(args.source, max_elements=args.budget_elements)
    target = ff.load_semigroup(args.target, max_elements=args.budget_elements)
    lifts = None
    if args.lifts:
        with open(args.lifts, encoding="ascii") as fh:
            lifts = _parse_lifts(fh.read(), source, target)
    result = check_division(source, target, lifts=lifts, budget=args.division_budget)
    if isinstance(result, DivisionWitness):
        payload = {
            "lifts": {name: str(v) for name, v in result.lifts.items()},
            "morphism": sorted([str(t), str(s)] for t, s in result.morphism.items()),
        }
        sys.stdout.write(_dump_json(payload))
        return EXIT_OK
    print(f"unknown: searched {result.tried} lift tuples (budget {result.budget})")
    return EXIT_RESOURCE


def _parse_lifts(text: str, source, target) -> dict:
    lifts = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        name, rest = line.split(":", 1)
        name = name.strip()
        toks = rest.split()
        images = tuple(0 if t == "-" else int(t) for t in toks)
        value = PartialTransformation(images)
        if value not in target.index:
            raise InputError(f"lift for {name!r} is not in the target semigroup")
        lifts[name] = value
    missing = set(source.gen_names) - set(lifts)
    if missing:
        raise InputError(f"missing lifts for generators: {sorted(missing)}")
    return lifts


def cmd_estimate(args) -> int:
    sgp = ff.load_semigroup(args.file, max_elements=args.budget_elements)
    options = cx.EstimateOptions(
        max_flow_states=args.budget_states,
        automata_budget=args.automata_budget,
        max_elements=args.budget_elements,
    )
    interval = cx.estimate(sgp, options)
    print(str(interval))
    if args.trace:
        sys.stdout.write(_dump_json(interval.certificate))
    if args.cert:
        Path(args.cert).write_text(_dump_json(interval.certificate), encoding="ascii")
    return EXIT_OK


def _named_group(spec: str) -> FiniteGroup:
    if spec == "trivial":
        return FiniteGroup.trivial()
    if spec.upper().startswith("Z") and spec[1:].isdigit():
        return FiniteGroup.cyclic(int(spec[1:]))
    with open(spec, encoding="ascii") as fh:
        return ff.parse_group(fh.read())


def cmd_inverse_demo(args) -> int:
    from .semilocal import theta_prime_representation

    group = _named_group(args.group)
    sgp = invmod.small_monoid(args.n, group, args.rank)
    if args.rank == 1:
        trans = invmod.matrix_semigroup_as_transformations(sgp, group)
    else:
        # rank-collapsed products are not plain vector action; the faithful
        # form is the ideal action restricted away from zero
        trans = theta_prime_representation(sgp)
    sys.stdout.write(ff.dump_semigroup(trans))
    units = sum(1 for m in sgp.elements if m.is_unit())
    mid = len(sgp) - units - 1
    print(f"census: units {units}, rank-{args.rank} {mid}, zero 1, total {len(sgp)}")
    if args.rank == 1:
        dec = invmod.inverse_decomposition(sgp, group)
        print(
            f"decomposition: verified (direct and flow lifts, "
            f"image order {len(sgp)})"
        )
        if args.lift:
            census = invmod.analyze_lift(sgp, group)
            print(
                f"lift: order {len(census.ts)}, J0 {len(census.j0_members)}, "
                f"J1 {len(census.j1_members)}, J2 {len(census.j2_members)}, "
                f"H {len(census.h_group)}"
            )
    else:
        cls = classify(sgp)
        jref = JClassRef(sgp, cls.distinguished_j)
        rc = rees_coordinates(sgp, jref)
        iso = invmod.brandt_isomorphism(sgp, rc)
        print(
            f"ideal: Brandt of degree {len(rc.a_classes)} over a group of "
            f"order {len(rc.group)} ({len(iso) + 1} elements with zero)"
        )
    return EXIT_OK


# -- corpus ----------------------------------------------------------------


def load_corpus_manifest(path=None) -> list[dict]:
    manifest_path = Path(path) if path else CORPUS_DIR / "manifest.json"
    return json.loads(manifest_path.read_text(encoding="ascii"))


def corpus_report(manifest_path=None, options=None) -> str:
    entries = load_corpus_manifest(manifest_path)
    options = options or cx.EstimateOptions()
    base = Path(manifest_path).parent if manifest_path else CORPUS_DIR
    lines = []
    for entry in entries:
        name = entry["name"]
        sgp = ff.load_semigroup(base / entry["file"])
        cls = classify(sgp)
        ap = is_aperiodic(sgp)
        checks = []
        expected = entry["expected"]

        def expect(key, actual):
            want, tag = expected[key]
            ok = want == actual
            checks.append((key, tag, ok, want, actual))

        expect("order", len(sgp))
        expect("aperiodic", ap)
        expect("group_mapping", cls.group_mapping)
        if "interval" in expected:
            interval = cx.estimate(sgp, options)
            expect("interval", [interval.lower, interval.upper])
        lines.append(f"== {name}")
        for key, tag, ok, want, actual in checks:
            status = "ok" if ok else f"MISMATCH want {want} got {actual}"
            lines.append(f"  {key} [{tag}]: {status}")
        if any(not c[2] for c in checks):
            lines.append("  RESULT: FAIL")
        else:
            lines.append("  RESULT: pass")
    lines.append(f"entries: {len(entries)}")
    return "\n".join(lines) + "\n"


def cmd_corpus_run(args) -> int:
    options = cx.EstimateOptions(
        max_flow_states=args.budget_states,
        automata_budget=args.automata_budget,
        max_elements=args.budget_elements,
    )
    report = corpus_report(args.manifest, options)
    sys.stdout.write(report)
    if args.out:
        Path(args.out).write_text(report, encoding="ascii")
    return EXIT_VERIFY if "MISMATCH" in report else EXIT_OK


# -- certificate replay ------------------------------------------------------


def replay_certificate(cert: dict, options=None) -> list[str]:
    """Re-verify an estimate certificate from its embedded files alone;
    returns a log of replayed claims (raises on any failure)."""
    options = options or cx.EstimateOptions()
    log: list[str] = []

    def run(node: dict) -> tuple[int, int | None]:
        sgp = ff.parse_semigroup(node["semigroup"])
        rule = node["rule"]
        if rule == "aperiodic":
            if not is_aperiodic(sgp):
                raise VerificationError("replay: semigroup is not aperiodic")
            log.append(f"{node['label']}: aperiodic, [0, 0]")
            got = (0, 0)
        elif rule == "gm-max":
            reduction = cx.gm_reduction(sgp)
            if len(reduction.children) != len(node["children"]):
                raise VerificationError("replay: GM child count changed")
            lowers, uppers = [], []
            for child_node, (jref, gq) in zip(node["children"], reduction.children):
                if child_node["jclass"] != jref.j_id:
                    raise VerificationError("replay: GM child classes changed")
                if child_node["kind"] == "smaller-gm-image":
                    image_text = cx._serialize_sgp(gq.quotient)
                    if image_text != child_node["image"]:
                        raise VerificationError("replay: GM image changed")
                    if child_node["sub"]["semigroup"] != image_text:
                        raise VerificationError("replay: child certificate mismatch")
                lo, hi = run(child_node["sub"])
                lowers.append(lo)
                uppers.append(hi)
            got = (
                max(lowers),
                None if any(u is None for u in uppers) else max(uppers),
            )
            log.append(f"{node['label']}: gm-max over {len(lowers)} children")
        elif rule == "group-mapping":
            pres = group_mapping_presentation(sgp)
            if pres.jref.j_id != node["jclass"]:
                raise VerificationError("replay: distinguished class changed")
            rlm_text = cx._serialize_sgp(pres.rlmq.rlm)
            if node["rlm"]["semigroup"] != rlm_text:
                raise VerificationError("replay: RLM image changed")
            rlm_lo, rlm_hi = run(node["rlm"])
            lower = max(1, rlm_lo)
            upper_node = node["upper"]
            if upper_node["kind"] == "pure":
                from .semilocal import fasp_embedding

                emb = fasp_embedding(pres)
                if len(emb.witness.morphism) != upper_node["embedded_order"]:
                    raise VerificationError("replay: embedding order changed")
                if rlm_hi is None or upper_node["value"] != rlm_hi + 1:
                    raise VerificationError("replay: pure upper bound inconsistent")
                got = (lower, upper_node["value"])
                log.append(f"{node['label']}: pure upper {upper_node['value']}")
            elif upper_node["kind"] == "flow":
                flow = ff.parse_flow(upper_node["flow"], pres)
                if flowmod.verify_flow(flow) is not True:
                    raise VerificationError("replay: stored flow does not verify")
                tsg = flowmod.transition_semigroup(flow.automaton)
                cap = upper_node["cap"]
                if cap == 0:
                    if not is_aperiodic(tsg):
                        raise VerificationError("replay: flow automaton is not aperiodic")
                else:
                    sub = cx.estimate(tsg, options)
                    if sub.upper is None or sub.upper > cap:
                        raise VerificationError("replay: flow automaton exceeds the cap")
                witness = flowmod.presentation_construct(flow)
                if len(witness.division.morphism) != upper_node["lift_semigroup_order"]:
                    raise VerificationError("replay: lift order changed")
                if rlm_hi is None or upper_node["value"] != rlm_hi:
                    raise VerificationError("replay: flow upper bound inconsistent")
                got = (lower, upper_node["value"])
                log.append(f"{node['label']}: flow upper {upper_node['value']}")
            else:
                got = (lower, None)
                log.append(f"{node['label']}: upper unknown")
        else:
            raise VerificationError(f"replay: unknown rule {rule!r}")
        want = tuple(node["interval"])
        want = (want[0], want[1])
        if got != want:
            raise VerificationError(
                f"replay: interval mismatch at {node['label']}: {got} vs {want}"
            )
        return got

    run(cert)
    return log


def cmd_replay(args) -> int:
    cert = json.loads(Path(args.certificate).read_text(encoding="ascii"))
    options = cx.EstimateOptions(
        max_flow_states=args.budget_states,
        automata_budget=args.automata_budget,
        max_elements=args.budget_elements,
    )
    log = replay_certificate(cert, options)
    for line in log:
        print(line)
    print("replay: ok")
    return EXIT_OK


# -- entry point -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="krc",
        description="Finite semigroup structure and complexity bounds "
        "with replayable certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_budgets(p):
        p.add_argument(
            "--budget-elements",
            type=int,
            default=_env_int("KRC_BUDGET_ELEMENTS", 100_000),
            help="element budget for semigroup enumeration",
        )
        p.add_argument(
            "--budget-states",
            type=int,
            default=_env_int("KRC_BUDGET_STATES", 1),
            help="maximal automaton size for flow search",
        )
        p.add_argument(
            "--automata-budget",
            type=int,
            default=_env_int("KRC_AUTOMATA_BUDGET", 2000),
            help="number of automata tried per flow search",
        )
        p.add_argument(
            "--division-budget",
            type=int,
            default=_env_int("KRC_DIVISION_BUDGET", 2_000_000),
            help="lift tuples tried per division search",
        )

    p = sub.add_parser("analyze", help="order, Green data, classification")
    p.add_argument("file")
    add_budgets(p)
    p.set_defaults(func=cmd_analyze)

    for name, fn in (("rlm", cmd_rlm), ("gm", cmd_gm), ("rees", cmd_rees)):
        p = sub.add_parser(name, help=f"{name} data at a J-class")
        p.add_argument("file")
        p.add_argument("--jclass", type=int, required=True)
        add_budgets(p)
        p.set_defaults(func=fn)

    p = sub.add_parser("spc", help="SPC lattice operations")
    p.add_argument("group", help="group file")
    p.add_argument("op", choices=["leq", "meet", "join", "enumerate"])
    p.add_argument("spc1", nargs="?", default="")
    p.add_argument("spc2", nargs="?", default="")
    p.add_argument("--size", type=int, required=True, help="|B|")
    p.set_defaults(func=cmd_spc)

    p = sub.add_parser("flow", help="flow verification and search")
    fsub = p.add_subparsers(dest="flow_command", required=True)
    pv = fsub.add_parser("verify")
    pv.add_argument("semigroup")
    pv.add_argument("flow")
    add_budgets(pv)
    pv.set_defaults(func=cmd_flow_verify)
    ps = fsub.add_parser("search")
    ps.add_argument("semigroup")
    ps.add_argument("--max-states", type=int, default=1)
    ps.add_argument("--cap", type=int, default=0)
    add_budgets(ps)
    ps.set_defaults(func=cmd_flow_search)

    p = sub.add_parser("divide", help="certify S < T")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--lifts")
    add_budgets(p)
    p.set_defaults(func=cmd_divide)

    p = sub.add_parser("estimate", help="complexity interval with certificate")
    p.add_argument("file")
    p.add_argument("--trace", action="store_true")
    p.add_argument("--cert", help="write the certificate to this path")
    add_budgets(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("inverse", help="inverse-monoid constructions")
    isub = p.add_subparsers(dest="inverse_command", required=True)
    pd = isub.add_parser("demo")
    pd.add_argument("--n", type=int, required=True)
    pd.add_argument("--group", required=True, help="trivial, Z<k>, or a group file")
    pd.add_argument("--rank", type=int, required=True)
    pd.add_argument("--lift", action="store_true")
    pd.set_defaults(func=cmd_inverse_demo)

    p = sub.add_parser("corpus", help="corpus management")
    csub = p.add_subparsers(dest="corpus_command", required=True)
    pr = csub.add_parser("run")
    pr.add_argument("--manifest")
    pr.add_argument("--out")
    add_budgets(pr)
    pr.set_defaults(func=cmd_corpus_run)

    p = sub.add_parser("replay", help="re-verify a certificate from files alone")
    p.add_argument("certificate")
    add_budgets(p)
    p.set_defaults(func=cmd_replay)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except VerificationError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
