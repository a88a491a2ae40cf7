"""Command-line front end.

Every subcommand prints JSON (or JSON lines) on standard output.  Exit status
is 0 on success, 1 on a domain error, 2 when a resource bound is exceeded and
64 on a malformed command line.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence
from typing import Any

from . import config, jsonio
from .build import cyclotomic, group_ring, orbit_sring, rank_two, tensor, wreath
from .classify import abelian_schur_verdict, cyclic_table, groups_of_order
from .counterexample import counterexample_for
from .enumeration import all_srings, brute_force_srings
from .errors import PartitionError, SRingError, UsageError
from .groups import (
    all_subgroups,
    automorphism_group,
    make_group,
    make_section,
    power_map,
    subgroup_from_members,
    translation,
    trivial_subgroup,
    whole_group,
)
from .perms import PermGroup
from .schurity import aut, aut_stabilizer, is_normal, is_schurian, verify_certificate
from .sring import closure, find_violation, quotient_sring, restrict

EXIT_USAGE = 64


class CommandLineError(SRingError):
    exit_code = EXIT_USAGE


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with 2, which is reserved for bounds
        raise CommandLineError(message)


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from None


def _range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise argparse.ArgumentTypeError("expected LO..HI")
    return int(lo), int(hi)


def _emit(obj: Any) -> None:
    print(json.dumps(obj))


def _read_sring(args) -> Any:
    if args.input is not None:
        return jsonio.sring_from_json(jsonio.load(args.input))
    if args.factors is not None and args.classes is not None:
        return jsonio.sring_from_json({"group": {"factors": args.factors}, "classes": json.loads(args.classes)})
    raise CommandLineError("give --in FILE or both --factors and --classes")


# ---------------------------------------------------------------- build DSL


def _members(G, spec) -> Any:
    if spec == "G":
        return whole_group(G)
    if spec in ("1", 1, None):
        return trivial_subgroup(G)
    return subgroup_from_members(G, [int(x) for x in spec])


def build_tree(node: dict) -> Any:
    """Evaluate a construction tree such as ``{"op": "tensor", "A1": {...}, "A2": {...}}``."""
    if not isinstance(node, dict) or "op" not in node:
        raise UsageError("every tree node needs an 'op'")
    op = node["op"]
    if op == "sring":
        return jsonio.sring_from_json(node)
    if op in ("group_ring", "rank_two", "closure", "cyclotomic", "orbit"):
        G = make_group(node["factors"])
        if op == "group_ring":
            return group_ring(G)
        if op == "rank_two":
            return rank_two(G)
        if op == "closure":
            return closure(G, node.get("seeds", []))
        if op == "cyclotomic":
            gens = [tuple(g) for g in node.get("generators", [])]
            gens += [power_map(G, int(m)) for m in node.get("powers", [])]
            return cyclotomic(gens, G)
        gens = [tuple(g) for g in node.get("generators", [])]
        if node.get("add_translations", True):
            gens += [translation(G, G.unit(j)) for j in range(G.rank)]
        return orbit_sring(PermGroup(G.order, gens), G)
    if op == "tensor":
        return tensor(build_tree(node["A1"]), build_tree(node["A2"]))
    if op == "wreath":
        G = make_group(node["factors"])
        U, L = _members(G, node["U"]), _members(G, node["L"])
        return wreath(G, U, L, build_tree(node["A1"]), build_tree(node["A2"]), node.get("embed"), node.get("project"))
    if op == "restrict":
        A = build_tree(node["A"])
        return restrict(A, _members(A.group, node["U"]))
    if op == "quotient":
        A = build_tree(node["A"])
        G = A.group
        return quotient_sring(A, make_section(_members(G, node.get("U", "G")), _members(G, node["L"])))
    raise UsageError(f"unknown op {op!r}")


# ---------------------------------------------------------------- subcommands


def cmd_group(args) -> int:
    G = make_group(args.factors)
    out: dict[str, Any] = {
        "factors": list(G.factors),
        "order": G.order,
        "invariant_factors": list(G.normal_form),
        "exponent": G.exponent,
    }
    if args.subgroups:
        subs = all_subgroups(G)
        out["subgroup_count"] = len(subs)
        out["subgroups"] = [list(H.members) for H in subs]
    if args.aut:
        K = automorphism_group(G)
        out["aut"] = jsonio.permgroup_to_json(K)
    if args.elements:
        out["elements"] = [list(G.element(i)) for i in range(G.order)]
    _emit(out)
    return 0


def cmd_enumerate(args) -> int:
    G = make_group(args.factors)
    if args.oracle:
        rings = brute_force_srings(G)
    else:
        rings = all_srings(G, fuse=not args.labeled, bound=args.bound, threads=args.threads)
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        for A in rings:
            record = A.to_json()
            record["rank"] = A.rank
            if args.schurity:
                ok, cert = is_schurian(A)
                record["schurian"] = ok
                record["certificate"] = cert.to_json()
            out.write(json.dumps(record) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    if args.out:
        _emit({"group": {"factors": list(G.factors)}, "count": len(rings), "out": args.out})
    return 0


def cmd_check(args) -> int:
    if args.input is not None:
        data = jsonio.load(args.input)
        G, classes = jsonio.group_from_json(data["group"]), data["classes"]
    else:
        if args.factors is None or args.classes is None:
            raise CommandLineError("give --in FILE or both --factors and --classes")
        G, classes = make_group(args.factors), json.loads(args.classes)
    try:
        violation = find_violation(G, classes)
    except PartitionError as err:
        _emit({"valid": False, **err.to_json(), "message": str(err)})
        return 1
    if violation is not None:
        _emit({"valid": False, **violation.to_json()})
        return 1
    _emit({"valid": True, "rank": len(classes)})
    return 0


def cmd_closure(args) -> int:
    G = make_group(args.factors)
    A = closure(G, json.loads(args.seeds))
    _emit(A.to_json())
    return 0


def cmd_build(args) -> int:
    tree = json.loads(args.expr) if args.expr is not None else jsonio.load(args.input)
    A = build_tree(tree)
    _emit(A.to_json())
    return 0


def cmd_aut(args) -> int:
    A = _read_sring(args)
    stab = aut_stabilizer(A)
    full = aut(A)
    _emit(
        {
            "order": full.order(),
            "stabilizer_order": stab.order(),
            "stabilizer_generators": [list(g) for g in stab.generators],
            "orbits_of_stabilizer": [list(o) for o in stab.orbits()],
        }
    )
    return 0


def cmd_schurian(args) -> int:
    A = _read_sring(args)
    ok, cert = is_schurian(A)
    if args.cert_out:
        jsonio.dump(cert.to_json(), args.cert_out)
    _emit({"schurian": ok, "certificate": cert.to_json()})
    return 0


def cmd_normal(args) -> int:
    A = _read_sring(args)
    ok, cert = is_normal(A)
    if args.cert_out:
        jsonio.dump(cert.to_json(), args.cert_out)
    _emit({"normal": ok, "certificate": cert.to_json()})
    return 0


def cmd_classify(args) -> int:
    if args.factors is not None:
        _emit(abelian_schur_verdict(make_group(args.factors)).to_json())
        return 0
    if args.range is None:
        raise CommandLineError("give --factors or --range")
    lo, hi = args.range
    if args.cyclic:
        table = cyclic_table(lo, hi)
        _emit({"schur_orders": [row["n"] for row in table if row["schur"]], "table": table})
        return 0
    for n in range(max(lo, 1), hi + 1):
        for fs in groups_of_order(n):
            record = {"factors": fs, **abelian_schur_verdict(make_group(fs)).to_json()}
            print(json.dumps(record))
    return 0


def cmd_counterexample(args) -> int:
    g1 = args.g1_factors if args.g1_factors is not None else args.g1
    g2 = args.g2_factors if args.g2_factors is not None else args.g2
    if g1 is None or g2 is None:
        raise CommandLineError("give --g1/--g1-factors and --g2/--g2-factors")
    witness = counterexample_for(g1, g2)
    A = witness.sring
    ok, cert = is_schurian(A)
    verify_certificate(cert)
    record = witness.to_json()
    record["schurian"] = ok
    record["certificate"] = cert.to_json()
    if args.out:
        jsonio.dump(record, args.out)
    if args.cert_out:
        jsonio.dump(cert.to_json(), args.cert_out)
    if args.summary:
        _emit(
            {
                "group": {"factors": list(A.group.factors)},
                "order": A.group.order,
                "rank": A.rank,
                "schurian": ok,
                "checks": witness.checks,
                "method": cert.witness.get("method"),
            }
        )
    else:
        _emit(record)
    return 0


def cmd_verify_certificate(args) -> int:
    data = jsonio.load(args.input)
    if "certificate" in data and "kind" not in data:
        data = data["certificate"]
    cert = jsonio.certificate_from_json(data)
    try:
        verify_certificate(cert)
    except SRingError as err:
        _emit({"valid": False, "kind": cert.kind, "reason": str(err)})
        return 1
    _emit({"valid": True, "kind": cert.kind})
    return 0


# ---------------------------------------------------------------- parser


def _add_sring_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("--in", dest="input", help="S-ring JSON file, or - for stdin")
    p.add_argument("--factors", type=_ints)
    p.add_argument("--classes", help="classes as a JSON list of lists")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="srings", description="Schur rings over finite abelian groups.")
    parser.add_argument("--threads", type=int, default=1, help="worker threads for enumeration")
    parser.add_argument("--aut-bound", type=int, help=f"largest group order for S-ring automorphisms ({config.AUT_BOUND})")
    parser.add_argument("--group-bound", type=int, help=f"largest order for subgroup lattices ({config.GROUP_BOUND})")
    parser.add_argument("--search-bound", type=int, help=f"node budget for backtracking ({config.SEARCH_BOUND})")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("group", help="describe a group")
    p.add_argument("--factors", type=_ints, required=True)
    p.add_argument("--subgroups", action="store_true")
    p.add_argument("--aut", action="store_true")
    p.add_argument("--elements", action="store_true")
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("enumerate", help="all S-rings over a small group, as JSON lines")
    p.add_argument("--factors", type=_ints, required=True)
    p.add_argument("--out")
    p.add_argument("--schurity", action="store_true")
    p.add_argument("--oracle", action="store_true", help="brute force over all partitions (order <= 8)")
    p.add_argument("--labeled", action="store_true", help="do not fuse Cayley isomorphic S-rings")
    p.add_argument("--bound", type=int, help=f"largest order to enumerate ({config.ENUM_BOUND})")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("check", help="verify the S-ring axioms for a partition")
    _add_sring_input(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("closure", help="smallest S-ring containing the seed sets")
    p.add_argument("--factors", type=_ints, required=True)
    p.add_argument("--seeds", required=True, help="JSON list of element lists")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("build", help="evaluate a JSON construction tree")
    p.add_argument("--in", dest="input")
    p.add_argument("--expr")
    p.set_defaults(func=cmd_build)

    for name, func, extra in (
        ("aut", cmd_aut, False),
        ("schurian", cmd_schurian, True),
        ("normal", cmd_normal, True),
    ):
        p = sub.add_parser(name)
        _add_sring_input(p)
        if extra:
            p.add_argument("--cert-out")
        p.set_defaults(func=func)

    p = sub.add_parser("classify", help="Schur verdicts for abelian groups")
    p.add_argument("--factors", type=_ints)
    p.add_argument("--range", type=_range)
    p.add_argument("--cyclic", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("counterexample", help="non-schurian S-ring over G1 x G2")
    p.add_argument("--g1", type=int)
    p.add_argument("--g2", type=int)
    p.add_argument("--g1-factors", type=_ints)
    p.add_argument("--g2-factors", type=_ints)
    p.add_argument("--out")
    p.add_argument("--cert-out")
    p.add_argument("--summary", action="store_true", help="print a short summary instead of the full record")
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("verify-certificate")
    p.add_argument("--in", dest="input", required=True)
    p.set_defaults(func=cmd_verify_certificate)
    return parser


def _apply_bounds(args) -> None:
    if args.aut_bound is not None:
        config.AUT_BOUND = args.aut_bound
    if args.group_bound is not None:
        config.GROUP_BOUND = args.group_bound
    if args.search_bound is not None:
        config.SEARCH_BOUND = args.search_bound


def run(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        _apply_bounds(args)
        return args.func(args)
    except SRingError as err:
        payload: dict[str, Any] = {"error": type(err).__name__, "message": str(err)}
        if hasattr(err, "to_json"):
            payload.update(err.to_json())
        elif getattr(err, "witness", None) is not None:
            payload["witness"] = err.witness
        _emit(payload)
        return err.exit_code
    except (KeyError, TypeError, json.JSONDecodeError, OSError) as err:
        _emit({"error": type(err).__name__, "message": str(err)})
        return 1


def main() -> None:
    sys.exit(run())
