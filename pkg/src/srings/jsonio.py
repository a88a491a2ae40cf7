"""JSON readers and writers for the objects the command line exchanges.

Schemas (all plain JSON):

* group: ``{"factors": [n1, n2, ...]}``
* subgroup: ``{"group": <group>, "members": [...]}``
* section: ``{"group": <group>, "U": [...], "L": [...], "quotient": <group>}``
* permgroup: ``{"degree": n, "generators": [[...], ...], "order": k}``
* sring: ``{"group": <group>, "classes": [[...], ...]}``
* certificate: ``{"kind": ..., "sring": <sring>, "generators": [...], "witness": {...}}``
* witness: the counterexample record written by ``counterexample --out``.

Element ``i`` of a group with factors ``(n1, ..., nk)`` is the tuple whose
mixed-radix value (last coordinate fastest) is ``i``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .errors import UsageError
from .groups import AbelianGroup, Section, Subgroup, make_group, make_section
from .perms import PermGroup
from .schurity import Certificate
from .sring import SRing, verify_sring


def _require(data: Any, keys: tuple[str, ...], what: str) -> dict:
    if not isinstance(data, dict) or any(k not in data for k in keys):
        raise UsageError(f"{what} JSON needs the keys {list(keys)}")
    return data


def group_to_json(G: AbelianGroup) -> dict:
    return {"factors": list(G.factors)}


def group_from_json(data: Any) -> AbelianGroup:
    if isinstance(data, list):
        return make_group(data)
    return make_group(_require(data, ("factors",), "group")["factors"])


def subgroup_to_json(H: Subgroup) -> dict:
    return {"group": group_to_json(H.owner), "members": list(H.members)}


def subgroup_from_json(data: Any, G: AbelianGroup | None = None) -> Subgroup:
    from .groups import subgroup_from_members

    if isinstance(data, list):
        if G is None:
            raise UsageError("a bare member list needs its group")
        return subgroup_from_members(G, data)
    data = _require(data, ("members",), "subgroup")
    owner = group_from_json(data["group"]) if "group" in data else G
    if owner is None:
        raise UsageError("subgroup JSON needs its group")
    return subgroup_from_members(owner, data["members"])


def section_to_json(S: Section) -> dict:
    return {
        "group": group_to_json(S.owner),
        "U": list(S.U.members),
        "L": list(S.L.members),
        "quotient": group_to_json(S.quotient),
    }


def section_from_json(data: Any) -> Section:
    data = _require(data, ("group", "U", "L"), "section")
    G = group_from_json(data["group"])
    return make_section(subgroup_from_json(data["U"], G), subgroup_from_json(data["L"], G))


def permgroup_to_json(P: PermGroup) -> dict:
    return {"degree": P.degree, "generators": [list(g) for g in P.generators], "order": P.order()}


def permgroup_from_json(data: Any) -> PermGroup:
    data = _require(data, ("degree", "generators"), "permgroup")
    gens = [tuple(int(x) for x in g) for g in data["generators"]]
    P = PermGroup(int(data["degree"]), gens)
    if "order" in data and int(data["order"]) != P.order():
        raise UsageError(f"stated order {data['order']} differs from the computed order {P.order()}")
    return P


def sring_to_json(A: SRing) -> dict:
    return A.to_json()


def sring_from_json(data: Any, verify: bool = True) -> SRing:
    data = _require(data, ("group", "classes"), "sring")
    G = group_from_json(data["group"])
    classes = [[int(x) for x in X] for X in data["classes"]]
    return verify_sring(G, classes) if verify else SRing(G, classes)


def certificate_to_json(cert: Certificate) -> dict:
    return cert.to_json()


def certificate_from_json(data: Any) -> Certificate:
    _require(data, ("kind", "sring"), "certificate")
    return Certificate.from_json(data)


@dataclass
class WitnessRecord:
    """A parsed counterexample record; every embedded S-ring is re-verified on reading."""

    data: dict[str, Any]
    rings: dict[str, SRing] = field(default_factory=dict)

    @property
    def sring(self) -> SRing:
        return self.rings["A"]

    def to_json(self) -> dict:
        return self.data


def witness_from_json(data: Any) -> WitnessRecord:
    data = _require(data, ("group", "rings", "S"), "witness")
    rings = {k: sring_from_json(v) for k, v in data["rings"].items()}
    if "A" not in rings:
        raise UsageError("witness JSON has no final ring under rings.A")
    if rings["A"].group != group_from_json(data["group"]):
        raise UsageError("final ring lives on a different group")
    return WitnessRecord(data, rings)


def load(path: str | Path) -> Any:
    if str(path) == "-":
        import sys

        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def dump(obj: Any, path: str | Path | None = None) -> str:
    text = json.dumps(obj, sort_keys=False)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text
