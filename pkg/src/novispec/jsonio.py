"""JSON schemas for fixtures, workspaces, and reports.

Exact rationals travel as "p/q" strings; exponents as integer arrays; field
order is fixed by construction so serialized fixtures and reports are stable
byte-for-byte.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path

from .chains import FilteredComplex, NovikovChain
from .dual import DualFunctional, Ray
from .errors import InputError
from .fixtures import ManifoldFixture
from .gamma import GammaGroup
from .maps import ChainMap, HamiltonianData, MonodromyShift
from .morse import MorseData
from .quantum import COHOMOLOGY, HOMOLOGY, ClassBasis, ProductFixture, QuantumClass
from .scalars import DOWN, NovikovScalar


def frac_str(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_frac(s) -> Fraction:
    if isinstance(s, bool) or s is None:
        raise InputError(f"not a rational: {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, float):
        # floating fixtures are parsed to exact binary rationals
        return Fraction(s)
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational: {s!r}") from exc


# ---------------------------------------------------------------------------
# groups and scalars


def gamma_to_json(g: GammaGroup) -> dict:
    return {
        "rank": g.rank,
        "omega": [frac_str(v) for v in g.omega_values],
        "c1": list(g.c1_values),
    }


def gamma_from_json(obj) -> GammaGroup:
    omega = [parse_frac(v) for v in obj.get("omega", [])]
    c1 = [int(v) for v in obj.get("c1", [])]
    if "rank" in obj and obj["rank"] != len(omega):
        raise InputError("rank field disagrees with generator lists")
    return GammaGroup(tuple(omega), tuple(c1))


def gamma_hash(g: GammaGroup) -> str:
    blob = json.dumps(gamma_to_json(g), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def scalar_to_json(s: NovikovScalar) -> list:
    return [[frac_str(c), list(label)] for label, c in s.terms.items()]


def scalar_from_json(obj, gamma, direction, floor=None) -> NovikovScalar:
    terms = {}
    for coeff, label in obj:
        terms[tuple(int(x) for x in label)] = parse_frac(coeff)
    return NovikovScalar(gamma, direction, terms, floor)


# ---------------------------------------------------------------------------
# complexes and chains


def complex_to_json(C: FilteredComplex) -> dict:
    return {
        "gamma": gamma_to_json(C.gamma),
        "orbits": [
            {"id": o, "action": frac_str(a), "degree": d}
            for o, (a, d) in sorted(C.orbits.items())
        ],
        "boundary": [
            {"from": src, "to": dst, "scalar": scalar_to_json(C.boundary_entries[src][dst])}
            for src in sorted(C.boundary_entries)
            for dst in sorted(C.boundary_entries[src])
        ],
        "floor": None if C.floor is None else frac_str(C.floor),
    }


def complex_from_json(obj) -> FilteredComplex:
    gamma = gamma_from_json(obj["gamma"])
    orbits = [
        (row["id"], parse_frac(row["action"]), int(row["degree"]))
        for row in obj["orbits"]
    ]
    floor = None if obj.get("floor") is None else parse_frac(obj["floor"])
    boundary = {}
    for row in obj.get("boundary", []):
        scalar = scalar_from_json(row["scalar"], gamma, DOWN)
        boundary.setdefault(row["from"], {})[row["to"]] = scalar
    return FilteredComplex(gamma, orbits, boundary, floor)


def chain_to_json(chain: NovikovChain) -> list:
    return [
        [frac_str(c), g.orbit, list(g.cap)] for g, c in chain.terms.items()
    ]


def chain_from_json(obj, C: FilteredComplex, floor=None) -> NovikovChain:
    terms = {}
    for coeff, orbit, cap in obj:
        g = C.generator(orbit, tuple(int(x) for x in cap))
        terms[g] = terms.get(g, Fraction(0)) + parse_frac(coeff)
    return C.chain(terms, floor)


# ---------------------------------------------------------------------------
# manifold fixture bundles


def morse_to_json(m: MorseData) -> dict:
    return {
        "dim": m.dim,
        "points": [
            {"id": p, "value": frac_str(v), "index": i} for p, v, i in m.points
        ],
        "boundary": [
            {"from": src, "to": dst, "coeff": coeff}
            for src in sorted(m.boundary)
            for dst, coeff in sorted(m.boundary[src].items())
        ],
        "betti": m.betti,
    }


def morse_from_json(obj) -> MorseData:
    boundary = {}
    for row in obj.get("boundary", []):
        boundary.setdefault(row["from"], {})[row["to"]] = int(row["coeff"])
    return MorseData(
        dim=int(obj["dim"]),
        points=[(r["id"], parse_frac(r["value"]), int(r["index"])) for r in obj["points"]],
        boundary=boundary,
        betti=obj.get("betti"),
    )


def qclass_to_json(a: QuantumClass) -> dict:
    return {
        "direction": a.direction,
        "terms": [[frac_str(c), name, list(label)] for (name, label), c in a.terms.items()],
    }


def qclass_from_json(obj, basis: ClassBasis, gamma: GammaGroup) -> QuantumClass:
    direction = obj.get("direction", COHOMOLOGY)
    if direction not in (COHOMOLOGY, HOMOLOGY):
        raise InputError(f"unknown class direction {direction!r}")
    terms = [
        (parse_frac(c), name, tuple(int(x) for x in label))
        for c, name, label in obj["terms"]
    ]
    return QuantumClass(basis, gamma, direction, terms)


def _point_chain_to_json(chain):
    return [[frac_str(c), p] for c, p in chain]


def _point_chain_from_json(obj):
    return [(parse_frac(c), p) for c, p in obj]


def manifold_to_json(fix: ManifoldFixture) -> dict:
    basis = {
        "half_dim": fix.basis.half_dim,
        "classes": [
            {"id": name, "degree": bc.degree}
            for name, bc in sorted(fix.basis.classes.items())
        ],
        "pairing": [
            {"a": a, "b": b, "value": frac_str(v)}
            for (a, b), v in sorted(fix.basis.pairing_table.items())
            if v != 0
        ],
    }
    product = None
    if fix.product is not None:
        product = {
            "unit": fix.product.unit,
            "table": [
                {"a": a, "b": b, "result": qclass_to_json(q)["terms"]}
                for (a, b), q in sorted(fix.product.table.items())
            ],
        }
    return {
        "name": fix.name,
        "gamma": gamma_to_json(fix.gamma),
        "morse": morse_to_json(fix.morse),
        "basis": basis,
        "pd_chains": {k: _point_chain_to_json(v) for k, v in sorted(fix.pd_chains.items())},
        "cochains": {k: _point_chain_to_json(v) for k, v in sorted(fix.cochains.items())},
        "product": product,
        "classes": [qclass_to_json(a) for a in fix.shipped_classes],
        "max_eps": frac_str(fix.max_eps),
    }


def manifold_from_json(obj) -> ManifoldFixture:
    gamma = gamma_from_json(obj["gamma"])
    morse = morse_from_json(obj["morse"])
    braw = obj["basis"]
    pairing = {
        (row["a"], row["b"]): parse_frac(row["value"])
        for row in braw.get("pairing", [])
    } or None
    basis = ClassBasis(
        int(braw["half_dim"]),
        [(r["id"], int(r["degree"])) for r in braw["classes"]],
        pairing,
    )
    product = None
    if obj.get("product"):
        table = {}
        for row in obj["product"]["table"]:
            table[(row["a"], row["b"])] = qclass_from_json(
                {"direction": COHOMOLOGY, "terms": row["result"]}, basis, gamma
            )
        product = ProductFixture(basis, gamma, obj["product"]["unit"], table)
        product.validate()
    fix = ManifoldFixture(
        name=obj["name"],
        gamma=gamma,
        morse=morse,
        basis=basis,
        pd_chains={k: _point_chain_from_json(v) for k, v in obj["pd_chains"].items()},
        cochains={k: _point_chain_from_json(v) for k, v in obj["cochains"].items()},
        product=product,
        shipped_classes=[qclass_from_json(c, basis, gamma) for c in obj["classes"]],
        max_eps=parse_frac(obj.get("max_eps", "1/4")),
    )
    return fix


# ---------------------------------------------------------------------------
# maps, shifts, Hamiltonians, functionals


def hamiltonian_to_json(H: HamiltonianData) -> dict:
    return {
        "times": [frac_str(t) for t in H.times],
        "weights": {p: frac_str(w) for p, w in sorted(H.weights.items())},
        "values": [
            {p: frac_str(v) for p, v in sorted(row.items())} for row in H.values
        ],
        "normalized": H.normalized,
    }


def hamiltonian_from_json(obj) -> HamiltonianData:
    return HamiltonianData(
        [parse_frac(t) for t in obj["times"]],
        {p: parse_frac(w) for p, w in obj["weights"].items()},
        [{p: parse_frac(v) for p, v in row.items()} for row in obj["values"]],
        normalized=obj.get("normalized", False),
    )


def chain_map_to_json(name_src, name_dst, m: ChainMap) -> dict:
    return {
        "source": name_src,
        "target": name_dst,
        "bound": frac_str(m.shift_bound),
        "matrix": [
            {"from": src, "to": dst, "scalar": scalar_to_json(m.matrix[src][dst])}
            for src in sorted(m.matrix)
            for dst in sorted(m.matrix[src])
        ],
    }


def chain_map_from_json(obj, complexes) -> ChainMap:
    try:
        src = complexes[obj["source"]]
        dst = complexes[obj["target"]]
    except KeyError as exc:
        raise InputError(f"chain map references unknown complex {exc}") from exc
    matrix = {}
    for row in obj["matrix"]:
        matrix.setdefault(row["from"], {})[row["to"]] = scalar_from_json(
            row["scalar"], src.gamma, DOWN
        )
    return ChainMap(src, dst, matrix, parse_frac(obj["bound"]))


def product_map_to_json(names: tuple, P) -> dict:
    """`names` = (source1, source2, target) workspace names."""
    return {
        "source1": names[0],
        "source2": names[1],
        "target": names[2],
        "degree_shift": P.degree_shift,
        "table": [
            {"a": a, "b": b, "to": o3, "scalar": scalar_to_json(scalar)}
            for (a, b) in sorted(P.table)
            for o3, scalar in sorted(P.table[(a, b)].items())
        ],
        "ledger": [
            {"a": a, "b": b, "to": c, "slack": frac_str(v)}
            for (a, b, c), v in sorted(P.ledger.items())
            if v != 0
        ],
    }


def product_map_from_json(obj, complexes):
    from .maps import ProductMapData

    try:
        s1 = complexes[obj["source1"]]
        s2 = complexes[obj["source2"]]
        tgt = complexes[obj["target"]]
    except KeyError as exc:
        raise InputError(f"product references unknown complex {exc}") from exc
    table = {}
    for row in obj["table"]:
        key = (row["a"], row["b"])
        table.setdefault(key, {})[row["to"]] = scalar_from_json(
            row["scalar"], tgt.gamma, DOWN
        )
    ledger = {
        (row["a"], row["b"], row["to"]): parse_frac(row["slack"])
        for row in obj.get("ledger", [])
    }
    return ProductMapData(s1, s2, tgt, int(obj["degree_shift"]), table, ledger)


def monodromy_to_json(s: MonodromyShift) -> dict:
    return {
        "orbit_map": dict(sorted(s.orbit_map.items())),
        "cap_shift": {o: list(c) for o, c in sorted(s.cap_shift.items())},
        "i_omega": frac_str(s.i_omega),
        "degree_shift": s.degree_shift,
    }


def monodromy_from_json(obj) -> MonodromyShift:
    return MonodromyShift(
        dict(obj["orbit_map"]),
        {o: tuple(int(x) for x in c) for o, c in obj.get("cap_shift", {}).items()},
        parse_frac(obj.get("i_omega", 0)),
        int(obj.get("degree_shift", 0)),
    )


def functional_to_json(mu: DualFunctional) -> dict:
    return {
        "threshold": None if mu.threshold is None else frac_str(mu.threshold),
        "atoms": [
            {"orbit": g.orbit, "cap": list(g.cap), "value": frac_str(v)}
            for g, v in sorted(mu.atoms.items(), key=lambda kv: (kv[0].orbit, kv[0].cap))
        ],
        "rays": [
            {
                "orbit": r.orbit,
                "base": list(r.base),
                "direction": list(r.direction),
                "value": frac_str(r.value),
            }
            for r in mu.rays
        ],
    }


def functional_from_json(obj, C: FilteredComplex) -> DualFunctional:
    atoms = {}
    for row in obj.get("atoms", []):
        g = C.generator(row["orbit"], tuple(int(x) for x in row["cap"]))
        atoms[g] = parse_frac(row["value"])
    rays = [
        Ray(
            row["orbit"],
            tuple(int(x) for x in row["base"]),
            tuple(int(x) for x in row["direction"]),
            parse_frac(row["value"]),
        )
        for row in obj.get("rays", [])
    ]
    threshold = obj.get("threshold")
    return DualFunctional(
        C, atoms, rays, None if threshold is None else parse_frac(threshold)
    )


# ---------------------------------------------------------------------------
# files


def dump_json(obj, path) -> None:
    Path(path).write_text(
        json.dumps(obj, indent=1, sort_keys=False) + "\n", encoding="utf-8"
    )


def load_json(path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def file_hash(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()[:16]
