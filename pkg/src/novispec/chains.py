"""Graded, action-filtered, equivariant chain complexes and their chains.

A complex is a finite set of orbits, each with a base action and a base
degree; the full generator set is orbit x cap.  Gluing a cap A onto a
generator shifts its action by -omega(A) and its degree by -2*c1(A).  The
boundary is stored equivariantly: one downward Novikov scalar per orbit pair,
so one matrix presents the map on every cap simultaneously.

Chains are finite homogeneous combinations of generators with an optional
action-space precision floor.  The level of a chain is the maximal action of
its support; the peak is the generator attaining it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    DomainError,
    IndeterminateError,
    SpectralLevelError,
    StructuralError,
)
from .gamma import GammaElement, GammaGroup, vec_add
from .scalars import DOWN, NEG_INF, NovikovScalar


@dataclass(frozen=True)
class Generator:
    """A capped orbit with its derived action and degree."""

    orbit: str
    cap: GammaElement
    action: Fraction
    degree: int


class NovikovChain:
    """Finite homogeneous combination of generators.

    A finite floor truncates: terms at or below it are dropped on
    construction (scalars, by contrast, reject such input).
    """

    __slots__ = ("complex", "terms", "floor", "degree")

    def __init__(self, complex: "FilteredComplex", terms=None, floor=None):
        self.complex = complex
        self.floor = None if floor is None else Fraction(floor)
        clean = {}
        degree = None
        items = terms.items() if isinstance(terms, dict) else (terms or [])
        for gen, coeff in items:
            coeff = Fraction(coeff)
            if coeff == 0:
                continue
            if degree is None:
                degree = gen.degree
            elif gen.degree != degree:
                raise StructuralError(
                    f"mixed degrees {degree} and {gen.degree} in one chain"
                )
            if self.floor is not None and gen.action <= self.floor:
                continue
            clean[gen] = clean.get(gen, Fraction(0)) + coeff
            if clean[gen] == 0:
                del clean[gen]
        self.terms = dict(
            sorted(clean.items(), key=lambda kv: (-kv[0].action, kv[0].orbit, kv[0].cap))
        )
        self.degree = degree if self.terms else None

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, NovikovChain)
            and self.complex is other.complex
            and self.terms == other.terms
            and self.floor == other.floor
        )

    def __repr__(self):
        body = " + ".join(
            f"{c}*[{g.orbit},{list(g.cap)}]" for g, c in self.terms.items()
        )
        return f"<chain {body or '0'}>"

    def __add__(self, other: "NovikovChain") -> "NovikovChain":
        if self.complex is not other.complex:
            raise StructuralError("chains live in different complexes")
        floor = self.floor
        if other.floor is not None:
            floor = other.floor if floor is None else max(floor, other.floor)
        merged = dict(self.terms)
        for g, c in other.terms.items():
            acc = merged.get(g, Fraction(0)) + c
            if acc == 0:
                merged.pop(g, None)
            else:
                merged[g] = acc
        return NovikovChain(self.complex, merged, floor)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, rational) -> "NovikovChain":
        r = Fraction(rational)
        if r == 0:
            return NovikovChain(self.complex, {}, self.floor)
        return NovikovChain(
            self.complex, {g: r * c for g, c in self.terms.items()}, self.floor
        )

    def level(self):
        if not self.terms:
            return NEG_INF
        return max(g.action for g in self.terms)

    def shift(self, cap: GammaElement) -> "NovikovChain":
        """Glue `cap` onto every generator (deck transformation)."""
        C = self.complex
        floor = self.floor
        if floor is not None:
            floor = floor - C.gamma.omega(cap)
        return NovikovChain(
            C,
            {C.generator(g.orbit, vec_add(g.cap, cap)): c for g, c in self.terms.items()},
            floor,
        )


def level_and_peak(chain: NovikovChain):
    """(level, peak generator).  Zero chain: (-inf, None).  Ties are rejected."""
    if chain.is_zero():
        if chain.floor is not None:
            raise IndeterminateError("level indeterminate: chain is empty above its floor")
        return NEG_INF, None
    lam = chain.level()
    if chain.floor is not None and lam <= chain.floor:
        raise IndeterminateError("level lies at or below the precision floor")
    peaks = [g for g in chain.terms if g.action == lam]
    if len(peaks) != 1:
        raise DomainError(
            f"peak is ambiguous: {len(peaks)} generators share the top action {lam}"
        )
    return lam, peaks[0]


@dataclass(frozen=True)
class Violation:
    code: str
    witness: tuple
    message: str


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, code, witness, message):
        self.violations.append(Violation(code, tuple(witness), message))

    def codes(self):
        return sorted({v.code for v in self.violations})

    def __repr__(self):
        if self.ok:
            return "<valid>"
        return "<invalid: " + ", ".join(self.codes()) + ">"


class FilteredComplex:
    """Finite-rank free module over the downward Novikov ring with filtration."""

    def __init__(self, gamma: GammaGroup, orbits, boundary=None, floor=None,
                 annotations=None):
        """`orbits`: iterable of (orbit_id, action, degree).

        `boundary`: {from_orbit: {to_orbit: NovikovScalar (downward)}} giving
        the boundary of each base generator.
        """
        self.gamma = gamma
        self.floor = None if floor is None else Fraction(floor)
        self.orbits = {}
        for oid, action, degree in orbits:
            oid = str(oid)
            if oid in self.orbits:
                raise StructuralError(f"duplicate orbit id {oid!r}")
            self.orbits[oid] = (Fraction(action), int(degree))
        self.boundary_entries = {}
        for src, row in (boundary or {}).items():
            if src not in self.orbits:
                raise StructuralError(f"boundary source {src!r} is not an orbit")
            for dst, scalar in row.items():
                if dst not in self.orbits:
                    raise StructuralError(f"boundary target {dst!r} is not an orbit")
                if scalar.direction != DOWN:
                    raise StructuralError("boundary entries must be downward scalars")
                if scalar.group != gamma:
                    raise StructuralError("boundary entry over a different group")
                if scalar.is_zero():
                    continue
                self.boundary_entries.setdefault(src, {})[dst] = scalar
        self.annotations = dict(annotations or {})

    # -- generators and chains ---------------------------------------------

    def base_action(self, orbit: str) -> Fraction:
        return self.orbits[orbit][0]

    def base_degree(self, orbit: str) -> int:
        return self.orbits[orbit][1]

    def generator(self, orbit: str, cap: GammaElement | None = None) -> Generator:
        if orbit not in self.orbits:
            raise StructuralError(f"unknown orbit {orbit!r}")
        cap = self.gamma.zero if cap is None else self.gamma.check_element(cap)
        action, degree = self.orbits[orbit]
        return Generator(
            orbit,
            cap,
            action - self.gamma.omega(cap),
            degree - 2 * self.gamma.c1(cap),
        )

    _INHERIT = object()

    def chain(self, terms=None, floor=_INHERIT) -> NovikovChain:
        if floor is FilteredComplex._INHERIT:
            floor = self.floor
        return NovikovChain(self, terms, floor)

    def zero_chain(self) -> NovikovChain:
        return self.chain({})

    # -- boundary ------------------------------------------------------------

    def boundary(self, chain: NovikovChain) -> NovikovChain:
        if chain.complex is not self:
            raise StructuralError("chain does not live in this complex")
        out = {}
        for gen, coeff in chain.terms.items():
            for dst, scalar in self.boundary_entries.get(gen.orbit, {}).items():
                for label, c in scalar.terms.items():
                    g2 = self.generator(dst, vec_add(gen.cap, label))
                    acc = out.get(g2, Fraction(0)) + coeff * c
                    if acc == 0:
                        out.pop(g2, None)
                    else:
                        out[g2] = acc
        return NovikovChain(self, out, chain.floor)

    def entry_triples(self):
        """Flat iterator of (src, dst, label, coeff) over all boundary terms."""
        for src in sorted(self.boundary_entries):
            for dst in sorted(self.boundary_entries[src]):
                scalar = self.boundary_entries[src][dst]
                for label, coeff in scalar.terms.items():
                    yield src, dst, label, coeff

    def max_entry_slack(self) -> Fraction:
        """Largest action drop base(src) - (base(dst) - omega(label)) over entries."""
        best = Fraction(0)
        for src, dst, label, _ in self.entry_triples():
            drop = (
                self.base_action(src)
                - self.base_action(dst)
                + self.gamma.omega(label)
            )
            if drop > best:
                best = drop
        return best

    # -- validation -----------------------------------------------------------

    def validate(self, strict_level: bool = False,
                 explicit_generators=None, representatives=None) -> ValidationReport:
        report = ValidationReport()
        for src, dst, label, coeff in self.entry_triples():
            da, dd = self.orbits[dst]
            sa, sd = self.orbits[src]
            target_degree = dd - 2 * self.gamma.c1(label)
            if target_degree != sd - 1:
                report.add(
                    "degree",
                    (src, dst, label),
                    f"entry {src}->{dst} at {label} maps degree {sd} to {target_degree}",
                )
            target_action = da - self.gamma.omega(label)
            if target_action > sa or (strict_level and target_action >= sa):
                report.add(
                    "level-increase",
                    (src, dst, label),
                    f"entry {src}->{dst} at {label} raises action {sa} -> {target_action}",
                )
        # d(d(x)) = 0 for every base generator; equivariance makes this
        # sufficient for every cap.
        for src in sorted(self.boundary_entries):
            acc = {}
            for mid, s1 in self.boundary_entries[src].items():
                for dst, s2 in self.boundary_entries.get(mid, {}).items():
                    acc[dst] = acc.get(dst, NovikovScalar.zero(self.gamma, DOWN)) + s2 * s1
            for dst, scalar in sorted(acc.items()):
                if not scalar.is_zero():
                    label, coeff = next(iter(scalar.terms.items()))
                    report.add(
                        "square",
                        (src, dst, label),
                        f"d(d({src})) has residual {coeff}*q{list(label)} on {dst}",
                    )
        if explicit_generators:
            for orbit, cap, action, degree in explicit_generators:
                try:
                    g = self.generator(orbit, cap)
                except StructuralError:
                    report.add("equivariance", (orbit, tuple(cap)), "unknown orbit")
                    continue
                if g.action != Fraction(action) or g.degree != int(degree):
                    report.add(
                        "equivariance",
                        (orbit, tuple(cap)),
                        f"listed (action, degree) = ({action}, {degree}) but cap rules "
                        f"give ({g.action}, {g.degree})",
                    )
        for name, chain in (representatives or {}).items():
            try:
                level_and_peak(chain)
            except DomainError:
                lam = chain.level()
                peaks = tuple(g.orbit for g in chain.terms if g.action == lam)
                report.add("tie-peak", (name,) + peaks,
                           f"representative {name!r} has a tied peak at level {lam}")
            except IndeterminateError:
                pass
        return report

    # -- structural operations -------------------------------------------------

    def relabeled(self, mapping) -> "FilteredComplex":
        """Bijective rename of orbit ids; all structure is carried over."""
        if sorted(mapping) != sorted(self.orbits) or len(set(mapping.values())) != len(mapping):
            raise StructuralError("relabeling must be a bijection on orbit ids")
        orbits = [
            (mapping[o], a, d) for o, (a, d) in self.orbits.items()
        ]
        boundary = {
            mapping[src]: {mapping[dst]: s for dst, s in row.items()}
            for src, row in self.boundary_entries.items()
        }
        return FilteredComplex(self.gamma, orbits, boundary, self.floor)

    def transport(self, other: "FilteredComplex", chain: NovikovChain,
                  mapping) -> NovikovChain:
        """Move a chain through an orbit relabeling onto `other`."""
        return other.chain(
            {other.generator(mapping[g.orbit], g.cap): c for g, c in chain.terms.items()},
            chain.floor,
        )


def gamma_shift(chain: NovikovChain, cap: GammaElement) -> NovikovChain:
    return chain.shift(cap)


def validate_complex(C: FilteredComplex, **kwargs) -> ValidationReport:
    return C.validate(**kwargs)


def truncate_below(C: FilteredComplex, lam) -> FilteredComplex:
    """The subcomplex of generators with action < lam, as an explicit complex.

    The result forgets equivariance (trivial group): the action filtration is
    not preserved by cap gluing, so a truncation cannot stay equivariant.
    `lam` must avoid the action spectrum.  For a rank-one group the window is
    bounded below by the complex's precision floor, which must be finite; a
    group with nontrivial omega-kernel makes every action window infinite
    rank (all degrees appear) and is rejected here — per-degree windows are
    the engine's job.
    """
    lam = Fraction(lam)
    trivial = GammaGroup((), ())
    for oid, (action, _) in C.orbits.items():
        if C.gamma.in_period_group(action - lam):
            raise SpectralLevelError(f"{lam} lies on the action spectrum (orbit {oid!r})")
    if C.gamma.rank == 0:
        gens = {
            o: (o, C.gamma.zero) for o, (a, _) in C.orbits.items() if a < lam
        }
    elif C.gamma.rank == 1 and C.gamma.omega_values[0] != 0:
        if C.floor is None:
            raise IndeterminateError(
                "truncating an equivariant complex needs a finite precision floor"
            )
        gens = {}
        w1 = C.gamma.omega_values[0]
        for orbit, (base, _) in sorted(C.orbits.items()):
            # action base - m*w1 in (floor, lam)
            bounds = sorted(((base - lam) / w1, (base - C.floor) / w1))
            m = math.floor(bounds[0]) + 1
            while m <= bounds[1]:
                action = base - m * w1
                if C.floor < action < lam:
                    gens[_flat_id(orbit, (m,))] = (orbit, (m,))
                m += 1
    else:
        raise StructuralError(
            "action-window truncation is infinite rank over this group"
        )
    orbit_rows = []
    for fid in sorted(gens):
        orbit, cap = gens[fid]
        g = C.generator(orbit, cap)
        orbit_rows.append((fid, g.action, g.degree))
    boundary = {}
    inverse = {v: k for k, v in gens.items()}
    for fid, (orbit, cap) in sorted(gens.items()):
        row = {}
        for dst, scalar in C.boundary_entries.get(orbit, {}).items():
            for label, coeff in scalar.terms.items():
                key = (dst, vec_add(cap, label))
                if key in inverse:
                    tid = inverse[key]
                    prev = row.get(tid, NovikovScalar.zero(trivial, DOWN))
                    row[tid] = prev + NovikovScalar.monomial(trivial, DOWN, coeff, ())
                # targets outside the window fall below the floor: truncated
        if row:
            boundary[fid] = row
    out = FilteredComplex(trivial, orbit_rows, boundary, C.floor)
    out.annotations["truncated_from"] = dict(sorted(gens.items()))
    out.annotations["truncation_level"] = lam
    return out


def include_truncation(trunc: FilteredComplex, C: FilteredComplex,
                       chain: NovikovChain) -> NovikovChain:
    """Inclusion of a truncated complex's chain back into the original."""
    table = trunc.annotations.get("truncated_from")
    if table is None:
        raise StructuralError("complex is not a truncation")
    return C.chain(
        {C.generator(*table[g.orbit]): c for g, c in chain.terms.items()},
        chain.floor,
    )


def _flat_id(orbit: str, cap) -> str:
    if not any(cap):
        return orbit
    return f"{orbit}@{','.join(str(x) for x in cap)}"
