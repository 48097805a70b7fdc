"""Min-max spectral invariants over finite generator windows.

The invariant of a cycle class is the infimum of chain levels over all
representatives.  Over a discrete period lattice the reachable set of
representatives is an affine space over Q inside a finite per-degree window
of capped generators, and the infimum is computed exactly by repeated
top-stratum elimination: solve for a boundary whose action >= level part
cancels the current top stratum; when the linear system is infeasible the
level is the invariant and the infeasibility is its certificate.

An independent oracle answers the same question bottom-up (smallest level
whose strict-sublevel constraint system is feasible), which is also the
membership test for truncated-complex images used by the probe API.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .chains import FilteredComplex, Generator, NovikovChain
from .errors import DomainError, IndeterminateError, SpectralLevelError, StructuralError
from .gamma import vec_add
from .morse import MorseData, build_small_complex
from .quantum import HOMOLOGY, QuantumClass, flat, leading_data
from .scalars import NEG_INF, POS_INF


# ---------------------------------------------------------------------------
# window model


@dataclass
class Window:
    """Per-degree exact matrix model of a complex on an action window."""

    complex: FilteredComplex
    lo: Fraction
    hi: Fraction
    degree: int
    rows: list  # degree-d generators, action descending
    cols: list  # degree-(d+1) generators, action descending
    matrix: list  # len(rows) x len(cols) Fractions
    row_index: dict = field(default_factory=dict)
    truncated: bool = False  # some boundary target fell below the window

    def row_actions(self):
        return [g.action for g in self.rows]


def _degree_generators(C: FilteredComplex, degree: int, lo, hi):
    """All capped generators of one degree with action in (lo, hi]."""
    out = []
    g = C.gamma.period_generator()
    for orbit in sorted(C.orbits):
        base, bdeg = C.orbits[orbit]
        if (bdeg - degree) % 2 != 0:
            continue
        c_target = (bdeg - degree) // 2
        if g == 0:
            # omega vanishes on every cap; the degree pins the cap uniquely
            cap = C.gamma.solve(Fraction(0), c_target)
            if cap is not None and lo < base <= hi:
                out.append(C.generator(orbit, cap))
            continue
        lo_m = (base - hi) / g
        hi_m = (base - lo) / g
        for m in range(math.ceil(lo_m), math.floor(hi_m) + 1):
            w = m * g
            action = base - w
            if not (lo < action <= hi):
                continue
            cap = C.gamma.solve(w, c_target)
            if cap is not None:
                out.append(C.generator(orbit, cap))
    out.sort(key=lambda gen: (-gen.action, gen.orbit, gen.cap))
    return out


def build_window(C: FilteredComplex, degree: int, lo, hi) -> Window:
    lo, hi = Fraction(lo), Fraction(hi)
    cols = _degree_generators(C, degree + 1, lo, hi)
    rows = _degree_generators(C, degree, lo, hi)
    row_index = {g: i for i, g in enumerate(rows)}
    # boundary targets of the columns may stick out above `hi` on invalid
    # complexes; they must appear as constraint rows.
    extra = []
    columns = []
    truncated = False
    for col in cols:
        image = {}
        for dst, scalar in C.boundary_entries.get(col.orbit, {}).items():
            for label, coeff in scalar.terms.items():
                tgt = C.generator(dst, vec_add(col.cap, label))
                if tgt.action <= lo:
                    truncated = True  # target falls below the window floor
                    continue
                image[tgt] = image.get(tgt, Fraction(0)) + coeff
        for tgt in image:
            if tgt not in row_index and tgt not in extra:
                extra.append(tgt)
        columns.append(image)
    if extra:
        rows = sorted(rows + extra, key=lambda g: (-g.action, g.orbit, g.cap))
        row_index = {g: i for i, g in enumerate(rows)}
    matrix = [[Fraction(0)] * len(cols) for _ in rows]
    for j, image in enumerate(columns):
        for tgt, coeff in image.items():
            if coeff != 0:
                matrix[row_index[tgt]][j] = coeff
    return Window(C, lo, hi, degree, rows, cols, matrix, row_index, truncated)


def _chain_vector(window: Window, chain: NovikovChain):
    """Coordinates of a chain in the window rows; below-window terms drop.

    Returns (vector, dropped): terms at or below the floor are truncated per
    the precision semantics, terms above the window top are a caller error.
    """
    v = [Fraction(0)] * len(window.rows)
    dropped = False
    for gen, coeff in chain.terms.items():
        if gen not in window.row_index:
            if gen.action <= window.lo:
                dropped = True
                continue
            raise StructuralError(
                f"chain term {gen.orbit}@{gen.cap} lies outside the window"
            )
        v[window.row_index[gen]] = coeff
    return v, dropped


def _vector_chain(window: Window, v, floor=None) -> NovikovChain:
    return window.complex.chain(
        {g: c for g, c in zip(window.rows, v) if c != 0}, floor
    )


def _restricted_solve(window: Window, v, level):
    """Solve for x with (Dx) = -v on all rows of action >= level."""
    picked = [i for i, g in enumerate(window.rows) if g.action >= level]
    rows = [window.matrix[i] for i in picked]
    rhs = [-v[i] for i in picked]
    if not rows:
        return [Fraction(0)] * len(window.cols)
    return linalg.solve(rows, rhs)


def _apply_columns(window: Window, v, x):
    out = list(v)
    for i, row in enumerate(window.matrix):
        acc = out[i]
        for j, c in enumerate(x):
            if c != 0 and row[j] != 0:
                acc += row[j] * c
        out[i] = acc
    return out


# ---------------------------------------------------------------------------
# results


@dataclass
class ReductionStep:
    level: Fraction
    stratum_size: int
    columns_used: int


@dataclass
class SpectralResult:
    rho: object  # Fraction or -inf
    witness: NovikovChain
    reduced_trace: list
    spectrality: str  # "attained" | "zero-class" | "indeterminate"
    attained_at: Generator | None
    certificate: dict

    def is_finite(self):
        return self.rho != NEG_INF


def default_window_bounds(C: FilteredComplex, rep: NovikovChain):
    lam = rep.level()
    if lam == NEG_INF:
        lam = max((a for a, _ in C.orbits.values()), default=Fraction(0))
    slack = C.max_entry_slack()
    g = C.gamma.period_generator()
    actions = [a for a, _ in C.orbits.values()]
    spread = (max(actions) - min(actions)) if actions else Fraction(0)
    pad = 2 * slack + 3 * g + spread + 1
    return lam - pad, lam + 2 * slack + 2 * g + spread + 1


def spectral_invariant(
    C: FilteredComplex,
    representative: NovikovChain,
    *,
    window=None,
    floor=None,
    max_widenings: int = 3,
) -> SpectralResult:
    """Infimum of levels over the class of `representative`, with witness.

    The representative must be a cycle.  `floor` pins the precision floor
    (no widening below it); otherwise the window widens a few times before
    reporting indeterminacy.
    """
    rep = representative
    if rep.complex is not C:
        raise StructuralError("representative lives in a different complex")
    if not C.boundary(rep).is_zero():
        raise DomainError("representative is not a cycle")
    if rep.is_zero():
        return SpectralResult(
            NEG_INF, rep, [], "zero-class", None, {"reason": "zero representative"}
        )
    lo, hi = default_window_bounds(C, rep)
    if window is not None:
        lo, hi = Fraction(window[0]), Fraction(window[1])
    hard_floor = floor
    if hard_floor is None and rep.floor is not None:
        hard_floor = rep.floor
    if hard_floor is not None:
        lo = max(lo, Fraction(hard_floor))
        max_widenings = 0
    if hi < rep.level():
        raise StructuralError("window top lies below the representative level")

    widenings = 0
    while True:
        result = _reduce_once(C, rep, lo, hi, hard_floor)
        if result is not None:
            return result
        if widenings >= max_widenings:
            raise IndeterminateError(
                f"reduction reached the precision floor {lo} before stabilizing"
            )
        lo = lo - 2 * (hi - lo)
        widenings += 1


def _reduce_once(C, rep, lo, hi, hard_floor=None):
    window = build_window(C, rep.degree, lo, hi)
    v, dropped = _chain_vector(window, rep)
    if dropped and not any(v):
        raise IndeterminateError(
            "representative lies entirely at or below the precision floor"
        )
    inexact = dropped or window.truncated or hard_floor is not None
    result_floor = lo if inexact else None
    trace = []
    while True:
        live = [i for i, c in enumerate(v) if c != 0]
        if not live:
            if inexact:
                # vanishes above the floor only: the value is an interval
                cert = {
                    "reason": "vanishes above the precision floor",
                    "floor": result_floor,
                    "interval": (NEG_INF, result_floor),
                }
                return SpectralResult(
                    NEG_INF, C.chain({}, result_floor), trace,
                    "indeterminate", None, cert,
                )
            return SpectralResult(
                NEG_INF,
                C.chain({}, None),
                trace,
                "zero-class",
                None,
                {"reason": "representative is a boundary"},
            )
        level = max(window.rows[i].action for i in live)
        if level <= lo:
            return None  # hit the floor: caller may widen
        x = _restricted_solve(window, v, level)
        if x is None:
            stratum = [i for i in live if window.rows[i].action == level]
            witness = _vector_chain(window, v, result_floor)
            constraint_rows = sum(1 for g in window.rows if g.action >= level)
            cert = {
                "level": level,
                "stratum": [
                    (window.rows[i].orbit, window.rows[i].cap) for i in stratum
                ],
                "constraint_rows": constraint_rows,
                "columns": len(window.cols),
                "unsolvable": True,
                "window": (lo, hi),
            }
            peak = window.rows[stratum[0]]
            return SpectralResult(level, witness, trace, "attained", peak, cert)
        stratum_size = sum(
            1 for i in live if window.rows[i].action == level
        )
        v = _apply_columns(window, v, x)
        trace.append(
            ReductionStep(level, stratum_size, sum(1 for c in x if c != 0))
        )
        new_live = [i for i, c in enumerate(v) if c != 0]
        if new_live and max(window.rows[i].action for i in new_live) >= level:
            raise StructuralError("reduction failed to lower the level")


def oracle_rho(C: FilteredComplex, representative: NovikovChain, *, window=None):
    """Bottom-up brute-force answer: the smallest feasible level.

    Feasibility of a level is the solvability of the strict-superlevel
    cancellation system; the matrix is rebuilt from boundary evaluation on
    each candidate column, independently of the reduction path.
    """
    rep = representative
    if not C.boundary(rep).is_zero():
        raise DomainError("representative is not a cycle")
    if rep.is_zero():
        return NEG_INF
    lo, hi = default_window_bounds(C, rep)
    if window is not None:
        lo, hi = Fraction(window[0]), Fraction(window[1])
    cols = _degree_generators(C, rep.degree + 1, lo, hi)
    images = [C.boundary(C.chain({g: 1}, None)) for g in cols]
    support = set(rep.terms)
    for img in images:
        support.update(img.terms)
    rows = sorted(support, key=lambda g: (-g.action, g.orbit, g.cap))
    index = {g: i for i, g in enumerate(rows)}
    mat = [[Fraction(0)] * len(cols) for _ in rows]
    for j, img in enumerate(images):
        for g, c in img.terms.items():
            mat[index[g]][j] = c
    vec = [Fraction(0)] * len(rows)
    for g, c in rep.terms.items():
        vec[index[g]] = c

    def feasible(level):
        picked = [i for i, g in enumerate(rows) if g.action > level]
        if not picked:
            return True
        return linalg.solve([mat[i] for i in picked], [-vec[i] for i in picked]) is not None

    if linalg.solve(mat, [-c for c in vec]) is not None:
        return NEG_INF
    levels = sorted({g.action for g in rows if g.action > lo})
    for level in levels:
        if feasible(level):
            return level
    raise IndeterminateError("no feasible level inside the oracle window")


def image_membership(C: FilteredComplex, representative: NovikovChain, lam, *,
                     window=None) -> bool:
    """Is the class visible in the strict sublevel complex at `lam`?

    `lam` must avoid the action spectrum; the test solves for a boundary
    pushing the representative strictly below `lam`.
    """
    lam = Fraction(lam)
    spec = action_spectrum(C, (lam - 1, lam + 1))
    if lam in spec.points:
        raise SpectralLevelError(f"{lam} lies on the action spectrum")
    rep = representative
    if not C.boundary(rep).is_zero():
        raise DomainError("representative is not a cycle")
    if rep.is_zero():
        return True
    lo, hi = default_window_bounds(C, rep)
    if window is not None:
        lo, hi = Fraction(window[0]), Fraction(window[1])
    w = build_window(C, rep.degree, lo, max(hi, lam))
    v, _ = _chain_vector(w, rep)
    return _restricted_solve(w, v, lam) is not None


# ---------------------------------------------------------------------------
# spectrum


@dataclass
class SpectrumDescription:
    bases: dict  # orbit -> base action
    period: Fraction  # generator of the period group (0 if trivial)
    points: list  # spectrum inside the window, ascending
    rational: bool

    def contains(self, value) -> bool:
        value = Fraction(value)
        if self.period == 0:
            return any(value == a for a in self.bases.values())
        return any(
            ((a - value) / self.period).denominator == 1 for a in self.bases.values()
        )


def action_spectrum(C: FilteredComplex, window, *, mode: str = "rational-exact"):
    lo, hi = Fraction(window[0]), Fraction(window[1])
    if hi < lo:
        raise StructuralError("empty spectrum window")
    g = C.gamma.period_generator()
    points = set()
    for orbit in sorted(C.orbits):
        base = C.base_action(orbit)
        if g == 0:
            if lo <= base <= hi:
                points.add(base)
            continue
        m_lo = math.ceil((base - hi) / g)
        m_hi = math.floor((base - lo) / g)
        for m in range(m_lo, m_hi + 1):
            points.add(base - m * g)
    return SpectrumDescription(
        bases={o: C.base_action(o) for o in sorted(C.orbits)},
        period=g,
        points=sorted(points),
        rational=(mode == "rational-exact"),
    )


def spectrality_check(rho, C: FilteredComplex, *, mode: str = "rational-exact") -> bool:
    """Exact membership of a computed value in {base action - period lattice}.

    The zero class (-inf) is outside the spectrum; floating mode is never
    certified.
    """
    if mode != "rational-exact":
        return False
    if rho in (NEG_INF, POS_INF) or isinstance(rho, float):
        return False
    rho = Fraction(rho)
    return any(
        C.gamma.in_period_group(C.base_action(o) - rho) for o in C.orbits
    )


# ---------------------------------------------------------------------------
# class realization and valuation bounds


def realize_flat(b: QuantumClass, C: FilteredComplex, pd_chains: dict) -> NovikovChain:
    """Chain representative of a homology class in a built Morse complex.

    `pd_chains` maps basis class ids to their Morse cycle representatives
    (lists of (coeff, critical point id)); exponent labels become caps.
    """
    if b.direction != HOMOLOGY:
        raise StructuralError("realize_flat takes a homology class")
    terms = {}
    for (name, label), coeff in b.terms.items():
        if name not in pd_chains:
            raise StructuralError(f"no chain representative for class {name!r}")
        for pc, point in pd_chains[name]:
            g = C.generator(point, label)
            acc = terms.get(g, Fraction(0)) + coeff * Fraction(pc)
            if acc == 0:
                terms.pop(g, None)
            else:
                terms[g] = acc
    return C.chain(terms)


@dataclass
class BoundReport:
    hypothesis_ok: bool
    rho: object
    valuation: Fraction
    gap: object
    halfgap_ok: bool | None
    sandwich_ok: bool | None
    sharper_ok: bool | None
    deviation: object  # |rho - v|

    @property
    def ok(self):
        return bool(self.hypothesis_ok and self.sandwich_ok and self.halfgap_ok)


def check_valuation_bounds(
    m: MorseData, eps, a: QuantumClass, gamma, pd_chains, *, window=None
) -> BoundReport:
    """Bounds of the small-complex invariant around the class valuation.

    Verifies v - gap/2 <= rho <= v + gap/2 and the sharper one-scale sandwich
    v - eps*max(f) <= rho <= v + eps*max(f); the hypothesis
    eps*(max f - min f) < gap/2 is reported, not enforced.
    """
    eps = Fraction(eps)
    ld = leading_data(a)
    v, gap = ld.valuation, ld.gap
    spread = m.max_value() - m.min_value()
    hypothesis_ok = gap == POS_INF or eps * spread < Fraction(gap) / 2
    if not hypothesis_ok:
        return BoundReport(False, None, v, gap, None, None, None, None)
    C = build_small_complex(m, eps, gamma)
    rep = realize_flat(flat(a), C, pd_chains)
    result = spectral_invariant(C, rep, window=window)
    rho = result.rho
    if rho == NEG_INF:
        raise DomainError("class realized to a boundary; bounds are undefined")
    halfgap_ok = True
    if gap != POS_INF:
        half = Fraction(gap) / 2
        halfgap_ok = (v - half <= rho <= v + half)
    mx = m.max_value()
    sandwich_ok = (v - eps * mx <= rho <= v + eps * mx)
    sharper_ok = (v - eps * mx <= rho <= v - eps * m.min_value())
    return BoundReport(
        True, rho, v, gap, halfgap_ok, sandwich_ok, sharper_ok, abs(rho - v)
    )
