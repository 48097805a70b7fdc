"""The filtration topology on chains and continuous linear functionals.

Balls U(alpha, R) = {beta : level(beta - alpha) < R} form a basis of a
non-Archimedean topology.  A linear functional on chains is continuous
exactly when it vanishes on every cap stratum below some threshold:
mu([o, A]) = 0 whenever -omega(A) <= lambda_mu.  Functionals here are finite
sums of atoms (one generator each) and rays (a cap arithmetic progression on
one orbit with a constant value), which keeps the classification decidable:
a ray diverges upward in omega iff it breaks every threshold, and the
divergence is certified by the canonical prefix sequence whose evaluations
step by one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .chains import FilteredComplex, Generator, NovikovChain
from .engine import _degree_generators, build_window, default_window_bounds
from .errors import DomainError, StructuralError
from .gamma import vec_add, vec_scale, vec_sub
from .quantum import COHOMOLOGY, QuantumClass
from .scalars import NEG_INF


# ---------------------------------------------------------------------------
# balls


@dataclass(frozen=True)
class BallSpec:
    center: NovikovChain
    radius: Fraction

    def __post_init__(self):
        object.__setattr__(self, "radius", Fraction(self.radius))


def in_ball(beta: NovikovChain, ball: BallSpec) -> bool:
    return (beta - ball.center).level() < ball.radius


def ball_intersection_radius(b1: BallSpec, b2: BallSpec, alpha: NovikovChain):
    """Radius R with U(alpha, R) inside both balls, from the ultrametric step.

    Requires alpha in the intersection; R = min(R1, R2) works because
    level(beta - center_i) <= max(level(beta - alpha), level(alpha - center_i)).
    """
    d1 = (alpha - b1.center).level()
    d2 = (alpha - b2.center).level()
    if not (d1 < b1.radius and d2 < b2.radius):
        raise DomainError("the base point is not in the intersection")
    return min(b1.radius, b2.radius)


def ball_image_contained(C: FilteredComplex, alpha: NovikovChain, R,
                         samples) -> bool:
    """Boundary image containment: d(U(alpha, R)) inside U(d(alpha), R).

    Checked literally on supplied sample chains from the ball.
    """
    R = Fraction(R)
    target = BallSpec(C.boundary(alpha), R)
    for beta in samples:
        if not in_ball(beta, BallSpec(alpha, R)):
            raise DomainError("sample outside the source ball")
        if not in_ball(C.boundary(beta), target):
            return False
    return True


# ---------------------------------------------------------------------------
# functionals


@dataclass(frozen=True)
class Ray:
    """Constant value on the caps base + t*direction, t = 0, 1, 2, ..."""

    orbit: str
    base: tuple
    direction: tuple
    value: Fraction

    def hits(self, gen: Generator):
        """The step index t >= 0 with gen = (orbit, base + t*direction), or None."""
        if gen.orbit != self.orbit:
            return None
        diff = vec_sub(gen.cap, self.base)
        steps = None
        for d, x in zip(self.direction, diff):
            if d == 0:
                if x != 0:
                    return None
                continue
            t = Fraction(x, d)
            if steps is None:
                steps = t
            elif steps != t:
                return None
        if steps is None:  # zero direction: only the base itself
            steps = Fraction(0) if all(x == 0 for x in diff) else None
        if steps is None or steps.denominator != 1 or steps < 0:
            return None
        return int(steps)


class DualFunctional:
    """Finite atoms + rays, with an optional declared vanishing threshold."""

    def __init__(self, C: FilteredComplex, atoms=None, rays=None, threshold=None):
        self.complex = C
        self.atoms = {}
        for gen, value in (atoms or {}).items() if isinstance(atoms, dict) else (atoms or []):
            value = Fraction(value)
            if value == 0:
                continue
            self.atoms[gen] = self.atoms.get(gen, Fraction(0)) + value
            if self.atoms[gen] == 0:
                del self.atoms[gen]
        self.rays = []
        for ray in rays or []:
            if ray.orbit not in C.orbits:
                raise StructuralError(f"ray on unknown orbit {ray.orbit!r}")
            if Fraction(ray.value) != 0:
                self.rays.append(ray)
        self.threshold = None if threshold is None else Fraction(threshold)
        if self.threshold is not None:
            bad = [
                gen for gen in self.atoms
                if -C.gamma.omega(gen.cap) <= self.threshold
            ]
            for ray in self.rays:
                if -C.gamma.omega(ray.base) <= self.threshold or C.gamma.omega(ray.direction) > 0:
                    bad.append(ray)
            if bad:
                raise StructuralError(
                    "declared threshold is violated by the support description"
                )

    def is_zero(self):
        return not self.atoms and not self.rays

    def evaluate(self, chain: NovikovChain) -> Fraction:
        total = Fraction(0)
        for gen, coeff in chain.terms.items():
            total += coeff * self.atoms.get(gen, Fraction(0))
            for ray in self.rays:
                if ray.hits(gen) is not None:
                    total += coeff * ray.value
        return total

    def support_levels(self):
        """-omega(cap) over atoms and ray starts (rays may descend further)."""
        C = self.complex
        levels = [-C.gamma.omega(g.cap) for g in self.atoms]
        levels += [-C.gamma.omega(r.base) for r in self.rays]
        return levels


@dataclass
class Classification:
    continuous: bool
    threshold: Fraction | None
    counterexample: list | None  # prefix chains beta_1, beta_2, ... or None
    diverging_ray: Ray | None


def classify_functional(mu: DualFunctional, prefix_len: int = 4) -> Classification:
    """Decide continuity; produce a threshold or a diverging prefix.

    A ray whose direction has positive omega carries support with
    -omega(cap) -> -infinity, so no vanishing threshold can exist; the
    certificate is the prefix sequence whose consecutive evaluations differ
    by exactly one.
    """
    C = mu.complex
    for ray in mu.rays:
        if C.gamma.omega(ray.direction) > 0:
            # increments of the diverging partial-sum sequence: each is a
            # homogeneous chain with evaluation exactly 1, so consecutive
            # partial sums differ by one forever.
            prefix = []
            for j in range(1, prefix_len + 1):
                cap = vec_add(ray.base, vec_scale(j, ray.direction))
                gen = C.generator(ray.orbit, cap)
                prefix.append(C.chain({gen: Fraction(1, 1) / ray.value}, None))
            return Classification(False, None, prefix, ray)
    if mu.is_zero():
        return Classification(True, Fraction(0), None, None)
    threshold = min(mu.support_levels()) - 1
    return Classification(True, threshold, None, None)


def dual_boundary(mu: DualFunctional) -> DualFunctional:
    """Pullback along the boundary: (d* mu)(alpha) = mu(d alpha)."""
    C = mu.complex
    cls = classify_functional(mu)
    if not cls.continuous:
        raise DomainError("dual boundary of a discontinuous functional is rejected")
    atoms = {}
    rays = []
    for src in sorted(C.boundary_entries):
        for dst, scalar in sorted(C.boundary_entries[src].items()):
            for label, coeff in scalar.terms.items():
                for gen, value in mu.atoms.items():
                    if gen.orbit != dst:
                        continue
                    g2 = C.generator(src, vec_sub(gen.cap, label))
                    atoms[g2] = atoms.get(g2, Fraction(0)) + coeff * value
                for ray in mu.rays:
                    if ray.orbit != dst:
                        continue
                    rays.append(
                        Ray(src, vec_sub(ray.base, label), ray.direction, coeff * ray.value)
                    )
    atoms = {g: v for g, v in atoms.items() if v != 0}
    return DualFunctional(C, atoms, rays)


def is_cocycle(mu: DualFunctional, degree: int, window=None) -> bool:
    """d* mu = 0, tested by evaluation on a window of degree+1 generators."""
    C = mu.complex
    dual = dual_boundary(mu)
    lo, hi = window if window is not None else _default_dual_window(C)
    for gen in _degree_generators(C, degree + 1, lo, hi):
        if dual.evaluate(C.chain({gen: 1}, None)) != 0:
            return False
    return True


def _default_dual_window(C: FilteredComplex):
    actions = [a for a, _ in C.orbits.values()] or [Fraction(0)]
    g = C.gamma.period_generator()
    pad = 2 * C.max_entry_slack() + 3 * g + (max(actions) - min(actions)) + 1
    return min(actions) - pad, max(actions) + pad


# ---------------------------------------------------------------------------
# embedding classes and the dual invariant


def embed_class(a: QuantumClass, C: FilteredComplex, cochains: dict) -> DualFunctional:
    """A finite cohomology class as a continuous functional on chains.

    `cochains` maps basis ids to dual cochain representatives (lists of
    (coeff, point id)); term labels become cap positions.  The threshold
    witnesses continuity just below the class's minimal support level.
    """
    if a.direction != COHOMOLOGY:
        raise StructuralError("embed_class takes a cohomology class")
    atoms = {}
    for (name, label), coeff in a.terms.items():
        if name not in cochains:
            raise StructuralError(f"no cochain representative for class {name!r}")
        for pc, point in cochains[name]:
            gen = C.generator(point, label)
            acc = atoms.get(gen, Fraction(0)) + coeff * Fraction(pc)
            if acc == 0:
                atoms.pop(gen, None)
            else:
                atoms[gen] = acc
    mu = DualFunctional(C, atoms, [])
    cls = classify_functional(mu)
    return DualFunctional(C, atoms, [], threshold=cls.threshold)


def point_cochain_functional(C: FilteredComplex, terms) -> DualFunctional:
    """Atom functional of a point cochain: (coeff, orbit, cap) triples."""
    atoms = {}
    for coeff, point, label in terms:
        gen = C.generator(point, tuple(label))
        acc = atoms.get(gen, Fraction(0)) + Fraction(coeff)
        if acc == 0:
            atoms.pop(gen, None)
        else:
            atoms[gen] = acc
    return DualFunctional(C, atoms, [])


def dual_spectral_invariant(C: FilteredComplex, mu: DualFunctional, degree: int,
                            *, window=None):
    """Smallest truncation level at which the functional detects a cycle.

    Exact ascending scan of the window spectrum: at each candidate level the
    cycles supported at or below it form an exact kernel, and mu is tested
    for nonvanishing on a kernel basis.  A functional that detects nothing
    in the window pairs to zero with every class there: -infinity.
    """
    if not classify_functional(mu).continuous:
        raise DomainError("the functional is not continuous")
    if not is_cocycle(mu, degree, window=window):
        raise DomainError("the functional is not closed under the dual boundary")
    if window is None:
        probe = C.chain(
            {C.generator(next(iter(C.orbits))): 1} if C.orbits else {}, None
        )
        lo, hi = default_window_bounds(C, probe)
    else:
        lo, hi = Fraction(window[0]), Fraction(window[1])
    w = build_window(C, degree, lo, hi)
    # boundary matrix out of degree `degree` for the cycle condition
    below = build_window(C, degree - 1, lo, hi)
    down_rows = below.rows
    down_index = {g: i for i, g in enumerate(down_rows)}
    down = [[Fraction(0)] * len(w.rows) for _ in down_rows]
    for j, gen in enumerate(w.rows):
        img = C.boundary(C.chain({gen: 1}, None))
        for g, c in img.terms.items():
            if g in down_index:
                down[down_index[g]][j] = c
    levels = sorted({g.action for g in w.rows})
    for level in levels:
        picked = [j for j, g in enumerate(w.rows) if g.action <= level]
        if not picked:
            continue
        rows = [[down[i][j] for j in picked] for i in range(len(down_rows))]
        if rows:
            kernel = linalg.nullspace(rows)
        else:
            kernel = [
                [Fraction(int(i == j)) for j in range(len(picked))]
                for i in range(len(picked))
            ]
        for vec in kernel:
            chain = C.chain(
                {w.rows[picked[j]]: vec[j] for j in range(len(picked)) if vec[j] != 0},
                None,
            )
            if not chain.is_zero() and mu.evaluate(chain) != 0:
                return level
    return NEG_INF
