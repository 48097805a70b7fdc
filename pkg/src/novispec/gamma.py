"""The coefficient group: a lattice with an area and a Chern homomorphism.

Elements are integer coordinate vectors; omega extends linearly with exact
rational values, c1 with integer values.  Construction rejects any
representation in which a nonzero lattice vector is killed by both
homomorphisms, so (omega, c1) is injective on the group.  With rational
omega values this forces rank <= 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import StructuralError

GammaElement = tuple  # integer coordinate vector, length = group rank


def vec_zero(rank: int) -> GammaElement:
    return (0,) * rank

def vec_add(a: GammaElement, b: GammaElement) -> GammaElement:
    return tuple(x + y for x, y in zip(a, b))

def vec_sub(a: GammaElement, b: GammaElement) -> GammaElement:
    return tuple(x - y for x, y in zip(a, b))

def vec_neg(a: GammaElement) -> GammaElement:
    return tuple(-x for x in a)

def vec_scale(n: int, a: GammaElement) -> GammaElement:
    return tuple(n * x for x in a)


def fraction_gcd(values) -> Fraction:
    """gcd of exact rationals: the generator of the subgroup of Q they span."""
    g = Fraction(0)
    for v in values:
        v = abs(Fraction(v))
        if v == 0:
            continue
        if g == 0:
            g = v
        else:
            num = gcd(g.numerator * v.denominator, v.numerator * g.denominator)
            g = Fraction(num, g.denominator * v.denominator)
    return g


@dataclass(frozen=True)
class GammaGroup:
    """Free abelian group Z^k with omega and c1 given on generators."""

    omega_values: tuple
    c1_values: tuple

    def __post_init__(self):
        omega = tuple(Fraction(v) for v in self.omega_values)
        chern = tuple(int(v) for v in self.c1_values)
        if len(omega) != len(chern):
            raise StructuralError("omega and c1 generator lists differ in length")
        object.__setattr__(self, "omega_values", omega)
        object.__setattr__(self, "c1_values", chern)
        if self._joint_kernel_nontrivial():
            raise StructuralError(
                "degenerate generators: a nonzero vector has omega = 0 and c1 = 0"
            )

    def _joint_kernel_nontrivial(self) -> bool:
        # Rational kernel of the 2 x k matrix [omega; c1] is nonzero iff an
        # integer kernel vector exists (clear denominators), iff rank < k.
        k = self.rank
        if k == 0:
            return False
        w, c = self.omega_values, self.c1_values
        rank = 0
        if any(v != 0 for v in w) or any(v != 0 for v in c):
            rank = 1
        if any(
            w[i] * c[j] - w[j] * c[i] != 0
            for i in range(k)
            for j in range(i + 1, k)
        ):
            rank = 2
        return rank < k

    @property
    def rank(self) -> int:
        return len(self.omega_values)

    @property
    def zero(self) -> GammaElement:
        return vec_zero(self.rank)

    def check_element(self, a: GammaElement) -> GammaElement:
        a = tuple(int(x) for x in a)
        if len(a) != self.rank:
            raise StructuralError(
                f"element has {len(a)} coordinates, group rank is {self.rank}"
            )
        return a

    def omega(self, a: GammaElement) -> Fraction:
        a = self.check_element(a)
        return sum((w * x for w, x in zip(self.omega_values, a)), Fraction(0))

    def c1(self, a: GammaElement) -> int:
        a = self.check_element(a)
        return sum(c * x for c, x in zip(self.c1_values, a))

    def evaluate(self, a: GammaElement):
        """Both homomorphisms at once: (omega(a), c1(a))."""
        return self.omega(a), self.c1(a)

    def period_generator(self) -> Fraction:
        """Generator of the period group omega(Gamma) inside Q (0 if trivial)."""
        return fraction_gcd(self.omega_values)

    def in_period_group(self, value) -> bool:
        value = Fraction(value)
        g = self.period_generator()
        if g == 0:
            return value == 0
        q = value / g
        return q.denominator == 1

    def solve(self, omega_target, c1_target: int):
        """The unique element with given (omega, c1) values, or None.

        Uniqueness is construction-time: the joint kernel is trivial.
        """
        w = Fraction(omega_target)
        c = int(c1_target)
        k = self.rank
        if k == 0:
            return () if (w == 0 and c == 0) else None
        if k == 1:
            w1, c1 = self.omega_values[0], self.c1_values[0]
            if w1 != 0:
                t = w / w1
                if t.denominator != 1:
                    return None
                n = int(t)
                return (n,) if c1 * n == c else None
            # w1 == 0 forces c1 != 0 by nondegeneracy
            if w != 0 or c % c1 != 0:
                return None
            return (c // c1,)
        if k == 2:
            w1, w2 = self.omega_values
            d1, d2 = self.c1_values
            det = w1 * d2 - w2 * d1
            if det == 0:
                # [omega; c1] has rank 2 but the 2x2 determinant can only
                # vanish if a kernel vector existed, rejected at construction.
                raise StructuralError("unexpected singular generator matrix")
            x = (w * d2 - Fraction(c) * w2) / det
            y = (Fraction(c) * w1 - w * d1) / det
            if x.denominator != 1 or y.denominator != 1:
                return None
            return (int(x), int(y))
        raise StructuralError("rank > 2 groups are rejected at construction")
