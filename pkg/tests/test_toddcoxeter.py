from fractions import Fraction

import pytest

from homcob.errors import InputError
from homcob.simplicial import GroupPresentation
from homcob.toddcoxeter import EXCEEDED, coset_enumeration


def test_order_two():
    assert coset_enumeration(GroupPresentation(1, [[1, 1]]), 10) == 2


def test_cyclic_five():
    assert coset_enumeration(GroupPresentation(1, [[1] * 5]), 20) == 5


def test_trivial_group():
    assert coset_enumeration(GroupPresentation(1, [[1]]), 10) == 1


def test_symmetric_group_three():
    p = GroupPresentation(2, [[1, 1], [2, 2], [1, 2, 1, 2, 1, 2]])
    assert coset_enumeration(p, 50) == 6


def test_quaternion_group():
    # <a, b | a^4, a^2 b^-2, b^-1 a b a>
    p = GroupPresentation(2, [[1, 1, 1, 1], [1, 1, -2, -2], [-2, 1, 2, 1]])
    assert coset_enumeration(p, 64) == 8


def test_free_abelian_exceeds():
    p = GroupPresentation(2, [[1, 2, -1, -2]])
    assert coset_enumeration(p, 100) == EXCEEDED


def test_free_group_exceeds():
    assert coset_enumeration(GroupPresentation(2, []), 50) == EXCEEDED


def test_limit_validation():
    with pytest.raises(InputError):
        coset_enumeration(GroupPresentation(1, [[1]]), 0)


# -- binary icosahedral group -------------------------------------------------
#
# <s, t | s^3 = t^5 = (st)^2> presents the order-120 group of unit
# icosians; the enumeration is cross-checked by closing the generator
# set inside the quaternions with exact Q(sqrt 5) arithmetic.

BINARY_ICOSAHEDRAL = GroupPresentation(
    2,
    [
        [1, 1, 1, -2, -2, -2, -2, -2],          # s^3 t^-5
        [1, 1, 1, -1, -2, -1, -2],              # s^3 (st)^-2 = s^2 t^-1 s^-1 t^-1
    ],
)


class Root5:
    """Exact x + y*sqrt(5) with rational x, y."""

    __slots__ = ("x", "y")

    def __init__(self, x, y=0):
        self.x = Fraction(x)
        self.y = Fraction(y)

    def __add__(self, o):
        return Root5(self.x + o.x, self.y + o.y)

    def __sub__(self, o):
        return Root5(self.x - o.x, self.y - o.y)

    def __mul__(self, o):
        return Root5(self.x * o.x + 5 * self.y * o.y, self.x * o.y + self.y * o.x)

    def __neg__(self):
        return Root5(-self.x, -self.y)

    def __eq__(self, o):
        return self.x == o.x and self.y == o.y

    def __hash__(self):
        return hash((self.x, self.y))


def quat_mul(a, b):
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return (
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    )


def test_binary_icosahedral_order_120():
    assert coset_enumeration(BINARY_ICOSAHEDRAL, 500) == 120


def test_binary_icosahedral_is_perfect():
    ab = BINARY_ICOSAHEDRAL.abelianization()
    assert ab.free_rank == 0 and ab.torsion == []


def test_binary_icosahedral_quaternion_oracle():
    half = Fraction(1, 2)
    phi = Root5(half, half)            # golden ratio
    phi_inv = Root5(-half, half)       # 1/phi = phi - 1
    zero, one = Root5(0), Root5(1)
    s = (Root5(half), Root5(half), Root5(half), Root5(half))
    t = (phi * Root5(half), phi_inv * Root5(half), Root5(half), zero)

    minus_one = (-one, zero, zero, zero)
    s3 = quat_mul(quat_mul(s, s), s)
    t5 = t
    for _ in range(4):
        t5 = quat_mul(t5, t)
    st = quat_mul(s, t)
    assert s3 == minus_one
    assert t5 == minus_one
    assert quat_mul(st, st) == minus_one

    # close the generated subgroup
    elements = {s, t}
    frontier = [s, t]
    while frontier:
        g = frontier.pop()
        for h in (s, t):
            w = quat_mul(g, h)
            if w not in elements:
                elements.add(w)
                frontier.append(w)
        assert len(elements) <= 120
    assert len(elements) == 120
