import pytest

from coxlab.davis import enumerate_convex_polytopes
from coxlab.matrices import INFINITY, CoxeterMatrix
from coxlab.words import CoxeterGroup

MATRICES = {
    "t23inf": CoxeterMatrix.triangle(2, 3, INFINITY),
    "remark": CoxeterMatrix.triangle(INFINITY, 2, 2),  # m12=oo, m23=m13=2
    "a1aff": CoxeterMatrix.dihedral(INFINITY),
    "a2aff": CoxeterMatrix.triangle(3, 3, 3),
    "t244": CoxeterMatrix.triangle(2, 4, 4),
    "t236": CoxeterMatrix.triangle(2, 3, 6),
    "t237": CoxeterMatrix.triangle(2, 3, 7),
    "t255": CoxeterMatrix.triangle(2, 5, 5),
    "univ3": CoxeterMatrix.triangle(INFINITY, INFINITY, INFINITY),
    "i23": CoxeterMatrix.dihedral(3),
    "a3": CoxeterMatrix.triangle(3, 3, 2),      # path 1-2-3, labels 3,3
    "b3": CoxeterMatrix.triangle(4, 3, 2),
    "h3": CoxeterMatrix.triangle(5, 3, 2),
}


class Lab:
    """Session cache of groups and censuses (censuses are the slow part)."""

    def __init__(self):
        self._groups = {}
        self._census = {}

    def matrix(self, name):
        return MATRICES[name]

    def group(self, name):
        if name not in self._groups:
            self._groups[name] = CoxeterGroup(MATRICES[name])
        return self._groups[name]

    def census(self, name, max_chambers):
        have = self._census.get(name)
        if have is None or have[0] < max_chambers:
            polys = list(enumerate_convex_polytopes(self.group(name),
                                                    max_chambers))
            self._census[name] = (max_chambers, polys)
            have = self._census[name]
        return [p for p in have[1] if len(p.chambers) <= max_chambers]


@pytest.fixture(scope="session")
def lab():
    return Lab()
