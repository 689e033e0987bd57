"""Reflection subgroups: canonical generators, membership, fundamental
polytopes, induced Coxeter matrices, and the rank/nerve/commutation checks.

The canonical generating set of a reflection subgroup is computed by
conjugation descent: while some pair allows t1 t2 t1 shorter than t2,
replace t2.  Membership of a reflection is decided the same way (descend
until landing in the generating set or stalling), with an enumerative
second implementation kept alongside as a cross-check oracle.  The
fundamental polytope is grown by a chamber BFS from the base chamber
that refuses to cross mirrors; its chamber count is the subgroup index.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations

from .davis import (ChamberPolytope, _polytope_of, enumerate_convex_polytopes,
                    is_convex, is_coxeter_polytope)
from .errors import (BudgetError, ConsistencyError, InputError,
                     PreconditionError)
from .matrices import (INFINITY, CoxeterMatrix, is_finite, is_indecomposable,
                       nerve)
from .words import root_span_rank

_NERVE_PERM_CAP = 8


@dataclass
class ReflectionSubgroup:
    generators: tuple            # canonical Walls, sorted
    induced: CoxeterMatrix       # orders of pairwise products
    polytope: ChamberPolytope    # fundamental polytope, or None past budget
    index: int                   # chamber count, or None past budget

    def generator_words(self):
        return [w.reflection.display() for w in self.generators]

    def __repr__(self):
        sig = ",".join("oo" if m == INFINITY else str(m)
                       for m in self.induced.signature())
        return f"ReflectionSubgroup(index={self.index}, signature=({sig}))"


def _wall_key(w):
    return w.sort_key


def canonical_generators(group, walls):
    """Descent fixpoint: no pair t1, t2 with t1 t2 t1 shorter than t2.

    Generates the same subgroup as the input set.
    """
    walls = list(walls)
    if not walls:
        raise InputError("need at least one reflection")
    gens = {w.reflection.word: w for w in walls}
    guard = sum(len(k) for k in gens) + 8 * len(gens) + 8
    changed = True
    while changed:
        changed = False
        items = sorted(gens.values(), key=_wall_key)
        for t1 in items:
            for t2 in items:
                if t1 == t2:
                    continue
                conj = group.conjugate_wall(t1, t2)
                if len(conj.reflection.word) < len(t2.reflection.word):
                    del gens[t2.reflection.word]
                    gens[conj.reflection.word] = conj
                    changed = True
                    break
            if changed:
                break
        guard -= 1
        if guard < 0:
            raise ConsistencyError("canonical descent failed to terminate",
                                   [w.reflection.display() for w in walls])
    return tuple(sorted(gens.values(), key=_wall_key))


def contains_reflection(group, gens, r):
    """Membership of a reflection in the subgroup of a canonical set,
    by conjugation descent through the generators."""
    genwords = {t.reflection.word for t in gens}
    cur = r
    while True:
        if cur.reflection.word in genwords:
            return True
        for t in sorted(gens, key=_wall_key):
            cand = group.conjugate_wall(t, cur)
            if len(cand.reflection.word) < len(cur.reflection.word):
                cur = cand
                break
        else:
            return False


def subgroup_reflections_bounded(group, gens, length_bound, cap=20_000):
    """Reflections w t w^-1 of the subgroup, over a BFS of subgroup words
    pruned at the given length; the enumerative side of the dual check."""
    seen = {()}
    frontier = [()]
    while frontier:
        nxt = []
        for w in frontier:
            for t in gens:
                v = group._mult_word(w, t.reflection.word)
                if v not in seen and len(v) <= length_bound:
                    seen.add(v)
                    nxt.append(v)
                    if len(seen) > cap:
                        raise BudgetError("subgroup enumeration cap hit")
        frontier = nxt
    refs = set()
    for w in seen:
        for t in gens:
            r = group._mult_word(group._mult_word(w, t.reflection.word),
                                 tuple(reversed(w)))
            if len(r) <= length_bound:
                refs.add(r)
    return refs


def contains_reflection_enumerative(group, gens, r, slack=0, cap=20_000):
    bound = len(r.reflection.word) + slack
    return r.reflection.word in subgroup_reflections_bounded(
        group, gens, bound, cap)


def contains_reflection_checked(group, gens, r, slack=0):
    """Run both implementations; disagreement is a build-failing error."""
    fast = contains_reflection(group, gens, r)
    slow = contains_reflection_enumerative(group, gens, r, slack)
    if fast != slow:
        raise ConsistencyError(
            "membership descent disagrees with enumeration",
            {"gens": [t.reflection.display() for t in gens],
             "r": r.reflection.display(), "descent": fast, "oracle": slow})
    return fast


def fundamental_polytope(group, gens, max_chambers):
    """Chamber BFS from the base chamber, blocked at mirrors.

    Returns (polytope, index) when the BFS halts within the budget;
    raises BudgetError otherwise (infinite or large index).
    """
    mirror = {}

    def is_mirror(wall):
        key = wall.reflection.word
        hit = mirror.get(key)
        if hit is None:
            hit = contains_reflection(group, gens, wall)
            mirror[key] = hit
        return hit

    e = group.identity()
    visited = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for g in sorted(frontier, key=lambda x: x.sort_key):
            for s in range(group.rank):
                w = group.wall_between(g, s)
                if is_mirror(w):
                    continue
                x = group.step(g, s)
                if x not in visited:
                    if len(visited) >= max_chambers:
                        raise BudgetError(
                            f"fundamental domain exceeds {max_chambers} "
                            "chambers")
                    visited.add(x)
                    nxt.append(x)
        frontier = nxt
    chambers = frozenset(visited)
    if not is_convex(group, chambers):
        raise ConsistencyError("fundamental domain is not convex",
                               sorted(c.display() for c in chambers))
    return _polytope_of(group, chambers), len(chambers)


def induced_matrix(group, gens):
    """Coxeter matrix of the canonical set: pairwise product orders."""
    n = len(gens)
    rows = [[1] * n for _ in range(n)]
    for i, j in combinations(range(n), 2):
        m = group.order_of_product(gens[i], gens[j])
        rows[i][j] = rows[j][i] = m
    return CoxeterMatrix(rows,
                         labels=[t.reflection.display() for t in gens])


def analyze(group, walls, max_chambers):
    """Canonicalize a generating set and assemble the full subgroup record."""
    gens = canonical_generators(group, walls)
    induced = induced_matrix(group, gens)
    try:
        poly, index = fundamental_polytope(group, gens, max_chambers)
    except BudgetError:
        poly, index = None, None
    return ReflectionSubgroup(gens, induced, poly, index)


def verify_rank_theorem(group, gens, max_chambers):
    """Rank bound checks for one finite-index subgroup.

    For an infinite indecomposable system: the canonical set has at
    least rank-many reflections, the fundamental polytope at least
    rank-many facets, and the canonical roots span the whole space.
    """
    applicable = (not is_finite(group.matrix)
                  and is_indecomposable(group.matrix))
    if not applicable:
        return {"applicable": False, "status": "skipped-precondition"}
    try:
        poly, index = fundamental_polytope(group, gens, max_chambers)
    except BudgetError:
        return {"applicable": True, "status": "budget", "index": None}
    span = root_span_rank(group, gens)
    rank = group.rank
    out = {
        "applicable": True,
        "index": index,
        "generators": len(gens),
        "rank_ok": len(gens) >= rank,
        "facets": poly.facet_count,
        "facet_ok": poly.facet_count >= rank,
        "span": span,
        "span_ok": span == rank,
    }
    out["status"] = ("pass" if out["rank_ok"] and out["facet_ok"]
                     and out["span_ok"] else "violation")
    return out


def nerve_deletion_check(group, gens, induced=None):
    """Search for a vertex bijection embedding the subgroup nerve into the
    group nerve (simplices map to simplices).  Returns (found, witness)."""
    n = group.rank
    if len(gens) != n:
        raise PreconditionError("nerve deletion check needs equal ranks")
    if n > _NERVE_PERM_CAP:
        raise BudgetError(f"bijection search capped at rank {_NERVE_PERM_CAP}")
    sub = nerve(induced if induced is not None
                else induced_matrix(group, gens))
    big = nerve(group.matrix)
    for perm in permutations(range(n)):
        if all(frozenset(perm[i] for i in t) in big.simplices
               for t in sub.simplices):
            return True, perm
    return False, None


def comm_condition(matrix):
    """Which of the two commutation patterns some generator satisfies:
    (1) commuting with all but exactly one other generator, or
    (2) finite product order with every other generator."""
    n = matrix.rank
    cond1 = None
    cond2 = None
    for s0 in range(n):
        others = [s for s in range(n) if s != s0]
        noncomm = [s for s in others if matrix.order(s0, s) != 2]
        if cond1 is None and len(noncomm) == 1:
            cond1 = s0
        if cond2 is None and all(matrix.order(s0, s) != INFINITY
                                 for s in others):
            cond2 = s0
    if cond1 is not None and cond2 is not None:
        label = "both"
    elif cond1 is not None:
        label = "holds_via_1"
    elif cond2 is not None:
        label = "holds_via_2"
    else:
        label = "none"
    return {"condition1": cond1, "condition2": cond2, "label": label}


def index_two_by_commutation(group):
    """The explicit index-2 generating set available when some generator
    commutes with all but one other and the remaining order is even or
    infinite: keep the rest of S and replace s0 by s0 s' s0."""
    matrix = group.matrix
    cc = comm_condition(matrix)
    s0 = cc["condition1"]
    if s0 is None:
        return None
    others = [s for s in range(matrix.rank) if s != s0]
    s_prime = next(s for s in others if matrix.order(s0, s) != 2)
    m = matrix.order(s0, s_prime)
    if m != INFINITY and m % 2 != 0:
        return None
    walls = [group.generator_wall(s) for s in others]
    walls.append(group.conjugate_wall(group.generator_wall(s0),
                                      group.generator_wall(s_prime)))
    return tuple(sorted(walls, key=_wall_key))


def search_equal_rank_subgroups(group, max_chambers, census=None):
    """Scan the polytope census for fundamental domains whose wall
    reflections give exactly rank-many canonical generators.

    Results are one representative per (index, induced signature) class;
    completeness holds only up to the chamber budget.  A precomputed
    census may be passed to avoid re-enumeration.
    """
    found = {}
    if census is None:
        census = enumerate_convex_polytopes(group, max_chambers)
    for p in census:
        if len(p.chambers) > max_chambers:
            continue
        if not is_coxeter_polytope(group, p):
            continue
        walls = tuple(w for w, _ in p.facet_walls)
        gens = canonical_generators(group, walls)
        if len(gens) != group.rank:
            continue
        induced = induced_matrix(group, gens)
        key = (len(p.chambers), induced.signature())
        if key not in found:
            found[key] = ReflectionSubgroup(gens, induced, p,
                                            len(p.chambers))
    return sorted(found.values(),
                  key=lambda r: (r.index, r.induced.signature()))


def subgroup_report(group, sub, theorems=None, nerve_deletion=None):
    """JSON-ready record for one subgroup."""
    return {
        "generators": sub.generator_words(),
        "induced_m": sub.induced.to_json_dict()["m"],
        "index": sub.index if sub.index is not None else ">budget",
        "polytope": ([c.display() for c in sub.polytope.sorted_chambers()]
                     if sub.polytope is not None else None),
        "nerve_deletion": nerve_deletion,
        "theorems": theorems,
    }
