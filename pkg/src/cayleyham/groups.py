"""Finite group construction and elementwise arithmetic.

Groups are described by small immutable spec trees (cyclic, dihedral, direct
product, semidirect product, explicit table); elements are nested coordinate
tuples mirroring the spec tree.  Everything here is exact integer arithmetic;
a cached dense multiplication table (numpy) backs the subgroup-level operations.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

ENUMERATION_CAP = 10_000

Element = Union[int, tuple]


class GroupError(ValueError):
    """Structurally invalid spec, element, or argument."""


class CapExceeded(GroupError):
    """An operation refused to run because the group is too large for it."""


# ---------------------------------------------------------------------------
# specs


@dataclass(frozen=True)
class Cyclic:
    """Z_n, elements are residues 0..n-1."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise GroupError(f"cyclic order must be >= 1, got {self.n}")


@dataclass(frozen=True)
class Dihedral:
    """Dihedral group of order 2n; elements are (flip, rot) with f*t^r = (f, r)."""

    order: int

    def __post_init__(self):
        if self.order < 2 or self.order % 2:
            raise GroupError(f"dihedral order must be even and >= 2, got {self.order}")

    @property
    def n(self) -> int:
        return self.order // 2


@dataclass(frozen=True)
class DirectProduct:
    factors: tuple

    def __post_init__(self):
        if len(self.factors) < 1:
            raise GroupError("direct product needs at least one factor")


@dataclass(frozen=True)
class MatrixAction:
    """Per acting generator, a 2x2 matrix over Z_p acting on (Z_p)^2 row vectors."""

    p: int
    mats: tuple  # tuple of ((a,b),(c,d))


@dataclass(frozen=True)
class UnitAction:
    """Per acting generator, a unit u mod n acting on Z_n by v -> u*v."""

    units: tuple


@dataclass(frozen=True)
class ImagesAction:
    """Per acting generator, explicit images of the acted group's canonical generators."""

    images: tuple  # tuple (one per acting generator) of tuples of elements


ActionMap = Union[MatrixAction, UnitAction, ImagesAction]


@dataclass(frozen=True)
class Semidirect:
    """acting |x acted; elements (u, v), (u,v)(u',v') = (u u', v^act(u') * v')."""

    acting: "GroupSpec"
    acted: "GroupSpec"
    action: ActionMap


@dataclass(frozen=True)
class TableGroup:
    """Explicit multiplication table; elements are indices 0..n-1, identity 0."""

    name: str
    table: tuple  # tuple of row tuples

    def __post_init__(self):
        n = len(self.table)
        if n == 0 or any(len(r) != n for r in self.table):
            raise GroupError("table must be square and nonempty")


GroupSpec = Union[Cyclic, Dihedral, DirectProduct, Semidirect, TableGroup]


def table_group(name: str, rows) -> TableGroup:
    """Build a TableGroup, checking the group axioms and that index 0 is identity."""
    tbl = tuple(tuple(r) for r in rows)
    n = len(tbl)
    spec = TableGroup(name, tbl)
    for i in range(n):
        if tbl[0][i] != i or tbl[i][0] != i:
            raise GroupError(f"{name}: index 0 is not an identity")
    for i in range(n):
        if sorted(tbl[i]) != list(range(n)) or sorted(r[i] for r in tbl) != list(range(n)):
            raise GroupError(f"{name}: row/column {i} is not a permutation")
    arr = np.array(tbl, dtype=np.int64)
    # associativity via the left-regular representation: L_{ab} = L_a L_b
    for a in range(n):
        for b in range(n):
            if not np.array_equal(arr[arr[a][b]], arr[a][arr[b]]):
                raise GroupError(f"{name}: not associative at ({a},{b})")
    return spec


# ---------------------------------------------------------------------------
# basic arithmetic


def group_order(spec: GroupSpec) -> int:
    if isinstance(spec, Cyclic):
        return spec.n
    if isinstance(spec, Dihedral):
        return spec.order
    if isinstance(spec, DirectProduct):
        out = 1
        for f in spec.factors:
            out *= group_order(f)
        return out
    if isinstance(spec, Semidirect):
        return group_order(spec.acting) * group_order(spec.acted)
    if isinstance(spec, TableGroup):
        return len(spec.table)
    raise GroupError(f"not a group spec: {spec!r}")


def identity(spec: GroupSpec) -> Element:
    if isinstance(spec, (Cyclic, TableGroup)):
        return 0
    if isinstance(spec, Dihedral):
        return (0, 0)
    if isinstance(spec, DirectProduct):
        return tuple(identity(f) for f in spec.factors)
    if isinstance(spec, Semidirect):
        return (identity(spec.acting), identity(spec.acted))
    raise GroupError(f"not a group spec: {spec!r}")


def check_element(spec: GroupSpec, g: Element) -> None:
    """Raise GroupError unless g has the right shape and ranges for spec."""
    if isinstance(spec, Cyclic):
        if not isinstance(g, int) or not 0 <= g < spec.n:
            raise GroupError(f"bad element {g!r} for Z{spec.n}")
    elif isinstance(spec, Dihedral):
        if (not isinstance(g, tuple) or len(g) != 2 or not isinstance(g[0], int)
                or not isinstance(g[1], int) or g[0] not in (0, 1)
                or not 0 <= g[1] < spec.n):
            raise GroupError(f"bad element {g!r} for D{spec.order}")
    elif isinstance(spec, DirectProduct):
        if not isinstance(g, tuple) or len(g) != len(spec.factors):
            raise GroupError(f"bad element {g!r} for direct product")
        for f, c in zip(spec.factors, g):
            check_element(f, c)
    elif isinstance(spec, Semidirect):
        if not isinstance(g, tuple) or len(g) != 2:
            raise GroupError(f"bad element {g!r} for semidirect product")
        check_element(spec.acting, g[0])
        check_element(spec.acted, g[1])
    elif isinstance(spec, TableGroup):
        if not isinstance(g, int) or not 0 <= g < len(spec.table):
            raise GroupError(f"bad element {g!r} for {spec.name}")
    else:
        raise GroupError(f"not a group spec: {spec!r}")


def canonical_generators(spec: GroupSpec) -> list:
    """The generators that action data is indexed by, embedded in spec."""
    if isinstance(spec, Cyclic):
        return [1] if spec.n > 1 else []
    if isinstance(spec, Dihedral):
        return [(1, 0), (0, 1)] if spec.n > 1 else [(1, 0)]
    if isinstance(spec, DirectProduct):
        out = []
        e = identity(spec)
        for i, f in enumerate(spec.factors):
            for g in canonical_generators(f):
                out.append(tuple(g if j == i else e[j] for j in range(len(spec.factors))))
        return out
    if isinstance(spec, Semidirect):
        ea, eb = identity(spec.acting), identity(spec.acted)
        return ([(g, eb) for g in canonical_generators(spec.acting)]
                + [(ea, v) for v in canonical_generators(spec.acted)])
    if isinstance(spec, TableGroup):
        # deterministic greedy generating set
        gens: list = []
        have = {0}
        while len(have) < len(spec.table):
            g = min(i for i in range(len(spec.table)) if i not in have)
            gens.append(g)
            have = _closure_slow(spec, gens)
        return gens
    raise GroupError(f"not a group spec: {spec!r}")


def _generator_word(spec: GroupSpec, g: Element) -> list:
    """Decompose g as a product of canonical generators: [(gen_index, exponent)]."""
    if isinstance(spec, Cyclic):
        return [(0, g)] if spec.n > 1 else []
    if isinstance(spec, Dihedral):
        return [(0, g[0]), (1, g[1])] if spec.n > 1 else [(0, g[0])]
    if isinstance(spec, DirectProduct):
        out = []
        off = 0
        for f, c in zip(spec.factors, g):
            out.extend((off + i, e) for i, e in _generator_word(f, c))
            off += len(canonical_generators(f))
        return out
    if isinstance(spec, Semidirect):
        u, v = g
        na = len(canonical_generators(spec.acting))
        return (_generator_word(spec.acting, u)
                + [(na + i, e) for i, e in _generator_word(spec.acted, v)])
    raise GroupError(f"no generator decomposition for {spec!r}")


def _matrix_mul(a, b, p):
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(2)) % p for j in range(2))
                 for i in range(2))


def _matrix_pow(m, e, p):
    out = ((1, 0), (0, 1))
    for _ in range(e):
        out = _matrix_mul(out, m, p)
    return out


def _extend_hom(spec: GroupSpec, gens: list, images: list):
    """Extend gen -> image to a full map on <gens> by BFS; None if inconsistent."""
    e = identity(spec)
    known = {e: e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g, im in zip(gens, images):
                y = multiply(spec, x, g)
                fy = multiply(spec, known[x], im)
                if y in known:
                    if known[y] != fy:
                        return None
                else:
                    known[y] = fy
                    nxt.append(y)
        frontier = nxt
    return known


@lru_cache(maxsize=None)
def _action_tables(spec: Semidirect):
    """dict acting_element -> dict acted_element -> acted_element."""
    act, acted, action = spec.acting, spec.acted, spec.action
    gens = canonical_generators(act)
    n_gens = len(gens)
    acted_elems = enumerate_elements(acted)

    if isinstance(action, MatrixAction):
        if not (isinstance(acted, DirectProduct) and len(acted.factors) == 2
                and all(f == Cyclic(action.p) for f in acted.factors)):
            raise GroupError("matrix action requires acted group (Z_p)^2")
        if len(action.mats) != n_gens:
            raise GroupError(f"action needs {n_gens} matrices, got {len(action.mats)}")
        p = action.p

        def gen_map(i):
            m = action.mats[i]
            if (m[0][0] * m[1][1] - m[0][1] * m[1][0]) % p == 0:
                raise GroupError(f"action matrix {m} is singular mod {p}")
            return {v: ((v[0] * m[0][0] + v[1] * m[1][0]) % p,
                        (v[0] * m[0][1] + v[1] * m[1][1]) % p) for v in acted_elems}
    elif isinstance(action, UnitAction):
        if not isinstance(acted, Cyclic):
            raise GroupError("unit action requires a cyclic acted group")
        if len(action.units) != n_gens:
            raise GroupError(f"action needs {n_gens} units, got {len(action.units)}")

        def gen_map(i):
            u = action.units[i] % acted.n
            if np.gcd(u, acted.n) != 1:
                raise GroupError(f"{action.units[i]} is not a unit mod {acted.n}")
            return {v: (u * v) % acted.n for v in acted_elems}
    elif isinstance(action, ImagesAction):
        if len(action.images) != n_gens:
            raise GroupError(f"action needs {n_gens} image lists, got {len(action.images)}")
        acted_gens = canonical_generators(acted)

        def gen_map(i):
            imgs = list(action.images[i])
            if len(imgs) != len(acted_gens):
                raise GroupError("wrong number of generator images in action")
            for im in imgs:
                check_element(acted, im)
            m = _extend_hom(acted, acted_gens, imgs)
            if m is None or len(m) != len(acted_elems):
                raise GroupError("explicit images do not define an endomorphism")
            if len(set(m.values())) != len(m):
                raise GroupError("explicit images do not define a bijection")
            return m
    else:
        raise GroupError(f"not an action map: {action!r}")

    gmaps = [gen_map(i) for i in range(n_gens)]
    # order of each generator's automorphism must divide the generator's order
    for g, m in zip(gens, gmaps):
        og = element_order(act, g)
        cur = m
        for _ in range(og - 1):
            cur = {v: m[cur[v]] for v in acted_elems}
        if any(cur[v] != v for v in acted_elems):
            raise GroupError(f"action order at generator {g} does not divide |{g}|")

    ident_map = {v: v for v in acted_elems}
    tables = {}
    for u in enumerate_elements(act):
        cur = ident_map
        for gi, exp in _generator_word(act, u):
            for _ in range(exp):
                cur = {v: gmaps[gi][cur[v]] for v in acted_elems}
        tables[u] = cur
    # homomorphism property over all pairs
    for u1 in tables:
        for u2 in tables:
            u12 = multiply(act, u1, u2)
            t1, t2, t12 = tables[u1], tables[u2], tables[u12]
            if any(t2[t1[v]] != t12[v] for v in acted_elems):
                raise GroupError(f"action is not a homomorphism at ({u1}, {u2})")
    return tables


def multiply(spec: GroupSpec, g: Element, h: Element) -> Element:
    if isinstance(spec, Cyclic):
        return (g + h) % spec.n
    if isinstance(spec, Dihedral):
        n = spec.n
        e1, r1 = g
        e2, r2 = h
        return ((e1 + e2) % 2, (r2 + (r1 if e2 == 0 else -r1)) % n)
    if isinstance(spec, DirectProduct):
        return tuple(multiply(f, a, b) for f, a, b in zip(spec.factors, g, h))
    if isinstance(spec, Semidirect):
        u1, v1 = g
        u2, v2 = h
        v1t = _action_tables(spec)[u2][v1]
        return (multiply(spec.acting, u1, u2), multiply(spec.acted, v1t, v2))
    if isinstance(spec, TableGroup):
        return spec.table[g][h]
    raise GroupError(f"not a group spec: {spec!r}")


def inverse(spec: GroupSpec, g: Element) -> Element:
    if isinstance(spec, Cyclic):
        return (-g) % spec.n
    if isinstance(spec, Dihedral):
        e, r = g
        return (e, r if e else (-r) % spec.n)
    if isinstance(spec, DirectProduct):
        return tuple(inverse(f, a) for f, a in zip(spec.factors, g))
    if isinstance(spec, Semidirect):
        u, v = g
        ui = inverse(spec.acting, u)
        vi = inverse(spec.acted, v)
        return (ui, _action_tables(spec)[ui][vi])
    if isinstance(spec, TableGroup):
        return spec.table[g].index(0)
    raise GroupError(f"not a group spec: {spec!r}")


def element_order(spec: GroupSpec, g: Element) -> int:
    check_element(spec, g)
    e = identity(spec)
    cur = g
    k = 1
    while cur != e:
        cur = multiply(spec, cur, g)
        k += 1
        if k > group_order(spec):
            raise GroupError("order computation did not terminate")
    return k


def conjugate(spec: GroupSpec, g: Element, x: Element) -> Element:
    """x^-1 g x."""
    return multiply(spec, multiply(spec, inverse(spec, x), g), x)


def commutator(spec: GroupSpec, a: Element, b: Element) -> Element:
    """a^-1 b^-1 a b."""
    return multiply(spec, multiply(spec, inverse(spec, a), inverse(spec, b)),
                    multiply(spec, a, b))


@lru_cache(maxsize=None)
def _elements_cached(spec: GroupSpec) -> tuple:
    if isinstance(spec, Cyclic):
        return tuple(range(spec.n))
    if isinstance(spec, Dihedral):
        return tuple((e, r) for e in (0, 1) for r in range(spec.n))
    if isinstance(spec, DirectProduct):
        pools = [_elements_cached(f) for f in spec.factors]
        return tuple(itertools.product(*pools))
    if isinstance(spec, Semidirect):
        return tuple(itertools.product(_elements_cached(spec.acting),
                                       _elements_cached(spec.acted)))
    if isinstance(spec, TableGroup):
        return tuple(range(len(spec.table)))
    raise GroupError(f"not a group spec: {spec!r}")


def enumerate_elements(spec: GroupSpec) -> list:
    """All elements in lexicographic coordinate order; refuses past the cap."""
    if group_order(spec) > ENUMERATION_CAP:
        raise CapExceeded(f"|G| = {group_order(spec)} exceeds cap {ENUMERATION_CAP}")
    return list(_elements_cached(spec))


def _closure_slow(spec: GroupSpec, gens) -> set:
    """Pure-python subgroup closure (used before a table exists)."""
    e = identity(spec)
    gens = list(gens) + [inverse(spec, g) for g in gens]
    have = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = multiply(spec, x, g)
                if y not in have:
                    have.add(y)
                    nxt.append(y)
        frontier = nxt
    return have


# ---------------------------------------------------------------------------
# cached dense table


class GroupTable:
    """Dense multiplication table plus derived arrays for one group."""

    def __init__(self, spec: GroupSpec):
        self.spec = spec
        self.elements = enumerate_elements(spec)
        self.n = len(self.elements)
        self.index = {g: i for i, g in enumerate(self.elements)}
        assert self.index[identity(spec)] == 0, "identity must sort first"
        dtype = np.int16 if self.n < 2**15 else np.int32
        mul = np.empty((self.n, self.n), dtype=dtype)
        for i, g in enumerate(self.elements):
            row = [self.index[multiply(spec, g, h)] for h in self.elements]
            mul[i] = row
        self.mul = mul
        inv = np.empty(self.n, dtype=dtype)
        for i in range(self.n):
            inv[i] = int(np.nonzero(mul[i] == 0)[0][0])
        self.inv = inv
        order = np.ones(self.n, dtype=np.int32)
        for i in range(self.n):
            cur, k = i, 1
            while cur != 0:
                cur = int(mul[cur, i])
                k += 1
            order[i] = k
        self.order = order

    def close(self, gen_idx) -> np.ndarray:
        """Sorted indices of the subgroup generated by the given element indices."""
        gens = sorted(set(int(i) for i in gen_idx) | set(int(self.inv[i]) for i in gen_idx))
        member = np.zeros(self.n, dtype=bool)
        member[0] = True
        frontier = np.array([0], dtype=np.int64)
        if not gens:
            return np.array([0], dtype=np.int64)
        garr = np.array(gens, dtype=np.int64)
        while frontier.size:
            prods = self.mul[np.ix_(frontier, garr)].ravel()
            prods = np.unique(prods)
            new = prods[~member[prods]]
            member[new] = True
            frontier = new
        return np.nonzero(member)[0]


@lru_cache(maxsize=None)
def table_for(spec: GroupSpec) -> GroupTable:
    return GroupTable(spec)


# ---------------------------------------------------------------------------
# subgroups


@dataclass(frozen=True)
class SubgroupHandle:
    spec: GroupSpec
    members: tuple  # canonically ordered (by element enumeration order)
    generators: tuple

    @property
    def order(self) -> int:
        return len(self.members)


def _handle_from_indices(spec: GroupSpec, idx, generators) -> SubgroupHandle:
    tbl = table_for(spec)
    members = tuple(tbl.elements[int(i)] for i in sorted(idx))
    h = SubgroupHandle(spec, members, tuple(generators))
    if group_order(spec) % len(members):
        raise GroupError("subgroup order does not divide group order")  # pragma: no cover
    return h


def generated_subgroup(spec: GroupSpec, gens) -> SubgroupHandle:
    tbl = table_for(spec)
    for g in gens:
        check_element(spec, g)
    idx = tbl.close([tbl.index[g] for g in gens])
    return _handle_from_indices(spec, idx, gens)


def is_generating(spec: GroupSpec, gens) -> bool:
    return generated_subgroup(spec, gens).order == group_order(spec)


def is_minimal_generating(spec: GroupSpec, gens) -> bool:
    gens = list(gens)
    e = identity(spec)
    if any(g == e for g in gens):
        raise GroupError("generating sets must not contain the identity")
    if len(set(gens)) != len(gens):
        raise GroupError("generating sets must not repeat elements")
    if not is_generating(spec, gens):
        return False
    if len(gens) == 1:
        return True
    for i in range(len(gens)):
        if is_generating(spec, gens[:i] + gens[i + 1:]):
            return False
    return True


def derived_subgroup(spec: GroupSpec) -> SubgroupHandle:
    """Subgroup generated by all commutators (it is automatically normal)."""
    tbl = table_for(spec)
    comms = set()
    inv = tbl.inv
    mul = tbl.mul
    for a in range(tbl.n):
        ia = inv[a]
        for b in range(tbl.n):
            comms.add(int(mul[mul[ia, inv[b]], mul[a, b]]))
    idx = tbl.close(sorted(comms))
    gens = tuple(tbl.elements[i] for i in sorted(comms) if i != 0)
    return _handle_from_indices(spec, idx, gens)


def center(spec: GroupSpec) -> SubgroupHandle:
    tbl = table_for(spec)
    mul = tbl.mul
    idx = [i for i in range(tbl.n) if np.array_equal(mul[i], mul[:, i])]
    gens = tuple(tbl.elements[i] for i in idx if i != 0)
    return _handle_from_indices(spec, idx, gens)


def sylow_subgroup(spec: GroupSpec, p: int) -> SubgroupHandle:
    n = group_order(spec)
    pk = 1
    while n % (pk * p) == 0:
        pk *= p
    tbl = table_for(spec)
    if pk == 1:
        return _handle_from_indices(spec, [0], ())
    p_elems = [i for i in range(1, tbl.n) if _is_p_power(int(tbl.order[i]), p)]
    cur = np.array([0], dtype=np.int64)
    cur_gens: list = []
    while cur.size < pk:
        grown = False
        for x in p_elems:
            if x in cur:
                continue
            cand = tbl.close(cur_gens + [x])
            if _is_p_power(cand.size, p):
                cur_gens.append(x)
                cur = cand
                grown = True
                break
        if not grown:  # pragma: no cover
            raise GroupError(f"failed to grow a Sylow {p}-subgroup")
    return _handle_from_indices(spec, cur, tuple(tbl.elements[i] for i in cur_gens))


def _is_p_power(m: int, p: int) -> bool:
    while m % p == 0:
        m //= p
    return m == 1


def is_normal(spec: GroupSpec, sub: SubgroupHandle) -> bool:
    tbl = table_for(spec)
    member = np.zeros(tbl.n, dtype=bool)
    midx = np.array([tbl.index[m] for m in sub.members], dtype=np.int64)
    member[midx] = True
    for x in range(tbl.n):
        conj = tbl.mul[tbl.mul[tbl.inv[x], midx], x]
        if not member[conj].all():
            return False
    return True


def normal_closure(spec: GroupSpec, gens) -> SubgroupHandle:
    """Smallest normal subgroup containing the given elements."""
    tbl = table_for(spec)
    seed = set()
    for g in gens:
        gi = tbl.index[g]
        seed.update(int(tbl.mul[tbl.mul[tbl.inv[x], gi], x]) for x in range(tbl.n))
    idx = tbl.close(sorted(seed))
    # conjugates of a subgroup generated by a conjugation-closed set stay inside
    return _handle_from_indices(spec, idx, tuple(g for g in gens))
