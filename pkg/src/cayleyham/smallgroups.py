"""Catalog of all isomorphism classes of groups of order at most 16."""

from __future__ import annotations

from functools import lru_cache

from .groups import (
    Cyclic,
    Dihedral,
    DirectProduct,
    GroupError,
    ImagesAction,
    Semidirect,
    UnitAction,
    identity,
    multiply,
    table_group,
)

GROUP_COUNTS = {
    1: 1, 2: 1, 3: 1, 4: 2, 5: 1, 6: 2, 7: 1, 8: 5,
    9: 2, 10: 2, 11: 1, 12: 5, 13: 1, 14: 2, 15: 1, 16: 14,
}


def dicyclic(n: int):
    """Dicyclic group of order 4n: ⟨a,b | a^{2n}=e, b²=aⁿ, b⁻¹ab=a⁻¹⟩."""
    if n < 2:
        raise GroupError("dicyclic needs n >= 2")
    m = 2 * n
    elems = [(k, e) for e in (0, 1) for k in range(m)]

    def mul(x, y):
        k, e = x
        l, f = y
        if e == 0:
            return ((k + l) % m, f)
        if f == 0:
            return ((k - l) % m, 1)
        return ((k - l + n) % m, 0)

    idx = {g: i for i, g in enumerate(elems)}
    rows = [[idx[mul(x, y)] for y in elems] for x in elems]
    return table_group(f"Dic{n}", rows)


def _central_product_d8_z4():
    """(D8 x Z4) / ⟨(r², 2)⟩ — the order-16 central product."""
    d8 = Dihedral(8)
    base = DirectProduct((d8, Cyclic(4)))
    kernel = {(identity(d8), 0), ((0, 2), 2)}
    cosets = {}
    reps = []
    from .groups import enumerate_elements

    for g in enumerate_elements(base):
        coset = frozenset(multiply(base, g, z) for z in kernel)
        if coset not in cosets:
            cosets[coset] = len(reps)
            reps.append(g)
    reps.sort(key=lambda g: 0 if g == identity(base) else 1)
    coset_of = {}
    for i, r in enumerate(reps):
        for z in kernel:
            coset_of[multiply(base, r, z)] = i
    rows = [[coset_of[multiply(base, a, b)] for b in reps] for a in reps]
    return table_group("D8oZ4", rows)


def _z2(k: int):
    return DirectProduct(tuple(Cyclic(2) for _ in range(k)))


@lru_cache(maxsize=None)
def small_groups(order: int) -> tuple:
    """One spec per isomorphism class of the given order (order ≤ 16)."""
    z = Cyclic
    d = Dihedral
    dp = DirectProduct
    if order not in GROUP_COUNTS:
        raise GroupError("small-group catalog covers orders 1..16 only")
    table = {
        1: [z(1)],
        2: [z(2)],
        3: [z(3)],
        4: [z(4), _z2(2)],
        5: [z(5)],
        6: [z(6), d(6)],
        7: [z(7)],
        8: [z(8), dp((z(4), z(2))), _z2(3), d(8), dicyclic(2)],
        9: [z(9), dp((z(3), z(3)))],
        10: [z(10), d(10)],
        11: [z(11)],
        12: [
            z(12),
            dp((z(6), z(2))),
            d(12),
            _alternating4(),
            Semidirect(z(4), z(3), UnitAction((2,))),
        ],
        13: [z(13)],
        14: [z(14), d(14)],
        15: [z(15)],
        16: [
            z(16),
            dp((z(4), z(4))),
            dp((z(8), z(2))),
            dp((z(4), _z2(2))),
            _z2(4),
            d(16),
            dicyclic(4),
            Semidirect(z(2), z(8), UnitAction((3,))),
            Semidirect(z(2), z(8), UnitAction((5,))),
            Semidirect(z(4), z(4), UnitAction((3,))),
            Semidirect(z(4), _z2(2), ImagesAction((((0, 1), (1, 0)),))),
            dp((d(8), z(2))),
            dp((dicyclic(2), z(2))),
            _central_product_d8_z4(),
        ],
    }
    specs = table[order]
    assert len(specs) == GROUP_COUNTS[order]
    return tuple(specs)


def _alternating4():
    """Even permutations of 4 points: (Z2 x Z2) ⋊ Z3 cycling the involutions."""
    return Semidirect(
        Cyclic(3),
        _z2(2),
        ImagesAction((((0, 1), (1, 1)),)),
    )


def all_small_groups(max_order: int = 16) -> list:
    """(order, spec) pairs for every class of order 2..max_order."""
    out = []
    for n in range(2, max_order + 1):
        for spec in small_groups(n):
            out.append((n, spec))
    return out
