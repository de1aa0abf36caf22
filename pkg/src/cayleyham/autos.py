"""Isomorphism testing and automorphism enumeration by image backtracking."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .groups import (
    GroupError,
    GroupTable,
    derived_subgroup,
    group_order,
    table_for,
)

AUT_ENUMERATION_LIMIT = 60_000


class TooManyAutomorphisms(GroupError):
    """Raised when automorphism enumeration exceeds its budget."""


def centralizer_sizes(tbl: GroupTable) -> np.ndarray:
    """|C_G(x)| for every element index x."""
    mul = np.asarray(tbl.mul)
    return (mul == mul.T).sum(axis=1)


def _bucket_keys(tbl: GroupTable):
    cent = centralizer_sizes(tbl)
    return [(int(tbl.order[i]), int(cent[i])) for i in range(tbl.n)]


@lru_cache(maxsize=None)
def fingerprint(spec) -> tuple:
    """Cheap isomorphism invariants: order profile, |Z|, |G'|, abelianization."""
    tbl = table_for(spec)
    orders = sorted(int(o) for o in tbl.order)
    cents = sorted(int(c) for c in centralizer_sizes(tbl))
    center_size = sum(1 for c in cents if c == tbl.n)
    der = derived_subgroup(spec)
    ab = _abelianization_profile(spec, der)
    return (tbl.n, tuple(orders), tuple(cents), center_size, der.order, ab)


def _abelianization_profile(spec, der) -> tuple:
    from .quotient import make_quotient  # local to avoid an import cycle

    ctx = make_quotient(spec, der)
    qmul = ctx.quotient_mult
    k = ctx.num_cosets
    orders = []
    for i in range(k):
        cur, m = i, 1
        while cur != 0:
            cur = int(qmul[cur, i])
            m += 1
        orders.append(m)
    return tuple(sorted(orders))


def _generating_sequence(tbl: GroupTable, keys) -> list:
    """Greedy generator indices, rarest image-bucket first."""
    counts = {}
    for key in keys:
        counts[key] = counts.get(key, 0) + 1
    seq = []
    members = {0}
    while len(members) < tbl.n:
        best = min(
            (x for x in range(tbl.n) if x not in members),
            key=lambda x: (counts[keys[x]], -int(tbl.order[x]), x),
        )
        seq.append(best)
        members = set(int(i) for i in tbl.close(seq))
    return seq


def _extend_partial(A, B, n, gens, imgs):
    """Partial map on ⟨gens⟩ from generator images, or None on conflict."""
    perm = [-1] * n
    perm[0] = 0
    used = bytearray(n)
    used[0] = 1
    queue = [0]
    qi = 0
    while qi < len(queue):
        x = queue[qi]
        qi += 1
        fx = perm[x]
        rowx, rowfx = A[x], B[fx]
        for g, h in zip(gens, imgs):
            y = rowx[g]
            fy = rowfx[h]
            py = perm[y]
            if py < 0:
                if used[fy]:
                    return None
                perm[y] = fy
                used[fy] = 1
                queue.append(y)
            elif py != fy:
                return None
    return perm


def _isomorphisms(tbl_a: GroupTable, tbl_b: GroupTable, limit=None):
    """Yield full isomorphism permutations (index arrays) a → b."""
    if tbl_a.n != tbl_b.n:
        return
    keys_a = _bucket_keys(tbl_a)
    keys_b = _bucket_keys(tbl_b)
    if sorted(keys_a) != sorted(keys_b):
        return
    by_key = {}
    for y, key in enumerate(keys_b):
        by_key.setdefault(key, []).append(y)
    gens = _generating_sequence(tbl_a, keys_a)
    A = tbl_a.mul.tolist()
    B = tbl_b.mul.tolist()
    n = tbl_a.n
    mul_a = np.asarray(tbl_a.mul)
    mul_b = np.asarray(tbl_b.mul)
    found = 0
    imgs = []

    def descend(level):
        nonlocal found
        if level == len(gens):
            perm = np.asarray(_extend_partial(A, B, n, gens, imgs), dtype=np.int64)
            if (perm[mul_a] == mul_b[perm][:, perm]).all():
                found += 1
                if limit is not None and found > limit:
                    raise TooManyAutomorphisms(f"more than {limit} maps")
                yield perm
            return
        for cand in by_key[keys_a[gens[level]]]:
            imgs.append(cand)
            if _extend_partial(A, B, n, gens, imgs) is not None:
                yield from descend(level + 1)
            imgs.pop()

    yield from descend(0)


def find_isomorphism(spec_a, spec_b):
    """Element map G_a → G_b as a dict, or None."""
    if group_order(spec_a) != group_order(spec_b):
        return None
    if fingerprint(spec_a) != fingerprint(spec_b):
        return None
    tbl_a, tbl_b = table_for(spec_a), table_for(spec_b)
    for perm in _isomorphisms(tbl_a, tbl_b):
        return {tbl_a.elements[i]: tbl_b.elements[int(perm[i])] for i in range(tbl_a.n)}
    return None


def is_isomorphic(spec_a, spec_b) -> bool:
    return find_isomorphism(spec_a, spec_b) is not None


@lru_cache(maxsize=None)
def automorphism_group(spec, limit: int = AUT_ENUMERATION_LIMIT):
    """All automorphism permutations, or None when more than limit exist."""
    tbl = table_for(spec)
    out = []
    try:
        for perm in _isomorphisms(tbl, tbl, limit=limit):
            out.append(perm)
    except TooManyAutomorphisms:
        return None
    return tuple(out)


@lru_cache(maxsize=None)
def inner_automorphisms(spec):
    """Distinct conjugation permutations x ↦ g⁻¹xg."""
    tbl = table_for(spec)
    mul = np.asarray(tbl.mul)
    seen = set()
    out = []
    for g in range(tbl.n):
        perm = mul[mul[int(tbl.inv[g])], g]
        key = perm.tobytes()
        if key not in seen:
            seen.add(key)
            out.append(perm.astype(np.int64))
    return tuple(out)
