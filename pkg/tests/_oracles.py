"""Independent reference implementations the tests check the package against.

Everything here is deliberately naive: plain-python closures, unpruned
depth-first search, and a from-scratch classification of the order-150 split
extensions.  Shared production code is limited to the group arithmetic under
test where the point of the oracle is cross-checking a *different* layer.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

from cayleyham.groups import (
    Cyclic,
    Dihedral,
    DirectProduct,
    Semidirect,
    UnitAction,
    ImagesAction,
    enumerate_elements,
    generated_subgroup,
    identity,
    inverse,
    multiply,
    table_group,
)
from cayleyham.quotient import make_quotient


# ---------------------------------------------------------------------------
# naive hamiltonicity


def cycle_exists_naive(adjacency) -> bool:
    """Unpruned DFS over all vertex orderings starting at 0."""
    n = len(adjacency)
    if n == 1:
        return True
    adj = [frozenset(row) for row in adjacency]
    visited = [False] * n
    visited[0] = True

    def grow(v, count):
        if count == n:
            return 0 in adj[v]
        for w in adjacency[v]:
            if not visited[w]:
                visited[w] = True
                if grow(w, count + 1):
                    return True
                visited[w] = False
        return False

    return grow(0, 1)


def path_exists_naive(adjacency, start: int, goal: int) -> bool:
    """Unpruned DFS for a hamiltonian path from start to goal."""
    n = len(adjacency)
    visited = [False] * n
    visited[start] = True

    def grow(v, count):
        if count == n:
            return v == goal
        for w in adjacency[v]:
            if not visited[w] and (w != goal or count == n - 1):
                visited[w] = True
                if grow(w, count + 1):
                    return True
                visited[w] = False
        return False

    return grow(start, 1)


# ---------------------------------------------------------------------------
# permutation representation and slow closure


def left_regular(spec):
    """Map g -> left-multiplication permutation of the element list."""
    elements = enumerate_elements(spec)
    index = {el: i for i, el in enumerate(elements)}
    return {
        g: tuple(index[multiply(spec, g, h)] for h in elements)
        for g in elements
    }, elements


def closure_naive(spec, gens) -> frozenset:
    """Subgroup closure by repeated multiplication, no tables."""
    out = {identity(spec)}
    frontier = list(out)
    step = list(gens) + [inverse(spec, g) for g in gens]
    while frontier:
        cur = frontier.pop()
        for s in step:
            nxt = multiply(spec, cur, s)
            if nxt not in out:
                out.add(nxt)
                frontier.append(nxt)
    return frozenset(out)


# ---------------------------------------------------------------------------
# small-group zoo: every group of order <= 16, one spec per class


def _q8_table():
    # unit quaternions 1, -1, i, -i, j, -j, k, -k as indices 0..7
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    sign = {n: (-1 if n.startswith("-") else 1) for n in names}
    base = {n: n.lstrip("-") for n in names}
    rules = {("1", "1"): ("1", 1), ("i", "i"): ("1", -1), ("j", "j"): ("1", -1),
             ("k", "k"): ("1", -1), ("i", "j"): ("k", 1), ("j", "i"): ("k", -1),
             ("j", "k"): ("i", 1), ("k", "j"): ("i", -1), ("k", "i"): ("j", 1),
             ("i", "k"): ("j", -1)}
    for b in ("i", "j", "k"):
        rules[("1", b)] = (b, 1)
        rules[(b, "1")] = (b, 1)

    def mul(a, b):
        unit, s = rules[(base[a], base[b])]
        s *= sign[a] * sign[b]
        return names.index(unit if s == 1 else "-" + unit)

    return [[mul(a, b) for b in names] for a in names]


def _q16_table():
    # a^8 = e, b^2 = a^4, b a b^-1 = a^-1; elements a^r b^f
    def mul(x, y):
        r1, f1 = x
        r2, f2 = y
        r = ((-r1 if f2 else r1) + r2) % 8
        if f1 and f2:
            return ((r + 4) % 8, 0)
        return (r, f1 ^ f2)

    els = [(r, f) for f in (0, 1) for r in range(8)]
    return [[els.index(mul(x, y)) for y in els] for x in els]


@lru_cache(maxsize=1)
def small_group_zoo() -> tuple:
    """(name, spec) for one representative of every group of order <= 16."""
    q8 = table_group("Q8", _q8_table())
    z2 = Cyclic(2)
    zoo = [
        ("Z1", Cyclic(1)), ("Z2", z2), ("Z3", Cyclic(3)),
        ("Z4", Cyclic(4)), ("Z2xZ2", DirectProduct((z2, z2))),
        ("Z5", Cyclic(5)), ("Z6", Cyclic(6)), ("D6", Dihedral(6)),
        ("Z7", Cyclic(7)),
        ("Z8", Cyclic(8)), ("Z4xZ2", DirectProduct((Cyclic(4), z2))),
        ("Z2^3", DirectProduct((z2, z2, z2))), ("D8", Dihedral(8)), ("Q8", q8),
        ("Z9", Cyclic(9)), ("Z3xZ3", DirectProduct((Cyclic(3), Cyclic(3)))),
        ("Z10", Cyclic(10)), ("D10", Dihedral(10)),
        ("Z11", Cyclic(11)),
        ("Z12", Cyclic(12)), ("Z6xZ2", DirectProduct((Cyclic(6), z2))),
        ("D12", Dihedral(12)),
        ("Dic3", Semidirect(Cyclic(4), Cyclic(3), UnitAction((2,)))),
        ("A4", Semidirect(Cyclic(3), DirectProduct((z2, z2)),
                          ImagesAction((((0, 1), (1, 1)),)))),
        ("Z13", Cyclic(13)),
        ("Z14", Cyclic(14)), ("D14", Dihedral(14)),
        ("Z15", Cyclic(15)),
        ("Z16", Cyclic(16)), ("Z4xZ4", DirectProduct((Cyclic(4), Cyclic(4)))),
        ("Z8xZ2", DirectProduct((Cyclic(8), z2))),
        ("Z4xZ2^2", DirectProduct((Cyclic(4), z2, z2))),
        ("Z2^4", DirectProduct((z2, z2, z2, z2))),
        ("D16", Dihedral(16)),
        ("SD16", Semidirect(z2, Cyclic(8), UnitAction((3,)))),
        ("M16", Semidirect(z2, Cyclic(8), UnitAction((5,)))),
        ("D8xZ2", DirectProduct((Dihedral(8), z2))),
        ("Q8xZ2", DirectProduct((q8, z2))),
        ("Q16", table_group("Q16", _q16_table())),
        ("Z4sZ4", Semidirect(Cyclic(4), Cyclic(4), UnitAction((3,)))),
        ("Z2^2sZ4", Semidirect(Cyclic(4), DirectProduct((z2, z2)),
                               ImagesAction((((0, 1), (1, 0)),)))),
        ("PauliD8Z4", _central_product_d8_z4()),
    ]
    return tuple(zoo)


def _central_product_d8_z4():
    q8 = table_group("Q8c", _q8_table())
    amb = DirectProduct((q8, Cyclic(4)))
    sub = generated_subgroup(amb, [(1, 2)])  # (-1, z^2), central of order 2
    ctx = make_quotient(amb, sub)
    return table_group("D8oZ4", [[int(x) for x in row] for row in ctx.quotient_mult])


def inverse_closed_generating_sets(spec):
    """Every inverse-closed generating subset (no identity), one per edge set."""
    from cayleyham.groups import table_for

    tbl = table_for(spec)
    n = tbl.n
    orbits = []
    seen = set()
    for i in range(1, n):
        if i in seen:
            continue
        j = int(tbl.inv[i])
        orbits.append((i,) if j == i else (i, j))
        seen.update({i, j})
    m = len(orbits)
    for mask in range(1, 1 << m):
        idxs = []
        for b in range(m):
            if mask >> b & 1:
                idxs.extend(orbits[b])
        if len(tbl.close(idxs)) == n:
            yield tuple(tbl.elements[i] for i in idxs)


# ---------------------------------------------------------------------------
# independent classification of the order-150 split extensions


def _units(n):
    from math import gcd

    return [u for u in range(1, n) if gcd(u, n) == 1]


def _gl2(p):
    out = []
    for a, b, c, d in product(range(p), repeat=4):
        if (a * d - b * c) % p:
            out.append(((a, b), (c, d)))
    return out


def _mmul(x, y, p):
    return tuple(
        tuple(sum(x[i][k] * y[k][j] for k in range(2)) % p for j in range(2))
        for i in range(2))


def _morder(m, p):
    ident = ((1, 0), (0, 1))
    cur, k = m, 1
    while cur != ident:
        cur = _mmul(cur, m, p)
        k += 1
    return k


def independent_action_classes():
    """Split extensions H |x P classified from scratch; returns per-family lists.

    H in {Z6, S3}, P in {Z25, Z5xZ5}.  A Z6-action is the image of the
    generator (order dividing 6); an S3-action is an (image of f, image of t)
    pair satisfying the S3 relations.  Classification is up to conjugation in
    Aut(P) and precomposition with Aut(H).
    """
    u25 = _units(25)

    def u25_mul(a, b):
        return a * b % 25

    def u25_ord(a):
        k, cur = 1, a
        while cur != 1:
            cur = cur * a % 25
            k += 1
        return k

    gl = _gl2(5)

    def gl_mul(a, b):
        return _mmul(a, b, 5)

    def gl_ord(a):
        return _morder(a, 5)

    families = {}
    for pname, aut, mul, order, ident in (
        ("Z25", u25, u25_mul, u25_ord, 1),
        ("Z5^2", gl, gl_mul, gl_ord, ((1, 0), (0, 1))),
    ):
        inv = {}
        for a in aut:
            for b in aut:
                if mul(a, b) == ident:
                    inv[a] = b
                    break

        def conj(x, g, mul=mul, inv=inv):
            return mul(mul(inv[g], x), g)

        # H = Z6: one image of order dividing 6, up to conjugacy and the
        # generator swap x -> x^-1 (Aut(Z6) = {1, -1})
        z6_homs = [a for a in aut if order(a) in (1, 2, 3, 6)]
        z6_classes = []
        left = set(z6_homs)
        while left:
            rep = left.pop()
            orbit = {conj(rep, g) for g in aut} | {conj(inv[rep], g) for g in aut}
            left -= orbit
            z6_classes.append(rep)
        # H = S3: pairs (F, T) with F^2 = T^3 = id, F T F = T^-1, up to
        # conjugacy and precomposition with Aut(S3) = Inn(S3)
        s3_homs = []
        for f in aut:
            if order(f) not in (1, 2):
                continue
            for t in aut:
                if order(t) in (1, 3) and mul(mul(f, t), f) == inv[t]:
                    s3_homs.append((f, t))

        def s3_orbit(pair):
            f0, t0 = pair
            out = set()
            for g in aut:
                f1, t1 = conj(f0, g), conj(t0, g)
                # Inn(S3) sends (f, t) to conjugates by words in f, t
                reach = {(f1, t1)}
                frontier = [(f1, t1)]
                while frontier:
                    fa, ta = frontier.pop()
                    for w in (fa, ta):
                        nxt = (conj(fa, w), conj(ta, w))
                        if nxt not in reach:
                            reach.add(nxt)
                            frontier.append(nxt)
                out |= reach
            return out

        s3_classes = []
        left = set(s3_homs)
        while left:
            rep = next(iter(left))
            left -= s3_orbit(rep)
            s3_classes.append(rep)
        families[pname] = {
            "Z6_hom_count": len(z6_homs), "Z6_classes": z6_classes,
            "S3_hom_count": len(s3_homs), "S3_classes": s3_classes,
        }
    return families


def independent_order150_profiles():
    """Invariant profile of every independently classified split extension.

    Builds each H |x P multiplication from scratch (tuples and modular
    arithmetic only) and profiles it by element orders, center size, and
    derived-subgroup size.
    """
    fams = independent_action_classes()
    profiles = []

    def profile(els, mul, ident):
        inv = {}
        for g in els:
            for h in els:
                if mul(g, h) == ident:
                    inv[g] = h
                    break
        orders = []
        for g in els:
            k, cur = 1, g
            while cur != ident:
                cur = mul(cur, g)
                k += 1
            orders.append(k)
        cen = sum(1 for g in els if all(mul(g, h) == mul(h, g) for h in els))
        comms = {mul(mul(inv[g], inv[h]), mul(g, h)) for g in els for h in els}
        der = {ident}
        frontier = [ident]
        while frontier:
            cur = frontier.pop()
            for c in comms:
                nxt = mul(cur, c)
                if nxt not in der:
                    der.add(nxt)
                    frontier.append(nxt)
        counts = {}
        for k in orders:
            counts[k] = counts.get(k, 0) + 1
        return (tuple(sorted(counts.items())), cen, len(der))

    # P = Z25 families: elements (h, v), action through a unit power u^h
    for hname in ("Z6", "S3"):
        for act in fams["Z25"][f"{hname}_classes"]:
            if hname == "Z6":
                els = [(h, v) for h in range(6) for v in range(25)]

                def mul(x, y, u=act):
                    return ((x[0] + y[0]) % 6, (x[1] * pow(u, y[0], 25) + y[1]) % 25)

                ident = (0, 0)
            else:
                f_img, t_img = act
                s3 = [(s, r) for s in range(2) for r in range(3)]

                def s3mul(a, b):
                    return ((a[0] + b[0]) % 2, ((-a[1] if b[0] else a[1]) + b[1]) % 3)

                def act_of(h, f_img=f_img, t_img=t_img):
                    out = f_img if h[0] else 1
                    for _ in range(h[1]):
                        out = out * t_img % 25
                    return out

                els = [(h, v) for h in s3 for v in range(25)]

                def mul(x, y, s3mul=s3mul, act_of=act_of):
                    return (s3mul(x[0], y[0]), (x[1] * act_of(y[0]) + y[1]) % 25)

                ident = ((0, 0), 0)
            profiles.append((f"{hname} on Z25", profile(els, mul, ident)))

    # P = Z5^2 families: elements (h, (v0, v1)), row vector times matrix
    def vm(v, m):
        return ((v[0] * m[0][0] + v[1] * m[1][0]) % 5,
                (v[0] * m[0][1] + v[1] * m[1][1]) % 5)

    vecs = [(a, b) for a in range(5) for b in range(5)]
    for hname in ("Z6", "S3"):
        for act in fams["Z5^2"][f"{hname}_classes"]:
            if hname == "Z6":
                els = [(h, v) for h in range(6) for v in vecs]

                def mul(x, y, m=act):
                    cur = x[1]
                    for _ in range(y[0]):
                        cur = vm(cur, m)
                    return ((x[0] + y[0]) % 6,
                            ((cur[0] + y[1][0]) % 5, (cur[1] + y[1][1]) % 5))

                ident = (0, (0, 0))
            else:
                f_img, t_img = act

                def s3mul(a, b):
                    return ((a[0] + b[0]) % 2, ((-a[1] if b[0] else a[1]) + b[1]) % 3)

                def act_of(h, f_img=f_img, t_img=t_img):
                    out = f_img if h[0] else ((1, 0), (0, 1))
                    for _ in range(h[1]):
                        out = _mmul(out, t_img, 5)
                    return out

                els = [(h, v) for h in
                       [(s, r) for s in range(2) for r in range(3)] for v in vecs]

                def mul(x, y, s3mul=s3mul, act_of=act_of):
                    cur = vm(x[1], act_of(y[0]))
                    return (s3mul(x[0], y[0]),
                            ((cur[0] + y[1][0]) % 5, (cur[1] + y[1][1]) % 5))

                ident = ((0, 0), (0, 0))
            profiles.append((f"{hname} on Z5^2", profile(els, mul, ident)))
    return profiles
