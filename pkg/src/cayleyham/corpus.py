"""Bundled cycle certificates and the catalog of order-150 groups."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from itertools import product

from .autos import fingerprint, is_isomorphic
from .certs import Certificate, parse_certificate
from .groups import (
    Cyclic,
    Dihedral,
    DirectProduct,
    GroupError,
    MatrixAction,
    Semidirect,
    UnitAction,
    center,
    derived_subgroup,
    group_order,
)
from .spectext import format_group_spec

# ---------------------------------------------------------------------------
# bundled certificates


@lru_cache(maxsize=None)
def load_corpus() -> tuple:
    """All bundled certificates, sorted by figure id."""
    root = resources.files("cayleyham").joinpath("data/corpus")
    certs = []
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".cert"):
            certs.append(parse_certificate(entry.read_text()))
    if not certs:
        raise GroupError("certificate corpus is empty")
    return tuple(sorted(certs, key=lambda c: c.figure_id or ""))


@dataclass(frozen=True)
class LintReport:
    """Outcome of checking one certificate against its own annotations."""

    figure: str
    ok: bool
    problems: tuple


def lint_certificate(cert: Certificate) -> LintReport:
    """Re-verify a certificate and its waypoint annotations."""
    problems = []
    n = group_order(cert.spec)
    if len(cert.walk.tokens) != n:
        problems.append(f"walk has {len(cert.walk.tokens)} tokens, group has order {n}")
    report = cert.verify()
    if not report.ok:
        problems.append(f"cycle check failed: {report.first_violation}")
    for step, expected, actual in cert.check_expects():
        problems.append(f"waypoint {step}: expected {expected}, walk reaches {actual}")
    if not cert.expects:
        problems.append("certificate carries no waypoint annotations")
    return LintReport(cert.figure_id or "<unnamed>", not problems, tuple(problems))


def lint_corpus(certs=None) -> list:
    """Lint every bundled certificate (or an explicit list)."""
    if certs is None:
        certs = load_corpus()
    return [lint_certificate(c) for c in certs]


# ---------------------------------------------------------------------------
# split-extension classification for order 150

_Z6 = Cyclic(6)
_S3 = Dihedral(6)
_Z25 = Cyclic(25)
_Z5SQ = DirectProduct((Cyclic(5), Cyclic(5)))


def _mat_mul(a, b, p):
    return (
        ((a[0][0] * b[0][0] + a[0][1] * b[1][0]) % p,
         (a[0][0] * b[0][1] + a[0][1] * b[1][1]) % p),
        ((a[1][0] * b[0][0] + a[1][1] * b[1][0]) % p,
         (a[1][0] * b[0][1] + a[1][1] * b[1][1]) % p),
    )


def _mat_pow(a, e, p):
    out = ((1, 0), (0, 1))
    for _ in range(e):
        out = _mat_mul(out, a, p)
    return out


def _mat_inv(a, p):
    det = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) % p
    d = pow(det, -1, p)
    return (
        ((a[1][1] * d) % p, (-a[0][1] * d) % p),
        ((-a[1][0] * d) % p, (a[0][0] * d) % p),
    )


@lru_cache(maxsize=None)
def _gl2(p) -> tuple:
    return tuple(
        ((a, b), (c, d))
        for a, b, c, d in product(range(p), repeat=4)
        if (a * d - b * c) % p
    )


_ID2 = ((1, 0), (0, 1))


@dataclass(frozen=True)
class ActionClass:
    """One equivalence class of actions H -> Aut(P) for a split extension."""

    acting: object
    acted: object
    action: object
    hom_count: int

    def spec(self) -> Semidirect:
        return Semidirect(self.acting, self.acted, self.action)


def _unit_homs(acting, n):
    """All actions of Z6 or S3 on Z_n, as unit tuples."""
    units = [u for u in range(1, n) if _coprime(u, n)]
    if acting == _Z6:
        return [(u,) for u in units if pow(u, 6, n) == 1]
    if acting == _S3:
        out = []
        for a in units:
            for b in units:
                if pow(a, 2, n) == 1 and pow(b, 3, n) == 1:
                    if (a * b * a) % n == _unit_inv(b, n):
                        out.append((a, b))
        return out
    raise GroupError(f"unsupported acting group {acting!r}")


def _coprime(a, b):
    while b:
        a, b = b, a % b
    return a == 1


def _unit_inv(b, n):
    return pow(b, -1, n)


def _matrix_homs(acting, p):
    """All actions of Z6 or S3 on (Z_p)^2, as matrix tuples."""
    gl = _gl2(p)
    if acting == _Z6:
        return [(a,) for a in gl if _mat_pow(a, 6, p) == _ID2]
    if acting == _S3:
        invol = [f for f in gl if _mat_mul(f, f, p) == _ID2]
        cubes = [t for t in gl if _mat_pow(t, 3, p) == _ID2]
        out = []
        for f in invol:
            for t in cubes:
                if _mat_mul(_mat_mul(f, t, p), f, p) == _mat_inv(t, p):
                    out.append((f, t))
        return out
    raise GroupError(f"unsupported acting group {acting!r}")


def _acting_twists(acting, compose, invert):
    """Generator-image rewrites induced by Aut(acting group)."""
    if acting == _Z6:
        return [lambda imgs: imgs, lambda imgs: (invert(imgs[0]),)]
    if acting == _S3:
        twists = []
        for k in (0, 1, 2):
            for j in (1, 2):
                def tw(imgs, k=k, j=j):
                    f, t = imgs
                    nf = f
                    for _ in range(k):
                        nf = compose(nf, t)
                    nt = t if j == 1 else compose(t, t)
                    return (nf, nt)
                twists.append(tw)
        return twists
    raise GroupError(f"unsupported acting group {acting!r}")


def _classify(acting, homs, conjugators, compose, invert, conj):
    """Group homs into orbits under Aut(P)-conjugacy and Aut(H)-twists."""
    twists = _acting_twists(acting, compose, invert)
    canon = {}
    for hom in homs:
        orbit = set()
        for q in conjugators:
            base = tuple(conj(img, q) for img in hom)
            for tw in twists:
                orbit.add(tw(base))
        canon[hom] = min(orbit)
    classes = {}
    for hom, key in canon.items():
        classes.setdefault(key, []).append(hom)
    return [(key, len(members)) for key, members in sorted(classes.items())]


@lru_cache(maxsize=None)
def classify_split_actions() -> tuple:
    """Equivalence classes of actions for every split extension shape of order 150."""
    out = []
    for acting in (_Z6, _S3):
        homs = _unit_homs(acting, 25)
        classes = _classify(
            acting, homs, conjugators=[1],
            compose=lambda a, b: (a * b) % 25,
            invert=lambda a: _unit_inv(a, 25),
            conj=lambda img, q: img,
        )
        for key, count in classes:
            out.append(ActionClass(acting, _Z25, UnitAction(key), count))
    gl = _gl2(5)
    for acting in (_Z6, _S3):
        homs = _matrix_homs(acting, 5)
        classes = _classify(
            acting, homs, conjugators=gl,
            compose=lambda a, b: _mat_mul(a, b, 5),
            invert=lambda a: _mat_inv(a, 5),
            conj=lambda img, q: _mat_mul(_mat_mul(_mat_inv(q, 5), img, 5), q, 5),
        )
        for key, count in classes:
            out.append(ActionClass(acting, _Z5SQ, MatrixAction(5, key), count))
    return tuple(out)


# ---------------------------------------------------------------------------
# the catalog


@dataclass(frozen=True)
class GroupCatalogEntry:
    """One isomorphism class, with the invariants used to separate it."""

    name: str
    spec: object
    center_order: int
    derived_order: int
    order_profile: tuple  # sorted (element order, count) pairs

    @property
    def abelian(self) -> bool:
        return self.derived_order == 1


def _profile(spec) -> tuple:
    orders = fingerprint(spec)[1]
    out = []
    for o in orders:
        if out and out[-1][0] == o:
            out[-1] = (o, out[-1][1] + 1)
        else:
            out.append((o, 1))
    return tuple(out)


def _entry(spec) -> GroupCatalogEntry:
    return GroupCatalogEntry(
        name=format_group_spec(spec),
        spec=spec,
        center_order=center(spec).order,
        derived_order=derived_subgroup(spec).order,
        order_profile=_profile(spec),
    )


@lru_cache(maxsize=None)
def enumerate_groups(order: int) -> tuple:
    """Representatives of every isomorphism class of the given order."""
    if order != 150:
        raise GroupError("group enumeration is implemented for order 150 only")
    reps = []
    for cls in classify_split_actions():
        spec = cls.spec()
        fp = fingerprint(spec)
        if not any(fingerprint(r) == fp and is_isomorphic(spec, r) for r in reps):
            reps.append(spec)
    entries = [_entry(s) for s in reps]
    entries.sort(key=lambda e: (e.derived_order, -e.center_order, e.name))
    return tuple(entries)


def catalog_lookup(spec) -> GroupCatalogEntry:
    """The catalog entry isomorphic to the given order-150 group."""
    n = group_order(spec)
    for entry in enumerate_groups(n):
        if fingerprint(entry.spec) == fingerprint(spec) and is_isomorphic(spec, entry.spec):
            return entry
    raise GroupError(f"no catalog entry matches {format_group_spec(spec)}")
