"""Case analysis, parametric walk families, and the order-150 hamiltonicity sweep."""

from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .autos import automorphism_group, find_isomorphism
from .cayley import GeneratorSet, build_cayley, generator_set, token_text
from .certs import Certificate, emit_certificate, make_certificate
from .corpus import enumerate_groups, load_corpus
from .groups import (
    Cyclic,
    Dihedral,
    DirectProduct,
    Element,
    GroupError,
    GroupSpec,
    Semidirect,
    UnitAction,
    center,
    derived_subgroup,
    generated_subgroup,
    group_order,
    identity,
    inverse,
    is_generating,
    is_minimal_generating,
    multiply,
    sylow_subgroup,
    table_for,
    table_group,
)
from .hamilton import (
    BudgetExceeded,
    Walk,
    atoms,
    concat,
    find_hamiltonian_cycle,
    find_hamiltonian_path,
    flatten,
    power,
    reversed_inverse_tokens,
)
from .quotient import (
    LiftRefused,
    double_edge_lift,
    fgl_lift,
    make_quotient,
    verify_quotient_cycle,
    voltage,
)
from .spectext import PRESETS, Z5SQ, format_element, format_group_spec, parse_group_spec


class StrategyError(GroupError):
    """Internal inconsistency in the case analysis; never silently swallowed."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# strategy parameters


@dataclass(frozen=True)
class StrategyParams:
    """Parameter bundle consumed by the registered walk families.

    p, q, r are primes; i, j, k, ell, lam are small integers (lam in {0,1,2});
    eps is a sign; d is a residue mod p whose multiplicative order, when
    declared via d_order, is validated exactly.  The element slots bind roles
    to concrete group elements; L carries a prebuilt token sequence and closer
    names the generator that stitches passes of such a sequence together.
    """

    p: Optional[int] = None
    q: Optional[int] = None
    r: Optional[int] = None
    i: Optional[int] = None
    j: Optional[int] = None
    k: Optional[int] = None
    ell: Optional[int] = None
    lam: Optional[int] = None
    eps: Optional[int] = None
    d: Optional[int] = None
    d_order: Optional[int] = None
    a: Optional[Element] = None
    b: Optional[Element] = None
    c: Optional[Element] = None
    s: Optional[Element] = None
    v: Optional[Element] = None
    w: Optional[Element] = None
    z: Optional[Element] = None
    t0: Optional[Element] = None
    L: Optional[tuple] = None
    closer: Optional[str] = None

    def __post_init__(self):
        for name in ("p", "q", "r"):
            val = getattr(self, name)
            if val is not None and not _is_prime(val):
                raise StrategyError(f"parameter {name} must be prime, got {val}")
        if self.lam is not None and self.lam not in (0, 1, 2):
            raise StrategyError(f"parameter lam must lie in {{0,1,2}}, got {self.lam}")
        if self.eps is not None and self.eps not in (-1, 1):
            raise StrategyError(f"parameter eps must be +1 or -1, got {self.eps}")
        if self.d is not None:
            if self.p is None:
                raise StrategyError("parameter d needs a modulus p")
            if self.d % self.p == 0:
                raise StrategyError("parameter d must be a unit mod p")
            if self.d_order is not None:
                if pow(self.d, self.d_order, self.p) != 1:
                    raise StrategyError(
                        f"d={self.d} does not have order {self.d_order} mod {self.p}")
                for m in range(1, self.d_order):
                    if pow(self.d, m, self.p) == 1:
                        raise StrategyError(
                            f"d={self.d} has order {m} < {self.d_order} mod {self.p}")
        if self.L is not None:
            for tok in self.L:
                if not (isinstance(tok, tuple) and len(tok) == 2 and tok[1] in (1, -1)):
                    raise StrategyError(f"malformed token {tok!r} in L")

    def require(self, *names) -> None:
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise StrategyError(f"walk family needs parameters {', '.join(missing)}")


# ---------------------------------------------------------------------------
# registered walk families

def _run(name: str, sign: int, count: int) -> tuple:
    return (((name, sign),) * count)


def _band_core(q: int, r: int) -> tuple:
    ba = (("b", 1), ("a", 1)) * (q - 1)
    ab = (("a", 1), ("b", 1)) * (q - 1)
    inner = (ba + (("c", -1),) + ab + (("c", -1),)) * ((r - 1) // 2)
    return _run("c", 1, r - 1) + (("a", 1),) + inner + ba + (("b", 1),)


def _build_dihedral_band(params: StrategyParams) -> Walk:
    params.require("q", "r")
    q, r = params.q, params.r
    if r < 3:
        raise StrategyError("dihedral-band needs an odd r >= 3")
    tokens = _band_core(q, r)
    if len(tokens) != 2 * q * r:
        raise StrategyError("dihedral-band length drifted")  # pragma: no cover
    return Walk(tokens)


def _build_band_swap(params: StrategyParams) -> Walk:
    params.require("q", "r")
    q, r = params.q, params.r
    tokens = _band_core(q, r)
    ba = (("b", 1), ("a", 1)) * (q - 1)
    old = (("c", 1), ("a", 1)) + ba + (("c", -1), ("a", 1))
    new = (("b", 1), ("c", 1)) + ba + (("b", 1), ("c", -1))
    at = r - 2
    if tokens[at:at + len(old)] != old:
        raise StrategyError("band-swap splice point does not match")  # pragma: no cover
    return Walk(tokens[:at] + new + tokens[at + len(old):])


def _build_commutator_return(params: StrategyParams) -> Walk:
    params.require("r")
    r = params.r
    return Walk(_run("a", -1, r - 1) + (("b", -1),) + _run("a", 1, r - 1) + (("b", 1),))


def _build_stair_steps(params: StrategyParams) -> Walk:
    params.require("q", "r")
    key = (params.q, params.r)
    if key == (3, 5):
        tokens = ((("a", 1),) + _run("b", -1, 5)) * 4 + (("a", 1),) + _run("b", 1, 5)
    elif key == (5, 3):
        runs = [4, 1, 4, -3, -1, 2, 2, -1, -3]
        tokens = ()
        for run in runs:
            tokens += (("a", 1),) + _run("b", 1 if run > 0 else -1, abs(run))
    else:
        raise StrategyError(f"stair-steps has no shape for (q, r) = {key}")
    if len(tokens) != 2 * params.q * params.r:
        raise StrategyError("stair-steps length drifted")  # pragma: no cover
    return Walk(tokens)


def _build_braid_odd(params: StrategyParams) -> Walk:
    params.require("r", "i")
    r, i = params.r, params.i
    if i % 2 == 0 or not (1 <= i < r):
        raise StrategyError("braid-odd needs an odd i with 1 <= i < r")
    from math import gcd

    if gcd(i, 2 * r) != 1:
        raise StrategyError("braid-odd needs gcd(i, 2r) = 1")
    cross = (("a", 1), ("b", 1), ("a", -1), ("b", 1)) * ((i - 1) // 2)
    return Walk(cross + (("a", 1),) + _run("b", 1, 2 * r + 1 - 2 * i))


def _build_braid_odd_special(params: StrategyParams) -> Walk:
    params.require("q", "r", "i")
    if (params.q, params.r, params.i) != (3, 5, 3):
        raise StrategyError("braid-odd-special is only defined at (q, r, i) = (3, 5, 3)")
    return Walk(_run("a", -1, 9) + (("b", 1),)
                + _run("a", 1, 9) + (("b", 1),)
                + _run("a", 1, 9) + (("b", 1),))


def _w_core(q: int, r: int) -> tuple:
    ba = (("b", 1), ("a", 1)) * (q - 1)
    loop = (_run("c", 1, r - 2) + (("a", 1),) + _run("c", -1, r - 2) + (("b", 1),)) * (q - 1)
    return ba + (("c", 1),) + loop


def _build_w_band(params: StrategyParams) -> Walk:
    params.require("q", "r")
    q, r = params.q, params.r
    tokens = (_w_core(q, r) + _run("c", 1, r - 2) + (("a", 1),)
              + _run("c", -1, r - 1) + (("a", 1),))
    if len(tokens) != 2 * q * r:
        raise StrategyError("w-band length drifted")  # pragma: no cover
    return Walk(tokens)


def _build_w_band_long(params: StrategyParams) -> Walk:
    params.require("q", "r")
    q, r = params.q, params.r
    if r < 3:
        raise StrategyError("w-band-long needs r >= 3")
    tokens = (_w_core(q, r) + _run("c", 1, r - 3) + (("a", 1),)
              + _run("c", -1, r - 1) + (("a", 1), ("c", 1)))
    if len(tokens) != 2 * q * r:
        raise StrategyError("w-band-long length drifted")  # pragma: no cover
    return Walk(tokens)


def _build_rotor_double(params: StrategyParams) -> Walk:
    params.require("p")
    return flatten(power(concat(atoms(*_run("c", 1, 3 * params.p - 1)), atoms(("f", 1))), 2))


def _build_reflection_sandwich(params: StrategyParams) -> Walk:
    params.require("i", "j")
    i, j = params.i, params.j
    if i == 0 or j == 0 or abs(i) + abs(j) != 8:
        raise StrategyError("reflection-sandwich needs c-runs with |i| + |j| = 8")
    unit = ((("f", 1),) + _run("c", 1 if i > 0 else -1, abs(i))
            + (("s", 1),) + _run("c", 1 if j > 0 else -1, abs(j)))
    return flatten(power(atoms(*unit), 15))


def _build_doubling(params: StrategyParams) -> Walk:
    params.require("L", "closer")
    path = atoms(*params.L)
    step = atoms((params.closer, 1))
    from .hamilton import ReverseInverse

    return flatten(concat(path, step, ReverseInverse(path), step))


def _build_path_then_rotor(params: StrategyParams) -> Walk:
    params.require("L", "closer")
    return flatten(power(concat(atoms(*params.L), atoms((params.closer, 1))), 3))


def _build_path_then_mirror(params: StrategyParams) -> Walk:
    params.require("L", "closer", "eps")
    path = atoms(*params.L)
    step = atoms((params.closer, 1))
    from .hamilton import ReverseInverse

    back = ReverseInverse(path) if params.eps == 1 else path
    return flatten(concat(path, step, back, step))


WALK_REGISTRY = {
    "dihedral-band": _build_dihedral_band,
    "band-swap": _build_band_swap,
    "commutator-return": _build_commutator_return,
    "stair-steps": _build_stair_steps,
    "braid-odd": _build_braid_odd,
    "braid-odd-special": _build_braid_odd_special,
    "w-band": _build_w_band,
    "w-band-long": _build_w_band_long,
    "rotor-double": _build_rotor_double,
    "reflection-sandwich": _build_reflection_sandwich,
    "doubling": _build_doubling,
    "path-then-rotor": _build_path_then_rotor,
    "path-then-mirror": _build_path_then_mirror,
}


def build_parametric_walk(family: str, params: StrategyParams) -> Walk:
    """Flattened token sequence for a registered walk family."""
    try:
        builder = WALK_REGISTRY[family]
    except KeyError:
        raise StrategyError(f"unknown walk family {family!r}") from None
    walk = builder(params)
    if family == "braid-odd" and params.i == 1:
        expect = (("a", 1),) + _run("b", 1, 2 * params.r - 1)
        if walk.tokens != expect:
            raise StrategyError("braid-odd failed to degenerate at i = 1")  # pragma: no cover
    return walk


# ---------------------------------------------------------------------------
# ambient instantiations for the companion walk families


@dataclass(frozen=True)
class CompanionInstance:
    """A walk family bound to a concrete ambient group and normal subgroup."""

    family: str
    spec: GroupSpec
    symbols: tuple
    n_generator: Element
    params: StrategyParams


def _crt(r1: int, m1: int, r2: int, m2: int) -> int:
    for x in range(m1 * m2):
        if x % m1 == r1 and x % m2 == r2:
            return x
    raise StrategyError("no CRT solution")  # pragma: no cover


_BAND_FAMILIES = ("dihedral-band", "band-swap", "w-band", "w-band-long")


def companion_instance(family: str, *, p: int, q: Optional[int] = None,
                       r: Optional[int] = None, i: Optional[int] = None) -> CompanionInstance:
    """Ambient group, generators, and normal subgroup for a companion family."""
    if not _is_prime(p):
        raise StrategyError(f"p must be prime, got {p}")
    if family in _BAND_FAMILIES:
        if q is None or r is None:
            raise StrategyError(f"{family} needs q and r")
        spec = DirectProduct((Dihedral(2 * q * p), Cyclic(r)))
        symbols = (("a", ((1, 0), 0)), ("b", ((1, 1), 0)), ("c", ((0, q), 1)))
        return CompanionInstance(family, spec, symbols, ((0, q), 0),
                                 StrategyParams(p=p, q=q, r=r))
    if family == "commutator-return":
        if r is None:
            raise StrategyError("commutator-return needs r")
        spec = DirectProduct((Cyclic(r), Semidirect(Cyclic(2), Cyclic(p),
                                                    UnitAction((p - 1,)))))
        symbols = (("a", (1, (0, 1))), ("b", (0, (1, 0))))
        return CompanionInstance(family, spec, symbols, (0, (0, 1)),
                                 StrategyParams(p=p, r=r))
    if family == "stair-steps":
        if q is None or r is None:
            raise StrategyError("stair-steps needs q and r")
        if (q, r) == (3, 5):
            # the acting Z6 needs a unit of order 6 mod 5p: -1 mod 5, order-6 mod p
            cands = [d for d in range(2, p)
                     if pow(d, 6, p) == 1 and all(pow(d, m, p) != 1 for m in range(1, 6))]
            if not cands:
                raise StrategyError(f"no order-6 unit mod {p}; (3,5) stair undefined here")
            d = cands[0]
            u = _crt(4, 5, d, p)
            spec = Semidirect(Cyclic(6), Cyclic(5 * p), UnitAction((u,)))
            symbols = (("a", (3, 0)), ("b", (1, 1)))
            return CompanionInstance(family, spec, symbols, (0, 5),
                                     StrategyParams(p=p, q=q, r=r, d=d, d_order=6))
        if (q, r) == (5, 3):
            from math import gcd

            params = StrategyParams(p=p, q=q, r=r)
            walk = build_parametric_walk(family, params)
            for u in range(2, 3 * p):
                if u % 3 != 2 or gcd(u, 3 * p) != 1 or pow(u, 10, 3 * p) != 1:
                    continue
                spec = Semidirect(Cyclic(10), Cyclic(3 * p), UnitAction((u,)))
                symbols = (("a", (5, 0)), ("b", (1, 1)))
                if not is_generating(spec, [el for _, el in symbols]):
                    continue
                sub = generated_subgroup(spec, ((0, 3),))
                if sub.order != p:
                    continue
                ctx = make_quotient(spec, sub)
                gens = generator_set(spec, symbols)
                if not verify_quotient_cycle(ctx, walk, gens).ok:
                    continue
                if not voltage(ctx, walk, gens).generates_N:
                    continue
                return CompanionInstance(family, spec, symbols, (0, 3),
                                         StrategyParams(p=p, q=q, r=r, d=u % p))
            raise StrategyError(f"no workable unit for the (5,3) stair at p={p}")
        raise StrategyError(f"stair-steps has no shape for (q, r) = {(q, r)}")
    if family in ("braid-odd", "braid-odd-special"):
        if r is None or i is None:
            raise StrategyError(f"{family} needs r and i")
        special = family == "braid-odd-special"
        n = 30 if special else 2 * r
        spec = DirectProduct((Cyclic(n), Cyclic(p)))
        params = (StrategyParams(p=p, q=3, r=r, i=i) if special
                  else StrategyParams(p=p, r=r, i=i))
        walk = build_parametric_walk(family, params)
        ngen = (0, 1)
        sub = generated_subgroup(spec, (ngen,))
        ctx = make_quotient(spec, sub)
        shifts = (3, 13, 23) if special else (i,)
        for j in shifts:
            symbols = (("a", (j, 1)), ("b", (1, 0)))
            gens = generator_set(spec, symbols)
            if verify_quotient_cycle(ctx, walk, gens).ok:
                return CompanionInstance(family, spec, symbols, ngen, params)
        raise StrategyError(f"{family} shape is not a quotient cycle at r={r}, i={i}")
    raise StrategyError(f"unknown companion family {family!r}")


# ---------------------------------------------------------------------------
# case labels


def _abelian_paths() -> list:
    out = [("P-cyclic",), ("G/P-abelian", "G'-cyclic")]
    out += [("G/P-abelian", "Case1", tag) for tag in (
        "Subcase-x∈S", "Subcase-both-project-to-Z2", "Subcase-S∩(Z2×P)=∅",
        "Subcase-a∈Z2×P", "Subcase-b∈P")]
    out += [("G/P-abelian", "Case2", tag) for tag in (
        "Subcase-order6-member", "Subcase-congruent-pair-mod-line",
        "Subcase-congruent-pair-mod-center", "Subcase-no-congruent-pair")]
    out += [("G/P-abelian", "Case3", "#S=2", "order6-member", f"b-class={cls}")
            for cls in ("P", "xP", "yP", "xyP")]
    out += [("G/P-abelian", "Case3", "#S=2", "no-order6-member"),
            ("G/P-abelian", "Case3", "#S=3")]
    return out


def _nonabelian_paths() -> list:
    out = [("G/P-nonabelian", "P-central")]
    out += [("G/P-nonabelian", "Case1", tag) for tag in (
        "Subcase-S∩(Z3×P)≠∅", "Subcase-S∩(Z3×P)=∅")]
    out += [("G/P-nonabelian", "Case2", tag) for tag in (
        "Subcase-order10-member", "Subcase-central-member", "Subcase-rotor",
        "Subcase-two-reflections-order15", "Subcase-two-reflections-prime",
        "Subcase-third-rotation")]
    vs = ("v=(1,0)", "v=(1,1)", "v=(1,2)", "v=(0,1)")
    out += [("G/P-nonabelian", "Case3", "#S=2", "b-rotation", v) for v in vs]
    out += [("G/P-nonabelian", "Case3", "#S=2", "b-reflection", f"λ={lam}")
            for lam in (0, 1, 2)]
    out += [("G/P-nonabelian", "Case3", "#S=3", "pattern=refl-rot-id", v) for v in vs]
    out += [("G/P-nonabelian", "Case3", "#S=3", "pattern=refl-rot-rot")]
    out += [("G/P-nonabelian", "Case3", "#S=3", "pattern=refl-refl-id", tag)
            for tag in ("v-fixed-by-pair-mirror", "v-negated-by-pair-mirror",
                        "v-fixed-by-omitted-mirror", "v-negated-by-omitted-mirror")]
    out += [("G/P-nonabelian", "Case3", "#S=3", "pattern=refl-refl-repeat"),
            ("G/P-nonabelian", "Case3", "#S=3", "pattern=three-reflections")]
    return out


VALID_PATHS = frozenset(tuple(p) for p in _abelian_paths() + _nonabelian_paths())


@dataclass(frozen=True)
class CaseLabel:
    """Position of a generating set in the order-150 decision tree."""

    path: tuple

    def __post_init__(self):
        if tuple(self.path) not in VALID_PATHS:
            raise StrategyError(f"unknown case path {self.path!r}")

    def text(self) -> str:
        return " / ".join(self.path)


# ---------------------------------------------------------------------------
# normalization witnesses

WITNESS_OPS = ("invert-generator", "conjugate-by", "apply-automorphism",
               "scalar-multiply-coordinate")


def _has_z5sq(spec: GroupSpec) -> bool:
    if isinstance(spec, DirectProduct):
        return any(_has_z5sq(f) for f in spec.factors)
    if isinstance(spec, Semidirect):
        return spec.acted == Z5SQ or _has_z5sq(spec.acted) or _has_z5sq(spec.acting)
    return False


def _scale_p_part(spec: GroupSpec, g: Element, lam: int) -> Element:
    """Multiply the (Z5)^2 coordinate of g by the scalar lam."""
    if isinstance(spec, DirectProduct):
        return tuple(_scale_p_part(f, c, lam) for f, c in zip(spec.factors, g))
    if isinstance(spec, Semidirect):
        head, tail = g
        if spec.acted == Z5SQ:
            return (head, ((tail[0] * lam) % 5, (tail[1] * lam) % 5))
        return (head, _scale_p_part(spec.acted, tail, lam))
    return g


@dataclass(frozen=True, eq=False)
class NormalizationWitness:
    """Steps mapping a canonical-form certificate back onto the original set."""

    spec: GroupSpec
    steps: tuple

    def apply(self, symbols) -> tuple:
        out = list((name, el) for name, el in symbols)
        for op, data in self.steps:
            if op == "invert-generator":
                hit = False
                for k, (name, el) in enumerate(out):
                    if name == data:
                        out[k] = (name, inverse(self.spec, el))
                        hit = True
                if not hit:
                    raise StrategyError(f"no generator named {data!r} to invert")
            elif op == "conjugate-by":
                inv = inverse(self.spec, data)
                out = [(name, multiply(self.spec, multiply(self.spec, inv, el), data))
                       for name, el in out]
            elif op == "apply-automorphism":
                out = [(name, data[el]) for name, el in out]
            elif op == "scalar-multiply-coordinate":
                if not _has_z5sq(self.spec):
                    raise StrategyError("no (Z5)^2 coordinate to scale in this group")
                out = [(name, _scale_p_part(self.spec, el, data)) for name, el in out]
            else:
                raise StrategyError(f"unknown witness op {op!r}")
        return tuple(out)


def pull_back_certificate(cert: Certificate, witness: NormalizationWitness) -> Certificate:
    """Re-bind a certificate's generators through a witness and re-verify.

    Where a witness inverts a generator, the walk's tokens under that name
    flip sign so the traversed vertex route is exactly the automorphic image
    of the original.  Expectation pins are dropped: they name vertices of the
    canonical walk and do not survive re-binding; soundness is re-established
    by verification.
    """
    if cert.spec != witness.spec:
        raise StrategyError("witness belongs to a different group")
    flips = {data for op, data in witness.steps if op == "invert-generator"}
    tokens = tuple((n, -s if n in flips else s) for n, s in cert.walk.tokens)
    moved = make_certificate(witness.spec, witness.apply(cert.symbols), Walk(tokens),
                             figure_id=cert.figure_id, provenance=cert.provenance)
    report = moved.verify()
    if not report.ok:
        raise StrategyError(f"witness pull-back broke the cycle: {report.first_violation}")
    return moved


# ---------------------------------------------------------------------------
# automorphism candidates and canonical keys


@dataclass(frozen=True, eq=False)
class _CandidateSet:
    ops: tuple      # (op, data) per candidate; op "identity" for the first
    perms: np.ndarray
    pmin: np.ndarray


def _is_automorphism_perm(tbl, perm: np.ndarray) -> bool:
    mul = np.asarray(tbl.mul, dtype=np.int64)
    return bool(np.array_equal(perm[mul], mul[np.ix_(perm, perm)]))


@lru_cache(maxsize=32)
def _candidate_set(spec: GroupSpec) -> _CandidateSet:
    """Identity, coordinate scalings, inner maps, then the rest of Aut(G)."""
    tbl = table_for(spec)
    n = tbl.n
    inv = np.asarray(tbl.inv, dtype=np.int64)
    mul = np.asarray(tbl.mul, dtype=np.int64)
    ops, perms, seen = [], [], set()

    def add(op, data, perm):
        key = perm.tobytes()
        if key in seen:
            return
        seen.add(key)
        ops.append((op, data))
        perms.append(perm)

    add("identity", None, np.arange(n, dtype=np.int64))
    if _has_z5sq(spec):
        for lam in (2, 3, 4):
            perm = np.array([tbl.index[_scale_p_part(spec, g, lam)] for g in tbl.elements],
                            dtype=np.int64)
            if _is_automorphism_perm(tbl, perm):
                add("scalar-multiply-coordinate", lam, perm)
    for hi in range(1, n):
        perm = mul[mul[int(inv[hi])], hi]
        add("conjugate-by", tbl.elements[hi], np.asarray(perm, dtype=np.int64))
    auts = automorphism_group(spec)
    if auts is not None:
        for perm in auts:
            add("apply-automorphism", None, np.asarray(perm, dtype=np.int64))
    mat = np.stack(perms)
    pmin = np.minimum(mat, inv[mat])
    return _CandidateSet(tuple(ops), mat, pmin)


def _inverse_step(spec: GroupSpec, op: str, data, perm: np.ndarray):
    """Witness step undoing the candidate automorphism, or None for identity."""
    if op == "identity":
        return None
    if op == "scalar-multiply-coordinate":
        return (op, pow(data, -1, 5))
    if op == "conjugate-by":
        return (op, inverse(spec, data))
    tbl = table_for(spec)
    mapping = {tbl.elements[int(perm[i])]: tbl.elements[i] for i in range(tbl.n)}
    return ("apply-automorphism", mapping)


def _genset_keys(spec: GroupSpec, members) -> np.ndarray:
    tbl = table_for(spec)
    cand = _candidate_set(spec)
    idxs = np.array([tbl.index[m] for m in members], dtype=np.int64)
    return np.sort(cand.pmin[:, idxs], axis=1)


def canonical_genset_key(spec: GroupSpec, members) -> tuple:
    """Orbit-minimal key of a generating set under Aut (or Inn) and inversion."""
    keys = _genset_keys(spec, members)
    k = int(np.lexsort(tuple(keys[:, c] for c in range(keys.shape[1] - 1, -1, -1)))[0])
    return tuple(int(x) for x in keys[k])


def _orbit_normalize(spec: GroupSpec, symbols):
    """Canonical symbols, pull-back witness, and canonical->original name map."""
    tbl = table_for(spec)
    cand = _candidate_set(spec)
    idxs = np.array([tbl.index[el] for _, el in symbols], dtype=np.int64)
    keys = np.sort(cand.pmin[:, idxs], axis=1)
    k = int(np.lexsort(tuple(keys[:, c] for c in range(keys.shape[1] - 1, -1, -1)))[0])
    best = [int(x) for x in keys[k]]
    perm = cand.perms[k]
    op, data = cand.ops[k]
    canonical = tuple((f"s{j + 1}", tbl.elements[b]) for j, b in enumerate(best))
    steps, name_map, used = [], {}, set()
    for j, b in enumerate(best):
        cname = f"s{j + 1}"
        for oname, oel in symbols:
            if oname in used:
                continue
            oi = int(perm[tbl.index[oel]])
            if min(oi, int(tbl.inv[oi])) == b:
                if oi != b:
                    steps.append(("invert-generator", cname))
                name_map[cname] = oname
                used.add(oname)
                break
        else:
            raise StrategyError("canonical key lost a member")  # pragma: no cover
    undo = _inverse_step(spec, op, data, perm)
    if undo is not None:
        steps.append(undo)
    return canonical, NormalizationWitness(spec, tuple(steps)), name_map


# ---------------------------------------------------------------------------
# canonical family forms in the three worked presentations


@dataclass(frozen=True, eq=False)
class FamilyForm:
    """One canonical generating-set shape inside a worked presentation."""

    tail: tuple
    symbols: tuple
    route: str
    payload: tuple = ()
    figure_id: Optional[str] = None


@lru_cache(maxsize=None)
def _corpus_by_id() -> dict:
    return {c.figure_id: c for c in load_corpus()}


def _figure_form(tail, figure_id, route="figure", payload=()):
    cert = _corpus_by_id()[figure_id]
    return FamilyForm(tail, cert.symbols, route, payload, figure_id)


@lru_cache(maxsize=None)
def _g1_spec() -> GroupSpec:
    return PRESETS["G150_ABELIAN_QUOT"]


@lru_cache(maxsize=None)
def _g3_spec() -> GroupSpec:
    return _corpus_by_id()["x,y,(10)"].spec


@lru_cache(maxsize=None)
def _g4_spec() -> GroupSpec:
    return PRESETS["G150_D6"]


@lru_cache(maxsize=None)
def _g1_forms() -> dict:
    return {
        "a": (_figure_form(("Subcase-a∈Z2×P",), "xv1,y"),),
        "b": (_figure_form(("Subcase-b∈P",), "xy,v1"),),
    }


@lru_cache(maxsize=None)
def _g3_forms() -> dict:
    order6 = tuple(
        _figure_form(("#S=2", "order6-member", f"b-class={cls}"), fig)
        for cls, fig in (("P", "(1,0)inZ6x(Z5)2"), ("xP", "x(1,0)inZ6x(Z5)2"),
                         ("yP", "y(1,0)inZ6x(Z5)2"), ("xyP", "xy(1,0)inZ6x(Z5)2")))
    return {
        "order6": order6,
        "plain": (_figure_form(("#S=2", "no-order6-member"), "x,y(10)"),),
        "triple": (_figure_form(("#S=3",), "x,y,(10)"),),
    }


@lru_cache(maxsize=None)
def _g4_forms() -> dict:
    f = ((1, 0), (0, 0))
    t = ((0, 1), (0, 0))
    ft = ((1, 1), (0, 0))

    def vec(a, b):
        return ((0, 0), (a, b))

    vs = ((1, 0), (1, 1), (1, 2), (0, 1))
    rot = tuple(
        _figure_form(("#S=2", "b-rotation", f"v=({a},{b})"),
                     f"fInvertst+tNotCent-b=t-{a}{b}")
        for a, b in vs)
    refl = tuple(
        _figure_form(("#S=2", "b-reflection", f"λ={lam}"),
                     f"fInvertst+tNotCent-lambda={lam}")
        for lam in (0, 1, 2))
    # pure-complement triples {f, t, v}: mirror across f when v is a J
    # eigenvector, otherwise a threefold rotor stitched by t
    rri = []
    for a, b in vs:
        tail = ("#S=3", "pattern=refl-rot-id", f"v=({a},{b})")
        syms = (("f", f), ("t", t), ("v", vec(a, b)))
        if (a, b) == (1, 0):
            rri.append(FamilyForm(tail, syms, "path-mirror", (("t", "v"), "v", "f", 1)))
        elif (a, b) == (0, 1):
            rri.append(FamilyForm(tail, syms, "path-mirror", (("t", "v"), "v", "f", -1)))
        else:
            rri.append(FamilyForm(tail, syms, "path-rotor", (("f", "v"), "v", "t")))
    # reflection pairs {fa, fb, v}: four orbits, told apart by which mirror's
    # fixed or negated line carries v — one of the pair, or the omitted one.
    # All run a path inside the half-size subgroup and close with the other
    # reflection.
    ft2 = ((1, 2), (0, 0))
    rfi = []
    for tag, pair, v in (
        ("v-fixed-by-pair-mirror", (("f", f), ("ft", ft)), vec(1, 0)),
        ("v-negated-by-pair-mirror", (("f", f), ("ft", ft)), vec(0, 1)),
        ("v-fixed-by-omitted-mirror", (("ft", ft), ("ft2", ft2)), vec(1, 0)),
        ("v-negated-by-omitted-mirror", (("ft", ft), ("ft2", ft2)), vec(0, 1)),
    ):
        tail = ("#S=3", "pattern=refl-refl-id", tag)
        syms = pair + (("v", v),)
        closer = next(n for n, _ in pair if n != "ft")
        rfi.append(FamilyForm(tail, syms, "path-rotor", (("ft", "v"), "ft", closer)))
    return {
        "b-rotation": rot,
        "b-reflection": refl,
        "refl-rot-id": tuple(rri),
        "refl-rot-rot": (_figure_form(("#S=3", "pattern=refl-rot-rot"),
                                      "tNotCent-S=3-g=t"),),
        "refl-refl-id": tuple(rfi),
        "refl-refl-repeat": (_figure_form(("#S=3", "pattern=refl-refl-repeat"),
                                          "S=3-b=ft-c=fv"),),
        "three-reflections": (_figure_form(("#S=3", "pattern=three-reflections"),
                                           "S=3-b=ft-c=ft2v"),),
    }


def _scan_forms(fspec: GroupSpec, fsyms, forms):
    """First family form reachable from fsyms by a candidate automorphism."""
    tbl = table_for(fspec)
    cand = _candidate_set(fspec)
    inv = np.asarray(tbl.inv, dtype=np.int64)
    idxs = np.array([tbl.index[el] for _, el in fsyms], dtype=np.int64)
    keys = np.sort(cand.pmin[:, idxs], axis=1)
    for form in forms:
        if len(form.symbols) != len(fsyms):
            continue
        fidx = np.array([tbl.index[el] for _, el in form.symbols], dtype=np.int64)
        target = np.sort(np.minimum(fidx, inv[fidx]))
        hits = np.nonzero((keys == target).all(axis=1))[0]
        for k in hits:
            k = int(k)
            perm = cand.perms[k]
            assignment, used, ok = [], set(), True
            for cname, cel in form.symbols:
                ci = tbl.index[cel]
                for oname, oel in fsyms:
                    if oname in used:
                        continue
                    oi = int(perm[tbl.index[oel]])
                    if oi == ci:
                        assignment.append((cname, oname, False))
                        used.add(oname)
                        break
                    if int(inv[oi]) == ci:
                        assignment.append((cname, oname, True))
                        used.add(oname)
                        break
                else:
                    ok = False
                    break
            if ok:
                return form, k, tuple(assignment)
    return None


# ---------------------------------------------------------------------------
# case resolution


@dataclass(frozen=True, eq=False)
class Resolution:
    """Everything classify/normalize/produce need about one generating set."""

    label: CaseLabel
    route: str
    payload: tuple
    figure_id: Optional[str]
    canonical: tuple
    witness: NormalizationWitness
    name_map: dict
    build_spec: GroupSpec
    build_symbols: tuple
    build_witness: NormalizationWitness
    phi_inv: Optional[dict]


@lru_cache(maxsize=None)
def _iso_to(spec: GroupSpec, target: GroupSpec) -> dict:
    phi = find_isomorphism(spec, target)
    if phi is None:
        raise StrategyError("group failed to match its expected presentation")
    return phi


def _member_orders(spec: GroupSpec, symbols) -> list:
    tbl = table_for(spec)
    return [int(tbl.order[tbl.index[el]]) for _, el in symbols]


def _user_side(spec, symbols, path, route, payload_fn=None) -> Resolution:
    canonical, witness, name_map = _orbit_normalize(spec, symbols)
    payload = payload_fn(spec, canonical) if payload_fn is not None else ()
    return Resolution(CaseLabel(tuple(path)), route, payload, None,
                      canonical, witness, name_map, spec, canonical, witness, None)


def _figure_side(spec, symbols, prefix, fspec, forms) -> Resolution:
    same = spec == fspec
    if same:
        fsyms = tuple(symbols)
        phi = phi_inv = None
    else:
        phi = _iso_to(spec, fspec)
        phi_inv = {v: k for k, v in phi.items()}
        fsyms = tuple((name, phi[el]) for name, el in symbols)
    hit = _scan_forms(fspec, fsyms, forms)
    if hit is None:
        raise StrategyError(
            f"no canonical form reachable for {format_group_spec(fspec)} set "
            f"{[format_element(el) for _, el in fsyms]}")
    form, k, assignment = hit
    cand = _candidate_set(fspec)
    op, data = cand.ops[k]
    perm = cand.perms[k]
    inv_steps = tuple(("invert-generator", cname)
                      for cname, _, inverted in assignment if inverted)
    undo = _inverse_step(fspec, op, data, perm)
    fig_steps = inv_steps + ((undo,) if undo is not None else ())
    fig_witness = NormalizationWitness(fspec, fig_steps)
    name_map = {cname: oname for cname, oname, _ in assignment}
    if same:
        canonical, witness = form.symbols, fig_witness
    else:
        canonical = tuple((cname, phi_inv[cel]) for cname, cel in form.symbols)
        steps = list(inv_steps)
        if undo is not None:
            ftbl = table_for(fspec)
            mapping = {phi_inv[ftbl.elements[int(perm[i])]]: phi_inv[ftbl.elements[i]]
                       for i in range(ftbl.n)}
            steps.append(("apply-automorphism", mapping))
        witness = NormalizationWitness(spec, tuple(steps))
    return Resolution(CaseLabel(tuple(prefix) + form.tail), form.route, form.payload,
                      form.figure_id, canonical, witness, name_map,
                      fspec, form.symbols, fig_witness, phi_inv)


def _first_with_order(spec, symbols, order):
    tbl = table_for(spec)
    for name, el in symbols:
        if int(tbl.order[tbl.index[el]]) == order:
            return name, el
    return None


def _resolve_case1_g1(spec, symbols) -> Resolution:
    """Abelian G/P, G' = P, |Z| = 2: the doubled point-stabilizer family."""
    prefix = ("G/P-abelian", "Case1")
    x = next(m for m in center(spec).members if m != identity(spec))
    members = [el for _, el in symbols]
    if x in members:
        def payload_fn(bspec, canonical):
            cx = next(n for n, el in canonical if el == x)
            return (cx,)
        return _user_side(spec, symbols, prefix + ("Subcase-x∈S",), "doubling", payload_fn)
    if len(symbols) != 2:
        raise StrategyError("minimal sets avoiding the central involution have size 2")
    orders = _member_orders(spec, symbols)
    evens = [name for (name, _), o in zip(symbols, orders) if o % 2 == 0]
    if len(evens) == 2:
        def payload_fn(bspec, canonical):
            return (x,)
        return _user_side(spec, symbols, prefix + ("Subcase-both-project-to-Z2",),
                          "fgl-auto", payload_fn)
    if len(evens) != 1:
        raise StrategyError("a generating set needs a member outside the odd part")
    P = sylow_subgroup(spec, 5)
    z2p = set(generated_subgroup(spec, P.generators + (x,)).members)
    inz2p = [name for name, el in symbols if el in z2p]
    if not inz2p:
        def payload_fn(bspec, canonical):
            tbl = table_for(bspec)
            cname = next(n for n, el in canonical
                         if int(tbl.order[tbl.index[el]]) % 2 == 0)
            return (cname, x)
        return _user_side(spec, symbols, prefix + ("Subcase-S∩(Z2×P)=∅",),
                          "fgl-parity", payload_fn)
    forms = _g1_forms()["a" if inz2p[0] in evens else "b"]
    return _figure_side(spec, symbols, prefix, _g1_spec(), forms)


def _prime_cyclic_normals(spec, orders=None) -> list:
    """Cyclic normal subgroups, largest first, deduplicated by member set."""
    from .groups import is_normal

    tbl = table_for(spec)
    seen = {}
    for g in tbl.elements[1:]:
        sub = generated_subgroup(spec, (g,))
        if sub.members in seen:
            continue
        seen[sub.members] = sub
    out = [s for s in seen.values()
           if is_normal(spec, s) and (orders is None or s.order in orders)]
    out.sort(key=lambda s: (-s.order, s.members))
    return out


def _congruent_pair(spec, gens: GeneratorSet, subs):
    """(N, s, t): signed labels of distinct congruent non-N elements, or None."""
    tbl = table_for(spec)
    for sub in subs:
        mem = set(sub.members)
        toks = gens.signed_tokens
        for a in range(len(toks)):
            for b in range(len(toks)):
                if a == b:
                    continue
                es, et = gens.resolve(toks[a]), gens.resolve(toks[b])
                if es == et or es in mem:
                    continue
                if multiply(spec, es, inverse(spec, et)) in mem:
                    return sub, toks[a], toks[b]
    return None


def _resolve_case2(spec, symbols) -> Resolution:
    """Abelian G/P, G' = P, |Z| = 3: congruent-edge territory."""
    prefix = ("G/P-abelian", "Case2")
    gens = generator_set(spec, symbols)

    def pair_payload(subs_fn):
        def payload_fn(bspec, canonical):
            got = _congruent_pair(bspec, generator_set(bspec, canonical), subs_fn(bspec))
            if got is None:
                raise StrategyError("congruent pair vanished under normalization")
            sub, s, t = got
            return (s, t, sub.generators[0] if sub.generators else sub.members[1])
        return payload_fn

    hit = _first_with_order(spec, symbols, 6)
    if hit is not None:
        def payload_fn(bspec, canonical):
            tbl = table_for(bspec)
            cname, cel = next((n, el) for n, el in canonical
                              if int(tbl.order[tbl.index[el]]) == 6)
            return ((cname, 1), (cname, -1), multiply(bspec, cel, cel))
        return _user_side(spec, symbols, prefix + ("Subcase-order6-member",),
                          "double-edge", payload_fn)
    lines = lambda s: _prime_cyclic_normals(s, orders=(5,))
    if _congruent_pair(spec, gens, lines(spec)) is not None:
        return _user_side(spec, symbols, prefix + ("Subcase-congruent-pair-mod-line",),
                          "double-edge", pair_payload(lines))
    zline = lambda s: _prime_cyclic_normals(s, orders=(3,))
    if _congruent_pair(spec, gens, zline(spec)) is not None:
        return _user_side(spec, symbols, prefix + ("Subcase-congruent-pair-mod-center",),
                          "double-edge", pair_payload(zline))
    return _user_side(spec, symbols, prefix + ("Subcase-no-congruent-pair",), "chain")


def _quotient_proj_orders(spec, symbols, sub):
    ctx = make_quotient(spec, sub)
    qtbl = ctx.quotient_mult
    out = []
    for _, el in symbols:
        j = ctx.project(el)
        k, cur = 1, j
        while cur != 0:
            cur = int(qtbl[cur, j])
            k += 1
        out.append(k)
    return out


def _resolve_case3_g3(spec, symbols, P) -> Resolution:
    """Abelian G/P, G' = P, trivial center: the faithful Z6-action family."""
    prefix = ("G/P-abelian", "Case3")
    orders = _quotient_proj_orders(spec, symbols, P)
    forms = _g3_forms()
    if len(symbols) == 2:
        if 6 in orders:
            chosen = forms["order6"]
        elif sorted(orders) == [2, 3]:
            chosen = forms["plain"]
        else:
            raise StrategyError(f"unexpected projection orders {orders} for a pair")
    elif len(symbols) == 3:
        if sorted(orders) != [1, 2, 3]:
            raise StrategyError(f"unexpected projection orders {orders} for a triple")
        chosen = forms["triple"]
    else:
        raise StrategyError(f"no case for a minimal set of size {len(symbols)} here")
    return _figure_side(spec, symbols, prefix, _g3_spec(), chosen)


def _resolve_nonabelian_case2_g6(spec, symbols) -> Resolution:
    """Nonabelian G/P with |Z| = 5: the D30 x Z5 family."""
    prefix = ("G/P-nonabelian", "Case2")
    tbl = table_for(spec)
    orders = _member_orders(spec, symbols)
    if 10 in orders:
        def payload_fn(bspec, canonical):
            btbl = table_for(bspec)
            cname, cel = next((n, el) for n, el in canonical
                              if int(btbl.order[btbl.index[el]]) == 10)
            return ((cname, 1), (cname, -1), multiply(bspec, cel, cel))
        return _user_side(spec, symbols, prefix + ("Subcase-order10-member",),
                          "double-edge", payload_fn)
    zmem = set(center(spec).members)
    zgen = next(m for m in zmem if m != identity(spec))
    f0 = next(g for g in tbl.elements if int(tbl.order[tbl.index[g]]) == 2)
    tset = {g for g in tbl.elements
            if int(tbl.order[tbl.index[g]]) % 2 == 1
            and multiply(spec, multiply(spec, inverse(spec, f0), g), f0)
            == inverse(spec, g)}

    def carriers(bspec, syms):
        btbl = table_for(bspec)
        bf0 = next(g for g in btbl.elements if int(btbl.order[btbl.index[g]]) == 2)
        bts = {g for g in btbl.elements
               if int(btbl.order[btbl.index[g]]) % 2 == 1
               and multiply(bspec, multiply(bspec, inverse(bspec, bf0), g), bf0)
               == inverse(bspec, g)}
        return [(n, el) for n, el in syms
                if int(btbl.order[btbl.index[el]]) % 2 == 1 and el not in bts]

    cars = carriers(spec, symbols)
    if not cars:
        raise StrategyError("a generating set here needs a rotation with a central part")
    if any(el in zmem for _, el in cars):
        return _user_side(spec, symbols, prefix + ("Subcase-central-member",), "chain")
    full = [nc for nc in cars
            if generated_subgroup(spec, (nc[1], zgen)).order == 75]
    if full:
        def payload_fn(bspec, canonical):
            bz = next(m for m in center(bspec).members if m != identity(bspec))
            bcars = carriers(bspec, canonical)
            cname = next(n for n, el in bcars
                         if generated_subgroup(bspec, (el, bz)).order == 75)
            btbl = table_for(bspec)
            fname = next(n for n, el in canonical
                         if int(btbl.order[btbl.index[el]]) == 2)
            return (cname, fname, bz)
        return _user_side(spec, symbols, prefix + ("Subcase-rotor",),
                          "rotor-double", payload_fn)
    refl = [(n, el) for (n, el), o in zip(symbols, orders) if o == 2]
    if len(refl) >= 2:
        prods = [(a, b, int(tbl.order[tbl.index[multiply(spec, refl[a][1], refl[b][1])]]))
                 for a in range(len(refl)) for b in range(a + 1, len(refl))]
        def refl_pairs(bspec, canonical):
            btbl = table_for(bspec)
            brefl = [(n, el) for n, el in canonical
                     if int(btbl.order[btbl.index[el]]) == 2]
            return btbl, brefl
        if any(o == 15 for _, _, o in prods):
            def payload_fn(bspec, canonical):
                btbl, brefl = refl_pairs(bspec, canonical)
                for a in range(len(brefl)):
                    for b in range(a + 1, len(brefl)):
                        m = multiply(bspec, brefl[a][1], brefl[b][1])
                        if int(btbl.order[btbl.index[m]]) == 15:
                            cname = carriers(bspec, canonical)[0][0]
                            return (brefl[a][0], brefl[b][0], cname)
                raise StrategyError("order-15 reflection pair vanished")
            return _user_side(spec, symbols,
                              prefix + ("Subcase-two-reflections-order15",),
                              "sandwich", payload_fn)
        if any(o in (3, 5) for _, _, o in prods):
            def payload_fn(bspec, canonical):
                btbl, brefl = refl_pairs(bspec, canonical)
                for a in range(len(brefl)):
                    for b in range(a + 1, len(brefl)):
                        m = multiply(bspec, brefl[a][1], brefl[b][1])
                        if int(btbl.order[btbl.index[m]]) in (3, 5):
                            return ((brefl[a][0], 1), (brefl[b][0], 1), m)
                raise StrategyError("prime reflection pair vanished")
            return _user_side(spec, symbols,
                              prefix + ("Subcase-two-reflections-prime",),
                              "double-edge", payload_fn)
    return _user_side(spec, symbols, prefix + ("Subcase-third-rotation",), "chain")


def _resolve_case3_g4(spec, symbols, P) -> Resolution:
    """Nonabelian G/P, trivial center, no rotation centralizes P: the D6 family."""
    prefix = ("G/P-nonabelian", "Case3")
    proj = sorted(_quotient_proj_orders(spec, symbols, P))
    forms = _g4_forms()
    if len(symbols) == 2:
        if proj == [2, 3]:
            chosen = forms["b-rotation"]
        elif proj == [2, 2]:
            chosen = forms["b-reflection"]
        else:
            raise StrategyError(f"unexpected projection orders {proj} for a pair")
    elif len(symbols) == 3:
        if proj == [1, 2, 3]:
            chosen = forms["refl-rot-id"]
        elif proj == [2, 3, 3]:
            chosen = forms["refl-rot-rot"]
        elif proj == [1, 2, 2]:
            chosen = forms["refl-refl-id"]
        elif proj == [2, 2, 2]:
            ctx = make_quotient(spec, P)
            images = [ctx.project(el) for _, el in symbols]
            chosen = (forms["three-reflections"] if len(set(images)) == 3
                      else forms["refl-refl-repeat"])
        else:
            raise StrategyError(f"unexpected projection orders {proj} for a triple")
    else:
        raise StrategyError(f"no case for a minimal set of size {len(symbols)} here")
    return _figure_side(spec, symbols, prefix, _g4_spec(), chosen)


def _resolve(spec: GroupSpec, symbols) -> Resolution:
    members = [el for _, el in symbols]
    if group_order(spec) != 150:
        raise StrategyError("the case tree covers groups of order 150 only")
    if not is_generating(spec, members):
        raise GroupError("the given set does not generate the group")
    if not is_minimal_generating(spec, members):
        raise GroupError("the given set is not a minimal generating set")
    tbl = table_for(spec)
    P = sylow_subgroup(spec, 5)
    if any(int(tbl.order[tbl.index[m]]) == 25 for m in P.members):
        return _user_side(spec, symbols, ("P-cyclic",), "chain")
    ctxP = make_quotient(spec, P)
    qab = bool(np.array_equal(ctxP.quotient_mult, ctxP.quotient_mult.T))
    zord = center(spec).order
    if qab:
        dord = derived_subgroup(spec).order
        if dord in (1, 5):
            return _user_side(spec, symbols, ("G/P-abelian", "G'-cyclic"), "chain")
        if dord != 25:
            raise StrategyError(f"unexpected derived subgroup order {dord}")
        if zord == 2:
            return _resolve_case1_g1(spec, symbols)
        if zord == 3:
            return _resolve_case2(spec, symbols)
        if zord == 1:
            return _resolve_case3_g3(spec, symbols, P)
        raise StrategyError(f"unexpected center order {zord} over an abelian quotient")
    if zord == 25:
        return _user_side(spec, symbols, ("G/P-nonabelian", "P-central"), "chain")
    if zord == 5:
        return _resolve_nonabelian_case2_g6(spec, symbols)
    if zord != 1:
        raise StrategyError(f"unexpected center order {zord} over a nonabelian quotient")
    pset = set(P.members)
    rot_central = any(
        int(tbl.order[tbl.index[g]]) == 3
        and all(multiply(spec, multiply(spec, inverse(spec, g), m), g) == m for m in pset)
        for g in tbl.elements)
    if rot_central:
        odd = any(int(tbl.order[tbl.index[el]]) % 2 == 1 for el in members)
        tag = "Subcase-S∩(Z3×P)≠∅" if odd else "Subcase-S∩(Z3×P)=∅"
        return _user_side(spec, symbols, ("G/P-nonabelian", "Case1", tag), "chain")
    return _resolve_case3_g4(spec, symbols, P)


def classify(spec: GroupSpec, symbols) -> CaseLabel:
    """Deterministic decision-tree position of a minimal generating set."""
    gens = generator_set(spec, symbols)
    return _resolve(spec, gens.symbols).label


def normalize_genset(spec: GroupSpec, symbols):
    """(canonical symbols, witness) with witness mapping canonical back to S."""
    gens = generator_set(spec, symbols)
    res = _resolve(spec, gens.symbols)
    return res.canonical, res.witness


# ---------------------------------------------------------------------------
# cycle production


_STAGE_BUDGET = 400_000


def _quotient_search(spec, ctx, gens: GeneratorSet, budget, prefer=(),
                     parity=None, accept=None):
    """Hamiltonian cycle of Cay(G/N; projected S), tokens in the original names."""
    k = ctx.num_cosets
    rows = tuple(tuple(int(x) for x in row) for row in np.asarray(ctx.quotient_mult))
    qspec = table_group(f"quotient{k}", rows)
    order = [name for name in prefer] + [n for n, _ in gens.symbols if n not in prefer]
    by_name = dict(gens.symbols)
    used, qsyms = set(), []
    for name in order:
        q = ctx.project(by_name[name])
        if q == 0 or q in used:
            continue
        used.add(q)
        qsyms.append((name, q))
    qgens = generator_set(qspec, qsyms)
    graph = build_cayley(qspec, qgens)
    return find_hamiltonian_cycle(graph, budget=budget, parity_filter=parity,
                                  accept=accept)


def _chain_certificate(spec, symbols, budget) -> Certificate:
    """Quotient-first production: lift where possible, search the graph last.

    Per cyclic normal N (prime order first) one unfiltered quotient cycle is
    found; it lifts directly when its voltage generates N, and otherwise a
    congruent generator pair mod N turns any cycle through one of the pair
    into a guaranteed lift, so no voltage-filtered enumeration is needed.
    """
    gens = generator_set(spec, symbols)
    subs = [s for s in _prime_cyclic_normals(spec)
            if 3 <= group_order(spec) // s.order]
    subs.sort(key=lambda s: (not _is_prime(s.order), -s.order))
    stage = min(_STAGE_BUDGET, budget) if budget else _STAGE_BUDGET
    for sub in subs:
        ctx = make_quotient(spec, sub)
        if ctx.num_cosets < 3 or ctx.num_cosets > 80:
            continue
        try:
            if ctx.num_cosets <= 12:
                # few cosets means few cycles: filtering on voltage here is an
                # exhaustive scan, and sign choices vary the voltage enough
                found = _quotient_search(
                    spec, ctx, gens, stage,
                    accept=lambda w: voltage(ctx, w, gens).generates_N)
                if found is not None:
                    return fgl_lift(ctx, found, gens, provenance="search-fallback")
                continue
            found = _quotient_search(spec, ctx, gens, stage)
        except BudgetExceeded:
            continue
        if found is None:
            continue
        if voltage(ctx, found, gens).generates_N:
            return fgl_lift(ctx, found, gens, provenance="search-fallback")
        if not _is_prime(sub.order):
            continue
        got = _congruent_pair(spec, gens, [sub])
        if got is None:
            continue
        _, s, t = got
        try:
            found = _quotient_search(spec, ctx, gens, stage, prefer=(s[0],),
                                     accept=lambda w: s in w.tokens)
            if found is not None:
                return double_edge_lift(ctx, found, s, t, gens,
                                        provenance="search-fallback")
        except (BudgetExceeded, LiftRefused, GroupError):
            pass
    zmem = [m for m in center(spec).members if m != identity(spec)]
    tblo = table_for(spec)
    xs = [(n, el) for n, el in symbols
          if el in zmem and int(tblo.order[tblo.index[el]]) == 2]
    if xs:
        cert = _doubling_certificate(spec, symbols, xs[0][0], budget)
        if cert is not None:
            return cert
    graph = build_cayley(spec, gens)
    walk = find_hamiltonian_cycle(graph, budget=budget)
    if walk is None:
        raise StrategyError("graph admitted no hamiltonian cycle; search exhausted")
    cert = make_certificate(spec, symbols, walk, provenance="search-fallback")
    if not cert.verify().ok:
        raise StrategyError("searched cycle failed verification")  # pragma: no cover
    return cert


def _doubling_certificate(spec, symbols, xname, budget) -> Optional[Certificate]:
    """Cross the quotient by a central involution in S twice, mirrored."""
    by_name = dict(symbols)
    sub = generated_subgroup(spec, (by_name[xname],))
    ctx = make_quotient(spec, sub)
    gens = generator_set(spec, symbols)
    found = _quotient_search(spec, ctx, gens, budget)
    if found is None:
        return None
    walk = build_parametric_walk("doubling", StrategyParams(
        L=found.tokens[:-1], closer=xname))
    cert = make_certificate(spec, symbols, walk, provenance="parametric-walk")
    if not cert.verify().ok:
        raise StrategyError("doubled crossing failed verification")
    return cert


def _figure_certificate(spec, symbols, figure_id) -> Certificate:
    cert = _corpus_by_id()[figure_id]
    if cert.spec != spec or tuple(cert.symbols) != tuple(symbols):
        raise StrategyError("figure certificate does not match its canonical form")
    return cert


def _subgroup_graph(spec, gen_syms):
    """Cayley graph of the subgroup generated by gen_syms, plus its index map."""
    sub = generated_subgroup(spec, tuple(el for _, el in gen_syms))
    tbl = table_for(spec)
    mem = sorted(sub.members, key=lambda m: tbl.index[m])
    pos = {m: i for i, m in enumerate(mem)}
    rows = tuple(
        tuple(pos[tbl.elements[int(tbl.mul[tbl.index[a], tbl.index[b]])]] for b in mem)
        for a in mem)
    hspec = table_group(f"subgroup{len(mem)}", rows)
    hgens = generator_set(hspec, tuple((n, pos[el]) for n, el in gen_syms))
    return hspec, hgens, pos


def _path_walk_certificate(spec, symbols, payload, route, budget) -> Certificate:
    """Hamiltonian path in a half/third-index subgroup, stitched to a cycle."""
    by_name = dict(symbols)
    if route == "path-rotor":
        path_names, target, closer = payload
        eps = None
    else:
        path_names, target, closer, eps = payload
    gen_syms = tuple((n, by_name[n]) for n in path_names)
    hspec, hgens, pos = _subgroup_graph(spec, gen_syms)
    graph = build_cayley(hspec, hgens)
    L = find_hamiltonian_path(graph, 0, pos[by_name[target]], budget)
    if L is None:
        raise StrategyError("stitching path did not materialize")
    params = (StrategyParams(L=L.tokens, closer=closer) if eps is None
              else StrategyParams(L=L.tokens, closer=closer, eps=eps))
    family = "path-then-rotor" if eps is None else "path-then-mirror"
    walk = build_parametric_walk(family, params)
    cert = make_certificate(spec, symbols, walk, provenance="parametric-walk")
    if not cert.verify().ok:
        raise StrategyError("stitched walk failed verification")
    return cert


def _double_edge_certificate(spec, symbols, payload, budget) -> Certificate:
    s, t, ngen = payload
    sub = generated_subgroup(spec, (ngen,))
    ctx = make_quotient(spec, sub)
    gens = generator_set(spec, symbols)
    found = _quotient_search(spec, ctx, gens, budget, prefer=(s[0],),
                             accept=lambda w: s in w.tokens)
    if found is None:
        return _chain_certificate(spec, symbols, budget)
    return double_edge_lift(ctx, found, s, t, gens, provenance="search-fallback")


def _fgl_certificate(spec, symbols, payload, budget, parity_name=None) -> Certificate:
    ngen = payload[-1]
    sub = generated_subgroup(spec, (ngen,))
    ctx = make_quotient(spec, sub)
    gens = generator_set(spec, symbols)
    prefer = (parity_name,) if parity_name else ()
    found = _quotient_search(spec, ctx, gens, budget, prefer=prefer, parity=parity_name)
    if found is None:
        return _chain_certificate(spec, symbols, budget)
    try:
        return fgl_lift(ctx, found, gens, provenance="search-fallback")
    except LiftRefused:
        return _chain_certificate(spec, symbols, budget)


def _rotor_certificate(spec, symbols, payload, budget) -> Certificate:
    cname, fname, zgen = payload
    walk = build_parametric_walk("rotor-double", StrategyParams(p=5))
    renamed = Walk(tuple((cname if n == "c" else fname, s) for n, s in walk.tokens))
    sub = generated_subgroup(spec, (zgen,))
    ctx = make_quotient(spec, sub)
    gens = generator_set(spec, symbols)
    try:
        return fgl_lift(ctx, renamed, gens, provenance="fgl-construction")
    except LiftRefused:
        return _chain_certificate(spec, symbols, budget)


def _sandwich_certificate(spec, symbols, payload, budget) -> Certificate:
    fname, sname, cname = payload
    rename = {"f": fname, "s": sname, "c": cname}
    for i, j in ((4, 4), (4, -4), (-4, 4), (-4, -4)):
        walk = build_parametric_walk("reflection-sandwich", StrategyParams(i=i, j=j))
        cand = Walk(tuple((rename[n], s) for n, s in walk.tokens))
        cert = make_certificate(spec, symbols, cand, provenance="parametric-walk")
        if cert.verify().ok:
            return cert
    return _chain_certificate(spec, symbols, budget)


_CANONICAL_CACHE: dict = {}


def _canonical_certificate(build_spec, build_symbols, route, payload, budget) -> Certificate:
    key = (format_group_spec(build_spec), build_symbols, route, payload, budget)
    hit = _CANONICAL_CACHE.get(key)
    if hit is not None:
        return hit
    if route == "chain":
        cert = _chain_certificate(build_spec, build_symbols, budget)
    elif route == "doubling":
        cert = _doubling_certificate(build_spec, build_symbols, payload[0], budget)
        if cert is None:
            cert = _chain_certificate(build_spec, build_symbols, budget)
    elif route == "fgl-auto":
        cert = _fgl_certificate(build_spec, build_symbols, payload, budget)
    elif route == "fgl-parity":
        cert = _fgl_certificate(build_spec, build_symbols, payload, budget,
                                parity_name=payload[0])
    elif route == "double-edge":
        cert = _double_edge_certificate(build_spec, build_symbols, payload, budget)
    elif route == "rotor-double":
        cert = _rotor_certificate(build_spec, build_symbols, payload, budget)
    elif route == "sandwich":
        cert = _sandwich_certificate(build_spec, build_symbols, payload, budget)
    elif route in ("path-rotor", "path-mirror"):
        cert = _path_walk_certificate(build_spec, build_symbols, payload, route, budget)
    else:
        raise StrategyError(f"unknown production route {route!r}")  # pragma: no cover
    _CANONICAL_CACHE[key] = cert
    return cert


def _transport_certificate(cert: Certificate, spec, phi_inv: dict) -> Certificate:
    syms = tuple((name, phi_inv[el]) for name, el in cert.symbols)
    return make_certificate(spec, syms, cert.walk, figure_id=cert.figure_id,
                            provenance=cert.provenance)


def _rename_certificate(cert: Certificate, spec, name_map: dict) -> Certificate:
    syms = tuple((name_map.get(n, n), el) for n, el in cert.symbols)
    toks = tuple((name_map.get(n, n), s) for n, s in cert.walk.tokens)
    return make_certificate(spec, syms, Walk(toks), figure_id=cert.figure_id,
                            provenance=cert.provenance)


@dataclass(frozen=True, eq=False)
class ProductionResult:
    """A verified hamiltonian-cycle certificate plus how it was obtained."""

    certificate: Certificate
    label: Optional[CaseLabel]
    provenance: str
    figure_id: Optional[str]
    dropped: tuple

    @property
    def cycle_hash(self) -> str:
        text = " ".join(token_text(t) for t in self.certificate.walk.tokens)
        return hashlib.sha256(text.encode()).hexdigest()[:16]


def _reduce_to_minimal(spec, symbols):
    """Deterministically drop redundant members until the set is irredundant."""
    current = list(symbols)
    dropped = []
    changed = True
    while changed:
        changed = False
        for k in range(len(current)):
            rest = current[:k] + current[k + 1:]
            if rest and is_generating(spec, [el for _, el in rest]):
                dropped.append(current[k][0])
                current = rest
                changed = True
                break
    return tuple(current), tuple(dropped)


def produce_certificate(spec: GroupSpec, symbols, budget=None) -> ProductionResult:
    """Hamiltonian-cycle certificate for Cay(G;S) by the matching strategy."""
    gens = generator_set(spec, symbols)
    full = gens.symbols
    if not is_generating(spec, [el for _, el in full]):
        raise GroupError("the given set does not generate the group")
    if group_order(spec) != 150:
        graph = build_cayley(spec, gens)
        walk = find_hamiltonian_cycle(graph, budget=budget)
        if walk is None:
            raise StrategyError("graph admitted no hamiltonian cycle; search exhausted")
        cert = make_certificate(spec, full, walk, provenance="search-fallback")
        if not cert.verify().ok:
            raise StrategyError("searched cycle failed verification")  # pragma: no cover
        return ProductionResult(cert, None, "search-fallback", None, ())
    core, dropped = _reduce_to_minimal(spec, full)
    res = _resolve(spec, core)
    if res.route == "figure":
        base = _figure_certificate(res.build_spec, res.build_symbols, res.figure_id)
    else:
        base = _canonical_certificate(res.build_spec, res.build_symbols,
                                      res.route, res.payload, budget)
    moved = pull_back_certificate(base, res.build_witness)
    if res.phi_inv is not None:
        moved = _transport_certificate(moved, spec, res.phi_inv)
    moved = _rename_certificate(moved, spec, res.name_map)
    provenance = "figure" if res.route == "figure" else base.provenance
    final = make_certificate(spec, full, moved.walk, figure_id=res.figure_id,
                             provenance=provenance)
    report = final.verify()
    if not report.ok:
        raise StrategyError(f"produced cycle failed verification: {report.first_violation}")
    return ProductionResult(final, res.label, provenance, res.figure_id, dropped)


# ---------------------------------------------------------------------------
# minimal generating sets up to equivalence


def minimal_generating_sets(spec: GroupSpec, max_size: int = 4) -> list:
    """Representatives of minimal generating sets, one per equivalence class.

    Equivalence = member inversion plus the candidate automorphisms (full Aut
    when enumerable, otherwise inner).  Built level by level: extending a
    representative of every independent non-generating class by one element
    reaches a representative of every class one size up.
    """
    tbl = table_for(spec)
    n = tbl.n
    out, level = [], [()]
    for size in range(1, max_size + 1):
        seen, nxt = set(), []
        for base in level:
            for gi in range(1, n):
                if gi in base:
                    continue
                cand = tuple(sorted(base + (gi,)))
                members = [tbl.elements[i] for i in cand]
                key = canonical_genset_key(spec, members)
                if key in seen:
                    continue
                seen.add(key)
                closures = [set(int(x) for x in tbl.close([j for j in cand if j != i]))
                            for i in cand]
                if any(i in cl for i, cl in zip(cand, closures)):
                    continue
                if len(tbl.close(list(cand))) == n:
                    out.append(tuple((f"g{j + 1}", tbl.elements[i])
                                     for j, i in enumerate(cand)))
                else:
                    nxt.append(cand)
        level = nxt
        if not level:
            break
    return out


# ---------------------------------------------------------------------------
# the order-150 sweep


@dataclass(frozen=True)
class CaseRecord:
    """One generating set's outcome inside the sweep."""

    group: str
    symbols: tuple
    path: str
    provenance: str
    figure_id: Optional[str]
    cycle_hash: str
    dropped: tuple
    emitted: str  # full certificate text, re-parseable and re-verifiable


class SweepFailure(RuntimeError):
    """Production failed for one (G, S); carries the offending instance."""

    def __init__(self, group: str, symbols, cause: Exception):
        super().__init__(f"production failed on {group} with S = {symbols}: {cause}")
        self.group = group
        self.symbols = symbols
        self.cause = cause

    def __reduce__(self):
        return (type(self), (self.group, self.symbols, self.cause))


@dataclass(frozen=True, eq=False)
class SweepReport:
    """Line-oriented and machine-readable outcome of the full sweep."""

    records: tuple
    elapsed: float

    @property
    def provenance_counts(self) -> dict:
        out: dict = {}
        for r in self.records:
            out[r.provenance] = out.get(r.provenance, 0) + 1
        return dict(sorted(out.items()))

    @property
    def case_counts(self) -> dict:
        out: dict = {}
        for r in self.records:
            out[r.path] = out.get(r.path, 0) + 1
        return dict(sorted(out.items()))

    @property
    def figures_seen(self) -> tuple:
        return tuple(sorted({r.figure_id for r in self.records if r.figure_id}))

    @property
    def groups(self) -> tuple:
        return tuple(sorted({r.group for r in self.records}))

    def text(self) -> str:
        lines = []
        for r in self.records:
            syms = " ".join(f"{n}={t}" for n, t in r.symbols)
            fig = r.figure_id or "-"
            extra = f" dropped={','.join(r.dropped)}" if r.dropped else ""
            lines.append(f"{r.group} | {r.path} | {r.provenance} | {fig} | "
                         f"{r.cycle_hash} | S: {syms}{extra}")
        lines.append("")
        lines.append(f"groups: {len(self.groups)}  instances: {len(self.records)}")
        lines.append("provenance: " + "  ".join(
            f"{k}={v}" for k, v in self.provenance_counts.items()))
        lines.append(f"figures used: {len(self.figures_seen)}/18")
        lines.append(f"elapsed: {self.elapsed:.1f}s")
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps({
            "records": [{
                "group": r.group,
                "symbols": list(map(list, r.symbols)),
                "path": r.path,
                "provenance": r.provenance,
                "figure": r.figure_id,
                "cycle_hash": r.cycle_hash,
                "dropped": list(r.dropped),
            } for r in self.records],
            "provenance_counts": self.provenance_counts,
            "case_counts": self.case_counts,
            "figures_seen": list(self.figures_seen),
            "groups": list(self.groups),
            "elapsed": self.elapsed,
        }, indent=2)


def _sweep_group(spec_text: str, budget) -> list:
    spec = parse_group_spec(spec_text)
    records = []
    for symbols in minimal_generating_sets(spec):
        try:
            result = produce_certificate(spec, symbols, budget=budget)
        except Exception as exc:
            raise SweepFailure(
                spec_text, tuple((n, format_element(el)) for n, el in symbols), exc)
        records.append(CaseRecord(
            group=spec_text,
            symbols=tuple((n, format_element(el)) for n, el in symbols),
            path=result.label.text() if result.label else "-",
            provenance=result.provenance,
            figure_id=result.figure_id,
            cycle_hash=result.cycle_hash,
            dropped=result.dropped,
            emitted=emit_certificate(result.certificate),
        ))
    return records


def reproduce_order_150(budget=None, jobs: Optional[int] = None,
                        progress: Optional[Callable[[str], None]] = None) -> SweepReport:
    """Produce a verified cycle for every group of order 150 and every minimal
    generating set up to equivalence; abort loudly on the first failure."""
    start = time.monotonic()
    names = [entry.name for entry in enumerate_groups(150)]
    records: list = []
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = {pool.submit(_sweep_group, name, budget): name for name in names}
            for fut in futures:
                records.extend(fut.result())
                if progress:
                    progress(futures[fut])
    else:
        for name in names:
            records.extend(_sweep_group(name, budget))
            if progress:
                progress(name)
    return SweepReport(tuple(records), time.monotonic() - start)
