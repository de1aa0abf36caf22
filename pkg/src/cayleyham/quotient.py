"""Quotient groups, walk voltages, Factor Group Lemma lifts, double edges."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cayley import GeneratorSet
from .certs import Certificate, make_certificate
from .groups import (
    Element,
    GroupError,
    GroupTable,
    SubgroupHandle,
    is_normal,
    table_for,
)
from .hamilton import VerificationReport, Walk, _resolve_all


class LiftRefused(GroupError):
    """Raised when a requested FGL lift has a non-generating voltage."""


@dataclass(frozen=True)
class QuotientContext:
    """G/N with canonical coset representatives and a coset product table."""

    spec: object
    subgroup: SubgroupHandle
    table: GroupTable
    coset_reps: tuple  # element index of each coset's minimal member
    projection: np.ndarray  # element index -> coset index
    quotient_mult: np.ndarray  # coset multiplication table

    @property
    def num_cosets(self) -> int:
        return len(self.coset_reps)

    def project(self, g: Element) -> int:
        return int(self.projection[self.table.index[g]])


def make_quotient(spec, sub: SubgroupHandle) -> QuotientContext:
    """Quotient context for G/N; N must be normal."""
    if sub.spec != spec:
        raise GroupError("subgroup belongs to a different group")
    if not is_normal(spec, sub):
        raise GroupError("subgroup is not normal")
    tbl = table_for(spec)
    member_idx = np.array([tbl.index[m] for m in sub.members], dtype=np.int64)
    rep_of = tbl.mul[member_idx, :].min(axis=0)  # min over the coset Ng, per g
    reps = np.unique(rep_of)
    proj = np.searchsorted(reps, rep_of).astype(np.int64)
    k = len(reps)
    if k * sub.order != tbl.n:
        raise GroupError("coset count inconsistent with subgroup order")  # pragma: no cover
    qmul = proj[np.asarray(tbl.mul)[np.ix_(reps, reps)]]
    # homomorphism check over all pairs
    full = proj[np.asarray(tbl.mul)]
    expect = qmul[proj][:, proj]
    if not (full == expect).all():
        raise GroupError("projection is not a homomorphism")  # pragma: no cover
    return QuotientContext(spec, sub, tbl, tuple(int(r) for r in reps), proj, qmul)


@dataclass(frozen=True)
class VoltageResult:
    """Voltage of a closed quotient walk: an element of N plus a generation flag."""

    element: Element
    generates_N: bool


def _token_indices(ctx: QuotientContext, gens: GeneratorSet, walk):
    tokens = tuple(walk.tokens if isinstance(walk, Walk) else walk)
    elems, bad = _resolve_all(gens, tokens)
    if bad is not None:
        raise GroupError(f"unknown token at position {bad}")
    return tokens, [ctx.table.index[g] for g in elems]

def voltage(ctx: QuotientContext, walk, gens: GeneratorSet) -> VoltageResult:
    """Product of the walk's steps in G, asserted to lie in N."""
    _, idxs = _token_indices(ctx, gens, walk)
    cur = 0
    mul = ctx.table.mul
    for i in idxs:
        cur = int(mul[cur, i])
    if ctx.projection[cur] != 0:
        raise GroupError("projected walk is not closed in the quotient")
    generated = len(ctx.table.close([cur]))
    return VoltageResult(ctx.table.elements[cur], generated == ctx.subgroup.order)


def verify_quotient_cycle(ctx: QuotientContext, walk, gens: GeneratorSet) -> VerificationReport:
    """Check that the projected walk is a hamiltonian cycle of Cay(G/N;S)."""
    tokens = tuple(walk.tokens if isinstance(walk, Walk) else walk)
    elems, bad = _resolve_all(gens, tokens)
    if bad is not None:
        return VerificationReport(False, len(tokens), (bad, "unknown-token"))
    k = ctx.num_cosets
    if len(tokens) != k:
        return VerificationReport(False, len(tokens), (len(tokens), "wrong-length"))
    mul = ctx.table.mul
    proj = ctx.projection
    seen = bytearray(k)
    seen[0] = 1
    cur = 0
    for i, g in enumerate(elems):
        cur = int(mul[cur, ctx.table.index[g]])
        if i == k - 1:
            break
        c = int(proj[cur])
        if seen[c]:
            return VerificationReport(False, k, (i, "repeat-vertex"))
        seen[c] = 1
    if int(proj[cur]) != 0:
        return VerificationReport(False, k, (k - 1, "not-closed"))
    return VerificationReport(True, k, None)


def _is_cyclic(ctx: QuotientContext) -> bool:
    orders = [int(ctx.table.order[ctx.table.index[m]]) for m in ctx.subgroup.members]
    return max(orders) == ctx.subgroup.order


def fgl_lift(
    ctx: QuotientContext, quotient_cycle, gens: GeneratorSet,
    provenance: str = "fgl-construction",
) -> Certificate:
    """|N|-fold repetition of a quotient hamiltonian cycle, verified in G."""
    report = verify_quotient_cycle(ctx, quotient_cycle, gens)
    if not report.ok:
        raise GroupError(f"quotient cycle invalid: {report.first_violation}")
    if not _is_cyclic(ctx):
        raise GroupError("normal subgroup is not cyclic")
    volt = voltage(ctx, quotient_cycle, gens)
    if not volt.generates_N:
        raise LiftRefused("voltage does not generate the normal subgroup")
    tokens = tuple(quotient_cycle.tokens if isinstance(quotient_cycle, Walk) else quotient_cycle)
    cert = make_certificate(
        ctx.spec, gens.symbols, Walk(tokens * ctx.subgroup.order),
        provenance=provenance,
    )
    check = cert.verify()
    if not check.ok:
        raise GroupError(f"lift failed verification: {check.first_violation}")  # pragma: no cover
    return cert


def double_edge_lift(
    ctx: QuotientContext, quotient_cycle, s, t, gens: GeneratorSet,
    provenance: str = "fgl-construction",
) -> Certificate:
    """Swap one s-edge for t (s ≡ t mod N, s ≠ t) and lift the cycle that works."""
    if not _is_prime(ctx.subgroup.order):
        raise GroupError("double-edge lifting needs |N| prime")
    s = (s[0], int(s[1]))
    t = (t[0], int(t[1]))
    if s == t:
        raise GroupError("the two edge labels must differ")
    es, et = gens.resolve(s), gens.resolve(t)
    if es == et:
        raise GroupError("edge labels resolve to the same element")
    if ctx.project(es) != ctx.project(et):
        raise GroupError("edge labels are not congruent modulo N")
    tokens = tuple(quotient_cycle.tokens if isinstance(quotient_cycle, Walk) else quotient_cycle)
    try:
        pos = tokens.index(s)
    except ValueError:
        raise GroupError("quotient cycle uses no edge with the first label") from None
    swapped = tokens[:pos] + (t,) + tokens[pos + 1 :]
    v1 = voltage(ctx, tokens, gens)
    v2 = voltage(ctx, swapped, gens)
    if v1.element == v2.element:
        raise GroupError("internal-consistency failure: swap left the voltage unchanged")
    if v1.generates_N:
        return fgl_lift(ctx, Walk(tokens), gens, provenance=provenance)
    if v2.generates_N:
        return fgl_lift(ctx, Walk(swapped), gens, provenance=provenance)
    raise GroupError("internal-consistency failure: neither voltage generates N")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True
