"""Walk algebra, hamiltonian-cycle verification, and exact pruned search."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional

from .cayley import CayleyGraph, GeneratorSet, Token, is_connected
from .groups import CapExceeded, Element, GroupError, group_order, table_for

DEFAULT_BUDGET = 5_000_000


class BudgetExceeded(GroupError):
    """Raised when the exact searcher runs out of node expansions."""


# ---------------------------------------------------------------------------
# walks and walk expressions


@dataclass(frozen=True)
class Walk:
    """A sequence of signed generator tokens."""

    tokens: tuple

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)


def walk(tokens) -> Walk:
    return Walk(tuple((name, int(sign)) for name, sign in tokens))


def reversed_inverse_tokens(tokens) -> tuple:
    """(s₁,…,s_m) ↦ (s_m⁻¹,…,s₁⁻¹)."""
    return tuple((name, -sign) for name, sign in reversed(tuple(tokens)))


@dataclass(frozen=True)
class Atom:
    token: Token


@dataclass(frozen=True)
class Concat:
    parts: tuple


@dataclass(frozen=True)
class Power:
    expr: object
    k: int


@dataclass(frozen=True)
class ReverseInverse:
    expr: object


def concat(*parts) -> Concat:
    return Concat(tuple(parts))


def power(expr, k: int) -> Power:
    return Power(expr, k)


def atoms(*tokens) -> Concat:
    """Concat of Atoms, for writing walks as token tuples."""
    return Concat(tuple(Atom((name, int(sign))) for name, sign in tokens))


def flatten(expr) -> Walk:
    """Flatten a WalkExpr tree into a Walk (total and deterministic)."""
    return Walk(_flat(expr))


def _flat(expr) -> tuple:
    if isinstance(expr, Walk):
        return expr.tokens
    if isinstance(expr, Atom):
        return (expr.token,)
    if isinstance(expr, Concat):
        out = ()
        for part in expr.parts:
            out += _flat(part)
        return out
    if isinstance(expr, Power):
        if expr.k < 0:
            raise GroupError(f"negative walk power {expr.k}")
        return _flat(expr.expr) * expr.k
    if isinstance(expr, ReverseInverse):
        return reversed_inverse_tokens(_flat(expr.expr))
    raise GroupError(f"not a walk expression: {expr!r}")


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of checking a walk; first_violation is (step index, reason)."""

    ok: bool
    length: int
    first_violation: Optional[tuple] = None


def _resolve_all(gens: GeneratorSet, tokens):
    elems = []
    for i, tok in enumerate(tokens):
        try:
            elems.append(gens.resolve(tok))
        except GroupError:
            return None, i
    return elems, None


def verify_hamiltonian_cycle(spec, gens: GeneratorSet, walk) -> VerificationReport:
    """Check |G| tokens, distinct partial products, and closure at the identity."""
    tokens = tuple(walk.tokens if isinstance(walk, Walk) else walk)
    elems, bad = _resolve_all(gens, tokens)
    if bad is not None:
        return VerificationReport(False, len(tokens), (bad, "unknown-token"))
    n = group_order(spec)
    if len(tokens) != n:
        return VerificationReport(False, len(tokens), (len(tokens), "wrong-length"))
    tbl = table_for(spec)
    mul, index = tbl.mul, tbl.index
    seen = bytearray(n)
    seen[0] = 1
    cur = 0
    for i, g in enumerate(elems):
        cur = int(mul[cur, index[g]])
        if i == n - 1:
            break
        if seen[cur]:
            return VerificationReport(False, n, (i, "repeat-vertex"))
        seen[cur] = 1
    if cur != 0:
        return VerificationReport(False, n, (n - 1, "not-closed"))
    return VerificationReport(True, n, None)


def verify_hamiltonian_path(
    spec, gens: GeneratorSet, walk, start: Element, end: Element
) -> VerificationReport:
    """Check |G|−1 tokens tracing start → end through every element once."""
    tokens = tuple(walk.tokens if isinstance(walk, Walk) else walk)
    elems, bad = _resolve_all(gens, tokens)
    if bad is not None:
        return VerificationReport(False, len(tokens), (bad, "unknown-token"))
    n = group_order(spec)
    if len(tokens) != n - 1:
        return VerificationReport(False, len(tokens), (len(tokens), "wrong-length"))
    tbl = table_for(spec)
    mul, index = tbl.mul, tbl.index
    seen = bytearray(n)
    cur = index[start]
    seen[cur] = 1
    for i, g in enumerate(elems):
        cur = int(mul[cur, index[g]])
        if seen[cur]:
            return VerificationReport(False, len(tokens), (i, "repeat-vertex"))
        seen[cur] = 1
    if cur != index[end]:
        return VerificationReport(False, len(tokens), (len(tokens) - 1, "not-closed"))
    return VerificationReport(True, len(tokens), None)


# ---------------------------------------------------------------------------
# exact search


def _budget_value(budget) -> int:
    if budget is not None:
        return int(budget)
    env = os.environ.get("CAYLEYHAM_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def _adjacency_matrix(adj, n):
    amat = [bytearray(n) for _ in range(n)]
    for u, row in enumerate(adj):
        for v in row:
            amat[u][v] = 1
    return amat


def _cycle_solutions(adj, start: int, budget: int):
    """Yield hamiltonian vertex cycles from start, deterministically ordered.

    Sound pruning only (connectivity of the unvisited region, remaining-degree
    bound, re-entry to start), so exhaustion proves non-hamiltonicity.
    """
    n = len(adj)
    amat = _adjacency_matrix(adj, n)
    visited = bytearray(n)
    visited[start] = 1
    rd = [len(row) for row in adj]  # unvisited-neighbor counts
    for w in adj[start]:
        rd[w] -= 1
    path = [start]
    amat_start = amat[start]
    left = budget

    def extend(u):
        nonlocal left
        left -= 1
        if left < 0:
            raise BudgetExceeded(f"search budget of {budget} expansions exhausted")
        if len(path) == n:
            if amat_start[u]:
                yield tuple(path)
            return
        cands = [w for w in adj[u] if not visited[w]]
        if not cands:
            return
        remaining = n - len(path)
        if remaining > 1 and rd[start] == 0:
            return  # start can no longer be re-entered
        amat_u = amat[u]
        reach = bytearray(n)
        stack = list(cands)
        for w in cands:
            reach[w] = 1
        found = len(cands)
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if not visited[y] and not reach[y]:
                    reach[y] = 1
                    found += 1
                    stack.append(y)
        if found != remaining:
            return  # unvisited region not reachable from the endpoint
        for w in range(n):
            if not visited[w] and rd[w] + amat_u[w] + amat_start[w] < 2:
                return  # w could never be entered and left
        cands.sort(key=lambda w: (rd[w], w))
        for w in cands:
            visited[w] = 1
            for x in adj[w]:
                rd[x] -= 1
            path.append(w)
            yield from extend(w)
            path.pop()
            for x in adj[w]:
                rd[x] += 1
            visited[w] = 0

    yield from extend(start)


def _tokens_for_vertex_seq(graph: CayleyGraph, seq, close: bool) -> Walk:
    pairs = list(zip(seq, seq[1:]))
    if close:
        pairs.append((seq[-1], seq[0]))
    return Walk(tuple(graph.token_between(u, v) for u, v in pairs))


def _token_count(tokens, name: str) -> int:
    return sum(1 for tok in tokens if tok[0] == name)


def find_hamiltonian_cycle(
    graph: CayleyGraph, budget=None, parity_filter: Optional[str] = None, accept=None
) -> Optional[Walk]:
    """First hamiltonian cycle of the graph, or None after exhaustive search.

    With parity_filter = generator name, only cycles using that generator an
    odd number of times (in either direction) are accepted.  accept, when
    given, is an extra predicate on the candidate Walk; rejected candidates
    cost search budget but the enumeration continues, so None still means no
    acceptable cycle exists.
    """
    if not is_connected(graph):
        raise GroupError("cycle search requires a connected graph")
    for seq in _cycle_solutions(graph.adjacency, 0, _budget_value(budget)):
        found = _tokens_for_vertex_seq(graph, seq, close=True)
        if parity_filter is not None and _token_count(found.tokens, parity_filter) % 2 == 0:
            continue
        if accept is not None and not accept(found):
            continue
        return found
    return None


def find_hamiltonian_path(
    graph: CayleyGraph, u: Element, v: Element, budget=None
) -> Optional[Walk]:
    """Hamiltonian path from u to v as a Walk, or None after exhaustive search.

    Reuses the cycle searcher on the graph plus a virtual vertex joined to u
    and v.
    """
    iu, iv = graph.vertex_of(u), graph.vertex_of(v)
    if iu == iv:
        raise GroupError("path endpoints must differ")
    seq = _path_vertex_seq(graph.adjacency, iu, iv, _budget_value(budget))
    if seq is None:
        return None
    return _tokens_for_vertex_seq(graph, seq, close=False)


def _path_vertex_seq(adj, iu: int, iv: int, budget: int):
    n = len(adj)
    aug = [tuple(row) for row in adj] + [(iu, iv) if iu < iv else (iv, iu)]
    aug[iu] = tuple(sorted(aug[iu] + (n,)))
    aug[iv] = tuple(sorted(aug[iv] + (n,)))
    for cyc in _cycle_solutions(aug, n, budget):
        inner = cyc[1:]  # drop the virtual vertex; endpoints are iu and iv
        return inner if inner[0] == iu else tuple(reversed(inner))
    return None


def is_hamiltonian_connected(graph: CayleyGraph, budget=None) -> bool:
    """True iff a hamiltonian path joins every pair of vertices (|G| ≤ 100)."""
    n = graph.n
    if n > 100:
        raise CapExceeded(f"hamiltonian-connectivity cap is 100 vertices, got {n}")
    limit = _budget_value(budget)
    for iu in range(n):
        for iv in range(iu + 1, n):
            if _path_vertex_seq(graph.adjacency, iu, iv, limit) is None:
                return False
    return True


def walk_vertices(graph: CayleyGraph, walk, start: int = 0) -> list:
    """Vertex indices visited by a walk from a start vertex (start included)."""
    tokens = tuple(walk.tokens if isinstance(walk, Walk) else walk)
    tbl = graph.table
    out = [start]
    cur = start
    for tok in tokens:
        cur = int(tbl.mul[cur, tbl.index[graph.gens.resolve(tok)]])
        out.append(cur)
    return out
