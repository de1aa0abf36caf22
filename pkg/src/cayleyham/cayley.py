"""Cayley graph construction, connectivity, and DOT export."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .groups import (
    Element,
    GroupError,
    GroupTable,
    check_element,
    identity,
    inverse,
    table_for,
)
from .spectext import format_element

# A signed token names one traversal direction of a generator edge.
Token = tuple  # (name: str, sign: +1 | -1)


def token_text(token: Token) -> str:
    """Render a signed token the way certificate files spell it."""
    name, sign = token
    return name if sign > 0 else f"{name}-"


@dataclass(frozen=True)
class GeneratorSet:
    """Named generating-set members of one group, with a signed-token view."""

    spec: object
    symbols: tuple  # ((name, element), ...)

    def __post_init__(self):
        if not self.symbols:
            raise GroupError("generator set must be non-empty")
        e = identity(self.spec)
        names = set()
        elements = set()
        for name, g in self.symbols:
            if not name or not isinstance(name, str):
                raise GroupError(f"bad generator name {name!r}")
            if name in names:
                raise GroupError(f"duplicate generator name {name!r}")
            names.add(name)
            check_element(self.spec, g)
            if g == e:
                raise GroupError(f"generator {name!r} is the identity")
            if g in elements:
                raise GroupError(f"generator {name!r} repeats an earlier element")
            elements.add(g)

    @cached_property
    def _by_name(self) -> dict:
        return dict(self.symbols)

    @cached_property
    def signed_tokens(self) -> tuple:
        """One token per distinct element of S ∪ S⁻¹, in deterministic order."""
        seen = {}
        for name, g in self.symbols:
            seen.setdefault(g, (name, 1))
        for name, g in self.symbols:
            seen.setdefault(inverse(self.spec, g), (name, -1))
        return tuple(seen.values())

    @property
    def names(self) -> tuple:
        return tuple(name for name, _ in self.symbols)

    @property
    def elements(self) -> tuple:
        return tuple(g for _, g in self.symbols)

    @property
    def degree(self) -> int:
        return len(self.signed_tokens)

    def resolve(self, token: Token) -> Element:
        """Element of a signed token; raises GroupError on unknown names."""
        name, sign = token
        try:
            g = self._by_name[name]
        except KeyError:
            raise GroupError(f"unknown generator name {name!r}") from None
        return g if sign > 0 else inverse(self.spec, g)


def generator_set(spec, symbols) -> GeneratorSet:
    """Build a GeneratorSet from (name, element) pairs or a name->element dict."""
    if isinstance(symbols, dict):
        symbols = symbols.items()
    return GeneratorSet(spec, tuple((name, g) for name, g in symbols))


@dataclass(frozen=True)
class CayleyGraph:
    """Dense vertex-indexed Cayley graph with token-labelled edges."""

    spec: object
    gens: GeneratorSet
    table: GroupTable
    neighbors: np.ndarray  # (n, degree); column j is right-multiplication by token j
    edge_tokens: tuple  # tokens aligned with neighbor columns

    @property
    def n(self) -> int:
        return self.table.n

    @property
    def degree(self) -> int:
        return len(self.edge_tokens)

    def vertex_of(self, g: Element) -> int:
        return self.table.index[g]

    def element_at(self, v: int) -> Element:
        return self.table.elements[v]

    @cached_property
    def adjacency(self) -> tuple:
        """Per-vertex sorted tuple of distinct neighbor indices (undirected view)."""
        return tuple(tuple(sorted(set(map(int, row)))) for row in self.neighbors)

    def token_between(self, u: int, v: int) -> Token:
        """First token (in column order) whose edge leads from u to v."""
        row = self.neighbors[u]
        for j, token in enumerate(self.edge_tokens):
            if int(row[j]) == v:
                return token
        raise GroupError(f"vertices {u} and {v} are not adjacent")


def build_cayley(spec, gens: GeneratorSet) -> CayleyGraph:
    """Cayley graph of the group on the given generating symbols."""
    if gens.spec != spec:
        raise GroupError("generator set belongs to a different group")
    tbl = table_for(spec)
    tokens = gens.signed_tokens
    cols = np.empty((tbl.n, len(tokens)), dtype=tbl.mul.dtype)
    for j, token in enumerate(tokens):
        cols[:, j] = tbl.mul[:, tbl.index[gens.resolve(token)]]
    return CayleyGraph(spec, gens, tbl, cols, tokens)


def is_connected(graph: CayleyGraph) -> bool:
    """True iff every vertex is reachable from the identity."""
    seen = np.zeros(graph.n, dtype=bool)
    seen[0] = True
    frontier = np.array([0])
    while frontier.size:
        nxt = np.unique(graph.neighbors[frontier].ravel())
        new = nxt[~seen[nxt]]
        seen[new] = True
        frontier = new
    return bool(seen.all())


def export_dot(graph: CayleyGraph, sink=None) -> str:
    """Deterministic DOT text for the undirected view; writes to sink if given."""
    lines = ["graph cayley {"]
    for v in range(graph.n):
        label = format_element(graph.element_at(v))
        lines.append(f'  n{v} [label="{label}"];')
    edges = sorted(
        {(min(u, v), max(u, v)) for u in range(graph.n) for v in graph.adjacency[u]}
    )
    for u, v in edges:
        lines.append(f"  n{u} -- n{v};")
    lines.append("}")
    text = "\n".join(lines) + "\n"
    if sink is not None:
        sink.write(text)
    return text
