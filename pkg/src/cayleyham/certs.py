"""Self-contained walk certificates and their line-oriented text format."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .cayley import GeneratorSet, generator_set
from .groups import GroupError, check_element, table_for
from .hamilton import VerificationReport, Walk, verify_hamiltonian_cycle
from .spectext import (
    format_element,
    format_group_spec,
    parse_element_text,
    parse_group_spec,
)

PROVENANCE_TAGS = ("figure", "parametric-walk", "fgl-construction", "search-fallback")

_TOKEN_SYNTAX = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)(-?)\Z")
_TOKENS_PER_LINE = 10


class CertificateError(GroupError):
    """Certificate text rejected; carries the offending line and column."""

    def __init__(self, message: str, line: int, col: int = 1):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Certificate:
    """A (group, named generators, token walk) record; validity is recomputed."""

    group_text: str
    symbols: tuple  # ((name, element), ...)
    walk: Walk
    figure_id: Optional[str] = None
    provenance: Optional[str] = None
    expects: tuple = ()  # ((step, element), ...) spot checks

    @property
    def spec(self):
        return parse_group_spec(self.group_text)

    def gens(self) -> GeneratorSet:
        return generator_set(self.spec, self.symbols)

    def verify(self) -> VerificationReport:
        return verify_hamiltonian_cycle(self.spec, self.gens(), self.walk)

    def check_expects(self) -> list:
        """(step, expected, actual) triples where a spot check disagrees."""
        spec = self.spec
        tbl = table_for(spec)
        gens = self.gens()
        wanted = dict(self.expects)
        bad = []
        cur = 0
        for i, tok in enumerate(self.walk.tokens, start=1):
            cur = int(tbl.mul[cur, tbl.index[gens.resolve(tok)]])
            if i in wanted and tbl.elements[cur] != wanted[i]:
                bad.append((i, wanted[i], tbl.elements[cur]))
        return bad


def make_certificate(
    spec,
    symbols,
    walk: Walk,
    figure_id: Optional[str] = None,
    provenance: Optional[str] = None,
    expects=(),
) -> Certificate:
    """Certificate from in-memory objects; the group text is canonicalized."""
    if provenance is not None and provenance not in PROVENANCE_TAGS:
        raise GroupError(f"unknown provenance tag {provenance!r}")
    return Certificate(
        format_group_spec(spec),
        tuple(symbols),
        walk if isinstance(walk, Walk) else Walk(tuple(walk)),
        figure_id,
        provenance,
        tuple(expects),
    )


def emit_certificate(cert: Certificate) -> str:
    """Deterministic text form; parse_certificate inverts it."""
    lines = [f"group: {cert.group_text}"]
    if cert.figure_id is not None:
        lines.append(f"figure: {cert.figure_id}")
    if cert.provenance is not None:
        lines.append(f"provenance: {cert.provenance}")
    for name, g in cert.symbols:
        lines.append(f"gen {name} = {format_element(g)}")
    for step, g in cert.expects:
        lines.append(f"expect {step} = {format_element(g)}")
    lines.append("tokens:")
    toks = [name if sign > 0 else f"{name}-" for name, sign in cert.walk.tokens]
    for i in range(0, len(toks), _TOKENS_PER_LINE):
        lines.append(" ".join(toks[i : i + _TOKENS_PER_LINE]))
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> Certificate:
    """Parse the line-oriented certificate format; errors carry line/column."""
    group_text = None
    figure_id = None
    provenance = None
    symbols = []
    expects = []
    tokens = []
    in_tokens = False
    names = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if in_tokens:
            col = 1
            for piece in raw.split():
                col = raw.index(piece, col - 1) + 1
                m = _TOKEN_SYNTAX.match(piece)
                if not m:
                    raise CertificateError(f"bad token {piece!r}", lineno, col)
                name, minus = m.groups()
                if name not in names:
                    raise CertificateError(f"unknown token name {name!r}", lineno, col)
                tokens.append((name, -1 if minus else 1))
            continue
        if line == "tokens:":
            if group_text is None:
                raise CertificateError("tokens: before group:", lineno)
            if not symbols:
                raise CertificateError("tokens: before any gen line", lineno)
            in_tokens = True
            continue
        key, sep, rest = line.partition(":")
        if sep and key in ("group", "figure", "provenance"):
            value = rest.strip()
            if key == "group":
                if group_text is not None:
                    raise CertificateError("duplicate group: line", lineno)
                try:
                    group_text = format_group_spec(parse_group_spec(value))
                except GroupError as err:
                    raise CertificateError(f"bad group spec: {err}", lineno) from None
            elif key == "figure":
                figure_id = value
            else:
                if value not in PROVENANCE_TAGS:
                    raise CertificateError(f"unknown provenance {value!r}", lineno)
                provenance = value
            continue
        m = re.match(r"gen\s+([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.+)\Z", line)
        if m:
            name, elt_text = m.groups()
            if name in names:
                raise CertificateError(f"duplicate generator {name!r}", lineno)
            try:
                g = parse_element_text(elt_text)
            except GroupError as err:
                raise CertificateError(f"bad element: {err}", lineno) from None
            names.add(name)
            symbols.append((name, g))
            continue
        m = re.match(r"expect\s+(\d+)\s*=\s*(.+)\Z", line)
        if m:
            step, elt_text = m.groups()
            try:
                g = parse_element_text(elt_text)
            except GroupError as err:
                raise CertificateError(f"bad element: {err}", lineno) from None
            expects.append((int(step), g))
            continue
        raise CertificateError(f"unrecognized line {line!r}", lineno)
    if group_text is None:
        raise CertificateError("missing group: line", 1)
    if not in_tokens:
        raise CertificateError("missing tokens: section", 1)
    spec = parse_group_spec(group_text)
    for name, g in symbols:
        try:
            check_element(spec, g)
        except GroupError as err:
            raise CertificateError(f"generator {name!r}: {err}", 1) from None
    return Certificate(
        group_text,
        tuple(symbols),
        Walk(tuple(tokens)),
        figure_id,
        provenance,
        tuple(expects),
    )
