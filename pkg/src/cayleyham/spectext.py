"""Text syntax for group specs and coordinate elements.

Grammar (case sensitive, whitespace insensitive):

    spec    := product ("ltimes" product "via" action)?
    product := atom ("x" atom)*
    atom    := "Z" n | "D" 2n | preset-name | "(" spec ")"   [optionally "^" k]
    action  := "matrix" p mat ("," mat)*      mat = [[a,b],[c,d]]
             | "unit" u ("," u)*
             | "images" group (";" group)*    group = [elem ("," elem)*]

"x" binds tighter than "ltimes"; "ltimes" does not nest without parentheses.
"Z5^2" means Z5 x Z5.  Elements are written as nested tuples, e.g.
"(1, (0, (1, 0)))"; a bare integer is a cyclic-group element.
"""
from __future__ import annotations

import re

from .groups import (Cyclic, Dihedral, DirectProduct, GroupError, GroupSpec,
                     ImagesAction, MatrixAction, Semidirect, UnitAction)


class SpecSyntaxError(GroupError):
    """Unparseable group spec or element text."""


_TOKEN_RE = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*|\d+|[()\[\],^;])")


def _tokenize(text: str):
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise SpecSyntaxError(f"bad character at offset {pos}: {text[pos:pos+10]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens, what):
        self.toks = tokens
        self.i = 0
        self.what = what

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self):
        t = self.peek()
        if t is None:
            raise SpecSyntaxError(f"unexpected end of {self.what}")
        self.i += 1
        return t

    def expect(self, tok):
        t = self.next()
        if t != tok:
            raise SpecSyntaxError(f"expected {tok!r}, got {t!r} in {self.what}")
        return t

    def number(self):
        t = self.next()
        if not t.isdigit():
            raise SpecSyntaxError(f"expected a number, got {t!r} in {self.what}")
        return int(t)

    # -- specs ------------------------------------------------------------
    def spec(self) -> GroupSpec:
        left = self.product()
        if self.peek() == "ltimes":
            self.next()
            right = self.product()
            self.expect("via")
            act = self.action()
            return Semidirect(left, right, act)
        return left

    def product(self) -> GroupSpec:
        factors = [self.atom()]
        while self.peek() == "x":
            self.next()
            factors.append(self.atom())
        flat = []
        for f in factors:
            if isinstance(f, DirectProduct):
                flat.extend(f.factors)
            else:
                flat.append(f)
        return flat[0] if len(flat) == 1 else DirectProduct(tuple(flat))

    def atom(self) -> GroupSpec:
        t = self.next()
        if t == "(":
            inner = self.spec()
            self.expect(")")
            base = inner
        elif t in PRESETS:
            base = PRESETS[t]
        elif t[0] == "Z" and t[1:].isdigit():
            base = Cyclic(int(t[1:]))
        elif t[0] == "D" and t[1:].isdigit():
            base = Dihedral(int(t[1:]))
        else:
            raise SpecSyntaxError(f"unknown group atom {t!r}")
        if self.peek() == "^":
            self.next()
            k = self.number()
            if k < 1:
                raise SpecSyntaxError("power must be >= 1")
            base = base if k == 1 else DirectProduct((base,) * k)
        return base

    # -- actions ----------------------------------------------------------
    def action(self):
        t = self.next()
        if t == "matrix":
            p = self.number()
            mats = [self.matrix()]
            while self.peek() == ",":
                self.next()
                mats.append(self.matrix())
            return MatrixAction(p, tuple(mats))
        if t == "unit":
            units = [self.number()]
            while self.peek() == ",":
                self.next()
                units.append(self.number())
            return UnitAction(tuple(units))
        if t == "images":
            groups = [self.image_group()]
            while self.peek() == ";":
                self.next()
                groups.append(self.image_group())
            return ImagesAction(tuple(groups))
        raise SpecSyntaxError(f"unknown action kind {t!r}")

    def matrix(self):
        self.expect("[")
        rows = []
        for r in range(2):
            self.expect("[")
            a = self.number()
            self.expect(",")
            b = self.number()
            self.expect("]")
            rows.append((a, b))
            if r == 0:
                self.expect(",")
        self.expect("]")
        return tuple(rows)

    def image_group(self):
        self.expect("[")
        elems = [self.element()]
        while self.peek() == ",":
            self.next()
            elems.append(self.element())
        self.expect("]")
        return tuple(elems)

    # -- elements ---------------------------------------------------------
    def element(self):
        t = self.peek()
        if t == "(":
            self.next()
            parts = [self.element()]
            while self.peek() == ",":
                self.next()
                parts.append(self.element())
            self.expect(")")
            return tuple(parts)
        if t is not None and t.isdigit():
            return self.number()
        raise SpecSyntaxError(f"expected an element, got {t!r} in {self.what}")

    def done(self):
        if self.peek() is not None:
            raise SpecSyntaxError(f"trailing input {' '.join(self.toks[self.i:])!r}")


def parse_group_spec(text: str) -> GroupSpec:
    p = _Parser(_tokenize(text), f"group spec {text!r}")
    out = p.spec()
    p.done()
    return out


def parse_element_text(text: str):
    p = _Parser(_tokenize(text), f"element {text!r}")
    out = p.element()
    p.done()
    return out


def format_element(g) -> str:
    if isinstance(g, tuple):
        return "(" + ", ".join(format_element(c) for c in g) + ")"
    return str(g)


def _format_action(action) -> str:
    if isinstance(action, MatrixAction):
        mats = ", ".join("[[%d,%d],[%d,%d]]" % (m[0][0], m[0][1], m[1][0], m[1][1])
                         for m in action.mats)
        return f"matrix {action.p} {mats}"
    if isinstance(action, UnitAction):
        return "unit " + ", ".join(str(u) for u in action.units)
    if isinstance(action, ImagesAction):
        groups = "; ".join("[" + ", ".join(format_element(e) for e in grp) + "]"
                           for grp in action.images)
        return "images " + groups
    raise GroupError(f"not an action map: {action!r}")


def format_group_spec(spec: GroupSpec) -> str:
    """Canonical text for a spec; round-trips through parse_group_spec."""
    return _format(spec, top=True)


def _format(spec, top=False) -> str:
    if isinstance(spec, Cyclic):
        return f"Z{spec.n}"
    if isinstance(spec, Dihedral):
        return f"D{spec.order}"
    if isinstance(spec, DirectProduct):
        parts = []
        i = 0
        factors = spec.factors
        while i < len(factors):
            j = i
            while j < len(factors) and factors[j] == factors[i]:
                j += 1
            base = _format(factors[i])
            if isinstance(factors[i], DirectProduct):
                base = f"({base})"
            parts.append(base if j - i == 1 else f"{base}^{j - i}")
            i = j
        return " x ".join(parts)
    if isinstance(spec, Semidirect):
        left = _format(spec.acting)
        right = _format(spec.acted)
        body = f"{left} ltimes {right} via {_format_action(spec.action)}"
        return body if top else f"({body})"
    raise GroupError(f"spec has no text form: {spec!r}")


# ---------------------------------------------------------------------------
# named presets

Z5SQ = DirectProduct((Cyclic(5), Cyclic(5)))

# y acts on (Z5)^2 by the irreducible order-3 matrix M = [[0,1],[4,4]]
_M = ((0, 1), (4, 4))
# f acts by the involution J = [[1,0],[0,4]], t by C = [[2,1],[3,2]]
_J = ((1, 0), (0, 4))
_C = ((2, 1), (3, 2))

G150_ABELIAN_QUOT = DirectProduct((
    Cyclic(2),
    Semidirect(Cyclic(3), Z5SQ, MatrixAction(5, (_M,))),
))

G150_D6 = Semidirect(Dihedral(6), Z5SQ, MatrixAction(5, (_J, _C)))

PRESETS = {
    "G150_ABELIAN_QUOT": G150_ABELIAN_QUOT,
    "G150_D6": G150_D6,
}
