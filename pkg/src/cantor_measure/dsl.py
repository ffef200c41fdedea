"""Expression language for Borel codes and the JSON tree form.

Grammar (LL(1), one token of lookahead):

    expr := cyl ( bits ) | empty | full
          | union ( expr {, expr} ) | inter ( expr {, expr} )
          | compl ( expr )
          | reloc ( nat , expr )
          | bigunion ( ident , nat , nat , expr )

reloc and bigunion are surface syntax only: both expand while parsing, so
the resulting code contains just leaves, unions, intersections, and
complements.  Inside a bigunion body, $ident substitutes the running index
wherever a nat is expected; the bounds are inclusive.  Digit runs are read
as bits after cyl and as decimal numbers in nat positions.

The printer emits one canonical spelling per code: empty and full labels by
name, one cyl per cylinder, multi-cylinder leaves as unions of cyls, and
childless interior nodes by their denotation.  print(parse(t)) == t exactly
when t is such a spelling.
"""

from __future__ import annotations

from dataclasses import dataclass

from .codes import (
    BorelCode,
    ComplNode,
    InterNode,
    Leaf,
    UnionNode,
    child_items,
    is_complement_free,
    normalize_demorgan,
    relocate,
)
from .errors import ParseError, ValidationError
from .ordinals import OrdinalNotation
from .space import ClopenSet

_KEYWORDS = {"cyl", "empty", "full", "union", "inter", "compl", "reloc", "bigunion"}


@dataclass(frozen=True)
class _Token:
    kind: str  # word | digits | punct | end
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    toks = []
    line, col, i = 1, 1, 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            col += 1
            i += 1
            continue
        if ch in "(),$":
            toks.append(_Token("punct", ch, line, col))
            col += 1
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(_Token("digits", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(_Token("word", text[i:j], line, col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    toks.append(_Token("end", "", line, col))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.toks[self.pos]

    def take(self) -> _Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def fail(self, expected: str):
        t = self.peek()
        where = "end-of-input" if t.kind == "end" else repr(t.text)
        raise ParseError(f"at {where}, expecting {expected}", t.line, t.col)

    def expect(self, text: str):
        t = self.peek()
        if (t.kind == "punct" or t.kind == "word") and t.text == text:
            return self.take()
        self.fail(repr(text))

    def parse(self) -> BorelCode:
        code = self.expr({})
        t = self.peek()
        if t.kind != "end":
            self.fail("end-of-input")
        return code

    def bits(self) -> str:
        t = self.peek()
        if t.kind == "digits":
            self.take()
            if any(c not in "01" for c in t.text):
                raise ParseError(f"bits must be 0/1, got {t.text!r}", t.line, t.col)
            return t.text
        if t.kind == "punct" and t.text == ")":
            return ""
        self.fail("bits or ')'")

    def nat(self, env: dict[str, int]) -> int:
        t = self.peek()
        if t.kind == "digits":
            self.take()
            return int(t.text, 10)
        if t.kind == "punct" and t.text == "$":
            self.take()
            name = self.peek()
            if name.kind != "word":
                self.fail("index name after '$'")
            self.take()
            if name.text not in env:
                raise ParseError(f"unbound index ${name.text}", name.line, name.col)
            return env[name.text]
        self.fail("number or '$'")

    def expr(self, env: dict[str, int]) -> BorelCode:
        t = self.peek()
        if t.kind != "word":
            self.fail("an expression keyword")
        if t.text not in _KEYWORDS:
            raise ParseError(f"unknown form {t.text!r}", t.line, t.col)
        self.take()
        if t.text == "empty":
            return Leaf(ClopenSet.empty())
        if t.text == "full":
            return Leaf(ClopenSet.full())
        self.expect("(")
        if t.text == "cyl":
            p = self.bits()
            self.expect(")")
            return Leaf(ClopenSet.cylinder(p))
        if t.text == "compl":
            inner = self.expr(env)
            self.expect(")")
            return ComplNode(inner)
        if t.text == "reloc":
            n = self.nat(env)
            self.expect(",")
            inner = self.expr(env)
            self.expect(")")
            # relocation rewrites leaf generators, so complements must be
            # pushed down first
            if not is_complement_free(inner):
                inner = normalize_demorgan(inner)
            return relocate(n, inner)
        if t.text == "bigunion":
            name = self.peek()
            if name.kind != "word":
                self.fail("an index name")
            self.take()
            self.expect(",")
            lo = self.nat(env)
            self.expect(",")
            hi = self.nat(env)
            self.expect(",")
            mark = self.pos
            kids = []
            for v in range(lo, hi + 1):
                self.pos = mark
                inner = dict(env)
                inner[name.text] = v
                kids.append(self.expr(inner))
            if lo > hi:
                # body must still parse once to be rejected or accepted
                inner = dict(env)
                inner[name.text] = lo
                self.expr(inner)
            self.expect(")")
            return UnionNode(tuple(kids))
        # union | inter
        kids = [self.expr(env)]
        while self.peek().kind == "punct" and self.peek().text == ",":
            self.take()
            kids.append(self.expr(env))
        self.expect(")")
        cls = UnionNode if t.text == "union" else InterNode
        return cls(tuple(kids))


def parse_dsl(text: str) -> BorelCode:
    return _Parser(text).parse()


def print_dsl(code: BorelCode) -> str:
    """Canonical spelling; total on all codes, injective on rank-free ones."""
    if isinstance(code, Leaf):
        if code.label.is_empty():
            return "empty"
        if code.label.is_full():
            return "full"
        gens = code.label.generators
        if len(gens) == 1:
            return f"cyl({gens[0]})"
        return "union(" + ",".join(f"cyl({g})" for g in gens) + ")"
    if isinstance(code, ComplNode):
        return f"compl({print_dsl(code.child)})"
    kids = [c for _, c in child_items(code)]
    if isinstance(code, UnionNode):
        if not kids:
            return "empty"
        return "union(" + ",".join(print_dsl(k) for k in kids) + ")"
    if not kids:
        return "full"
    return "inter(" + ",".join(print_dsl(k) for k in kids) + ")"


_KINDS = {Leaf: "leaf", UnionNode: "union", InterNode: "inter", ComplNode: "compl"}


def code_to_json(code: BorelCode) -> dict:
    """Tree form: kind, label (leaves), rank, children, slots."""
    out: dict = {"kind": _KINDS[type(code)]}
    out["rank"] = str(code.rank) if code.rank is not None else None
    if isinstance(code, Leaf):
        out["label"] = list(code.label.generators)
    elif isinstance(code, ComplNode):
        out["children"] = [code_to_json(code.child)]
    else:
        out["children"] = [code_to_json(c) for _, c in child_items(code)]
        out["slots"] = list(code.slots) if code.slots is not None else None
    return out


def code_from_json(obj: dict) -> BorelCode:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValidationError("code object needs a kind")
    kind = obj["kind"]
    rank_s = obj.get("rank")
    rank = OrdinalNotation.parse(rank_s) if rank_s is not None else None
    if kind == "leaf":
        gens = obj.get("label", [])
        return Leaf(ClopenSet(tuple(gens)), rank=rank)
    kids = tuple(code_from_json(c) for c in obj.get("children", []))
    if kind == "compl":
        if len(kids) != 1:
            raise ValidationError("complement takes exactly one child")
        return ComplNode(kids[0], rank=rank)
    slots = obj.get("slots")
    slots = tuple(slots) if slots is not None else None
    if kind == "union":
        return UnionNode(kids, rank=rank, slots=slots)
    if kind == "inter":
        return InterNode(kids, rank=rank, slots=slots)
    raise ValidationError(f"unknown node kind {kind!r}")
