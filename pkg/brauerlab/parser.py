"""Text grammar for elements, symbols, classes and forms.

    element   := term (('+' | '-') term)*
    term      := factor ('*' factor)*
    factor    := '-' factor | atom ('^' ['-'] int)?
    atom      := var | 't' | 'w' | int | '(' element ')'
    symbol    := '[' element ',' element ')'
    class     := symbol ('*' symbol)* | '1'
    bilinear  := '<<' element (',' element)* '>>'
    quadratic := '<<' [element (',' element)*] ';' element ']]'
    block     := [scalar '*'] ['<<' elements '>>' '*'] '[' '1' ',' element ']'
    blockform := (block | '<' element (',' element)* '>') ('_|_' ...)*

Printing is `str()` of the parsed objects; parsing printed text gives back an
equal object.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

from .basefield import BaseFieldElement, FieldError
from .brauer import BrauerClass, SymbolAS, SymbolError
from .laurent import FieldTower, LaurentError, LaurentPoly
from .quadforms import BilPfister, Block, BlockForm, FormError, QuadPfister

MAX_EXPONENT = 10_000

Parsed = Union[LaurentPoly, SymbolAS, BrauerClass, BilPfister, QuadPfister, BlockForm]


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "name" or the punctuation itself
    text: str
    position: int


_PUNCTUATION = ["_|_", "<<", ">>", "]]", "+", "-", "*", "^", "(", ")", "[", "]", ",", ";", "<", ">"]
_NAME = re.compile(r"[A-Za-z][A-Za-z0-9]*")
_INT = re.compile(r"\d+")


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    idx = 0
    while idx < len(source):
        c = source[idx]
        if c.isspace():
            idx += 1
            continue
        match = _INT.match(source, idx)
        if match:
            tokens.append(Token("int", match.group(), idx))
            idx = match.end()
            continue
        match = _NAME.match(source, idx)
        if match:
            tokens.append(Token("name", match.group(), idx))
            idx = match.end()
            continue
        for punct in _PUNCTUATION:
            if source.startswith(punct, idx):
                tokens.append(Token(punct, punct, idx))
                idx += len(punct)
                break
        else:
            raise ParseError(f"unexpected character {c!r}", idx)
    return tokens


class Parser:
    """Recursive descent over a token list for one tower."""

    def __init__(self, source: str, tower: FieldTower):
        self.source = source
        self.tower = tower
        self.tokens = tokenize(source)
        self.pos = 0

    # token stream ---------------------------------------------------------
    def peek(self, offset: int = 0) -> Optional[Token]:
        idx = self.pos + offset
        return self.tokens[idx] if idx < len(self.tokens) else None

    def at(self, kind: str, offset: int = 0) -> bool:
        token = self.peek(offset)
        return token is not None and token.kind == kind

    def here(self) -> int:
        token = self.peek()
        return token.position if token else len(self.source)

    def advance(self) -> Token:
        token = self.peek()
        if token is None:
            raise ParseError("unexpected end of input", len(self.source))
        self.pos += 1
        return token

    def expect(self, kind: str) -> Token:
        token = self.peek()
        if token is None or token.kind != kind:
            found = "end of input" if token is None else repr(token.text)
            raise ParseError(f"expected {kind!r}, found {found}", self.here())
        self.pos += 1
        return token

    def finish(self) -> None:
        if self.peek() is not None:
            raise ParseError(f"unexpected {self.peek().text!r}", self.here())

    # elements -------------------------------------------------------------
    def _block_follows(self) -> bool:
        return self.at("*") and (self.at("[", 1) or self.at("<<", 1))

    def element(self) -> LaurentPoly:
        value = self.term()
        while self.at("+") or self.at("-"):
            op = self.advance()
            rhs = self.term()
            value = value + rhs if op.kind == "+" else value - rhs
        return value

    def term(self) -> LaurentPoly:
        value = self.factor()
        while self.at("*") and not self._block_follows():
            self.advance()
            value = value * self.factor()
        return value

    def factor(self) -> LaurentPoly:
        if self.at("-"):
            self.advance()
            return -self.factor()
        value = self.atom()
        if self.at("^"):
            self.advance()
            start = self.here()
            sign = 1
            if self.at("-"):
                self.advance()
                sign = -1
            exponent = sign * int(self.expect("int").text)
            if abs(exponent) > MAX_EXPONENT:
                raise ParseError(f"exponent {exponent} overflows the limit {MAX_EXPONENT}", start)
            try:
                value = value ** exponent
            except (LaurentError, FieldError) as e:
                raise ParseError(str(e), start) from e
        return value

    def atom(self) -> LaurentPoly:
        token = self.peek()
        if token is None:
            raise ParseError("unexpected end of input", len(self.source))
        if token.kind == "(":
            self.advance()
            value = self.element()
            self.expect(")")
            return value
        if token.kind == "int":
            self.advance()
            return self.tower.constant(int(token.text))
        if token.kind == "name":
            self.advance()
            return self.name(token)
        raise ParseError(f"unexpected {token.text!r}", token.position)

    def name(self, token: Token) -> LaurentPoly:
        if token.text in self.tower.names:
            return self.tower.variable(self.tower.names.index(token.text) + 1)
        base = self.tower.base
        try:
            if token.text == "t":
                return self.tower.constant(BaseFieldElement.variable(base))
            if token.text == "w":
                return self.tower.constant(BaseFieldElement.generator(base))
        except FieldError as e:
            raise ParseError(str(e), token.position) from e
        raise ParseError(f"unknown variable {token.text!r}", token.position)

    def elements(self, closing: tuple[str, ...]) -> list[LaurentPoly]:
        if any(self.at(kind) for kind in closing):
            return []
        values = [self.element()]
        while self.at(","):
            self.advance()
            values.append(self.element())
        return values

    # symbols and classes --------------------------------------------------
    def symbol(self) -> SymbolAS:
        start = self.here()
        self.expect("[")
        a = self.element()
        self.expect(",")
        b = self.element()
        self.expect(")")
        try:
            return SymbolAS(a, b)
        except SymbolError as e:
            raise ParseError(str(e), start) from e

    def brauer_class(self) -> BrauerClass:
        if self.at("int") and self.peek().text == "1" and self.peek(1) is None:
            self.advance()
            return BrauerClass(self.tower, ())
        symbols = [self.symbol()]
        while self.at("*"):
            self.advance()
            symbols.append(self.symbol())
        return BrauerClass(self.tower, tuple(symbols))

    # forms ----------------------------------------------------------------
    def pfister(self) -> Union[BilPfister, QuadPfister]:
        start = self.here()
        self.expect("<<")
        slots = self.elements((";", ">>"))
        try:
            if self.at(";"):
                self.advance()
                b = self.element()
                self.expect("]]")
                return QuadPfister(self.tower, tuple(slots), b)
            self.expect(">>")
            return BilPfister(self.tower, tuple(slots))
        except FormError as e:
            raise ParseError(str(e), start) from e

    def block(self, scalar: Optional[LaurentPoly] = None) -> Block:
        start = self.here()
        if scalar is None and not (self.at("[") or self.at("<<")):
            scalar = self.element()
            self.expect("*")
        multiplier: tuple[LaurentPoly, ...] = ()
        if self.at("<<"):
            self.advance()
            multiplier = tuple(self.elements((">>",)))
            self.expect(">>")
            self.expect("*")
        self.expect("[")
        one = self.element()
        if one != self.tower.one():
            raise ParseError("symplectic blocks are written [1, w]", start)
        self.expect(",")
        w = self.element()
        self.expect("]")
        try:
            return Block(scalar if scalar is not None else self.tower.one(), multiplier, w)
        except FormError as e:
            raise ParseError(str(e), start) from e

    def block_form(self) -> BlockForm:
        start = self.here()
        blocks: list[Block] = []
        diag: list[LaurentPoly] = []
        while True:
            if self.at("<") and not self.at("<<"):
                self.advance()
                diag.extend(self.elements((">",)))
                self.expect(">")
            else:
                blocks.append(self.block())
            if not self.at("_|_"):
                break
            self.advance()
        try:
            return BlockForm(self.tower, tuple(blocks), tuple(diag))
        except FormError as e:
            raise ParseError(str(e), start) from e

    # dispatch -------------------------------------------------------------
    def any(self) -> Parsed:
        if self.at("["):
            # a symbol ends with ')', a block with ']'
            depth = 0
            for token in self.tokens[self.pos:]:
                if token.kind in ("(", "["):
                    depth += 1
                elif token.kind in (")", "]"):
                    depth -= 1
                    if depth == 0:
                        if token.kind == ")":
                            return self.brauer_class()
                        return self.block_form()
            raise ParseError("unterminated bracket", self.here())
        if self.at("<"):
            return self.block_form()
        if self.at("<<"):
            mark = self.pos
            form = self.pfister()
            if isinstance(form, BilPfister) and self.at("*"):
                self.pos = mark
                return self.block_form()
            return form
        mark = self.pos
        value = self.element()
        if self._block_follows():
            self.pos = mark
            return self.block_form()
        return value


def _run(source: str, tower: FieldTower, rule: str):
    parser = Parser(source, tower)
    result = getattr(parser, rule)()
    parser.finish()
    return result


def parse_expression(source: str, tower: FieldTower) -> Parsed:
    """Parse any object of the grammar, dispatching on its shape."""
    return _run(source, tower, "any")


def parse_element(source: str, tower: FieldTower) -> LaurentPoly:
    return _run(source, tower, "element")


def parse_class(source: str, tower: FieldTower) -> BrauerClass:
    return _run(source, tower, "brauer_class")


def parse_pfister(source: str, tower: FieldTower) -> Union[BilPfister, QuadPfister]:
    return _run(source, tower, "pfister")


def parse_block_form(source: str, tower: FieldTower) -> BlockForm:
    return _run(source, tower, "block_form")
