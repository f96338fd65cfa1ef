"""Recursive-descent parser for ``.cbt`` modules.

Precedence, loosest first: ``->`` (right-assoc), ``+``, ``*`` (both
left-assoc), then the prefix type formers. Application is juxtaposition and
associates to the left; ``.1``/``.2`` bind tightest.
"""

from __future__ import annotations

from . import surface as s
from .diagnostics import Diagnostic, Span
from .lexer import EOF, IDENT, KEYWORD, SYMBOL, Token, tokenize

RESERVED = frozenset(
    {
        "Unit", "Prop", "Bool", "Void", "Id", "El", "Trunc", "Pi",
        "star", "true", "false", "pair", "R", "truncElim", "inl", "inr", "refl", "squash", "IdP",
    }
)  # fmt: skip

TYPE_STARTS = ("Unit", "Prop", "Bool", "Void", "Id", "El", "Trunc", "Pi", "(")
ATOM_STARTS = ("<name>", "star", "true", "false", "pair", "R", "truncElim", "(")
TERM_STARTS = ATOM_STARTS + ("fun", "dfun", "match", "if", "inl", "inr", "refl", "squash", "IdP")
DECL_STARTS = ("def", "eq", "assume", "propext")


class Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    # -- token plumbing

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def at(self, *lexemes: str) -> bool:
        t = self.tok
        return t.kind != EOF and t.lexeme in lexemes

    def advance(self) -> Token:
        t = self.tok
        if t.kind != EOF:
            self.pos += 1
        return t

    def fail(self, expected) -> Diagnostic:
        t = self.tok
        found = "end of input" if t.kind == EOF else repr(t.lexeme)
        want = ", ".join(sorted(set(expected)))
        return Diagnostic(f"unexpected {found}; expected one of: {want}", t.span, code="syntax")

    def expect(self, lexeme: str) -> Token:
        if not self.at(lexeme):
            raise self.fail([lexeme])
        return self.advance()

    def name(self) -> Token:
        t = self.tok
        if t.kind != IDENT:
            raise self.fail(["<name>"])
        if t.lexeme in RESERVED:
            raise Diagnostic(f"{t.lexeme!r} is a built-in name and cannot be bound", t.span, code="syntax")
        return self.advance()

    def _span_from(self, start: Span) -> Span:
        prev = self.tokens[self.pos - 1] if self.pos else self.tok
        return start.cover(prev.span)

    # -- declarations

    def module(self) -> s.ModuleFile:
        decls = []
        while self.tok.kind != EOF:
            decls.append(self.decl())
        return s.ModuleFile(tuple(decls))

    def decl(self):
        start = self.tok.span
        if self.at("def"):
            self.advance()
            name = self.name().lexeme
            params = []
            while self.at("("):
                p0 = self.advance().span
                pname = self.name().lexeme
                self.expect(":")
                pty = self.type_()
                self.expect(")")
                params.append(s.Param(self._span_from(p0), pname, pty))
            self.expect(":")
            ty = self.type_()
            self.expect(":=")
            body = self.term()
            return s.DefDecl(self._span_from(start), name, tuple(params), ty, body)
        if self.at("eq"):
            self.advance()
            name = self.name().lexeme
            self.expect(":")
            lhs = self.term()
            self.expect("=")
            rhs = self.term()
            self.expect(":")
            ty = self.type_()
            return s.EqDecl(self._span_from(start), name, lhs, rhs, ty)
        if self.at("assume"):
            self.advance()
            name = self.name().lexeme
            self.expect(":")
            ty = self.type_()
            return s.AssumeDecl(self._span_from(start), name, ty)
        if self.at("propext"):
            self.advance()
            name = self.name().lexeme
            self.expect(":")
            lhs = self.term()
            self.expect("=")
            rhs = self.term()
            self.expect("via")
            there = self.term()
            self.expect(",")
            back = self.term()
            return s.PropextDecl(self._span_from(start), name, lhs, rhs, there, back)
        raise self.fail(DECL_STARTS)

    # -- types

    def type_(self) -> s.SType:
        start = self.tok.span
        left = self.sum_type()
        if self.at("->"):
            self.advance()
            right = self.type_()
            return s.TyArrow(self._span_from(start), left, right)
        return left

    def sum_type(self) -> s.SType:
        start = self.tok.span
        left = self.prod_type()
        while self.at("+"):
            self.advance()
            left = s.TySum(self._span_from(start), left, self.prod_type())
        return left

    def prod_type(self) -> s.SType:
        start = self.tok.span
        left = self.prefix_type()
        while self.at("*"):
            self.advance()
            left = s.TyProd(self._span_from(start), left, self.prefix_type())
        return left

    def prefix_type(self) -> s.SType:
        t = self.tok
        start = t.span
        if t.kind == IDENT and t.lexeme == "Id":
            self.advance()
            ty = self.atom_type()
            lhs = self.atom()
            rhs = self.atom()
            return s.TyId(self._span_from(start), ty, lhs, rhs)
        if t.kind == IDENT and t.lexeme == "El":
            self.advance()
            return s.TyEl(self._span_from(start), self.atom())
        if t.kind == IDENT and t.lexeme == "Trunc":
            self.advance()
            return s.TyTrunc(self._span_from(start), self.atom_type())
        if t.kind == IDENT and t.lexeme == "Pi":
            self.advance()
            self.expect("(")
            name = self.name().lexeme
            self.expect(":")
            dom = self.type_()
            self.expect(")")
            cod = self.type_()
            return s.TyPi(self._span_from(start), name, dom, cod)
        return self.atom_type()

    def atom_type(self) -> s.SType:
        t = self.tok
        simple = {"Unit": s.TyUnit, "Prop": s.TyProp, "Bool": s.TyBool, "Void": s.TyVoid}
        if t.kind == IDENT and t.lexeme in simple:
            self.advance()
            return simple[t.lexeme](t.span)
        if self.at("("):
            self.advance()
            ty = self.type_()
            self.expect(")")
            return ty
        raise self.fail(TYPE_STARTS)

    # -- terms

    def term(self) -> s.STerm:
        t = self.tok
        start = t.span
        if self.at("fun", "dfun") and t.kind == KEYWORD:
            self.advance()
            name = self.name().lexeme
            self.expect("=>")
            body = self.term()
            cls = s.FunE if t.lexeme == "fun" else s.DFunE
            return cls(self._span_from(start), name, body)
        if t.kind == KEYWORD and t.lexeme == "match":
            self.advance()
            scrut = self.term()
            motive = self._motive()
            self.expect("{")
            lname = self.name().lexeme
            self.expect("=>")
            lbody = self.term()
            self.expect(";")
            rname = self.name().lexeme
            self.expect("=>")
            rbody = self.term()
            self.expect("}")
            return s.MatchE(self._span_from(start), scrut, motive, lname, lbody, rname, rbody)
        if t.kind == KEYWORD and t.lexeme == "if":
            self.advance()
            cond = self.term()
            motive = self._motive()
            self.expect("then")
            then = self.term()
            self.expect("else")
            orelse = self.term()
            return s.IfE(self._span_from(start), cond, motive, then, orelse)
        return self.application()

    def _motive(self):
        # optional here so that the elaborator can report a missing motive by name
        if self.at("as"):
            self.advance()
            return self.type_()
        return None

    def _starts_atom(self) -> bool:
        t = self.tok
        if t.kind == IDENT:
            return t.lexeme not in RESERVED or t.lexeme in ATOM_STARTS
        return t.kind == SYMBOL and t.lexeme == "("

    def application(self) -> s.STerm:
        start = self.tok.span
        fn = self.head()
        while self._starts_atom():
            fn = s.AppE(self._span_from(start), fn, self.atom())
        return fn

    def head(self) -> s.STerm:
        t = self.tok
        start = t.span
        prefix = {"inl": s.InlE, "inr": s.InrE, "refl": s.ReflE, "squash": s.Squash}
        if t.kind == IDENT and t.lexeme in prefix:
            self.advance()
            return prefix[t.lexeme](self._span_from(start), self.atom())
        if t.kind == IDENT and t.lexeme == "IdP":
            self.advance()
            ty = self.atom_type()
            lhs = self.atom()
            rhs = self.atom()
            return s.IdPE(self._span_from(start), ty, lhs, rhs)
        return self.atom()

    def atom(self) -> s.STerm:
        start = self.tok.span
        node = self.base()
        while self.at(".1", ".2"):
            which = 1 if self.advance().lexeme == ".1" else 2
            node = s.ProjE(self._span_from(start), node, which)
        return node

    def base(self) -> s.STerm:
        t = self.tok
        start = t.span
        if t.kind == IDENT:
            match t.lexeme:
                case "star":
                    self.advance()
                    return s.StarLit(t.span)
                case "true":
                    self.advance()
                    return s.TrueLit(t.span)
                case "false":
                    self.advance()
                    return s.FalseLit(t.span)
                case "pair":
                    self.advance()
                    self.expect("(")
                    fst = self.term()
                    self.expect(",")
                    snd = self.term()
                    self.expect(")")
                    return s.PairE(self._span_from(start), fst, snd)
                case "R":
                    self.advance()
                    self.expect("(")
                    ty = self.type_()
                    self.expect(",")
                    proof = self.term()
                    self.expect(")")
                    return s.RCode(self._span_from(start), ty, proof)
                case "truncElim":
                    self.advance()
                    self.expect("(")
                    value = self.term()
                    self.expect(",")
                    prop = self.term()
                    self.expect(",")
                    fn = self.term()
                    self.expect(")")
                    return s.TruncElim(self._span_from(start), value, prop, fn)
            if t.lexeme not in RESERVED:
                self.advance()
                return s.Name(t.span, t.lexeme)
        if self.at("(") and t.kind == SYMBOL:
            self.advance()
            inner = self.term()
            if self.at(":"):
                self.advance()
                ty = self.type_()
                self.expect(")")
                return s.AnnE(self._span_from(start), inner, ty)
            self.expect(")")
            return inner
        raise self.fail(TERM_STARTS)


def parse_module(tokens: list[Token]) -> s.ModuleFile:
    return Parser(tokens).module()


def parse_source(source: str) -> s.ModuleFile:
    module = parse_module(tokenize(source))
    return s.ModuleFile(module.decls, source)


def _parse_whole(source: str, rule: str):
    p = Parser(tokenize(source))
    node = getattr(p, rule)()
    if p.tok.kind != EOF:
        raise p.fail(["end of input"])
    return node


def parse_term(source: str) -> s.STerm:
    return _parse_whole(source, "term")


def parse_type(source: str) -> s.SType:
    return _parse_whole(source, "type_")
