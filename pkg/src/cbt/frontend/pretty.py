"""Core syntax back to surface syntax, inventing names for binders.

Output re-parses and re-elaborates to the same core term whenever the input
is well typed, except for the irrelevance token ``Irr`` (printed ``_``),
which only appears in normal forms.
"""

from __future__ import annotations

import dataclasses

from .. import core as c
from .. import prelude as pl
from .lexer import KEYWORDS
from .parser import RESERVED

_BASES = ("x", "y", "z", "w")


def fresh(names, hint: str = "x") -> str:
    taken = set(names) | RESERVED | KEYWORDS
    bases = (hint,) + tuple(b for b in _BASES if b != hint)
    for k in range(len(taken) + 2):
        for b in bases:
            cand = b if k == 0 else f"{b}{k}"
            if cand not in taken:
                return cand
    raise AssertionError("unreachable")


def _var(names, i: int) -> str:
    return names[-1 - i] if i < len(names) else f"#{i - len(names)}"


def _paren(text: str, level: int, need: int) -> str:
    return f"({text})" if level < need else text


# ---------------------------------------------------------------- types
# levels: 0 arrow and Pi, 1 sum, 2 product, 3 prefix formers, 4 atoms


def _ty(a, names) -> tuple:
    match a:
        case c.Unit():
            return "Unit", 4
        case c.PropU():
            return "Prop", 4
        case c.Coprod(c.Unit(), c.Unit()):
            return "Bool", 4
        case c.Pi(c.PropU(), c.El(c.Var(0))):
            return "Void", 4
        case c.Prod(l, r):
            return f"{ty_at(l, names, 2)} * {ty_at(r, names, 3)}", 2
        case c.Coprod(l, r):
            return f"{ty_at(l, names, 1)} + {ty_at(r, names, 2)}", 1
        case c.Fun(d, r):
            return f"{ty_at(d, names, 1)} -> {ty_at(r, names, 0)}", 0
        case c.Id(t, x, y):
            return f"Id {ty_at(t, names, 4)} {tm_at(x, names, 2)} {tm_at(y, names, 2)}", 3
        case c.El(p):
            return f"El {tm_at(p, names, 2)}", 3
        case c.Pi(d, r):
            inner = pl.match_trunc(a)
            if inner is not None:
                return f"Trunc {ty_at(inner, names, 4)}", 3
            x = fresh(names)
            return f"Pi ({x} : {ty_at(d, names, 0)}) {ty_at(r, names + (x,), 0)}", 0
    raise TypeError(f"not a core type: {a!r}")


def ty_at(a, names, need: int) -> str:
    text, level = _ty(a, tuple(names))
    return _paren(text, level, need)


def pretty_ty(a: c.Type, names=()) -> str:
    return ty_at(a, tuple(names), 0)


# ---------------------------------------------------------------- terms
# levels: 0 binders (fun, dfun, match, if), 1 application, 2 atoms


def _is_if(u) -> bool:
    return (
        isinstance(u, c.Match)
        and u.left == c.UNIT
        and u.right == c.UNIT
        and 0 not in c.free_vars(u.on_left)
        and 0 not in c.free_vars(u.on_right)
    )


def _tm(u, names) -> tuple:
    match u:
        case c.Var(i):
            return _var(names, i), 2
        case c.Star():
            return "star", 2
        case c.Irr():
            return "_", 2
        case c.Inl(c.Star()):
            return "true", 2
        case c.Inr(c.Star()):
            return "false", 2
        case c.Pair(x, y):
            return f"pair({tm_at(x, names, 0)}, {tm_at(y, names, 0)})", 2
        case c.Proj1(p):
            return f"{tm_at(p, names, 2)}.1", 2
        case c.Proj2(p):
            return f"{tm_at(p, names, 2)}.2", 2
        case c.PropCode(a, p):
            return f"R({ty_at(a, names, 0)}, {tm_at(p, names, 0)})", 2
        case c.Ann(x, a):
            return f"({tm_at(x, names, 0)} : {ty_at(a, names, 0)})", 2
        case c.Inl(x):
            return f"inl {tm_at(x, names, 2)}", 1
        case c.Inr(x):
            return f"inr {tm_at(x, names, 2)}", 1
        case c.Refl(x):
            return f"refl {tm_at(x, names, 2)}", 1
        case c.App(f, x) | c.DApp(f, x):
            return f"{tm_at(f, names, 1)} {tm_at(x, names, 2)}", 1
        case c.Lam(body) | c.DLam(body):
            x = fresh(names)
            word = "fun" if isinstance(u, c.Lam) else "dfun"
            return f"{word} {x} => {tm_at(body, names + (x,), 0)}", 0
        case c.Match(s, _, _, m, l, r) if _is_if(u):
            then, orelse = c.strengthen(l), c.strengthen(r)
            return (
                f"if {tm_at(s, names, 0)} as {ty_at(m, names, 0)} "
                f"then {tm_at(then, names, 0)} else {tm_at(orelse, names, 0)}"
            ), 0
        case c.Match(s, a, b, m, l, r):
            scrut = tm_at(s, names, 0)
            if isinstance(s, (c.Inl, c.Inr)) and not (a == b == c.UNIT and s.value == c.STAR):
                scrut = f"({scrut} : {ty_at(c.Coprod(a, b), names, 0)})"
            x = fresh(names)
            y = fresh(names, "y")
            return (
                f"match {scrut} as {ty_at(m, names, 0)} "
                f"{{ {x} => {tm_at(l, names + (x,), 0)} ; {y} => {tm_at(r, names + (y,), 0)} }}"
            ), 0
    raise TypeError(f"not a core term: {u!r}")


def tm_at(u, names, need: int) -> str:
    text, level = _tm(u, tuple(names))
    return _paren(text, level, need)


def pretty_tm(u: c.Term, names=()) -> str:
    return tm_at(u, tuple(names), 0)


def pretty_any(x, names=()) -> str:
    return pretty_ty(x, names) if isinstance(x, c.Type) else pretty_tm(x, names)


# ---------------------------------------------------------------- raw core


def show_core(node) -> str:
    """Constructor notation for core syntax, e.g. ``Lam(App(Var(0), Star))``."""
    if isinstance(node, c.Var):
        return f"Var({node.index})"
    if isinstance(node, tuple):
        return "[" + ", ".join(show_core(x) for x in node) + "]"
    if not dataclasses.is_dataclass(node):
        return repr(node)
    args = [show_core(getattr(node, f.name)) for f in dataclasses.fields(node)]
    name = type(node).__name__
    return f"{name}({', '.join(args)})" if args else name
