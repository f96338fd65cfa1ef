"""Nameless core syntax and the explicit substitution calculus on it.

Variables are de Bruijn indices: ``Var(0)`` is the newest entry of the
context. Contexts and substitution objects are stored oldest entry first,
so the newest variable is the *last* element of either.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Union


class ScopeError(Exception):
    """A de Bruijn index points outside its context."""


class Type:
    __slots__ = ()


class Term:
    __slots__ = ()


# ---------------------------------------------------------------- types


@dataclass(frozen=True)
class Unit(Type):
    def __repr__(self):
        return "Unit"


@dataclass(frozen=True)
class Prod(Type):
    left: Type
    right: Type


@dataclass(frozen=True)
class Coprod(Type):
    left: Type
    right: Type


@dataclass(frozen=True)
class Fun(Type):
    dom: Type
    cod: Type


@dataclass(frozen=True)
class Id(Type):
    ty: Type
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Pi(Type):
    dom: Type
    cod: Type  # scoped under one extra binder


@dataclass(frozen=True)
class PropU(Type):
    def __repr__(self):
        return "PropU"


@dataclass(frozen=True)
class El(Type):
    code: Term


# ---------------------------------------------------------------- terms


@dataclass(frozen=True)
class Var(Term):
    index: int

    def __repr__(self):
        return f"Var({self.index})"


@dataclass(frozen=True)
class Star(Term):
    def __repr__(self):
        return "Star"


@dataclass(frozen=True)
class Pair(Term):
    fst: Term
    snd: Term


@dataclass(frozen=True)
class Proj1(Term):
    pair: Term


@dataclass(frozen=True)
class Proj2(Term):
    pair: Term


@dataclass(frozen=True)
class Inl(Term):
    value: Term


@dataclass(frozen=True)
class Inr(Term):
    value: Term


@dataclass(frozen=True)
class Match(Term):
    """``match(scrut, on_left, on_right)`` at motive ``motive``.

    ``left``/``right`` are the components of the scrutinee's coproduct type;
    ``on_left`` is scoped under ``left`` and ``on_right`` under ``right``.
    The motive lives in the outer context (it does not depend on the binder).
    """

    scrut: Term
    left: Type
    right: Type
    motive: Type
    on_left: Term
    on_right: Term


@dataclass(frozen=True)
class Lam(Term):
    body: Term


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True)
class DLam(Term):
    body: Term


@dataclass(frozen=True)
class DApp(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True)
class Refl(Term):
    value: Term


@dataclass(frozen=True)
class PropCode(Term):
    """``R(ty, proof)`` where ``proof : Pi x:ty. Pi y:ty. Id ty x y``."""

    ty: Type
    proof: Term


@dataclass(frozen=True)
class Ann(Term):
    term: Term
    ty: Type


@dataclass(frozen=True)
class Irr(Term):
    """Canonical inhabitant of a proof-irrelevant type. Only normal forms contain it."""

    def __repr__(self):
        return "Irr"


UNIT = Unit()
PROP = PropU()
STAR = Star()
IRR = Irr()

Syntax = Union[Type, Term]
SubstObj = tuple  # tuple[Term, ...], oldest entry first


# ---------------------------------------------------------------- contexts


@dataclass(frozen=True)
class Ctx:
    """A telescope of types, oldest first.

    ``equations`` holds extra definitional equations registered for this
    context (propositional extensionality) as ``(since, ty, lhs, rhs)``:
    ``since`` is the context length at registration, and the three syntax
    parts are scoped at the full context, shifted along on extension.
    """

    entries: tuple = ()
    equations: tuple = field(default=())

    def __len__(self):
        return len(self.entries)

    def extend(self, ty: Type) -> Ctx:
        eqs = tuple((k, shift(a), shift(l), shift(r)) for k, a, l, r in self.equations)
        return Ctx(self.entries + (ty,), eqs)

    def extend_many(self, tys) -> Ctx:
        ctx = self
        for ty in tys:
            ctx = ctx.extend(ty)
        return ctx

    def with_equation(self, ty: Type, lhs: Term, rhs: Term) -> Ctx:
        return Ctx(self.entries, self.equations + ((len(self), ty, lhs, rhs),))

    def lookup(self, index: int) -> Type:
        """Type of ``Var(index)``, weakened into the full context."""
        if not 0 <= index < len(self.entries):
            raise ScopeError(f"variable {index} out of scope in context of length {len(self)}")
        return shift(self.entries[-1 - index], index + 1)

    def prefix(self, k: int) -> Ctx:
        drop = len(self) - k
        eqs = tuple(
            (since, _shift(a, -drop, 0), _shift(l, -drop, 0), _shift(r, -drop, 0))
            for since, a, l, r in self.equations
            if since <= k
        )
        return Ctx(self.entries[:k], eqs)


EMPTY = Ctx()


# ---------------------------------------------------------------- traversal


def _walk(node: Syntax, on_var: Callable[[int, int], Term], depth: int):
    """Rebuild ``node`` replacing each ``Var(i)`` by ``on_var(i, depth)``."""
    w = _walk
    match node:
        case Var(i):
            return on_var(i, depth)
        case Unit() | PropU() | Star() | Irr():
            return node
        case Prod(a, b):
            return Prod(w(a, on_var, depth), w(b, on_var, depth))
        case Coprod(a, b):
            return Coprod(w(a, on_var, depth), w(b, on_var, depth))
        case Fun(a, b):
            return Fun(w(a, on_var, depth), w(b, on_var, depth))
        case Id(a, x, y):
            return Id(w(a, on_var, depth), w(x, on_var, depth), w(y, on_var, depth))
        case Pi(a, b):
            return Pi(w(a, on_var, depth), w(b, on_var, depth + 1))
        case El(p):
            return El(w(p, on_var, depth))
        case Pair(u, v):
            return Pair(w(u, on_var, depth), w(v, on_var, depth))
        case Proj1(u):
            return Proj1(w(u, on_var, depth))
        case Proj2(u):
            return Proj2(w(u, on_var, depth))
        case Inl(u):
            return Inl(w(u, on_var, depth))
        case Inr(u):
            return Inr(w(u, on_var, depth))
        case Match(t, a, b, c, u, v):
            return Match(
                w(t, on_var, depth),
                w(a, on_var, depth),
                w(b, on_var, depth),
                w(c, on_var, depth),
                w(u, on_var, depth + 1),
                w(v, on_var, depth + 1),
            )
        case Lam(u):
            return Lam(w(u, on_var, depth + 1))
        case App(u, v):
            return App(w(u, on_var, depth), w(v, on_var, depth))
        case DLam(u):
            return DLam(w(u, on_var, depth + 1))
        case DApp(u, v):
            return DApp(w(u, on_var, depth), w(v, on_var, depth))
        case Refl(u):
            return Refl(w(u, on_var, depth))
        case PropCode(a, p):
            return PropCode(w(a, on_var, depth), w(p, on_var, depth))
        case Ann(u, a):
            return Ann(w(u, on_var, depth), w(a, on_var, depth))
    raise TypeError(f"not core syntax: {node!r}")


def _shift(node, amount: int, cutoff: int):
    if amount == 0:
        return node

    def on_var(i, depth):
        if i < cutoff + depth:
            return Var(i)
        if i + amount < cutoff + depth:
            raise ScopeError(f"cannot strengthen: variable {i - depth} is free")
        return Var(i + amount)

    return _walk(node, on_var, 0)


def shift(node, amount: int = 1, cutoff: int = 0):
    """Add ``amount`` to every free index ``>= cutoff`` (weakening)."""
    if amount < 0 or cutoff < 0:
        raise ValueError("shift amount and cutoff must be non-negative")
    return _shift(node, amount, cutoff)


def strengthen(node, cutoff: int = 0):
    """Inverse of ``shift(node, 1, cutoff)``; raises ScopeError if ``Var(cutoff)`` occurs."""
    return _shift(node, -1, cutoff)


def _apply(node, sigma: SubstObj):
    m = len(sigma)

    def on_var(i, depth):
        if i < depth:
            return Var(i)
        j = i - depth
        if j >= m:
            raise ScopeError(f"variable {j} outside substitution of length {m}")
        return _shift(sigma[m - 1 - j], depth, 0)

    return _walk(node, on_var, 0)


def apply_tm(u: Term, sigma: SubstObj) -> Term:
    """Simultaneous capture-avoiding substitution ``u sigma``."""
    return _apply(u, tuple(sigma))


def apply_ty(a: Type, sigma: SubstObj) -> Type:
    return _apply(a, tuple(sigma))


def compose(gamma: SubstObj, sigma: SubstObj) -> SubstObj:
    """``gamma sigma``: first ``gamma`` then ``sigma``, i.e. ``A(gamma sigma) = (A gamma) sigma``."""
    return tuple(apply_tm(t, sigma) for t in gamma)


def id_subst(n: int) -> SubstObj:
    if n < 0:
        raise ValueError("context length must be non-negative")
    return tuple(Var(n - 1 - k) for k in range(n))


def weaken_subst(n: int, by: int = 1) -> SubstObj:
    """The display map ``Gamma, B_1..B_by -> Gamma`` as a substitution."""
    return tuple(Var(n - 1 - k + by) for k in range(n))


def extend(sigma: SubstObj, a: Term) -> SubstObj:
    return tuple(sigma) + (a,)


def instantiate(body, arg: Term, n: int):
    """``body[arg]`` for ``body`` scoped under one binder over a context of length ``n``."""
    return _apply(body, extend(id_subst(n), arg))


def free_vars(node, depth: int = 0) -> frozenset:
    """Free indices of ``node`` relative to the outermost context."""
    found = set()

    def on_var(i, d):
        if i >= d:
            found.add(i - d)
        return Var(i)

    _walk(node, on_var, depth)
    return frozenset(found)


def max_scope(node) -> int:
    """Smallest context length in which ``node`` is well-scoped."""
    fv = free_vars(node)
    return max(fv) + 1 if fv else 0
