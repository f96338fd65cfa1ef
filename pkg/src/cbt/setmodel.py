"""The finite-set model: every context, type and term denotes a finite set.

Contexts are interpreted as sets of environments (tuples of semantic values,
oldest first), a type over a context as a fiber over each environment, and
a term as the value it picks in that fiber. Every carrier is enumerable, so
judgments can be decided by brute force over all environments.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass

from . import core as c

DEFAULT_BUDGET = 10**6


class BudgetExceeded(Exception):
    pass


class SemanticError(Exception):
    """The term has no denotation (it is ill-typed or contains ``Irr``)."""


# ---------------------------------------------------------------- values


@dataclass(frozen=True)
class UnitTok:
    def __str__(self):
        return "UnitTok"


@dataclass(frozen=True)
class EqTok:
    def __str__(self):
        return "EqTok"


@dataclass(frozen=True)
class PropV:
    bit: bool

    def __str__(self):
        return f"PropV({'t' if self.bit else 'f'})"


@dataclass(frozen=True)
class LeftV:
    value: object

    def __str__(self):
        return f"LeftV({self.value})"


@dataclass(frozen=True)
class RightV:
    value: object

    def __str__(self):
        return f"RightV({self.value})"


@dataclass(frozen=True)
class PairV:
    fst: object
    snd: object

    def __str__(self):
        return f"PairV({self.fst}, {self.snd})"


@dataclass(frozen=True)
class FunV:
    """A function as its graph: ``(argument, result)`` pairs in domain order."""

    graph: tuple

    def __call__(self, arg):
        for x, y in self.graph:
            if x == arg:
                return y
        raise SemanticError(f"{arg} is outside the domain of {self}")

    def __str__(self):
        return "FunV{" + ", ".join(f"{x} -> {y}" for x, y in self.graph) + "}"


UNIT_TOK = UnitTok()
EQ_TOK = EqTok()
TRUE = PropV(True)
FALSE = PropV(False)


def sort_key(v):
    """Total order on semantic values; fixes the canonical enumeration order."""
    match v:
        case UnitTok():
            return (0,)
        case EqTok():
            return (1,)
        case PropV(bit):
            return (2, bit)
        case LeftV(x):
            return (3, sort_key(x))
        case RightV(x):
            return (4, sort_key(x))
        case PairV(x, y):
            return (5, sort_key(x), sort_key(y))
        case FunV(graph):
            return (6, tuple((sort_key(x), sort_key(y)) for x, y in graph))
        case tuple():
            return (7, tuple(sort_key(x) for x in v))
    raise TypeError(f"not a semantic value: {v!r}")


class FinSet:
    """A finite set of semantic values with canonical (sorted, duplicate-free) order."""

    __slots__ = ("elements",)

    def __init__(self, elements=()):
        unique = {sort_key(e): e for e in elements}
        self.elements = tuple(unique[k] for k in sorted(unique))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, v):
        return v in self.elements

    def __eq__(self, other):
        return isinstance(other, FinSet) and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def __repr__(self):
        return "{" + ", ".join(str(e) for e in self.elements) + "}"


def budget_from_env() -> int:
    raw = os.environ.get("CBT_ENUM_BUDGET")
    if not raw:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"CBT_ENUM_BUDGET must be an integer, got {raw!r}") from None
    if value <= 0:
        raise ValueError("CBT_ENUM_BUDGET must be positive")
    return value


# ---------------------------------------------------------------- the model


class SetModel:
    def __init__(self, budget: int | None = None):
        self.budget = budget_from_env() if budget is None else budget
        self._types = {}

    def _guard(self, count: int, what: str):
        if count > self.budget:
            raise BudgetExceeded(f"{what} has {count} elements, over the enumeration budget of {self.budget}")

    # -- contexts and types

    def interp_ctx(self, ctx: c.Ctx) -> FinSet:
        envs = [()]
        for k, entry in enumerate(ctx.entries):
            prefix = ctx.prefix(k)
            grown = []
            for env in envs:
                grown.extend(env + (x,) for x in self.interp_ty(prefix, entry, env))
                self._guard(len(grown), "context")
            envs = grown
        return FinSet(envs)

    def interp_ty(self, ctx: c.Ctx, a: c.Type, env: tuple) -> FinSet:
        key = (ctx.entries, a, env)
        found = self._types.get(key)
        if found is None:
            found = self._types[key] = self._interp_ty(ctx, a, env)
        return found

    def _interp_ty(self, ctx, a, env) -> FinSet:
        match a:
            case c.Unit():
                return FinSet([UNIT_TOK])
            case c.PropU():
                return FinSet([FALSE, TRUE])
            case c.Prod(l, r):
                left, right = self.interp_ty(ctx, l, env), self.interp_ty(ctx, r, env)
                self._guard(len(left) * len(right), "product")
                return FinSet(PairV(x, y) for x in left for y in right)
            case c.Coprod(l, r):
                left, right = self.interp_ty(ctx, l, env), self.interp_ty(ctx, r, env)
                return FinSet([*(LeftV(x) for x in left), *(RightV(y) for y in right)])
            case c.Fun(d, r):
                dom, cod = self.interp_ty(ctx, d, env), self.interp_ty(ctx, r, env)
                return self._graphs(dom, [cod] * len(dom))
            case c.Pi(d, r):
                dom = self.interp_ty(ctx, d, env)
                inner = ctx.extend(d)
                return self._graphs(dom, [self.interp_ty(inner, r, env + (x,)) for x in dom])
            case c.Id(t, x, y):
                # the equalizer of the two endpoints: a subsingleton
                same = self.interp_tm(ctx, x, t, env) == self.interp_tm(ctx, y, t, env)
                return FinSet([EQ_TOK] if same else [])
            case c.El(p):
                return FinSet([UNIT_TOK] if self.interp_tm(ctx, p, c.PROP, env) == TRUE else [])
        raise SemanticError(f"not a type: {a!r}")

    def _graphs(self, dom: FinSet, fibers: list) -> FinSet:
        self._guard(math.prod(len(f) for f in fibers), "function space")
        return FinSet(FunV(tuple(zip(dom, choice))) for choice in itertools.product(*fibers))

    # -- terms

    def interp_tm(self, ctx: c.Ctx, u: c.Term, a: c.Type, env: tuple):
        return self._check(ctx, env, u, a)

    def _check(self, ctx, env, u, a):
        match u, a:
            case c.Lam(body), c.Fun(d, r):
                inner, cod = ctx.extend(d), c.shift(r)
                dom = self.interp_ty(ctx, d, env)
                return FunV(tuple((x, self._check(inner, env + (x,), body, cod)) for x in dom))
            case c.DLam(body), c.Pi(d, r):
                inner = ctx.extend(d)
                dom = self.interp_ty(ctx, d, env)
                return FunV(tuple((x, self._check(inner, env + (x,), body, r)) for x in dom))
            case c.Pair(x, y), c.Prod(l, r):
                return PairV(self._check(ctx, env, x, l), self._check(ctx, env, y, r))
            case c.Inl(x), c.Coprod(l, _):
                return LeftV(self._check(ctx, env, x, l))
            case c.Inr(x), c.Coprod(_, r):
                return RightV(self._check(ctx, env, x, r))
        return self._infer(ctx, env, u)[0]

    def _infer(self, ctx, env, u):
        match u:
            case c.Var(i):
                if i >= len(env):
                    raise SemanticError(f"variable {i} outside environment")
                return env[-1 - i], ctx.lookup(i)
            case c.Star():
                return UNIT_TOK, c.UNIT
            case c.Pair(x, y):
                (vx, tx), (vy, ty) = self._infer(ctx, env, x), self._infer(ctx, env, y)
                return PairV(vx, vy), c.Prod(tx, ty)
            case c.Proj1(p) | c.Proj2(p):
                vp, tp = self._infer(ctx, env, p)
                if not (isinstance(vp, PairV) and isinstance(tp, c.Prod)):
                    raise SemanticError(f"projection from {vp}")
                if isinstance(u, c.Proj1):
                    return vp.fst, tp.left
                return vp.snd, tp.right
            case c.Match(s, left, right, motive, on_left, on_right):
                vs = self._check(ctx, env, s, c.Coprod(left, right))
                match vs:
                    case LeftV(x):
                        return self._check(ctx.extend(left), env + (x,), on_left, c.shift(motive)), motive
                    case RightV(x):
                        return self._check(ctx.extend(right), env + (x,), on_right, c.shift(motive)), motive
                raise SemanticError(f"match on {vs}")
            case c.App(f, x):
                vf, tf = self._infer(ctx, env, f)
                if not isinstance(tf, c.Fun):
                    raise SemanticError("application of a non-function")
                return vf(self._check(ctx, env, x, tf.dom)), tf.cod
            case c.DApp(f, x):
                vf, tf = self._infer(ctx, env, f)
                if not isinstance(tf, c.Pi):
                    raise SemanticError("dependent application of a non-Pi term")
                return vf(self._check(ctx, env, x, tf.dom)), c.instantiate(tf.cod, x, len(ctx))
            case c.Refl(x):
                _, tx = self._infer(ctx, env, x)
                return EQ_TOK, c.Id(tx, x, x)
            case c.PropCode(a, _):
                # the characteristic map: true exactly on inhabited fibers
                return PropV(len(self.interp_ty(ctx, a, env)) > 0), c.PROP
            case c.Ann(x, a):
                return self._check(ctx, env, x, a), a
        raise SemanticError(f"no denotation for {u!r}")

    def interp_subst(self, ctx: c.Ctx, sigma, delta: c.Ctx, env: tuple) -> tuple:
        sigma = tuple(sigma)
        return tuple(
            self._check(ctx, env, t, c.apply_ty(entry, sigma[:k])) for k, (t, entry) in enumerate(zip(sigma, delta.entries))
        )

    # -- judgments

    def sem_eq_tm(self, ctx: c.Ctx, u: c.Term, v: c.Term, a: c.Type) -> bool:
        return all(self._check(ctx, env, u, a) == self._check(ctx, env, v, a) for env in self.interp_ctx(ctx))

    def sem_eq_ty(self, ctx: c.Ctx, a: c.Type, b: c.Type) -> bool:
        return all(self.interp_ty(ctx, a, env) == self.interp_ty(ctx, b, env) for env in self.interp_ctx(ctx))

    def sem_has_tm(self, ctx: c.Ctx, u: c.Term, a: c.Type) -> bool:
        """``u`` denotes an element of the fiber of ``a`` over every environment."""
        return all(self._check(ctx, env, u, a) in self.interp_ty(ctx, a, env) for env in self.interp_ctx(ctx))

    def counterexample(self, ctx: c.Ctx, u: c.Term, v: c.Term, a: c.Type):
        """First environment where ``u`` and ``v`` denote different values, if any."""
        for env in self.interp_ctx(ctx):
            x, y = self._check(ctx, env, u, a), self._check(ctx, env, v, a)
            if x != y:
                return env, x, y
        return None

    def cardinality(self, a: c.Type) -> int:
        return len(self.interp_ty(c.EMPTY, a, ()))


def _default() -> SetModel:
    return SetModel()


def interp_ctx(ctx):
    return _default().interp_ctx(ctx)


def interp_ty(ctx, a, env=()):
    return _default().interp_ty(ctx, a, env)


def interp_tm(ctx, u, a, env=()):
    return _default().interp_tm(ctx, u, a, env)


def interp_subst(ctx, sigma, delta, env=()):
    return _default().interp_subst(ctx, sigma, delta, env)


def sem_eq_tm(ctx, u, v, a):
    return _default().sem_eq_tm(ctx, u, v, a)


def cardinality(a):
    return _default().cardinality(a)
