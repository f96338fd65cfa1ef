"""Definitional equality: typed normalization by evaluation plus reflection.

Readback is type-directed, which gives the η-laws for ⊤, ×, → and Π and
collapses every inhabitant of an ``El``/``Id`` type to the token ``Irr``.
Equations that the context proves (``p : Id A a b`` entries and registered
propositional-extensionality equations) are applied afterwards by
congruence closure over the normal forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import core as c
from .congruence import EqClassMap


class InternalInvariantError(Exception):
    """Normalization met a term that cannot be well-typed."""


# ---------------------------------------------------------------- values


@dataclass(slots=True)
class Clo:
    env: tuple
    body: object  # c.Term or c.Type under one binder

    def inst_tm(self, v):
        return evaluate(self.env + (v,), self.body)

    def inst_ty(self, v):
        return eval_ty(self.env + (v,), self.body)


@dataclass(slots=True)
class VStar:
    pass


@dataclass(slots=True)
class VIrr:
    pass


@dataclass(slots=True)
class VPair:
    fst: object
    snd: object


@dataclass(slots=True)
class VInl:
    value: object


@dataclass(slots=True)
class VInr:
    value: object


@dataclass(slots=True)
class VLam:
    clo: Clo


@dataclass(slots=True)
class VDLam:
    clo: Clo


@dataclass(slots=True)
class VRefl:
    value: object


@dataclass(slots=True)
class VCode:
    ty: object
    proof: object


@dataclass(slots=True)
class VNe:
    ne: object


# neutrals; a variable carries its type so spines can be read back by type


@dataclass(slots=True)
class NVar:
    level: int
    ty: object


@dataclass(slots=True)
class NProj1:
    ne: object


@dataclass(slots=True)
class NProj2:
    ne: object


@dataclass(slots=True)
class NApp:
    ne: object
    arg: object


@dataclass(slots=True)
class NDApp:
    ne: object
    arg: object


@dataclass(slots=True)
class NMatch:
    ne: object
    left: object
    right: object
    motive: object
    on_left: Clo
    on_right: Clo


# type values


@dataclass(slots=True)
class TUnit:
    pass


@dataclass(slots=True)
class TProp:
    pass


@dataclass(slots=True)
class TProd:
    left: object
    right: object


@dataclass(slots=True)
class TCoprod:
    left: object
    right: object


@dataclass(slots=True)
class TFun:
    dom: object
    cod: object


@dataclass(slots=True)
class TId:
    ty: object
    lhs: object
    rhs: object


@dataclass(slots=True)
class TPi:
    dom: object
    cod: Clo


@dataclass(slots=True)
class TEl:
    code: object


# ---------------------------------------------------------------- evaluation


def _lookup(env: tuple, i: int):
    if i >= len(env):
        raise InternalInvariantError(f"variable {i} escapes environment of size {len(env)}")
    return env[-1 - i]


def evaluate(env: tuple, t: c.Term):
    match t:
        case c.Var(i):
            return _lookup(env, i)
        case c.Star():
            return VStar()
        case c.Irr():
            return VIrr()
        case c.Pair(u, v):
            return VPair(evaluate(env, u), evaluate(env, v))
        case c.Proj1(u):
            return vfst(evaluate(env, u))
        case c.Proj2(u):
            return vsnd(evaluate(env, u))
        case c.Inl(u):
            return VInl(evaluate(env, u))
        case c.Inr(u):
            return VInr(evaluate(env, u))
        case c.Match(s, a, b, m, u, v):
            sv = evaluate(env, s)
            match sv:
                # match(inl(t), u, v) = u t ; match(inr(t), u, v) = v t
                case VInl(x):
                    return evaluate(env + (x,), u)
                case VInr(x):
                    return evaluate(env + (x,), v)
                case VNe(ne):
                    return VNe(
                        NMatch(ne, eval_ty(env, a), eval_ty(env, b), eval_ty(env, m), Clo(env, u), Clo(env, v))
                    )
            raise InternalInvariantError(f"match on non-coproduct value {sv!r}")
        case c.Lam(u):
            return VLam(Clo(env, u))
        case c.App(u, v):
            return vapp(evaluate(env, u), evaluate(env, v))
        case c.DLam(u):
            return VDLam(Clo(env, u))
        case c.DApp(u, v):
            return vdapp(evaluate(env, u), evaluate(env, v))
        case c.Refl(u):
            return VRefl(evaluate(env, u))
        case c.PropCode(a, p):
            return VCode(eval_ty(env, a), evaluate(env, p))
        case c.Ann(u, _):
            return evaluate(env, u)
    raise InternalInvariantError(f"cannot evaluate {t!r}")


def eval_ty(env: tuple, a: c.Type):
    match a:
        case c.Unit():
            return TUnit()
        case c.PropU():
            return TProp()
        case c.Prod(x, y):
            return TProd(eval_ty(env, x), eval_ty(env, y))
        case c.Coprod(x, y):
            return TCoprod(eval_ty(env, x), eval_ty(env, y))
        case c.Fun(x, y):
            return TFun(eval_ty(env, x), eval_ty(env, y))
        case c.Id(x, u, v):
            return TId(eval_ty(env, x), evaluate(env, u), evaluate(env, v))
        case c.Pi(x, y):
            return TPi(eval_ty(env, x), Clo(env, y))
        case c.El(p):
            return TEl(evaluate(env, p))
    raise InternalInvariantError(f"not a type: {a!r}")


def vfst(v):
    match v:
        case VPair(x, _):
            return x
        case VNe(ne):
            return VNe(NProj1(ne))
    raise InternalInvariantError(f"first projection of non-pair {v!r}")


def vsnd(v):
    match v:
        case VPair(_, y):
            return y
        case VNe(ne):
            return VNe(NProj2(ne))
    raise InternalInvariantError(f"second projection of non-pair {v!r}")


def vapp(f, x):
    match f:
        case VLam(clo):
            return clo.inst_tm(x)
        case VNe(ne):
            return VNe(NApp(ne, x))
    raise InternalInvariantError(f"application of non-function {f!r}")


def vdapp(f, x):
    match f:
        case VDLam(clo):
            return clo.inst_tm(x)
        case VNe(ne):
            return VNe(NDApp(ne, x))
    raise InternalInvariantError(f"dependent application of non-function {f!r}")


# ---------------------------------------------------------------- readback


def _fresh(level: int, ty):
    return VNe(NVar(level, ty))


def quote(n: int, ty, v) -> c.Term:
    """Read ``v : ty`` back as a β-normal η-long term over a context of length ``n``."""
    match ty:
        case TUnit():
            return c.STAR
        case TEl() | TId():
            return c.IRR
        case TProd(a, b):
            return c.Pair(quote(n, a, vfst(v)), quote(n, b, vsnd(v)))
        case TFun(a, b):
            return c.Lam(quote(n + 1, b, vapp(v, _fresh(n, a))))
        case TPi(a, clo):
            x = _fresh(n, a)
            return c.DLam(quote(n + 1, clo.inst_ty(x), vdapp(v, x)))
        case TCoprod(a, b):
            match v:
                case VInl(x):
                    return c.Inl(quote(n, a, x))
                case VInr(x):
                    return c.Inr(quote(n, b, x))
                case VNe(ne):
                    return quote_ne(n, ne)[0]
        case TProp():
            match v:
                case VCode(a, _):
                    # the proof lives at Pi x. Pi y. Id: η-long it is DLam(DLam(Irr))
                    return c.PropCode(quote_ty(n, a), c.DLam(c.DLam(c.IRR)))
                case VNe(ne):
                    return quote_ne(n, ne)[0]
    raise InternalInvariantError(f"value {v!r} does not inhabit {ty!r}")


def quote_ne(n: int, ne):
    """Read back a neutral, returning the term and its type value."""
    match ne:
        case NVar(level, ty):
            return c.Var(n - 1 - level), ty
        case NProj1(inner) | NProj2(inner):
            t, ty = quote_ne(n, inner)
            if not isinstance(ty, TProd):
                raise InternalInvariantError(f"projection from {ty!r}")
            if isinstance(ne, NProj1):
                return c.Proj1(t), ty.left
            return c.Proj2(t), ty.right
        case NApp(inner, arg):
            t, ty = quote_ne(n, inner)
            if not isinstance(ty, TFun):
                raise InternalInvariantError(f"application at {ty!r}")
            return c.App(t, quote(n, ty.dom, arg)), ty.cod
        case NDApp(inner, arg):
            t, ty = quote_ne(n, inner)
            if not isinstance(ty, TPi):
                raise InternalInvariantError(f"dependent application at {ty!r}")
            return c.DApp(t, quote(n, ty.dom, arg)), ty.cod.inst_ty(arg)
        case NMatch(inner, a, b, m, on_left, on_right):
            t, _ = quote_ne(n, inner)
            u = quote(n + 1, m, on_left.inst_tm(_fresh(n, a)))
            v = quote(n + 1, m, on_right.inst_tm(_fresh(n, b)))
            return c.Match(t, quote_ty(n, a), quote_ty(n, b), quote_ty(n, m), u, v), m
    raise InternalInvariantError(f"not a neutral: {ne!r}")


def quote_ty(n: int, ty) -> c.Type:
    match ty:
        case TUnit():
            return c.UNIT
        case TProp():
            return c.PROP
        case TProd(a, b):
            return c.Prod(quote_ty(n, a), quote_ty(n, b))
        case TCoprod(a, b):
            return c.Coprod(quote_ty(n, a), quote_ty(n, b))
        case TFun(a, b):
            return c.Fun(quote_ty(n, a), quote_ty(n, b))
        case TId(a, x, y):
            return c.Id(quote_ty(n, a), quote(n, a, x), quote(n, a, y))
        case TPi(a, clo):
            return c.Pi(quote_ty(n, a), quote_ty(n + 1, clo.inst_ty(_fresh(n, a))))
        case TEl(p):
            return c.El(quote(n, TProp(), p))
    raise InternalInvariantError(f"not a type value: {ty!r}")


# ---------------------------------------------------------------- entry points


@lru_cache(maxsize=1024)
def ctx_env(ctx: c.Ctx) -> tuple:
    """Environment of fresh neutral variables, one per context entry."""
    env = ()
    for level, entry in enumerate(ctx.entries):
        env = env + (_fresh(level, eval_ty(env, entry)),)
    return env


def normalize_tm(ctx: c.Ctx, ty: c.Type, u: c.Term) -> c.Term:
    env = ctx_env(ctx)
    return quote(len(ctx), eval_ty(env, ty), evaluate(env, u))


def normalize_ty(ctx: c.Ctx, ty: c.Type) -> c.Type:
    return quote_ty(len(ctx), eval_ty(ctx_env(ctx), ty))


def is_irrelevant(ctx: c.Ctx, ty: c.Type) -> bool:
    # type heads never compute, so the syntactic head is the head up to conversion
    return isinstance(ty, (c.El, c.Id))


def _hypotheses(ctx: c.Ctx):
    """Ground equations ``(ty, lhs, rhs)`` the context proves, scoped at the full context."""
    n = len(ctx)

    def from_type(ty):
        match ty:
            case c.Id(a, x, y):
                yield a, x, y
            case c.Prod(l, r):
                yield from from_type(l)
                yield from from_type(r)

    for k, entry in enumerate(ctx.entries):
        yield from from_type(c.shift(entry, n - k))
    for _since, a, x, y in ctx.equations:
        yield a, x, y


@lru_cache(maxsize=1024)
def _reflected_pairs(ctx: c.Ctx) -> tuple:
    pairs = []
    for a, x, y in _hypotheses(ctx):
        if is_irrelevant(ctx, a):
            continue
        nx, ny = normalize_tm(ctx, a, x), normalize_tm(ctx, a, y)
        if nx != ny:
            pairs.append((nx, ny))
    return tuple(pairs)


def reflect_hypotheses(ctx: c.Ctx) -> EqClassMap:
    """Partition generated by the context's equations, congruence-closed."""
    classes = EqClassMap(len(ctx))
    for lhs, rhs in _reflected_pairs(ctx):
        classes._union(classes.add(lhs), classes.add(rhs))
    classes.rebuild()
    return classes


def explain_conv(ctx: c.Ctx, ty: c.Type, u: c.Term, v: c.Term):
    """Which principle makes ``u = v : ty`` hold, or ``None`` if none does."""
    if is_irrelevant(ctx, ty):
        return "irrelevance"
    nu, nv = normalize_tm(ctx, ty, u), normalize_tm(ctx, ty, v)
    if nu == nv:
        return "nbe"
    if _reflected_pairs(ctx) and reflect_hypotheses(ctx).equal(nu, nv):
        return "reflection"
    return None


def conv_tm(ctx: c.Ctx, ty: c.Type, u: c.Term, v: c.Term) -> bool:
    return explain_conv(ctx, ty, u, v) is not None


def conv_ty(ctx: c.Ctx, a: c.Type, b: c.Type) -> bool:
    match a, b:
        case (c.Unit(), c.Unit()) | (c.PropU(), c.PropU()):
            return True
        case (c.Prod(a1, a2), c.Prod(b1, b2)) | (c.Coprod(a1, a2), c.Coprod(b1, b2)) | (
            c.Fun(a1, a2),
            c.Fun(b1, b2),
        ):
            return conv_ty(ctx, a1, b1) and conv_ty(ctx, a2, b2)
        case c.Id(t1, x1, y1), c.Id(t2, x2, y2):
            return conv_ty(ctx, t1, t2) and conv_tm(ctx, t1, x1, x2) and conv_tm(ctx, t1, y1, y2)
        case c.Pi(a1, a2), c.Pi(b1, b2):
            return conv_ty(ctx, a1, b1) and conv_ty(ctx.extend(a1), a2, b2)
        case c.El(p), c.El(q):
            return conv_tm(ctx, c.PROP, p, q)
    return False
