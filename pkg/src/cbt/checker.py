"""Bidirectional typechecker for every judgment form of the theory.

Each accepted judgment comes back as a ``Derivation``; each rejection is a
``TypingError`` with exactly one ``kind``. Presupposed premises (context and
type well-formedness) are verified by the public entry points, never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Union

from . import core as c
from . import equality as eq

SCOPE = "scope"
MISMATCH = "mismatch"
NOT_A_FUNCTION = "not-a-function"
NOT_A_PAIR = "not-a-pair"
BRANCH_CONTEXT = "branch-context"
PROP_EXPECTED = "prop-expected"
CONVERSION_FAILED = "conversion-failed"

KINDS = (SCOPE, MISMATCH, NOT_A_FUNCTION, NOT_A_PAIR, BRANCH_CONTEXT, PROP_EXPECTED, CONVERSION_FAILED)


# ---------------------------------------------------------------- judgments


@dataclass(frozen=True)
class CtxWf:
    ctx: c.Ctx


@dataclass(frozen=True)
class TyWf:
    ctx: c.Ctx
    ty: c.Type


@dataclass(frozen=True)
class TmHas:
    ctx: c.Ctx
    tm: c.Term
    ty: c.Type


@dataclass(frozen=True)
class TmEq:
    ctx: c.Ctx
    lhs: c.Term
    rhs: c.Term
    ty: c.Type


@dataclass(frozen=True)
class TyEq:
    ctx: c.Ctx
    lhs: c.Type
    rhs: c.Type


@dataclass(frozen=True)
class SubstHas:
    ctx: c.Ctx
    subst: tuple
    target: c.Ctx


Judgment = Union[CtxWf, TyWf, TmHas, TmEq, TyEq, SubstHas]


@dataclass(frozen=True)
class Derivation:
    rule: str
    conclusion: Judgment
    premises: tuple = ()

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)

    def rules(self) -> set:
        found = {self.rule}
        for p in self.premises:
            found |= p.rules()
        return found


class TypingError(Exception):
    """A rejected judgment.

    ``term`` is the innermost offending subterm (or type); ``trail`` lists the
    enclosing subterms from the inside out, filled in while the error
    propagates, so a frontend can map the failure back to source positions.
    """

    def __init__(self, kind: str, message: str, term=None, expected=None, actual=None, index=None):
        assert kind in KINDS, kind
        super().__init__(f"{kind}: {message}")
        self.kind = kind
        self.message = message
        self.term = term
        self.expected = expected
        self.actual = actual
        self.index = index
        self.trail: list = []

    @property
    def position(self) -> list:
        return ([self.term] if self.term is not None else []) + self.trail


def uniqueness_type(a: c.Type) -> c.Type:
    """``Pi x:A. Pi y:A. Id A x y``, the premise of the ``R`` rule."""
    return c.Pi(a, c.Pi(c.shift(a, 1), c.Id(c.shift(a, 2), c.Var(1), c.Var(0))))


# ---------------------------------------------------------------- internals


def _located(fn):
    def wrapper(ctx, node, *rest):
        try:
            return fn(ctx, node, *rest)
        except TypingError as e:
            if e.term is not node and (not e.trail or e.trail[-1] is not node):
                e.trail.append(node)
            raise

    wrapper.__name__ = fn.__name__
    return wrapper


def _nf_ty(ctx, ty):
    try:
        return eq.normalize_ty(ctx, ty)
    except eq.InternalInvariantError:
        return ty


def _conversion_error(ctx, node, expected, actual, what="type"):
    return TypingError(
        CONVERSION_FAILED,
        f"{what} mismatch",
        term=node,
        expected=_nf_ty(ctx, expected),
        actual=_nf_ty(ctx, actual),
    )


@_located
def _ty(ctx: c.Ctx, a: c.Type) -> Derivation:
    j = TyWf(ctx, a)
    match a:
        case c.Unit():
            return Derivation("unit-form", j)
        case c.PropU():
            return Derivation("prop-form", j)
        case c.Prod(x, y) | c.Coprod(x, y) | c.Fun(x, y):
            rule = {c.Prod: "prod-form", c.Coprod: "coprod-form", c.Fun: "fun-form"}[type(a)]
            return Derivation(rule, j, (_ty(ctx, x), _ty(ctx, y)))
        case c.Id(t, x, y):
            dt = _ty(ctx, t)
            return Derivation("id-form", j, (dt, _check(ctx, x, t), _check(ctx, y, t)))
        case c.Pi(x, y):
            dx = _ty(ctx, x)
            return Derivation("pi-form", j, (dx, _ty(ctx.extend(x), y)))
        case c.El(p):
            try:
                dp = _check(ctx, p, c.PROP)
            except TypingError as e:
                if e.term is p and e.kind in (CONVERSION_FAILED, MISMATCH):
                    raise TypingError(
                        PROP_EXPECTED, "El expects a proposition code", term=p, expected=c.PROP, actual=e.actual
                    ) from e
                raise
            return Derivation("el-form", j, (dp,))
    raise TypingError(MISMATCH, f"not a type: {a!r}", term=a)


@_located
def _infer(ctx: c.Ctx, u: c.Term):
    """Synthesize a type; returns ``(type, derivation)``."""
    n = len(ctx)
    match u:
        case c.Var(i):
            try:
                ty = ctx.lookup(i)
            except c.ScopeError as e:
                raise TypingError(SCOPE, str(e), term=u) from None
            return ty, Derivation("var", TmHas(ctx, u, ty))
        case c.Star():
            return c.UNIT, Derivation("unit-intro", TmHas(ctx, u, c.UNIT))
        case c.Pair(x, y):
            tx, dx = _infer(ctx, x)
            ty_, dy = _infer(ctx, y)
            ty = c.Prod(tx, ty_)
            return ty, Derivation("prod-intro", TmHas(ctx, u, ty), (dx, dy))
        case c.Proj1(p) | c.Proj2(p):
            tp, dp = _infer(ctx, p)
            if not isinstance(tp, c.Prod):
                raise TypingError(NOT_A_PAIR, "projection from a non-product", term=p, actual=_nf_ty(ctx, tp))
            first = isinstance(u, c.Proj1)
            ty = tp.left if first else tp.right
            return ty, Derivation("prod-elim1" if first else "prod-elim2", TmHas(ctx, u, ty), (dp,))
        case c.Match(s, a, b, m, l, r):
            da, db = _ty(ctx, a), _ty(ctx, b)
            if isinstance(s, (c.Inl, c.Inr)):
                # an injection cannot synthesize; the stored components type it
                ts, ds = c.Coprod(a, b), _check(ctx, s, c.Coprod(a, b))
            else:
                ts, ds = _infer(ctx, s)
            if not isinstance(ts, c.Coprod):
                raise TypingError(MISMATCH, "match on a non-coproduct", term=s, actual=_nf_ty(ctx, ts))
            if not (eq.conv_ty(ctx, ts.left, a) and eq.conv_ty(ctx, ts.right, b)):
                raise TypingError(
                    BRANCH_CONTEXT,
                    "branch binders disagree with the scrutinee's type",
                    term=u,
                    expected=_nf_ty(ctx, ts),
                    actual=_nf_ty(ctx, c.Coprod(a, b)),
                )
            dm = _ty(ctx, m)
            dl = _check(ctx.extend(a), l, c.shift(m))
            dr = _check(ctx.extend(b), r, c.shift(m))
            return m, Derivation("coprod-elim", TmHas(ctx, u, m), (ds, da, db, dm, dl, dr))
        case c.App(f, x):
            tf, df = _infer(ctx, f)
            if not isinstance(tf, c.Fun):
                raise TypingError(NOT_A_FUNCTION, "application of a non-function", term=f, actual=_nf_ty(ctx, tf))
            dx = _check(ctx, x, tf.dom)
            return tf.cod, Derivation("fun-elim", TmHas(ctx, u, tf.cod), (df, dx))
        case c.DApp(f, x):
            tf, df = _infer(ctx, f)
            if not isinstance(tf, c.Pi):
                raise TypingError(
                    NOT_A_FUNCTION, "dependent application of a non-Pi term", term=f, actual=_nf_ty(ctx, tf)
                )
            dx = _check(ctx, x, tf.dom)
            ty = c.instantiate(tf.cod, x, n)
            return ty, Derivation("pi-elim", TmHas(ctx, u, ty), (df, dx))
        case c.Refl(x):
            tx, dx = _infer(ctx, x)
            ty = c.Id(tx, x, x)
            return ty, Derivation("id-intro", TmHas(ctx, u, ty), (dx,))
        case c.PropCode(a, p):
            da = _ty(ctx, a)
            dp = _check(ctx, p, uniqueness_type(a))
            return c.PROP, Derivation("prop-intro", TmHas(ctx, u, c.PROP), (da, dp))
        case c.Ann(x, a):
            da = _ty(ctx, a)
            dx = _check(ctx, x, a)
            return a, Derivation("ann", TmHas(ctx, u, a), (da, dx))
        case c.Inl() | c.Inr() | c.Lam() | c.DLam():
            raise TypingError(MISMATCH, f"cannot infer the type of {type(u).__name__}; annotate it", term=u)
        case c.Irr():
            raise TypingError(MISMATCH, "the irrelevance token is not a source term", term=u)
    raise TypingError(MISMATCH, f"not a term: {u!r}", term=u)


@_located
def _check(ctx: c.Ctx, u: c.Term, a: c.Type) -> Derivation:
    j = TmHas(ctx, u, a)
    match u, a:
        case c.Lam(body), c.Fun(dom, cod):
            return Derivation("fun-intro", j, (_check(ctx.extend(dom), body, c.shift(cod)),))
        case c.DLam(body), c.Pi(dom, cod):
            return Derivation("pi-intro", j, (_check(ctx.extend(dom), body, cod),))
        case c.Pair(x, y), c.Prod(l, r):
            return Derivation("prod-intro", j, (_check(ctx, x, l), _check(ctx, y, r)))
        case c.Inl(x), c.Coprod(l, _):
            return Derivation("coprod-inl", j, (_check(ctx, x, l),))
        case c.Inr(x), c.Coprod(_, r):
            return Derivation("coprod-inr", j, (_check(ctx, x, r),))
        case c.Lam() | c.DLam() | c.Pair() | c.Inl() | c.Inr(), _:
            want = {c.Lam: "function", c.DLam: "Pi", c.Pair: "product", c.Inl: "coproduct", c.Inr: "coproduct"}
            raise TypingError(
                MISMATCH, f"expected a {want[type(u)]} type", term=u, expected=_nf_ty(ctx, a), actual=None
            )
    got, d = _infer(ctx, u)
    if got == a:
        return d
    if not eq.conv_ty(ctx, got, a):
        raise _conversion_error(ctx, u, a, got)
    return Derivation("conv", j, (d, Derivation("ty-conv", TyEq(ctx, got, a))))


# ---------------------------------------------------------------- entry points


@lru_cache(maxsize=4096)
def check_ctx(ctx: c.Ctx) -> Derivation:
    d = Derivation("ctx-empty", CtxWf(c.Ctx()))
    for k, entry in enumerate(ctx.entries):
        prefix = ctx.prefix(k)
        try:
            dty = _ty(prefix, entry)
        except TypingError as e:
            e.index = k
            e.message = f"context entry {k}: {e.message}"
            raise
        d = Derivation("ctx-ext", CtxWf(ctx.prefix(k + 1)), (d, dty))
    if ctx.equations:
        d = Derivation("ctx-eqs", CtxWf(ctx), (d,))
    return d


def check_ty(ctx: c.Ctx, a: c.Type) -> Derivation:
    check_ctx(ctx)
    return _ty(ctx, a)


def infer(ctx: c.Ctx, u: c.Term):
    """``(type, derivation)`` for an inferable term."""
    check_ctx(ctx)
    return _infer(ctx, u)


def infer_tm(ctx: c.Ctx, u: c.Term) -> c.Type:
    return infer(ctx, u)[0]


def check_tm(ctx: c.Ctx, u: c.Term, a: c.Type) -> Derivation:
    check_ctx(ctx)
    _ty(ctx, a)
    return _check(ctx, u, a)


def check_eq_tm(ctx: c.Ctx, u: c.Term, v: c.Term, a: c.Type) -> Derivation:
    check_ctx(ctx)
    _ty(ctx, a)
    du, dv = _check(ctx, u, a), _check(ctx, v, a)
    reason = eq.explain_conv(ctx, a, u, v)
    if reason is None:
        raise TypingError(
            CONVERSION_FAILED,
            "terms are not definitionally equal",
            term=v,
            expected=eq.normalize_tm(ctx, a, u),
            actual=eq.normalize_tm(ctx, a, v),
        )
    return Derivation(f"eq-{reason}", TmEq(ctx, u, v, a), (du, dv))


def check_subst(ctx: c.Ctx, sigma, delta: c.Ctx) -> Derivation:
    sigma = tuple(sigma)
    check_ctx(ctx)
    check_ctx(delta)
    if len(sigma) != len(delta):
        raise TypingError(
            MISMATCH, f"substitution has {len(sigma)} terms but the target context has {len(delta)} entries"
        )
    d = Derivation("subst-empty", SubstHas(ctx, (), c.Ctx()))
    for k, (t, entry) in enumerate(zip(sigma, delta.entries)):
        want = c.apply_ty(entry, sigma[:k])
        try:
            dt = _check(ctx, t, want)
        except TypingError as e:
            e.index = k
            e.message = f"substitution entry {k}: {e.message}"
            raise
        d = Derivation("subst-ext", SubstHas(ctx, sigma[: k + 1], delta.prefix(k + 1)), (d, dt))
    return d


def check_prop_code_eq(ctx: c.Ctx, a: c.Type, p: c.Term, b: c.Type, q: c.Term, evidence) -> Derivation:
    """``R(A,p) = R(B,q) : Prop`` from maps ``f : A -> B`` and ``g : B -> A``.

    The caller registers the equation with ``Ctx.with_equation`` to make it
    available to later conversions.
    """
    f, g = evidence
    check_ctx(ctx)
    premises = (
        _ty(ctx, a),
        _check(ctx, p, uniqueness_type(a)),
        _ty(ctx, b),
        _check(ctx, q, uniqueness_type(b)),
        _check(ctx, f, c.Fun(a, b)),
        _check(ctx, g, c.Fun(b, a)),
    )
    return Derivation("prop-ext", TmEq(ctx, c.PropCode(a, p), c.PropCode(b, q), c.PROP), premises)


def check_judgment(j: Judgment) -> Derivation:
    match j:
        case CtxWf(ctx):
            return check_ctx(ctx)
        case TyWf(ctx, a):
            return check_ty(ctx, a)
        case TmHas(ctx, u, a):
            return check_tm(ctx, u, a)
        case TmEq(ctx, u, v, a):
            return check_eq_tm(ctx, u, v, a)
        case TyEq(ctx, a, b):
            check_ty(ctx, a)
            check_ty(ctx, b)
            if not eq.conv_ty(ctx, a, b):
                raise _conversion_error(ctx, None, a, b)
            return Derivation("ty-conv", j)
        case SubstHas(ctx, sigma, delta):
            return check_subst(ctx, sigma, delta)
    raise TypeError(f"not a judgment: {j!r}")


def accepts(j: Judgment) -> bool:
    try:
        check_judgment(j)
    except TypingError:
        return False
    return True


def replay(d: Derivation) -> bool:
    """Re-validate every node of ``d`` bottom-up."""
    if not all(replay(p) for p in d.premises):
        return False
    if d.rule == "prop-ext":
        j = d.conclusion
        f_ok = any(isinstance(p.conclusion, TmHas) and p.conclusion.ty == c.Fun(j.lhs.ty, j.rhs.ty) for p in d.premises)
        g_ok = any(isinstance(p.conclusion, TmHas) and p.conclusion.ty == c.Fun(j.rhs.ty, j.lhs.ty) for p in d.premises)
        return f_ok and g_ok
    if d.rule == "ctx-eqs":
        return True
    try:
        again = check_judgment(d.conclusion)
    except TypingError:
        return False
    return again.rule == d.rule
