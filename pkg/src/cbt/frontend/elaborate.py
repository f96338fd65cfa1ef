"""Surface syntax to core: name resolution, sugar expansion, obligations.

Elaboration is type-directed only where the core needs it: a surface
application becomes ``App`` or ``DApp`` depending on the head's type, a
``match`` picks up its binder types from the scrutinee, and ``fun``/``inl``
take their domain from the expected type. Types are tracked locally; the
kernel re-checks everything afterwards, so a slip here can only cause a
rejection, never an unsound acceptance.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

from .. import checker as ck
from .. import core as c
from .. import prelude as pl
from . import surface as s
from .diagnostics import Diagnostic, Span
from .parser import parse_source

# ---------------------------------------------------------------- scope


@dataclass(frozen=True)
class Local:
    name: str


@dataclass(frozen=True)
class Global:
    """A definition made when the context had ``level`` entries."""

    name: str
    level: int
    body: c.Term
    ty: c.Type


@dataclass(frozen=True)
class Scope:
    """Names in scope, oldest first, alongside the core context they index."""

    ctx: c.Ctx = c.EMPTY
    entries: tuple = ()
    failed: frozenset = frozenset()

    def bind(self, name: str, ty: c.Type) -> Scope:
        return replace(self, ctx=self.ctx.extend(ty), entries=self.entries + (Local(name),))

    def define(self, name: str, body: c.Term, ty: c.Type) -> Scope:
        return replace(self, entries=self.entries + (Global(name, len(self.ctx), body, ty),))

    def fail(self, name: str) -> Scope:
        return replace(self, failed=self.failed | {name})

    def register(self, ty, lhs, rhs) -> Scope:
        return replace(self, ctx=self.ctx.with_equation(ty, lhs, rhs))

    @property
    def names(self) -> tuple:
        """Variable names, oldest first (the pretty-printer's view of ``ctx``)."""
        return tuple(e.name for e in self.entries if isinstance(e, Local))

    def resolve(self, name: str):
        """``(term, type)`` for a name, or None. Definitions are inlined."""
        index = 0
        for e in reversed(self.entries):
            if isinstance(e, Local):
                if e.name == name:
                    return c.Var(index), self.ctx.lookup(index)
                index += 1
            elif e.name == name:
                k = len(self.ctx) - e.level
                ty = c.shift(e.ty, k)
                return c.Ann(c.shift(e.body, k), ty), ty
        return None


# ---------------------------------------------------------------- results


@dataclass(frozen=True)
class Obligation:
    """What one declaration asks the kernel to check.

    For a ``def`` the judgment lives in the context extended by the
    parameters; ``propext`` carries its two maps in ``evidence``.
    """

    name: str
    kind: str
    span: Span
    judgment: ck.Judgment
    params: tuple = ()
    evidence: Optional[tuple] = None
    names: tuple = ()  # variable names of the judgment's context, for messages


@dataclass(frozen=True)
class Outcome:
    name: str
    kind: str
    span: Span
    obligation: Optional[Obligation] = None
    derivation: Optional[ck.Derivation] = None
    diagnostic: Optional[Diagnostic] = None
    scope: Optional[Scope] = field(default=None, compare=False, repr=False)

    @property
    def ok(self) -> bool:
        return self.diagnostic is None

    @property
    def params(self) -> tuple:
        return self.obligation.params if self.obligation else ()

    @property
    def body(self):
        j = self.obligation.judgment
        return j.tm if isinstance(j, ck.TmHas) else None

    @property
    def ty(self):
        j = self.obligation.judgment
        return j.ty if isinstance(j, ck.TmHas) else None


def _fold(params: tuple, body: c.Term, ty: c.Type):
    """Abstract the parameters: nested ``DLam`` over a nested ``Pi``."""
    for p in reversed(params):
        body, ty = c.DLam(body), c.Pi(p, ty)
    return body, ty


def discharge(ob: Obligation) -> ck.Derivation:
    if ob.kind == "propext":
        j = ob.judgment
        return ck.check_prop_code_eq(j.ctx, j.lhs.ty, j.lhs.proof, j.rhs.ty, j.rhs.proof, ob.evidence)
    return ck.check_judgment(ob.judgment)


# ---------------------------------------------------------------- elaborator


def _strip_ann(t):
    while isinstance(t, c.Ann):
        t = t.term
    return t


class Elaborator:
    """Elaborates declarations and maps kernel errors back to source spans.

    ``spans`` maps ``id()`` of every core node built from surface syntax to
    that syntax's span; ``_keep`` pins the nodes so ids are not recycled.
    """

    def __init__(self, prelude: bool = True):
        self.spans: dict = {}
        self._keep: list = []
        self.scope = Scope()
        if prelude:
            for d in pl.load_surface_defs():
                body, ty = _fold(d.params, d.body, d.ty)
                self.scope = self.scope.define(d.name, body, ty)
        self.prelude_names = frozenset(e.name for e in self.scope.entries)

    def _mark(self, node, span: Span):
        self.spans.setdefault(id(node), span)
        self._keep.append(node)
        return node

    def _err(self, code: str, msg: str, span: Span, expected=None, actual=None, scope: Optional[Scope] = None):
        from .pretty import pretty_ty

        names = scope.names if scope else ()
        return Diagnostic(
            msg,
            span,
            code=code,
            expected=None if expected is None else pretty_ty(expected, names),
            actual=None if actual is None else pretty_ty(actual, names),
        )

    # -- types

    def ty(self, scope: Scope, t: s.SType) -> c.Type:
        return self._mark(self._ty(scope, t), t.span)

    def _ty(self, scope, t):
        match t:
            case s.TyUnit():
                return c.Unit()
            case s.TyProp():
                return c.PropU()
            case s.TyBool():
                return c.Coprod(c.Unit(), c.Unit())
            case s.TyVoid():
                return c.Pi(c.PropU(), c.El(c.Var(0)))
            case s.TyProd(_, l, r):
                return c.Prod(self.ty(scope, l), self.ty(scope, r))
            case s.TySum(_, l, r):
                return c.Coprod(self.ty(scope, l), self.ty(scope, r))
            case s.TyArrow(_, d, r):
                return c.Fun(self.ty(scope, d), self.ty(scope, r))
            case s.TyId(_, a, x, y):
                ca = self.ty(scope, a)
                return c.Id(ca, self.check(scope, x, ca), self.check(scope, y, ca))
            case s.TyPi(_, name, d, r):
                cd = self.ty(scope, d)
                return c.Pi(cd, self.ty(scope.bind(name, cd), r))
            case s.TyEl(_, code):
                return c.El(self.check(scope, code, c.PROP))
            case s.TyTrunc(_, a):
                return pl.trunc(self.ty(scope, a))
        raise TypeError(f"not a surface type: {t!r}")

    # -- terms, checking mode

    def check(self, scope: Scope, t: s.STerm, want: c.Type) -> c.Term:
        return self._mark(self._check(scope, t, want), t.span)

    def _check(self, scope, t, want):
        match t, want:
            case s.FunE(_, name, body), c.Fun(d, r):
                return c.Lam(self.check(scope.bind(name, d), body, c.shift(r)))
            case s.DFunE(_, name, body), c.Pi(d, r):
                return c.DLam(self.check(scope.bind(name, d), body, r))
            case s.FunE() | s.DFunE(), _:
                kind = "function" if isinstance(t, s.FunE) else "Pi"
                hint = {c.Pi: "; use dfun for a Pi type", c.Fun: "; use fun for a function type"}.get(type(want), "")
                raise self._err("mismatch", f"expected a {kind} type here{hint}", t.span, expected=want, scope=scope)
            case s.PairE(_, x, y), c.Prod(l, r):
                return c.Pair(self.check(scope, x, l), self.check(scope, y, r))
            case s.InlE(_, x), c.Coprod(l, _):
                return c.Inl(self.check(scope, x, l))
            case s.InrE(_, x), c.Coprod(_, r):
                return c.Inr(self.check(scope, x, r))
            case s.InlE() | s.InrE(), _:
                raise self._err("mismatch", "an injection needs a sum type", t.span, expected=want, scope=scope)
            case s.TrueLit(), _:
                return c.Inl(self._mark(c.Star(), t.span))
            case s.FalseLit(), _:
                return c.Inr(self._mark(c.Star(), t.span))
            case s.ReflE(_, x), c.Id(a, _, _):
                return c.Refl(self._synth_or_ann(scope, x, a))
            case s.Squash(_, x), _ if pl.match_trunc(want) is not None:
                return pl.squash(self.check(scope, x, pl.match_trunc(want)))
            case s.MatchE(), _:
                return self._match(scope, t, want)[0]
            case s.IfE(), _:
                return self._if(scope, t, want)[0]
        return self.infer(scope, t)[0]

    def _synth_or_ann(self, scope, t, hint: c.Type) -> c.Term:
        """Infer ``t`` when possible; otherwise check it at ``hint`` and annotate."""
        try:
            return self.infer(scope, t)[0]
        except Diagnostic as e:
            if e.code != "missing-annotation":
                raise
        return self._mark(c.Ann(self.check(scope, t, hint), hint), t.span)

    # -- terms, synthesis mode

    def infer(self, scope: Scope, t: s.STerm):
        term, ty = self._infer(scope, t)
        return self._mark(term, t.span), ty

    def _infer(self, scope, t):
        n = len(scope.ctx)
        match t:
            case s.Name(span, name):
                if name in scope.failed:
                    raise Diagnostic(f"{name!r} was rejected earlier", span, code="failed-dependency")
                found = scope.resolve(name)
                if found is None:
                    raise Diagnostic(f"unbound name {name!r}", span, code="unbound")
                return found
            case s.StarLit():
                return c.Star(), c.UNIT
            case s.TrueLit() | s.FalseLit():
                return c.Ann(self.check(scope, t, pl.BOOL), pl.BOOL), pl.BOOL
            case s.PairE(_, x, y):
                (cx, tx), (cy, ty) = self.infer(scope, x), self.infer(scope, y)
                return c.Pair(cx, cy), c.Prod(tx, ty)
            case s.ProjE(_, p, which):
                cp, tp = self.infer(scope, p)
                if not isinstance(tp, c.Prod):
                    raise self._err("not-a-pair", "projection from a non-product", p.span, actual=tp, scope=scope)
                return (c.Proj1(cp), tp.left) if which == 1 else (c.Proj2(cp), tp.right)
            case s.InlE() | s.InrE() | s.FunE() | s.DFunE():
                raise Diagnostic(
                    "cannot infer the type here; add an annotation (t : T)", t.span, code="missing-annotation"
                )
            case s.MatchE():
                if t.motive is None:
                    raise Diagnostic("match needs a motive: match t as C { ... }", t.span, code="missing-motive")
                return self._match(scope, t, None)
            case s.IfE():
                if t.motive is None:
                    raise Diagnostic("if needs a motive: if t as C then u else v", t.span, code="missing-motive")
                return self._if(scope, t, None)
            case s.AppE(_, s.FunE(fspan, name, body), x):
                # a literal redex: the argument's type fixes the domain
                cx, tx = self.infer(scope, x)
                cbody, tbody = self.infer(scope.bind(name, tx), body)
                try:
                    r = c.strengthen(tbody)
                except c.ScopeError:
                    raise Diagnostic(
                        "the result type depends on the bound variable; annotate the function",
                        fspan,
                        code="missing-annotation",
                    ) from None
                fn = self._mark(c.Ann(self._mark(c.Lam(cbody), fspan), c.Fun(tx, r)), fspan)
                return c.App(fn, cx), r
            case s.AppE(_, f, x):
                cf, tf = self.infer(scope, f)
                match tf:
                    case c.Fun(d, r):
                        return c.App(cf, self.check(scope, x, d)), r
                    case c.Pi(d, r):
                        cx = self.check(scope, x, d)
                        return c.DApp(cf, cx), c.instantiate(r, cx, n)
                raise self._err("not-a-function", "application of a non-function", f.span, actual=tf, scope=scope)
            case s.ReflE(_, x):
                cx, tx = self.infer(scope, x)
                return c.Refl(cx), c.Id(tx, cx, cx)
            case s.RCode(_, a, p):
                ca = self.ty(scope, a)
                return c.PropCode(ca, self.check(scope, p, ck.uniqueness_type(ca))), c.PROP
            case s.Squash(_, x):
                cx, tx = self.infer(scope, x)
                return c.Ann(pl.squash(cx), pl.trunc(tx)), pl.trunc(tx)
            case s.TruncElim(span, u, p, f):
                return self._infer(scope, s.AppE(span, s.AppE(span, u, p), f))
            case s.IdPE(_, a, x, y):
                ca = self.ty(scope, a)
                return pl.idprop(ca, self.check(scope, x, ca), self.check(scope, y, ca)), c.PROP
            case s.AnnE(_, x, a):
                ca = self.ty(scope, a)
                return c.Ann(self.check(scope, x, ca), ca), ca
        raise TypeError(f"not a surface term: {t!r}")

    def _motive(self, scope, t, want):
        if t.motive is not None:
            return self.ty(scope, t.motive)
        if want is not None:
            return want
        raise Diagnostic("missing motive", t.span, code="missing-motive")

    def _match(self, scope, t: s.MatchE, want):
        cs, ts = self.infer(scope, t.scrut)
        if not isinstance(ts, c.Coprod):
            raise self._err("mismatch", "match on a non-sum", t.scrut.span, actual=ts, scope=scope)
        if isinstance(cs, c.Ann) and isinstance(cs.term, (c.Inl, c.Inr)):
            # the match stores the components, so the annotation is redundant
            cs = cs.term
        m = self._motive(scope, t, want)
        left = self.check(scope.bind(t.left_name, ts.left), t.on_left, c.shift(m))
        right = self.check(scope.bind(t.right_name, ts.right), t.on_right, c.shift(m))
        return c.Match(cs, ts.left, ts.right, m, left, right), m

    def _if(self, scope, t: s.IfE, want):
        cond = self.check(scope, t.cond, pl.BOOL)
        m = self._motive(scope, t, want)
        return pl.if_then_else(cond, m, self.check(scope, t.then, m), self.check(scope, t.orelse, m)), m

    # -- declarations

    def declare(self, scope: Scope, decl):
        """Elaborate one declaration: ``(obligation, scope after it)``.

        The returned scope assumes the obligation holds; callers that check
        should fall back to ``scope.fail(name)`` when it does not.
        """
        match decl:
            case s.DefDecl(span, name, params, ty, body):
                inner, ptys = scope, []
                for p in params:
                    pty = self.ty(inner, p.ty)
                    ptys.append(pty)
                    inner = inner.bind(p.name, pty)
                cty = self.ty(inner, ty)
                cbody = self.check(inner, body, cty)
                ob = Obligation(name, "def", span, ck.TmHas(inner.ctx, cbody, cty), tuple(ptys), names=inner.names)
                return ob, scope.define(name, *_fold(tuple(ptys), cbody, cty))
            case s.EqDecl(span, name, lhs, rhs, ty):
                cty = self.ty(scope, ty)
                j = ck.TmEq(scope.ctx, self.check(scope, lhs, cty), self.check(scope, rhs, cty), cty)
                return Obligation(name, "eq", span, j, names=scope.names), scope
            case s.AssumeDecl(span, name, ty):
                cty = self.ty(scope, ty)
                ob = Obligation(name, "assume", span, ck.TyWf(scope.ctx, cty), names=scope.names)
                return ob, scope.bind(name, cty)
            case s.PropextDecl(span, name, lhs, rhs, there, back):
                codes = []
                for side in (lhs, rhs):
                    code = _strip_ann(self.check(scope, side, c.PROP))
                    if not isinstance(code, c.PropCode):
                        raise Diagnostic("propext relates two codes R(A, p)", side.span, code="mismatch")
                    codes.append(code)
                a, b = codes
                f = self.check(scope, there, c.Fun(a.ty, b.ty))
                g = self.check(scope, back, c.Fun(b.ty, a.ty))
                j = ck.TmEq(scope.ctx, a, b, c.PROP)
                return Obligation(name, "propext", span, j, evidence=(f, g), names=scope.names), scope.register(c.PROP, a, b)
        raise TypeError(f"not a declaration: {decl!r}")

    def elaborate(self, module: s.ModuleFile) -> list:
        """All obligations of a module, without checking them."""
        scope, out = self.scope, []
        for decl in module.decls:
            ob, scope = self.declare(scope, decl)
            out.append(ob)
        return out

    def process(self, scope: Scope, decl, seen: Optional[set] = None) -> Outcome:
        """Elaborate and check one declaration; the outcome carries the next scope."""
        name, kind = decl.name, type(decl).__name__.removesuffix("Decl").lower()
        if seen is not None:
            if name in seen:
                diag = Diagnostic(f"duplicate definition of {name!r}", decl.span, code="duplicate")
                return Outcome(name, kind, decl.span, diagnostic=diag, scope=scope)
            seen.add(name)
        try:
            ob, after = self.declare(scope, decl)
            d = discharge(ob)
        except Diagnostic as e:
            return Outcome(name, kind, decl.span, diagnostic=e, scope=scope.fail(name))
        except ck.TypingError as e:
            return Outcome(name, kind, decl.span, ob, diagnostic=self.explain(e, decl.span, ob.names), scope=scope.fail(name))
        return Outcome(name, kind, decl.span, ob, d, scope=after)

    def check_module(self, module: s.ModuleFile) -> list:
        scope, seen, out = self.scope, set(), []
        for decl in module.decls:
            o = self.process(scope, decl, seen)
            scope = o.scope
            out.append(o)
        self.final_scope = scope
        return out

    def check_source(self, source: str, path: str = "<input>") -> list:
        return self.check_module(parse_source(source))

    # -- error mapping

    def locate(self, err: ck.TypingError, default: Span) -> Span:
        for node in err.position:
            span = self.spans.get(id(node))
            if span is not None:
                return span
        return default

    def explain(self, err: ck.TypingError, default: Span, names: tuple = ()) -> Diagnostic:
        from .pretty import pretty_any

        return Diagnostic(
            err.message,
            self.locate(err, default),
            code=err.kind,
            expected=None if err.expected is None else pretty_any(err.expected, names),
            actual=None if err.actual is None else pretty_any(err.actual, names),
        )
