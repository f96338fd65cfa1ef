"""Internalized constructions: Booleans, truncation, the empty type, ``Id'``.

None of these are kernel constructors. Each is a definition in terms of the
core, and the typing rules one would state for them as primitives are
re-established as theorems by :func:`verify_derived_rule`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from typing import Callable, Optional

from . import checker as ck
from . import core as c
from . import equality as eq
from . import setmodel as sm

# ---------------------------------------------------------------- sugar

BOOL = c.Coprod(c.UNIT, c.UNIT)
TRUE = c.Inl(c.STAR)
FALSE = c.Inr(c.STAR)
VOID = c.Pi(c.PROP, c.El(c.Var(0)))


def if_then_else(t: c.Term, motive: c.Type, u: c.Term, v: c.Term) -> c.Term:
    # the branches bind the (ignored) Unit payload, hence the shifts
    return c.Match(t, c.UNIT, c.UNIT, motive, c.shift(u), c.shift(v))


def trunc(a: c.Type) -> c.Type:
    """``Pi P:Prop. (A -> El P) -> El P``."""
    return c.Pi(c.PROP, c.Fun(c.Fun(c.shift(a), c.El(c.Var(0))), c.El(c.Var(0))))


def squash(u: c.Term) -> c.Term:
    return c.DLam(c.Lam(c.App(c.Var(0), c.shift(u, 2))))


def trunc_elim(u: c.Term, p: c.Term, f: c.Term) -> c.Term:
    return c.App(c.DApp(u, p), f)


def uip_type(a: c.Type) -> c.Type:
    """``Pi x y:A. Pi i j:Id A x y. Id (Id A x y) i j``."""
    return c.Pi(
        a,
        c.Pi(
            c.shift(a, 1),
            c.Pi(
                c.Id(c.shift(a, 2), c.Var(1), c.Var(0)),
                c.Pi(
                    c.Id(c.shift(a, 3), c.Var(2), c.Var(1)),
                    c.Id(c.Id(c.shift(a, 4), c.Var(3), c.Var(2)), c.Var(1), c.Var(0)),
                ),
            ),
        ),
    )


def uip(a: c.Type) -> c.Term:
    """The reflexivity proof of :func:`uip_type`; ``a`` only fixes the annotation."""
    return c.DLam(c.DLam(c.DLam(c.DLam(c.Refl(c.Refl(c.Var(3)))))))


def idprop(a: c.Type, x: c.Term, y: c.Term) -> c.Term:
    """``Id' A x y``: the identity type packaged as a proposition code."""
    proof = c.DApp(c.DApp(c.Ann(uip(a), uip_type(a)), x), y)
    return c.PropCode(c.Id(a, x, y), proof)


TRUTH = c.PropCode(c.UNIT, c.DLam(c.DLam(c.Refl(c.STAR))))
FALSITY = c.PropCode(VOID, c.DLam(c.DLam(c.Refl(c.Var(1)))))


def match_trunc(a: c.Type) -> Optional[c.Type]:
    """Recover ``A`` from ``trunc(A)``, or ``None`` if ``a`` has another shape."""
    match a:
        case c.Pi(c.PropU(), c.Fun(c.Fun(inner, c.El(c.Var(0))), c.El(c.Var(0)))):
            if 0 not in c.free_vars(inner):
                return c.strengthen(inner)
    return None


# ---------------------------------------------------------------- definitions


@dataclass(frozen=True)
class PreludeDef:
    """``body`` is a term checked at ``ty``, or a type when ``ty`` is None."""

    name: str
    params: tuple
    body: object
    ty: Optional[c.Type]

    def check(self) -> ck.Derivation:
        ctx = c.EMPTY.extend_many(self.params)
        if self.ty is None:
            return ck.check_ty(ctx, self.body)
        return ck.check_tm(ctx, self.body, self.ty)


class PreludeError(Exception):
    def __init__(self, name: str, cause: Exception):
        super().__init__(f"prelude definition {name!r} failed to check: {cause}")
        self.name = name
        self.cause = cause


@dataclass(frozen=True)
class MenuType:
    """A test instantiation for a schematic type ``A``.

    ``ctx`` is where ``elements`` live; ``Void`` has no closed inhabitant,
    so its element is a variable.
    """

    label: str
    ty: c.Type
    ctx: c.Ctx
    elements: tuple


MENU = (
    MenuType("Unit", c.UNIT, c.EMPTY, (c.STAR,)),
    MenuType("Bool", BOOL, c.EMPTY, (TRUE, FALSE)),
    MenuType("Prop", c.PROP, c.EMPTY, (TRUTH, FALSITY)),
    MenuType("Void", VOID, c.Ctx((VOID,)), (c.Var(0),)),
    MenuType("Id Unit star star", c.Id(c.UNIT, c.STAR, c.STAR), c.EMPTY, (c.Refl(c.STAR),)),
)


def _schematic_defs() -> list:
    defs = [
        PreludeDef("Bool", (), BOOL, None),
        PreludeDef("true", (), TRUE, BOOL),
        PreludeDef("false", (), FALSE, BOOL),
        PreludeDef("Void", (), VOID, None),
        PreludeDef("truth", (), TRUTH, c.PROP),
        PreludeDef("falsity", (), FALSITY, c.PROP),
    ]
    for m in MENU:
        a, tag = m.ty, f"[{m.label}]"
        defs += [
            PreludeDef("if" + tag, (BOOL, c.shift(a), c.shift(a, 2)), if_then_else(c.Var(2), c.shift(a, 3), c.Var(1), c.Var(0)), c.shift(a, 3)),
            PreludeDef("Trunc" + tag, (), trunc(a), None),
            PreludeDef("squash" + tag, (a,), squash(c.Var(0)), trunc(c.shift(a))),
            PreludeDef(
                "truncElim" + tag,
                (trunc(a), c.PROP, c.Fun(c.shift(a, 2), c.El(c.Var(0)))),
                trunc_elim(c.Var(2), c.Var(1), c.Var(0)),
                c.El(c.Var(1)),
            ),
            PreludeDef("uip" + tag, (), uip(a), uip_type(a)),
            PreludeDef("IdP" + tag, (a, c.shift(a)), idprop(c.shift(a, 2), c.Var(1), c.Var(0)), c.PROP),
        ]  # fmt: skip
    return defs


PRELUDE_FILE = "prelude.cbt"

# Shipped copy of prelude.cbt, used when the data file cannot be read.
# tests/test_prelude.py asserts the two are identical.
PRELUDE_SOURCE = """\
-- Standard prelude, checked on every load.
-- Bool, Void, Trunc, true, false, if, squash, truncElim and IdP are
-- built into the surface syntax; the definitions below use them.

def not (b : Bool) : Bool := if b as Bool then false else true

def and (a : Bool) (b : Bool) : Bool := if a as Bool then b else false

def or (a : Bool) (b : Bool) : Bool := if a as Bool then true else b

-- the proposition with one proof, and the one with none
def Truth : Prop := R(Unit, dfun x => dfun y => refl star)

def Falsity : Prop := R(Void, dfun x => dfun y => refl x)

def exFalso (P : Prop) (v : Void) : El P := v P

-- any two proofs of an equation are equal, proven by reflexivity
def uipProp : Pi (x : Prop) Pi (y : Prop) Pi (i : Id Prop x y) Pi (j : Id Prop x y) Id (Id Prop x y) i j :=
  dfun x => dfun y => dfun i => dfun j => refl (refl x)

def uipBool : Pi (x : Bool) Pi (y : Bool) Pi (i : Id Bool x y) Pi (j : Id Bool x y) Id (Id Bool x y) i j :=
  dfun x => dfun y => dfun i => dfun j => refl (refl x)

def squashStar : Trunc Unit := squash star

def truncMap (A : Prop) (B : Prop) (f : El A -> El B) (u : Trunc (El A)) : Trunc (El B) :=
  squash (truncElim(u, B, f))

def starEqStar : Prop := IdP Unit star star

def symm (x : Prop) (y : Prop) (p : Id Prop x y) : Id Prop y x := refl y

def trans (x : Prop) (y : Prop) (z : Prop) (p : Id Prop x y) (q : Id Prop y z) : Id Prop x z := refl x
"""


def prelude_source() -> str:
    try:
        return resources.files("cbt").joinpath(PRELUDE_FILE).read_text(encoding="utf-8")
    except (FileNotFoundError, ModuleNotFoundError, OSError):
        return PRELUDE_SOURCE


def load_surface_defs(source: Optional[str] = None) -> list:
    """Check the ``.cbt`` prelude and return its definitions, params folded away."""
    from .frontend.elaborate import Elaborator  # the frontend imports this module

    elab = Elaborator(prelude=False)
    outcomes = elab.check_source(prelude_source() if source is None else source, path=PRELUDE_FILE)
    defs = []
    for o in outcomes:
        if not o.ok:
            raise PreludeError(o.name, o.diagnostic)
        defs.append(PreludeDef(o.name, o.params, o.body, o.ty))
    return defs


def load_prelude() -> list:
    defs = _schematic_defs()
    for d in defs:
        try:
            d.check()
        except ck.TypingError as e:
            raise PreludeError(d.name, e) from e
    return defs + load_surface_defs()


# ---------------------------------------------------------------- derived rules


@dataclass(frozen=True)
class RuleInstance:
    label: str
    premises: tuple
    conclusion: ck.Judgment


@dataclass(frozen=True)
class DerivedRule:
    name: str
    instances: Callable[[], list]
    description: str = ""


@dataclass(frozen=True)
class RuleVerdict:
    rule: str
    checked: int
    failure: Optional[RuleInstance] = None
    reason: str = ""

    def __bool__(self):
        return self.failure is None


def verify_derived_rule(rule: DerivedRule) -> RuleVerdict:
    """Premises accepted must imply conclusion accepted, on every instance.

    An instance whose premises are rejected is a broken test menu, not a
    vacuous success, so it counts as a failure too.
    """
    count = 0
    for inst in rule.instances():
        count += 1
        for p in inst.premises:
            if not ck.accepts(p):
                return RuleVerdict(rule.name, count, inst, "premise rejected")
        try:
            ck.check_judgment(inst.conclusion)
        except ck.TypingError as e:
            return RuleVerdict(rule.name, count, inst, str(e))
    return RuleVerdict(rule.name, count)


def _bool_scrutinees(ctx: c.Ctx):
    """``true``, ``false`` and a Bool variable, each with its context."""
    yield "true", ctx, TRUE
    yield "false", ctx, FALSE
    yield "b", ctx.extend(BOOL), c.Var(0)


def _pairs(m: MenuType):
    return [(u, v) for u in m.elements for v in m.elements]


def _bool_form():
    return [RuleInstance("Bool", (ck.CtxWf(c.EMPTY),), ck.TyWf(c.EMPTY, BOOL))]


def _bool_intro():
    out = []
    for m in MENU:
        out.append(RuleInstance(f"true in {m.label} ctx", (ck.CtxWf(m.ctx),), ck.TmHas(m.ctx, TRUE, BOOL)))
        out.append(RuleInstance(f"false in {m.label} ctx", (ck.CtxWf(m.ctx),), ck.TmHas(m.ctx, FALSE, BOOL)))
    return out


def _bool_elim():
    out = []
    for m in MENU:
        for u, v in _pairs(m):
            for label, ctx, t in _bool_scrutinees(m.ctx):
                k = len(ctx) - len(m.ctx)
                a, u1, v1 = c.shift(m.ty, k), c.shift(u, k), c.shift(v, k)
                prem = (ck.TyWf(ctx, a), ck.TmHas(ctx, u1, a), ck.TmHas(ctx, v1, a), ck.TmHas(ctx, t, BOOL))
                out.append(RuleInstance(f"if {label} at {m.label}", prem, ck.TmHas(ctx, if_then_else(t, a, u1, v1), a)))
    return out


def _bool_beta(which: bool):
    out = []
    for m in MENU:
        for u, v in _pairs(m):
            ctx, a = m.ctx, m.ty
            prem = (ck.TyWf(ctx, a), ck.TmHas(ctx, u, a), ck.TmHas(ctx, v, a))
            t, result = (TRUE, u) if which else (FALSE, v)
            out.append(RuleInstance(f"beta at {m.label}", prem, ck.TmEq(ctx, if_then_else(t, a, u, v), result, a)))
    return out


def _trunc_form():
    return [RuleInstance(m.label, (ck.CtxWf(m.ctx), ck.TyWf(m.ctx, m.ty)), ck.TyWf(m.ctx, trunc(m.ty))) for m in MENU]


def _trunc_intro():
    out = []
    for m in MENU:
        for u in m.elements:
            prem = (ck.TyWf(m.ctx, m.ty), ck.TmHas(m.ctx, u, m.ty))
            out.append(RuleInstance(m.label, prem, ck.TmHas(m.ctx, squash(u), trunc(m.ty))))
    return out


def _elim_setups(m: MenuType):
    """Contexts with ``P : Prop`` (or a fixed code) and ``f : A -> El P`` as variables."""
    open_ctx = m.ctx.extend(c.PROP).extend(c.Fun(c.shift(m.ty, 1), c.El(c.Var(0))))
    yield "P variable", open_ctx, c.shift(m.ty, 2), c.Var(1), c.Var(0), [c.shift(u, 2) for u in m.elements]
    for label, code in (("Truth", TRUTH), ("Falsity", FALSITY)):
        ctx = m.ctx.extend(c.Fun(m.ty, c.El(code)))
        yield label, ctx, c.shift(m.ty), code, c.Var(0), [c.shift(u) for u in m.elements]


def _trunc_elim():
    out = []
    for m in MENU:
        for label, ctx, a, p, f, elems in _elim_setups(m):
            for u in elems:
                su = c.Ann(squash(u), trunc(a))
                prem = (ck.TyWf(ctx, a), ck.TmHas(ctx, p, c.PROP), ck.TmHas(ctx, f, c.Fun(a, c.El(p))), ck.TmHas(ctx, su, trunc(a)))
                out.append(RuleInstance(f"{m.label}, {label}", prem, ck.TmHas(ctx, trunc_elim(su, p, f), c.El(p))))
            # and with the truncated value itself a variable
            vctx = ctx.extend(trunc(a))
            sa, sp, sf = c.shift(a), c.shift(p), c.shift(f)
            prem = (ck.TmHas(vctx, sp, c.PROP), ck.TmHas(vctx, sf, c.Fun(sa, c.El(sp))), ck.TmHas(vctx, c.Var(0), trunc(sa)))
            out.append(RuleInstance(f"{m.label}, {label}, u variable", prem, ck.TmHas(vctx, trunc_elim(c.Var(0), sp, sf), c.El(sp))))
    return out  # fmt: skip


def _trunc_beta():
    out = []
    for m in MENU:
        for label, ctx, a, p, f, elems in _elim_setups(m):
            for u in elems:
                lhs = trunc_elim(c.Ann(squash(u), trunc(a)), p, f)
                prem = (ck.TmHas(ctx, u, a), ck.TmHas(ctx, f, c.Fun(a, c.El(p))))
                out.append(RuleInstance(f"{m.label}, {label}", prem, ck.TmEq(ctx, lhs, c.App(f, u), c.El(p))))
    return out


def _idprop_form():
    out = []
    for m in MENU:
        for a, b in _pairs(m):
            prem = (ck.TyWf(m.ctx, m.ty), ck.TmHas(m.ctx, a, m.ty), ck.TmHas(m.ctx, b, m.ty))
            out.append(RuleInstance(m.label, prem, ck.TmHas(m.ctx, idprop(m.ty, a, b), c.PROP)))
        # variables as endpoints
        ctx = m.ctx.extend(m.ty).extend(c.shift(m.ty))
        a2 = c.shift(m.ty, 2)
        prem = (ck.TmHas(ctx, c.Var(1), a2), ck.TmHas(ctx, c.Var(0), a2))
        out.append(RuleInstance(f"{m.label}, variables", prem, ck.TmHas(ctx, idprop(a2, c.Var(1), c.Var(0)), c.PROP)))
    return out


DERIVED_RULES = (
    DerivedRule("bool-form", _bool_form, "Bool is a type"),
    DerivedRule("bool-intro", _bool_intro, "true, false : Bool"),
    DerivedRule("bool-elim", _bool_elim, "if t then u else v : A"),
    DerivedRule("bool-beta-true", lambda: _bool_beta(True), "if true then u else v = u"),
    DerivedRule("bool-beta-false", lambda: _bool_beta(False), "if false then u else v = v"),
    DerivedRule("trunc-form", _trunc_form, "Trunc A is a type"),
    DerivedRule("trunc-intro", _trunc_intro, "squash u : Trunc A"),
    DerivedRule("trunc-elim", _trunc_elim, "truncElim(u, P, f) : El P"),
    DerivedRule("trunc-beta", _trunc_beta, "truncElim(squash u, P, f) = f u"),
    DerivedRule("idprop-form", _idprop_form, "IdP A a b : Prop"),
)


# ---------------------------------------------------------------- the Bool discrepancy


@dataclass(frozen=True)
class DiscrepancyCase:
    label: str
    ty: c.Type
    u: c.Term
    v: c.Term
    literal_semantic: bool  # [[if false then u else v]] = [[u]]
    derived_semantic: bool  # [[if false then u else v]] = [[v]]
    literal_kernel: bool
    derived_kernel: bool


@dataclass(frozen=True)
class DiscrepancyReport:
    cases: tuple = field(default=())

    @property
    def literal_refuted(self) -> bool:
        return any(not k.literal_semantic for k in self.cases)

    @property
    def derived_confirmed(self) -> bool:
        return all(k.derived_semantic and k.derived_kernel for k in self.cases)

    def __str__(self):
        lines = [
            "Bool false-branch rule: stated as `if false then u else v = u`,",
            "but Bool := Unit + Unit with if := match makes the false branch return v.",
        ]
        for k in self.cases:
            lit = "holds" if k.literal_semantic else "REFUTED"
            der = "holds" if k.derived_semantic else "REFUTED"
            lines.append(
                f"  {k.label}: literal (= u) {lit} in the set model, kernel "
                f"{'accepts' if k.literal_kernel else 'rejects'}; derived (= v) {der}, kernel "
                f"{'accepts' if k.derived_kernel else 'rejects'}"
            )
        lines.append(
            "conclusion: literal rule refuted whenever u and v differ; the kernel implements the derived rule"
            if self.literal_refuted and self.derived_confirmed
            else "conclusion: no refuting instance in this menu"
        )
        return "\n".join(lines)


DISCREPANCY_MENU = (
    ("u = inl star, v = inr star at Bool", BOOL, c.Inl(c.STAR), c.Inr(c.STAR)),
    ("u = v = star at Unit", c.UNIT, c.STAR, c.STAR),
    ("u = true, v = false at Bool", BOOL, TRUE, FALSE),
)


def false_branch_discrepancy_report(model: Optional[sm.SetModel] = None) -> DiscrepancyReport:
    model = model or sm.SetModel()
    cases = []
    for label, a, u, v in DISCREPANCY_MENU:
        lhs = if_then_else(FALSE, a, u, v)
        cases.append(
            DiscrepancyCase(
                label,
                a,
                u,
                v,
                literal_semantic=model.sem_eq_tm(c.EMPTY, lhs, u, a),
                derived_semantic=model.sem_eq_tm(c.EMPTY, lhs, v, a),
                literal_kernel=ck.accepts(ck.TmEq(c.EMPTY, lhs, u, a)),
                derived_kernel=ck.accepts(ck.TmEq(c.EMPTY, lhs, v, a)),
            )
        )
    return DiscrepancyReport(tuple(cases))


def truncation_unique(a: c.Type, u: c.Term, v: c.Term, ctx: c.Ctx = c.EMPTY) -> bool:
    """Any two inhabitants of ``trunc(a)`` are definitionally equal."""
    return eq.conv_tm(ctx, trunc(a), u, v)
