"""Golden judgments shared by the checker, oracle and acceptance tests.

Every positive case names the rule it exercises; ``RULES`` lists the rules
that must each be exercised at least once. A case may carry premises: it is
accepted only if the premises and the conclusion all are. Negative cases
name the error kind the checker must report. ``refutable`` marks rejected
equalities whose two sides are well typed, so the set model must find an
environment where they differ.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from cbt import checker as ck
from cbt import core as c
from cbt.core import PROP, STAR, UNIT, App, Ann, Coprod, Ctx, DApp, DLam, El, Fun, Id, Inl, Inr, Lam, Match, Pair, Pi
from cbt.core import Proj1, Proj2, PropCode, Prod, Refl, Var
from cbt.prelude import BOOL, FALSE, FALSITY, TRUE, TRUTH, VOID, idprop, if_then_else, uip, uip_type


@dataclass(frozen=True)
class PropExt:
    """``R(A,p) = R(B,q) : Prop`` with the maps ``f : A -> B`` and ``g : B -> A``."""

    ctx: c.Ctx
    a: c.Type
    p: c.Term
    b: c.Type
    q: c.Term
    f: c.Term
    g: c.Term


@dataclass(frozen=True)
class Case:
    name: str
    rule: str
    judgment: object
    premises: tuple = ()
    kind: Optional[str] = None
    refutable: bool = False


def run(judgment) -> ck.Derivation:
    if isinstance(judgment, PropExt):
        j = judgment
        return ck.check_prop_code_eq(j.ctx, j.a, j.p, j.b, j.q, (j.f, j.g))
    return ck.check_judgment(judgment)


def accepted(case: Case) -> bool:
    try:
        for p in case.premises:
            run(p)
        run(case.judgment)
    except ck.TypingError:
        return False
    return True


def rejection_kind(case: Case) -> Optional[str]:
    try:
        run(case.judgment)
    except ck.TypingError as e:
        return e.kind
    return None


def ctx(*entries) -> Ctx:
    return Ctx(tuple(entries))


E = c.EMPTY
UNIQ_UNIT = DLam(DLam(Refl(STAR)))
TWO_PROPS = ctx(PROP, PROP)
PROD_UP = Prod(UNIT, PROP)
ID_UNIT = Id(UNIT, STAR, STAR)
# x : Prop, y : Prop, p : Id Prop x y
XY_EQ = ctx(PROP, PROP, Id(PROP, Var(1), Var(0)))

RULES = (
    "ctx-form", "subst-ext", "weakening", "subst-action", "composition",
    "unit-form", "unit-intro", "unit-eta",
    "prod-form", "prod-intro", "prod-elim", "prod-beta", "prod-eta",
    "coprod-form", "coprod-intro", "coprod-elim", "coprod-beta",
    "fun-form", "fun-intro", "fun-elim", "fun-beta",
    "id-form", "id-intro", "id-reflection", "id-uniq", "id-uip",
    "pi-form", "pi-intro", "pi-elim", "pi-beta",
    "prop-form", "el-form", "el-irrelevance", "r-intro", "r-eq",
)  # fmt: skip

POSITIVE = (
    Case("empty context", "ctx-form", ck.CtxWf(E)),
    Case("context with a dependent Id", "ctx-form", ck.CtxWf(ctx(UNIT, Id(UNIT, Var(0), STAR)))),
    Case("variable lookup weakens", "ctx-form", ck.TmHas(ctx(UNIT, PROP), Var(1), UNIT)),
    Case("Unit is a type", "unit-form", ck.TyWf(E, UNIT)),
    Case("star : Unit", "unit-intro", ck.TmHas(E, STAR, UNIT)),
    Case("Unit eta on a variable", "unit-eta", ck.TmEq(ctx(UNIT), Var(0), STAR, UNIT)),
    Case(
        "Unit eta on an application",
        "unit-eta",
        ck.TmEq(ctx(PROP), App(Ann(Lam(STAR), Fun(PROP, UNIT)), Var(0)), STAR, UNIT),
    ),
    Case("product formation", "prod-form", ck.TyWf(E, PROD_UP)),
    Case("pair introduction", "prod-intro", ck.TmHas(E, Pair(STAR, TRUTH), PROD_UP)),
    Case("first projection", "prod-elim", ck.TmHas(ctx(PROD_UP), Proj1(Var(0)), UNIT)),
    Case("second projection", "prod-elim", ck.TmHas(ctx(PROD_UP), Proj2(Var(0)), PROP)),
    Case("first beta", "prod-beta", ck.TmEq(E, Proj1(Pair(STAR, TRUTH)), STAR, UNIT)),
    Case("second beta", "prod-beta", ck.TmEq(E, Proj2(Pair(STAR, TRUTH)), TRUTH, PROP)),
    Case(
        "product eta",
        "prod-eta",
        ck.TmEq(ctx(Prod(PROP, PROP)), Var(0), Pair(Proj1(Var(0)), Proj2(Var(0))), Prod(PROP, PROP)),
    ),
    Case("coproduct formation", "coprod-form", ck.TyWf(E, Coprod(UNIT, PROP))),
    Case("left injection", "coprod-intro", ck.TmHas(E, Inl(STAR), Coprod(UNIT, PROP))),
    Case("right injection", "coprod-intro", ck.TmHas(E, Inr(TRUTH), Coprod(UNIT, PROP))),
    Case(
        "match on a variable",
        "coprod-elim",
        ck.TmHas(ctx(Coprod(UNIT, PROP)), Match(Var(0), UNIT, PROP, PROP, TRUTH, Var(0)), PROP),
    ),
    Case("match beta on inl", "coprod-beta", ck.TmEq(E, Match(Inl(STAR), UNIT, UNIT, UNIT, STAR, STAR), STAR, UNIT)),
    Case(
        "match beta on inr",
        "coprod-beta",
        ck.TmEq(E, Match(Inr(TRUTH), UNIT, PROP, PROP, FALSITY, Var(0)), TRUTH, PROP),
    ),
    Case("if true at Bool", "coprod-beta", ck.TmEq(E, if_then_else(TRUE, BOOL, FALSE, TRUE), FALSE, BOOL)),
    Case("function formation", "fun-form", ck.TyWf(E, Fun(PROP, PROP))),
    Case("identity function", "fun-intro", ck.TmHas(E, Lam(Var(0)), Fun(PROP, PROP))),
    Case("application of a variable", "fun-elim", ck.TmHas(ctx(Fun(PROP, PROP)), App(Var(0), TRUTH), PROP)),
    Case("function beta at Unit", "fun-beta", ck.TmEq(E, App(Ann(Lam(Var(0)), Fun(UNIT, UNIT)), STAR), STAR, UNIT)),
    Case("function beta at Prop", "fun-beta", ck.TmEq(E, App(Ann(Lam(Var(0)), Fun(PROP, PROP)), TRUTH), TRUTH, PROP)),
    Case(
        "function eta",
        "fun-beta",
        ck.TmEq(ctx(Fun(PROP, PROP)), Var(0), Lam(App(Var(1), Var(0))), Fun(PROP, PROP)),
    ),
    Case("Id formation", "id-form", ck.TyWf(E, ID_UNIT)),
    Case("reflexivity", "id-intro", ck.TmHas(E, Refl(STAR), ID_UNIT)),
    Case("reflection", "id-reflection", ck.TmEq(XY_EQ, Var(2), Var(1), PROP)),
    Case(
        "reflection through transitivity",
        "id-reflection",
        ck.TmEq(
            ctx(PROP, PROP, PROP, Id(PROP, Var(2), Var(1)), Id(PROP, Var(2), Var(1))),
            Var(4),
            Var(2),
            PROP,
        ),
    ),
    Case(
        "reflection under El",
        "id-reflection",
        ck.TmHas(XY_EQ.extend(El(Var(2))), Var(0), El(Var(2))),
    ),
    Case("any proof is refl", "id-uniq", ck.TmEq(ctx(ID_UNIT), Var(0), Refl(STAR), ID_UNIT)),
    Case(
        "two proofs of one equation",
        "id-uip",
        ck.TmEq(XY_EQ.extend(Id(PROP, Var(2), Var(1))), Var(1), Var(0), Id(PROP, Var(3), Var(2))),
    ),
    Case("uip term at Prop", "id-uip", ck.TmHas(E, uip(PROP), uip_type(PROP))),
    Case("Pi formation, the empty type", "pi-form", ck.TyWf(E, VOID)),
    Case("dependent identity", "pi-intro", ck.TmHas(E, DLam(Lam(Var(0))), Pi(PROP, Fun(El(Var(0)), El(Var(0)))))),
    Case("dependent application", "pi-elim", ck.TmHas(ctx(VOID), DApp(Var(0), TRUTH), El(TRUTH))),
    Case("Pi beta", "pi-beta", ck.TmEq(E, DApp(Ann(DLam(Var(0)), Pi(PROP, PROP)), TRUTH), TRUTH, PROP)),
    Case("Pi eta", "pi-beta", ck.TmEq(ctx(Pi(PROP, PROP)), Var(0), DLam(DApp(Var(1), Var(0))), Pi(PROP, PROP))),
    Case("Prop is a type", "prop-form", ck.TyWf(E, PROP)),
    Case("El of a variable", "el-form", ck.TyWf(ctx(PROP), El(Var(0)))),
    Case("El of a code", "el-form", ck.TyWf(E, El(TRUTH))),
    Case("proof irrelevance", "el-irrelevance", ck.TmEq(ctx(PROP, El(Var(0)), El(Var(1))), Var(1), Var(0), El(Var(2)))),
    Case("truth code", "r-intro", ck.TmHas(E, TRUTH, PROP)),
    Case("falsity code", "r-intro", ck.TmHas(E, FALSITY, PROP)),
    Case("Id as a proposition", "r-intro", ck.TmHas(E, idprop(UNIT, STAR, STAR), PROP)),
    Case(
        "propext Unit with itself",
        "r-eq",
        PropExt(E, UNIT, UNIQ_UNIT, UNIT, UNIQ_UNIT, Lam(STAR), Lam(STAR)),
    ),
    Case(
        "propext Unit with Id Unit star star",
        "r-eq",
        PropExt(E, UNIT, UNIQ_UNIT, ID_UNIT, DLam(DLam(Refl(Var(1)))), Lam(Refl(STAR)), Lam(STAR)),
    ),
    Case("empty substitution", "subst-ext", ck.SubstHas(E, (), E)),
    Case(
        "substitution into a dependent telescope",
        "subst-ext",
        ck.SubstHas(E, (STAR, Refl(STAR)), ctx(UNIT, Id(UNIT, Var(0), STAR))),
    ),
    Case("duplication substitution", "subst-ext", ck.SubstHas(ctx(UNIT), c.extend(c.id_subst(1), STAR), ctx(UNIT, UNIT))),
    Case(
        "identity substitution",
        "subst-ext",
        ck.SubstHas(ctx(PROP, El(Var(0))), c.id_subst(2), ctx(PROP, El(Var(0)))),
    ),
    Case(
        "weakening a variable",
        "weakening",
        ck.TmHas(ctx(PROP, UNIT), c.shift(Var(0)), c.shift(PROP)),
        premises=(ck.TmHas(ctx(PROP), Var(0), PROP), ck.TyWf(ctx(PROP), UNIT)),
    ),
    Case(
        "weakening under a binder",
        "weakening",
        ck.TmHas(ctx(PROP, PROP), c.shift(Lam(Var(1))), c.shift(Fun(UNIT, PROP))),
        premises=(ck.TmHas(ctx(PROP), Lam(Var(1)), Fun(UNIT, PROP)), ck.TyWf(ctx(PROP), PROP)),
    ),
    Case(
        "substituting into a term",
        "subst-action",
        ck.TmHas(E, c.apply_tm(App(Ann(Lam(Var(0)), Fun(PROP, PROP)), Var(0)), (TRUTH,)), c.apply_ty(PROP, (TRUTH,))),
        premises=(ck.SubstHas(E, (TRUTH,), ctx(PROP)), ck.TmHas(ctx(PROP), App(Ann(Lam(Var(0)), Fun(PROP, PROP)), Var(0)), PROP)),
    ),
    Case(
        "substituting into a type",
        "subst-action",
        ck.TyWf(E, c.apply_ty(El(Var(0)), (TRUTH,))),
        premises=(ck.SubstHas(E, (TRUTH,), ctx(PROP)), ck.TyWf(ctx(PROP), El(Var(0)))),
    ),
    Case(
        "substituting into a dependent type",
        "subst-action",
        ck.TmHas(E, c.apply_tm(Var(0), (STAR, Refl(STAR))), c.apply_ty(Id(UNIT, Var(1), STAR), (STAR, Refl(STAR)))),
        premises=(ck.SubstHas(E, (STAR, Refl(STAR)), ctx(UNIT, Id(UNIT, Var(0), STAR))),),
    ),
    Case(
        "composition of substitutions",
        "composition",
        ck.SubstHas(E, c.compose((Var(0), Var(0)), (STAR,)), ctx(UNIT, UNIT)),
        premises=(ck.SubstHas(ctx(UNIT), (Var(0), Var(0)), ctx(UNIT, UNIT)), ck.SubstHas(E, (STAR,), ctx(UNIT))),
    ),
    Case(
        "composition into a dependent telescope",
        "composition",
        ck.SubstHas(E, c.compose((Var(0), Refl(Var(0))), (STAR,)), ctx(UNIT, Id(UNIT, Var(0), Var(0)))),
        premises=(
            ck.SubstHas(ctx(UNIT), (Var(0), Refl(Var(0))), ctx(UNIT, Id(UNIT, Var(0), Var(0)))),
            ck.SubstHas(E, (STAR,), ctx(UNIT)),
        ),
    ),
)  # fmt: skip

NEGATIVE = (
    Case("star : Prop", "", ck.TmHas(E, STAR, PROP), kind=ck.CONVERSION_FAILED),
    Case("annotated star : Prop", "", ck.TmHas(E, Ann(STAR, PROP), PROP), kind=ck.CONVERSION_FAILED),
    Case("projection of star", "", ck.TmHas(E, Proj1(STAR), UNIT), kind=ck.NOT_A_PAIR),
    Case("projection of a Prop variable", "", ck.TmHas(ctx(PROP), Proj2(Var(0)), PROP), kind=ck.NOT_A_PAIR),
    Case("application of star", "", ck.TmHas(E, App(STAR, STAR), UNIT), kind=ck.NOT_A_FUNCTION),
    Case("dependent application of star", "", ck.TmHas(E, DApp(STAR, STAR), UNIT), kind=ck.NOT_A_FUNCTION),
    Case("free variable in the empty context", "", ck.TmHas(E, Var(0), UNIT), kind=ck.SCOPE),
    Case("variable past the context", "", ck.TmEq(ctx(UNIT), Var(1), STAR, UNIT), kind=ck.SCOPE),
    Case("El of star", "", ck.TyWf(E, El(STAR)), kind=ck.PROP_EXPECTED),
    Case("context entry El of star", "", ck.CtxWf(ctx(El(STAR))), kind=ck.PROP_EXPECTED),
    Case(
        "branch binders disagree with the scrutinee",
        "",
        ck.TmHas(ctx(BOOL), Match(Var(0), UNIT, PROP, UNIT, STAR, STAR), UNIT),
        kind=ck.BRANCH_CONTEXT,
    ),
    Case(
        "branch binders swapped",
        "",
        ck.TmHas(ctx(Coprod(UNIT, PROP)), Match(Var(0), PROP, UNIT, PROP, Var(0), TRUTH), PROP),
        kind=ck.BRANCH_CONTEXT,
    ),
    Case("lambda at Unit", "", ck.TmHas(E, Lam(Var(0)), UNIT), kind=ck.MISMATCH),
    Case("pair at Unit", "", ck.TmHas(E, Pair(STAR, STAR), UNIT), kind=ck.MISMATCH),
    Case("inl at Unit", "", ck.TmHas(E, Inl(STAR), UNIT), kind=ck.MISMATCH),
    Case("substitution too short", "", ck.SubstHas(E, (STAR,), ctx(UNIT, UNIT)), kind=ck.MISMATCH),
    Case(
        "substitution entry at the wrong Id",
        "",
        ck.SubstHas(E, (STAR, STAR), ctx(UNIT, Id(UNIT, Var(0), STAR))),
        kind=ck.CONVERSION_FAILED,
    ),
    Case("refl at the wrong Id", "", ck.TmHas(E, Refl(STAR), Id(BOOL, TRUE, FALSE)), kind=ck.CONVERSION_FAILED),
    Case(
        "Bool is not a proposition",
        "",
        ck.TmHas(E, PropCode(BOOL, DLam(DLam(Refl(Var(1))))), PROP),
        kind=ck.CONVERSION_FAILED,
    ),
    Case(
        "propext Unit with Void",
        "",
        PropExt(E, UNIT, UNIQ_UNIT, VOID, FALSITY.proof, Lam(Var(0)), Lam(STAR)),
        kind=ck.CONVERSION_FAILED,
    ),
    Case("true = false", "", ck.TmEq(E, TRUE, FALSE, BOOL), kind=ck.CONVERSION_FAILED, refutable=True),
    Case("truth = falsity", "", ck.TmEq(E, TRUTH, FALSITY, PROP), kind=ck.CONVERSION_FAILED, refutable=True),
    Case("a Bool variable is true", "", ck.TmEq(ctx(BOOL), Var(0), TRUE, BOOL), kind=ck.CONVERSION_FAILED, refutable=True),
    Case(
        "two unrelated propositions",
        "",
        ck.TmEq(TWO_PROPS, Var(1), Var(0), PROP),
        kind=ck.CONVERSION_FAILED,
        refutable=True,
    ),
    Case(
        "wrong projection beta",
        "",
        ck.TmEq(E, Proj1(Pair(Ann(TRUE, BOOL), Ann(FALSE, BOOL))), FALSE, BOOL),
        kind=ck.CONVERSION_FAILED,
        refutable=True,
    ),
    Case(
        "identity versus negation",
        "",
        ck.TmEq(E, Lam(Var(0)), Lam(if_then_else(Var(0), BOOL, FALSE, TRUE)), Fun(BOOL, BOOL)),
        kind=ck.CONVERSION_FAILED,
        refutable=True,
    ),
    Case(
        "literal false branch",
        "",
        ck.TmEq(E, if_then_else(FALSE, BOOL, TRUE, FALSE), TRUE, BOOL),
        kind=ck.CONVERSION_FAILED,
        refutable=True,
    ),
)  # fmt: skip


def closed_equalities(cases):
    """Equality judgments of the corpus that the set model can decide."""
    for case in cases:
        if isinstance(case.judgment, (ck.TmEq, PropExt)):
            yield case
