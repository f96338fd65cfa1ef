"""Named surface syntax. Every node carries the span it was parsed from."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .diagnostics import Span


class SType:
    span: Span


class STerm:
    span: Span


def _node(cls):
    return dataclass(frozen=True)(cls)


# ---------------------------------------------------------------- types


@_node
class TyUnit(SType):
    span: Span


@_node
class TyProp(SType):
    span: Span


@_node
class TyBool(SType):
    span: Span


@_node
class TyVoid(SType):
    span: Span


@_node
class TyProd(SType):
    span: Span
    left: SType
    right: SType


@_node
class TySum(SType):
    span: Span
    left: SType
    right: SType


@_node
class TyArrow(SType):
    span: Span
    dom: SType
    cod: SType


@_node
class TyId(SType):
    span: Span
    ty: SType
    lhs: STerm
    rhs: STerm


@_node
class TyPi(SType):
    span: Span
    name: str
    dom: SType
    cod: SType


@_node
class TyEl(SType):
    span: Span
    code: STerm


@_node
class TyTrunc(SType):
    span: Span
    ty: SType


# ---------------------------------------------------------------- terms


@_node
class Name(STerm):
    span: Span
    name: str


@_node
class StarLit(STerm):
    span: Span


@_node
class TrueLit(STerm):
    span: Span


@_node
class FalseLit(STerm):
    span: Span


@_node
class PairE(STerm):
    span: Span
    fst: STerm
    snd: STerm


@_node
class ProjE(STerm):
    span: Span
    pair: STerm
    which: int


@_node
class InlE(STerm):
    span: Span
    value: STerm


@_node
class InrE(STerm):
    span: Span
    value: STerm


@_node
class MatchE(STerm):
    span: Span
    scrut: STerm
    motive: Optional[SType]
    left_name: str
    on_left: STerm
    right_name: str
    on_right: STerm


@_node
class FunE(STerm):
    span: Span
    name: str
    body: STerm


@_node
class DFunE(STerm):
    span: Span
    name: str
    body: STerm


@_node
class AppE(STerm):
    span: Span
    fn: STerm
    arg: STerm


@_node
class ReflE(STerm):
    span: Span
    value: STerm


@_node
class RCode(STerm):
    span: Span
    ty: SType
    proof: STerm


@_node
class IfE(STerm):
    span: Span
    cond: STerm
    motive: Optional[SType]
    then: STerm
    orelse: STerm


@_node
class Squash(STerm):
    span: Span
    value: STerm


@_node
class TruncElim(STerm):
    span: Span
    value: STerm
    prop: STerm
    fn: STerm


@_node
class IdPE(STerm):
    span: Span
    ty: SType
    lhs: STerm
    rhs: STerm


@_node
class AnnE(STerm):
    span: Span
    term: STerm
    ty: SType


# ---------------------------------------------------------------- declarations


@dataclass(frozen=True)
class Param:
    span: Span
    name: str
    ty: SType


@dataclass(frozen=True)
class DefDecl:
    span: Span
    name: str
    params: tuple
    ty: SType
    body: STerm


@dataclass(frozen=True)
class EqDecl:
    span: Span
    name: str
    lhs: STerm
    rhs: STerm
    ty: SType


@dataclass(frozen=True)
class AssumeDecl:
    span: Span
    name: str
    ty: SType


@dataclass(frozen=True)
class PropextDecl:
    """``propext n : R(A,p) = R(B,q) via f, g`` with ``f : A -> B`` and ``g : B -> A``."""

    span: Span
    name: str
    lhs: STerm
    rhs: STerm
    there: STerm
    back: STerm


@dataclass(frozen=True)
class ModuleFile:
    decls: tuple = field(default=())
    source: Optional[str] = field(default=None, compare=False)
