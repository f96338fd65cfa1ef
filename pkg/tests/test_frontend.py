import pytest
from hypothesis import given, seed, settings

from cbt import core as c
from cbt import equality as eq
from cbt import prelude as pl
from cbt import setmodel as sm
from cbt.frontend import surface as s
from cbt.frontend.diagnostics import Diagnostic, Span
from cbt.frontend.elaborate import Elaborator, Scope
from cbt.frontend.lexer import EOF, IDENT, KEYWORD, SYMBOL, tokenize
from cbt.frontend.parser import parse_source, parse_term, parse_type
from cbt.frontend.pretty import fresh, pretty_tm, pretty_ty, show_core
from gen import PROPERTY, SEED, typed

S, U, P = c.STAR, c.UNIT, c.PROP
V0 = c.Var(0)


@pytest.fixture(scope="module")
def bare():
    return Elaborator(prelude=False)


def scope_of(*pairs) -> Scope:
    scope = Scope()
    for name, ty in pairs:
        scope = scope.bind(name, ty)
    return scope


def check_source(source: str, prelude: bool = False):
    return Elaborator(prelude=prelude).check_source(source)


# ---------------------------------------------------------------- lexer


def test_tokenize_definition():
    toks = tokenize("def x : Unit := star")
    assert [(t.kind, t.lexeme) for t in toks] == [
        (KEYWORD, "def"),
        (IDENT, "x"),
        (SYMBOL, ":"),
        (IDENT, "Unit"),
        (SYMBOL, ":="),
        (IDENT, "star"),
        (EOF, ""),
    ]


def test_tokenize_empty_and_comments():
    assert [t.kind for t in tokenize("")] == [EOF]
    assert [t.lexeme for t in tokenize("-- nothing here\nstar -- trailing")] == ["star", ""]


def test_tokenize_rejects_non_ascii_bracket():
    with pytest.raises(Diagnostic) as e:
        tokenize("x ⟨")
    assert e.value.span == Span(2, 3) and e.value.code == "lex"


def test_token_spans_cover_lexemes():
    source = "def id (b : Bool) : Bool := b.1 -- c"
    for t in tokenize(source)[:-1]:
        assert source[t.span.start : t.span.end] == t.lexeme


def test_tokenize_is_deterministic():
    source = "match x as Bool { a => a ; b => true }"
    assert tokenize(source) == tokenize(source)


# ---------------------------------------------------------------- parser


def test_parse_def_declaration():
    (d,) = parse_source("def id : Unit -> Unit := fun x => x").decls
    assert isinstance(d, s.DefDecl) and d.name == "id"
    assert isinstance(d.ty, s.TyArrow) and isinstance(d.body, s.FunE)


def test_parse_eq_declaration():
    (d,) = parse_source("eq beta : (fun x => x) star = star : Unit").decls
    assert isinstance(d, s.EqDecl) and isinstance(d.lhs, s.AppE)


def test_parse_error_points_at_unexpected_token():
    source = "def bad : := star"
    with pytest.raises(Diagnostic) as e:
        parse_source(source)
    assert e.value.span == Span(10, 12)
    assert "expected one of" in e.value.message
    assert e.value.one_line(source, "f.cbt").startswith("f.cbt:1:11: error[syntax]:")


def test_arrow_is_right_associative_and_loosest():
    t = parse_type("Unit * Unit + Unit -> Unit -> Unit")
    assert isinstance(t, s.TyArrow) and isinstance(t.cod, s.TyArrow)
    assert isinstance(t.dom, s.TySum) and isinstance(t.dom.left, s.TyProd)


def test_application_is_left_associative():
    t = parse_term("f x y.1")
    assert isinstance(t, s.AppE) and isinstance(t.fn, s.AppE)
    assert isinstance(t.arg, s.ProjE)


def test_reserved_names_cannot_be_bound():
    with pytest.raises(Diagnostic):
        parse_term("fun star => star")


def test_parse_all_declaration_forms():
    source = """
    assume b : Bool
    def n : Bool := if b as Bool then false else true
    eq e : n = n : Bool
    propext pe : R(Unit, dfun x => dfun y => refl star) = R(Unit, dfun x => dfun y => refl star)
      via fun x => x , fun x => x
    """
    kinds = [type(d).__name__ for d in parse_source(source).decls]
    assert kinds == ["AssumeDecl", "DefDecl", "EqDecl", "PropextDecl"]


# ---------------------------------------------------------------- elaboration


def test_elaborate_identity_function(bare):
    assert bare.check(Scope(), parse_term("fun x => x"), c.Fun(U, U)) == c.Lam(V0)


def test_elaborate_if_sugar(bare):
    scope = scope_of(("b", pl.BOOL))
    term, ty = bare.infer(scope, parse_term("if b as Bool then true else false"))
    assert ty == pl.BOOL
    assert term == c.Match(V0, U, U, pl.BOOL, c.Inl(S), c.Inr(S))
    model = sm.SetModel()
    assert model.sem_eq_tm(scope.ctx, term, V0, pl.BOOL)
    assert eq.normalize_tm(scope.ctx, pl.BOOL, term) != V0  # no coproduct eta in the kernel


def test_elaborate_squash_unfolds(bare):
    term, ty = bare.infer(Scope(), parse_term("squash star"))
    assert term == c.Ann(c.DLam(c.Lam(c.App(V0, S))), pl.trunc(U))
    assert ty == pl.trunc(U)


def test_elaborate_types_with_sugar(bare):
    assert bare.ty(Scope(), parse_type("Bool")) == pl.BOOL
    assert bare.ty(Scope(), parse_type("Void")) == pl.VOID
    assert bare.ty(Scope(), parse_type("Trunc Unit")) == pl.trunc(U)
    assert bare.ty(Scope(), parse_type("Pi (x : Prop) El x")) == c.Pi(P, c.El(V0))


def test_sugar_is_conservative(bare):
    scope = scope_of(("b", pl.BOOL))
    term, _ = bare.infer(scope, parse_term("if b as Unit then star else star"))
    assert term == pl.if_then_else(V0, U, S, S)
    elim, _ = bare.infer(Scope(), parse_term("truncElim(squash star, R(Unit, dfun x => dfun y => refl star), fun x => x)"))
    assert eq.normalize_tm(c.EMPTY, c.El(pl.TRUTH), elim) == c.IRR


def test_literal_redex_infers_from_argument():
    (o,) = check_source("eq beta : (fun x => x) star = star : Unit")
    assert o.ok


def test_unbound_name_is_reported_with_span():
    source = "def x : Unit := y"
    (o,) = check_source(source)
    assert not o.ok and o.diagnostic.code == "unbound"
    assert source[o.diagnostic.span.start : o.diagnostic.span.end] == "y"


def test_duplicate_definition():
    outcomes = check_source("def x : Unit := star\ndef x : Unit := star")
    assert outcomes[0].ok and outcomes[1].diagnostic.code == "duplicate"


def test_missing_motive():
    (o,) = check_source("def x : Unit := match (true : Bool) { a => a ; b => b }")
    # a checked position supplies the motive; synthesis does not
    assert o.ok
    (o,) = check_source("eq e : (match (true : Bool) { a => a ; b => b }).1 = star : Unit")
    assert not o.ok and o.diagnostic.code == "missing-motive"


def test_failed_definition_poisons_dependents():
    outcomes = check_source("def x : Unit := true\ndef y : Unit := x")
    assert outcomes[0].diagnostic.code == "mismatch"
    assert outcomes[1].diagnostic.code == "failed-dependency"


def test_conversion_failure_diagnostic_prints_normal_forms():
    source = "eq bad : true = false : Bool"
    (o,) = check_source(source)
    d = o.diagnostic
    assert d.code == "conversion-failed"
    assert d.expected == "true" and d.actual == "false"
    assert source[d.span.start : d.span.end] == "false"


def test_definitions_are_inlined_with_their_type():
    outcomes = check_source("def t : Bool := true\neq e : t = true : Bool")
    assert all(o.ok for o in outcomes)
    lhs = outcomes[1].obligation.judgment.lhs
    assert lhs == c.Ann(c.Inl(S), pl.BOOL)


def test_params_become_dependent_function():
    (o,) = check_source("def k (P : Prop) (x : El P) : El P := x")
    assert o.ok
    assert o.params == (P, c.El(V0)) and o.ty == c.El(c.Var(1))
    term, ty = o.scope.resolve("k")
    assert ty == c.Pi(P, c.Pi(c.El(V0), c.El(c.Var(1))))
    assert term == c.Ann(c.DLam(c.DLam(V0)), ty)


def test_propext_registers_equation():
    source = """
    propext pe : R(Unit, dfun x => dfun y => refl star) = R(Id Unit star star, dfun x => dfun y => refl (refl star))
      via fun x => refl star , fun x => star
    eq use : R(Unit, dfun x => dfun y => refl star) = R(Id Unit star star, dfun x => dfun y => refl (refl star)) : Prop
    """
    outcomes = check_source(source)
    assert [o.ok for o in outcomes] == [True, True]


def test_propext_rejects_unit_versus_void():
    source = """
    propext bad : R(Unit, dfun x => dfun y => refl star) = R(Void, dfun x => dfun y => refl x)
      via fun x => x , fun v => star
    """
    (o,) = check_source(source)
    assert not o.ok


def test_prelude_names_are_available():
    (o,) = check_source("eq e : not true = false : Bool", prelude=True)
    assert o.ok


def test_diagnostic_render_has_caret():
    source = "def x : Unit := y"
    (o,) = check_source(source)
    text = o.diagnostic.render(source, "f.cbt")
    assert text.splitlines()[-1].strip().startswith("|") and "^" in text


# ---------------------------------------------------------------- printing


def test_pretty_examples():
    assert pretty_ty(pl.trunc(pl.BOOL)) == "Trunc Bool"
    assert pretty_ty(c.Fun(c.Prod(U, U), c.Fun(U, U))) == "Unit * Unit -> Unit -> Unit"
    assert pretty_tm(c.Lam(c.Pair(V0, S))) == "fun x => pair(x, star)"
    assert pretty_tm(pl.if_then_else(c.Var(0), U, S, S), ("b",)) == "if b as Unit then star else star"
    assert pretty_tm(c.Var(3), ("a",)) == "#2"


def test_fresh_avoids_names_and_reserved_words():
    assert fresh(("x",)) == "y"
    assert fresh((), "if") != "if"


def test_show_core_notation():
    assert show_core(c.Lam(c.App(V0, S))) == "Lam(App(Var(0), Star))"


def test_type_round_trip(bare):
    for ty in (pl.BOOL, pl.VOID, pl.trunc(U), c.Pi(P, c.El(V0)), c.Id(U, S, S), c.Fun(c.Prod(U, P), c.Coprod(U, P))):
        assert bare.ty(Scope(), parse_type(pretty_ty(ty))) == ty


@seed(SEED)
@settings(**PROPERTY)
@given(typed())
def test_property_pretty_round_trip(data):
    ctx, u, a = data
    names = tuple(f"v{k}" for k in range(len(ctx)))
    scope = scope_of(*zip(names, ctx.entries))
    back = Elaborator(prelude=False).check(scope, parse_term(pretty_tm(u, names)), a)
    assert back == u
