"""File checking, definition evaluation and the REPL, independent of argv."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

from .. import checker as ck
from .. import core as c
from .. import equality as eq
from .. import setmodel as sm
from . import surface as s
from .diagnostics import Diagnostic
from .elaborate import Elaborator, Obligation, Outcome, Scope
from .parser import parse_source, parse_term
from .pretty import pretty_tm, pretty_ty, show_core

EXIT_OK, EXIT_REJECTED, EXIT_USAGE = 0, 1, 2


@dataclass(frozen=True)
class CheckFlags:
    oracle: bool = False
    dump_core: bool = False
    prelude: bool = True
    budget: Optional[int] = None


@dataclass
class Report:
    lines: list = field(default_factory=list)
    exit_code: int = EXIT_OK
    outcomes: list = field(default_factory=list)

    def worsen(self, code: int):
        self.exit_code = max(self.exit_code, code)

    @property
    def text(self) -> str:
        return "".join(line + "\n" for line in self.lines)


# ---------------------------------------------------------------- oracle


def _oracle_holds(model: sm.SetModel, ob: Obligation) -> bool:
    j = ob.judgment
    match j:
        case ck.TmHas(ctx, u, a):
            return model.sem_has_tm(ctx, u, a)
        case ck.TmEq(ctx, u, v, a):
            return model.sem_eq_tm(ctx, u, v, a)
        case ck.TyWf(ctx, a):
            model.interp_ctx(ctx.extend(a))
            return True
    raise TypeError(f"no oracle for {j!r}")


def oracle_note(model: sm.SetModel, outcome: Outcome) -> tuple:
    """``(note, disagrees)`` comparing the kernel verdict with the set model."""
    ob = outcome.obligation
    if ob is None:
        return "", False
    try:
        if outcome.ok:
            if _oracle_holds(model, ob):
                n = len(model.interp_ctx(ob.judgment.ctx))
                return f"oracle: holds in all {n} environment{'s' if n != 1 else ''}", False
            return "oracle: REFUTED, the set model disagrees with the kernel", True
        if isinstance(ob.judgment, ck.TmEq) and ob.kind == "eq":
            j = ob.judgment
            found = model.counterexample(j.ctx, j.lhs, j.rhs, j.ty)
            if found is not None:
                env, x, y = found
                where = "(" + ", ".join(str(v) for v in env) + ")"
                return f"oracle: refuted at environment {where}: {x} vs {y}", False
            return "oracle: holds semantically (kernel incompleteness)", False
    except sm.BudgetExceeded as e:
        return f"oracle: skipped, {e}", False
    except sm.SemanticError as e:
        return f"oracle: no denotation ({e})", False
    return "", False


# ---------------------------------------------------------------- check


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as f:
        return f.read()


def check_text(source: str, path: str, flags: CheckFlags, report: Report, elab: Optional[Elaborator] = None):
    elab = elab or Elaborator(prelude=flags.prelude)
    model = sm.SetModel(flags.budget) if flags.oracle else None
    try:
        module = parse_source(source)
    except Diagnostic as d:
        report.lines.append(d.one_line(source, path))
        report.worsen(EXIT_REJECTED)
        return
    for o in elab.check_module(module):
        report.outcomes.append(o)
        note, disagrees = oracle_note(model, o) if model else ("", False)
        if o.ok:
            line = f"ok {o.name}"
        else:
            line = o.diagnostic.one_line(source, path)
            report.worsen(EXIT_REJECTED)
        if note:
            line += f" [{note}]"
        if disagrees:
            report.worsen(EXIT_REJECTED)
        report.lines.append(line)
        if flags.dump_core and o.obligation is not None:
            report.lines.append(f"  core: {show_core(o.obligation.judgment)}")


def run_check(paths, flags: CheckFlags = CheckFlags()) -> Report:
    """Check every file; exit code 0 if all declarations pass, 1 on any rejection, 2 on IO failure."""
    report = Report()
    if isinstance(paths, str):
        paths = [paths]
    for path in paths:
        try:
            source = _read(path)
        except (OSError, UnicodeDecodeError) as e:
            report.lines.append(f"{path}: error[io]: {e.strerror if isinstance(e, OSError) else e}")
            report.worsen(EXIT_USAGE)
            continue
        check_text(source, path, flags, report)
    return report


# ---------------------------------------------------------------- evaluation


def describe_values(model: sm.SetModel, ctx: c.Ctx, u: c.Term, a: c.Type, names=()) -> list:
    """The value of ``u`` in each environment; a closed term gives one line."""
    envs = list(model.interp_ctx(ctx))
    if len(ctx) == 0:
        return [str(model.interp_tm(ctx, u, a, ()))]
    lines = []
    for env in envs:
        binding = ", ".join(f"{n} = {v}" for n, v in zip(names, env))
        lines.append(f"{binding} |- {model.interp_tm(ctx, u, a, env)}")
    return lines or ["(the context has no environments)"]


def eval_defn(path: str, name: str, flags: CheckFlags = CheckFlags()) -> Report:
    report = Report()
    try:
        source = _read(path)
    except (OSError, UnicodeDecodeError) as e:
        report.lines.append(f"{path}: error[io]: {e}")
        report.worsen(EXIT_USAGE)
        return report
    elab = Elaborator(prelude=flags.prelude)
    try:
        outcomes = elab.check_module(parse_source(source))
    except Diagnostic as d:
        report.lines.append(d.one_line(source, path))
        report.worsen(EXIT_REJECTED)
        return report
    found = [o for o in outcomes if o.name == name and o.kind == "def"]
    if not found:
        report.lines.append(f"{path}: error[unbound]: no definition named {name!r}")
        report.worsen(EXIT_USAGE)
        return report
    o = found[-1]
    if not o.ok:
        report.lines.append(o.diagnostic.one_line(source, path))
        report.worsen(EXIT_REJECTED)
        return report
    j = o.obligation.judgment
    model = sm.SetModel(flags.budget)
    try:
        report.lines.extend(describe_values(model, j.ctx, j.tm, j.ty, o.obligation.names))
    except sm.BudgetExceeded as e:
        report.lines.append(f"{path}: error[budget]: {e}")
        report.worsen(EXIT_REJECTED)
    return report


# ---------------------------------------------------------------- REPL


@dataclass(frozen=True)
class ReplState:
    elab: Elaborator = field(compare=False)
    scope: Scope
    model: sm.SetModel = field(compare=False)
    counter: int = 0


def repl_init(prelude: bool = True, budget: Optional[int] = None) -> ReplState:
    elab = Elaborator(prelude=prelude)
    return ReplState(elab, elab.scope, sm.SetModel(budget))


HELP = """\
commands:
  :t EXPR              type of EXPR
  :nf EXPR             normal form of EXPR
  :eval EXPR           value of EXPR in the finite-set model
  :assume x : TYPE     add x to the context
  :eq U = V : TYPE     decide a definitional equality
  def/eq/assume/propext declarations are accepted as in files
  :ctx                 show the context
  :help, :q"""


def _expr(state: ReplState, text: str):
    """Elaborate and kernel-check an expression: ``(term, type)``."""
    ast = parse_term(text)
    term, _ = state.elab.infer(state.scope, ast)
    try:
        ty, _ = ck.infer(state.scope.ctx, term)
    except ck.TypingError as e:
        raise state.elab.explain(e, ast.span, state.scope.names) from None
    return term, ty


def _decl(state: ReplState, text: str):
    module = parse_source(text)
    if len(module.decls) != 1:
        raise Diagnostic("expected exactly one declaration", None, code="syntax")
    o = state.elab.process(state.scope, module.decls[0])
    if not o.ok:
        raise o.diagnostic
    return replace(state, scope=o.scope), f"ok {o.name}"


def repl_step(state: ReplState, line: str):
    """Run one REPL line: ``(new state, output)``. On error the state is unchanged."""
    text = line.strip()
    if not text or text.startswith("--"):
        return state, ""
    cmd, _, rest = text.partition(" ")
    rest = rest.strip()
    names = state.scope.names
    src = rest
    try:
        match cmd:
            case ":help" | ":h":
                return state, HELP
            case ":ctx":
                if not names:
                    return state, "(empty context)"
                out, ctx = [], state.scope.ctx
                for k, n in enumerate(names):
                    out.append(f"{n} : {pretty_ty(ctx.entries[k], names[:k])}")
                return state, "\n".join(out)
            case ":t" | ":type":
                _, ty = _expr(state, rest)
                return state, pretty_ty(ty, names)
            case ":nf":
                term, ty = _expr(state, rest)
                nf = eq.normalize_tm(state.scope.ctx, ty, term)
                return state, f"{pretty_tm(nf, names)} : {pretty_ty(eq.normalize_ty(state.scope.ctx, ty), names)}"
            case ":eval":
                term, ty = _expr(state, rest)
                return state, "\n".join(describe_values(state.model, state.scope.ctx, term, ty, names))
            case ":assume":
                src = "assume " + rest
                return _decl(state, src)
            case ":eq":
                k = state.counter + 1
                src = f"eq it{k} : {rest}"
                new, _ = _decl(replace(state, counter=k), src)
                return new, "accepted"
            case "def" | "eq" | "assume" | "propext":
                src = text
                return _decl(state, text)
        if cmd.startswith(":"):
            return state, f"unknown command {cmd}; try :help"
        src = text
        term, ty = _expr(state, text)
        return state, f"{pretty_tm(term, names)} : {pretty_ty(ty, names)}"
    except Diagnostic as d:
        return state, d.one_line(src, "<repl>")
    except (sm.BudgetExceeded, sm.SemanticError) as e:
        return state, f"<repl>: error[oracle]: {e}"


def repl_loop(state: ReplState, stdin, stdout) -> int:
    interactive = hasattr(stdin, "isatty") and stdin.isatty()
    while True:
        if interactive:
            stdout.write("cbt> ")
            stdout.flush()
        line = stdin.readline()
        if not line or line.strip() in (":q", ":quit"):
            return EXIT_OK
        state, out = repl_step(state, line)
        if out:
            stdout.write(out + "\n")
