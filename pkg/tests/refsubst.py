"""Reference substitution over named variables.

Independent of ``cbt.core``'s index arithmetic: terms are converted to a
named form in which every binder gets a globally fresh name, substitution
is plain name replacement (capture is impossible because no binder name is
ever reused), and the result is converted back to indices.
"""

from __future__ import annotations

import dataclasses
import itertools

from cbt import core as c

BINDERS = {c.Lam: {"body"}, c.DLam: {"body"}, c.Pi: {"cod"}, c.Match: {"on_left", "on_right"}}

_names = itertools.count()


def _fresh() -> str:
    return f"b{next(_names)}"


def to_named(node, names: list):
    """``names`` lists the free variables, innermost last."""
    if isinstance(node, c.Var):
        if node.index >= len(names):
            raise c.ScopeError(f"free variable {node.index}")
        return ("var", names[-1 - node.index])
    parts = []
    for f in dataclasses.fields(node):
        child = getattr(node, f.name)
        if f.name in BINDERS.get(type(node), ()):
            x = _fresh()
            parts.append(("bind", x, to_named(child, names + [x])))
        else:
            parts.append(to_named(child, names))
    return (type(node), tuple(parts))


def subst_named(named, mapping: dict):
    match named:
        case ("var", x):
            return mapping.get(x, named)
        case ("bind", x, body):
            y = _fresh()
            return ("bind", y, subst_named(body, {**mapping, x: ("var", y)}))
        case (cls, parts):
            return (cls, tuple(subst_named(p, mapping) for p in parts))
    raise ValueError(named)


def from_named(named, names: list):
    match named:
        case ("var", x):
            return c.Var(_last(names, x))
        case ("bind", x, body):
            return from_named(body, names + [x])
        case (cls, parts):
            return cls(*(from_named(p, names) for p in parts))
    raise ValueError(named)


def _last(names, x):
    for i, n in enumerate(reversed(names)):
        if n == x:
            return i
    raise c.ScopeError(x)


def ref_apply(node, sigma, source_len: int):
    """``node`` scoped over ``len(sigma)`` variables; ``sigma``'s terms over ``source_len``."""
    target = [f"d{k}" for k in range(len(sigma))]
    source = [f"g{k}" for k in range(source_len)]
    mapping = {d: to_named(t, source) for d, t in zip(target, sigma)}
    return from_named(subst_named(to_named(node, target), mapping), source)


def ref_shift(node, amount: int, scope: int):
    """Weakening as a substitution: variable ``i`` goes to ``i + amount``."""
    sigma = tuple(c.Var(scope - 1 - k + amount) for k in range(scope))
    return ref_apply(node, sigma, scope + amount)
