"""Congruence closure over normal forms (ground equations from the context).

Terms are hash-consed into e-nodes. Variables become de Bruijn *levels*
(relative to the ambient context), and every binder node records the level
it binds, so a node means the same thing wherever it occurs. Before a node
is added, η-redexes left by η-long readback are contracted so that a
hypothesis ``f = g`` at a function type is visible to ``ap(f, x)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import core as c


@dataclass
class EqClassMap:
    """Union-find partition over hash-consed term nodes, closed under congruence."""

    ctx_len: int
    memo: dict = field(default_factory=dict)
    parent: list = field(default_factory=list)

    # -- union-find

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def _union(self, a: int, b: int) -> bool:
        a, b = self.find(a), self.find(b)
        if a == b:
            return False
        self.parent[max(a, b)] = min(a, b)
        return True

    def _add_node(self, node: tuple) -> int:
        node = self._canon(node)
        found = self.memo.get(node)
        if found is not None:
            return self.find(found)
        i = len(self.parent)
        self.parent.append(i)
        self.memo[node] = i
        return i

    def _canon(self, node: tuple) -> tuple:
        tag, binder, *kids = node
        return (tag, binder, *(self.find(k) for k in kids))

    def rebuild(self):
        """Re-canonicalize nodes and merge congruent ones until a fixpoint."""
        changed = True
        while changed:
            changed = False
            fresh = {}
            for node, i in self.memo.items():
                canon = self._canon(node)
                other = fresh.get(canon)
                if other is not None and self._union(other, i):
                    changed = True
                fresh.setdefault(canon, self.find(i))
            self.memo = fresh

    # -- terms

    def add(self, node: c.Syntax, depth: int = 0) -> int:
        """Hash-cons ``node`` viewed under ``depth`` binders of the ambient context."""
        n = self.ctx_len
        add = self.add
        mk = self._add_node
        match node:
            case c.Var(i):
                return mk(("var", n + depth - 1 - i))
            case c.Unit() | c.PropU() | c.Star() | c.Irr():
                return mk((type(node).__name__, None))
            case c.Prod(a, b) | c.Coprod(a, b) | c.Fun(a, b):
                return mk((type(node).__name__, None, add(a, depth), add(b, depth)))
            case c.Id(a, x, y):
                return mk(("Id", None, add(a, depth), add(x, depth), add(y, depth)))
            case c.Pi(a, b):
                return mk(("Pi", n + depth, add(a, depth), add(b, depth + 1)))
            case c.El(p):
                return mk(("El", None, add(p, depth)))
            case c.Pair(c.Proj1(x), c.Proj2(y)) if x == y:
                return add(x, depth)
            case c.Pair(u, v):
                return mk(("Pair", None, add(u, depth), add(v, depth)))
            case c.Proj1(u) | c.Proj2(u) | c.Inl(u) | c.Inr(u) | c.Refl(u):
                return mk((type(node).__name__, None, add(u, depth)))
            case c.Lam(c.App(f, c.Var(0))) if 0 not in c.free_vars(f):
                return add(f, depth + 1)
            case c.DLam(c.DApp(f, c.Var(0))) if 0 not in c.free_vars(f):
                return add(f, depth + 1)
            case c.Lam(u) | c.DLam(u):
                return mk((type(node).__name__, n + depth, add(u, depth + 1)))
            case c.App(u, v) | c.DApp(u, v):
                return mk((type(node).__name__, None, add(u, depth), add(v, depth)))
            case c.Match(t, a, b, m, u, v):
                kids = (add(t, depth), add(a, depth), add(b, depth), add(m, depth))
                return mk(("Match", n + depth, *kids, add(u, depth + 1), add(v, depth + 1)))
            case c.PropCode(a, p):
                return mk(("PropCode", None, add(a, depth), add(p, depth)))
            case c.Ann(u, _):
                return add(u, depth)
        raise TypeError(f"not core syntax: {node!r}")

    def merge(self, lhs: c.Syntax, rhs: c.Syntax):
        self._union(self.add(lhs), self.add(rhs))
        self.rebuild()

    def equal(self, lhs: c.Syntax, rhs: c.Syntax) -> bool:
        a, b = self.add(lhs), self.add(rhs)
        self.rebuild()
        return self.find(a) == self.find(b)

    def classes(self) -> list:
        """Non-trivial classes as lists of node ids (for inspection and tests)."""
        groups = {}
        for i in range(len(self.parent)):
            groups.setdefault(self.find(i), []).append(i)
        return [g for g in groups.values() if len(g) > 1]
