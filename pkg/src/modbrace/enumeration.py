"""Exhaustive enumeration of braces on a fixed additive module.

Two independent searches are provided.  The backtracking search assigns
gamma values element by element and closes the assigned set under the
circle product; the holomorph search builds regular subgroups of
Aut(N) x| N from generators.  Both report braces as tuples of indices into
the sorted automorphism list, which is also the canonical sort key.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .brace_core import Brace, GammaFunction, brace_from_document, brace_to_document
from .module_core import FiniteModule, ModuleShape, module_automorphisms
from .series import left_series, right_series

BACKTRACKING = "backtracking"
HOLOMORPH = "holomorph"


class BudgetExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class EnumerationTask:
    shape: ModuleShape
    mode: str = "Z"
    node_budget: int | None = None
    time_budget: float | None = None

    def __post_init__(self) -> None:
        if self.mode not in ("Z", "D"):
            raise ValueError("mode must be 'Z' or 'D'")


@dataclass
class EnumerationResult:
    task: EnumerationTask
    method: str
    keys: list[tuple[int, ...]]
    complete: bool
    nodes: int
    wall_time: float
    context: "AutContext"

    @property
    def count(self) -> int:
        return len(self.keys)

    @cached_property
    def braces(self) -> list[Brace]:
        return [self.context.brace(k) for k in self.keys]

    def summary(self) -> dict:
        return {"shape": self.task.shape.to_json(), "mode": self.task.mode, "count": self.count,
                "method": self.method, "wall_time": round(self.wall_time, 4),
                "complete": self.complete, "nodes": self.nodes}


class AutContext:
    """Sorted automorphism list of a module with its composition table."""

    def __init__(self, module: FiniteModule, linear: bool) -> None:
        self.module = module
        self.auts = module_automorphisms(module, linear=linear)
        self.n = module.size
        self.k = len(self.auts)
        self.stack = np.stack(self.auts)
        self.lookup = {a.tobytes(): i for i, a in enumerate(self.auts)}
        self.identity = self.lookup[np.arange(self.n).tobytes()]

    @cached_property
    def _encoding(self) -> tuple[list[int], np.ndarray, np.ndarray, np.ndarray]:
        """An additive map is fixed by its generator images; encode those as one integer."""
        mod = self.module
        m = len(mod.moduli)
        gens = [mod.index([int(t == j) for t in range(m)]) for j in range(m)]
        weights = self.n ** np.arange(m, dtype=np.int64)
        codes = self.stack[:, gens] @ weights
        order = np.argsort(codes)
        return gens, weights, codes[order], order

    def _locate(self, perms: np.ndarray) -> np.ndarray:
        gens, weights, sorted_codes, order = self._encoding
        return order[np.searchsorted(sorted_codes, perms[..., gens] @ weights)]

    @cached_property
    def comp(self) -> np.ndarray:
        """comp[i, j] = index of auts[i] after auts[j]."""
        comp = np.empty((self.k, self.k), dtype=np.int64)
        for i, a in enumerate(self.auts):
            comp[i] = self._locate(a[self.stack])
        return comp

    @cached_property
    def inverse(self) -> np.ndarray:
        return np.argmax(self.comp == self.identity, axis=1)

    @cached_property
    def conj(self) -> np.ndarray:
        """conj[f, a] = index of f a f^-1."""
        comp, inv = self.comp, self.inverse
        return comp[comp, inv[:, None]]

    def brace(self, key: Sequence[int]) -> Brace:
        gamma = GammaFunction.from_tables(self.stack[list(key)])
        return Brace(self.module, gamma)

    def key_of(self, b: Brace) -> tuple[int, ...]:
        return tuple(self.lookup[b.gamma.registry[k].tobytes()] for k in b.gamma.index)

    def transport(self, key: Sequence[int], f: int) -> tuple[int, ...]:
        """Key of the brace relabelled along the automorphism f."""
        fa = self.auts[f]
        out = np.empty(self.n, dtype=np.int64)
        out[fa] = self.conj[f][np.asarray(key)]
        return tuple(out.tolist())


def _context(task: EnumerationTask) -> AutContext:
    mod = task.shape.module
    return AutContext(mod, linear=task.mode == "D")


class _Budget:
    def __init__(self, task: EnumerationTask) -> None:
        self.nodes = 0
        self.task = task
        self.start = time.perf_counter()

    def tick(self) -> None:
        self.nodes += 1
        if self.task.node_budget is not None and self.nodes > self.task.node_budget:
            raise BudgetExhausted("node budget exhausted")
        if self.task.time_budget is not None and self.nodes % 256 == 0 and \
                time.perf_counter() - self.start > self.task.time_budget:
            raise BudgetExhausted("time budget exhausted")


# -- backtracking -------------------------------------------------------------

def _cyclic_candidates(ctx: AutContext) -> list[list[int]]:
    """For each x, the automorphisms g for which gamma_x = g is consistent on the
    circle-cyclic subgroup generated by x (x^k o x = x + g(x^k), gamma = g^(k+1))."""
    add = ctx.module.add
    comp = ctx.comp
    cands: list[list[int]] = [[] for _ in range(ctx.n)]
    cands[0] = [ctx.identity]
    for x in range(1, ctx.n):
        for g in range(ctx.k):
            ga = ctx.auts[g]
            seen = {0: ctx.identity}
            cur, power = x, g
            ok = True
            while True:
                if cur in seen:
                    ok = seen[cur] == power
                    break
                seen[cur] = power
                cur = int(add[x, ga[cur]])
                power = int(comp[g, power])
            if ok:
                cands[x].append(g)
    return cands


def enumerate_braces_backtracking(task: EnumerationTask, ctx: AutContext | None = None) -> EnumerationResult:
    """Depth-first assignment of gamma, closing the assigned set under o after each step."""
    ctx = ctx or _context(task)
    n, add, comp, stack = ctx.n, ctx.module.add, ctx.comp, ctx.stack
    cands = _cyclic_candidates(ctx)
    budget = _Budget(task)
    assign = np.full(n, -1, dtype=np.int64)
    assign[0] = ctx.identity
    found: list[tuple[int, ...]] = []

    def close(new: list[int], trail: list[int]) -> bool:
        members = [int(v) for v in np.flatnonzero(assign >= 0)]
        queue = list(new)
        while queue:
            u = queue.pop()
            for v in list(members):
                for a, b in ((u, v), (v, u)):
                    w = int(add[a, stack[assign[a]][b]])
                    g = comp[assign[a], assign[b]]
                    if assign[w] < 0:
                        assign[w] = g
                        trail.append(w)
                        members.append(w)
                        queue.append(w)
                    elif assign[w] != g:
                        return False
        return True

    def search() -> None:
        budget.tick()
        free = np.flatnonzero(assign < 0)
        if not len(free):
            found.append(tuple(assign.tolist()))
            return
        x = int(free[0])
        for g in cands[x]:
            trail = [x]
            assign[x] = g
            if close([x], trail):
                search()
            assign[trail] = -1

    complete = True
    try:
        search()
    except BudgetExhausted:
        complete = False
    found.sort()
    return EnumerationResult(task, BACKTRACKING, found, complete, budget.nodes,
                             time.perf_counter() - budget.start, ctx)


# -- holomorph ----------------------------------------------------------------

def enumerate_braces_holomorph(task: EnumerationTask, ctx: AutContext | None = None) -> EnumerationResult:
    """Regular subgroups of Hol(N): (a, s)(b, t) = (ab, s + a(t)).

    A subgroup is grown from generators; it stays admissible while no two of
    its elements share a translation part, and is regular once it has |N|
    elements.
    """
    ctx = ctx or _context(task)
    n, add, comp, stack = ctx.n, ctx.module.add, ctx.comp, ctx.stack
    budget = _Budget(task)
    visited: set[bytes] = set()
    found: set[tuple[int, ...]] = set()

    def closure(group: np.ndarray, gens: list[tuple[int, int]]) -> np.ndarray | None:
        g = group.copy()
        elems = [(int(g[t]), t) for t in np.flatnonzero(g >= 0)]
        queue = list(elems)
        while queue:
            a, s = queue.pop()
            for b, t in gens:
                for (x, u), (y, v) in (((a, s), (b, t)), ((b, t), (a, s))):
                    z, w = int(comp[x, y]), int(add[u, stack[x][v]])
                    if g[w] < 0:
                        g[w] = z
                        queue.append((z, w))
                    elif g[w] != z:
                        return None
        return g

    def search(group: np.ndarray, gens: list[tuple[int, int]]) -> None:
        budget.tick()
        free = np.flatnonzero(group < 0)
        if not len(free):
            found.add(tuple(group.tolist()))
            return
        t = int(free[0])
        for a in range(ctx.k):
            new_gens = gens + [(a, t)]
            g = closure(group, new_gens)
            if g is None:
                continue
            key = g.tobytes()
            if key in visited:
                continue
            visited.add(key)
            search(g, new_gens)

    start = np.full(n, -1, dtype=np.int64)
    start[0] = ctx.identity
    complete = True
    try:
        if n == 1:
            found.add((ctx.identity,))
        else:
            search(start, [])
    except BudgetExhausted:
        complete = False
    keys = sorted(found)
    return EnumerationResult(task, HOLOMORPH, keys, complete, budget.nodes,
                             time.perf_counter() - budget.start, ctx)


def enumerate_both(task: EnumerationTask) -> tuple[EnumerationResult, EnumerationResult]:
    ctx = _context(task)
    return enumerate_braces_backtracking(task, ctx), enumerate_braces_holomorph(task, ctx)


# -- isomorphism classes ------------------------------------------------------

def _fingerprint(b: Brace) -> tuple:
    return (tuple(sorted(b.circle_stats.items())), tuple(left_series(b).orders),
            tuple(right_series(b).orders))


def classify_up_to_isomorphism(braces: Sequence[Brace], mode: str = "brace",
                               ctx: AutContext | None = None) -> list[list[int]]:
    """Partition braces on one module into isomorphism classes.

    Braces on the same module are isomorphic exactly when an additive
    (or, in mode 'R-brace', linear) automorphism conjugates one gamma onto
    the other, so each class is an orbit of keys under that group.  Classes
    are listed by their least member in the given order.
    """
    if not braces:
        return []
    if mode not in ("brace", "R-brace"):
        raise ValueError("mode must be 'brace' or 'R-brace'")
    mod = braces[0].module
    full = ctx if ctx is not None and ctx.module is mod else AutContext(FiniteModule(mod.moduli), False)
    allowed = [f for f in range(full.k)
               if mode == "brace" or mod.is_linear(full.auts[f])]
    buckets: dict[tuple, list[int]] = {}
    for i, b in enumerate(braces):
        buckets.setdefault(_fingerprint(b), []).append(i)
    classes: dict[tuple[int, ...], list[int]] = {}
    for members in buckets.values():
        for i in members:
            key = full.key_of(braces[i])
            canon = min(full.transport(key, f) for f in allowed)
            classes.setdefault(canon, []).append(i)
    return sorted(classes.values(), key=lambda c: c[0])


# -- corpus files -------------------------------------------------------------

def write_corpus(path: str | Path, result: EnumerationResult) -> Path:
    """One brace document per line; the summary goes to ``<path>.summary.json``."""
    path = Path(path)
    with path.open("w") as fh:
        for b in result.braces:
            fh.write(json.dumps(brace_to_document(b), separators=(",", ":")) + "\n")
    summary = path.with_name(path.name + ".summary.json")
    summary.write_text(json.dumps(result.summary(), indent=2) + "\n")
    return summary


def read_corpus(path: str | Path) -> list[Brace]:
    out = []
    with Path(path).open() as fh:
        for line in fh:
            if line.strip():
                out.append(brace_from_document(json.loads(line)))
    return out


def corpus(shapes: Iterable[tuple[ModuleShape, str]]) -> list[Brace]:
    """All braces for a list of (shape, mode) pairs, by backtracking."""
    out = []
    for shape, mode in shapes:
        out.extend(enumerate_braces_backtracking(EnumerationTask(shape, mode)).braces)
    return out
