"""Exhaustive enumeration of the superspecial (2,2)-graph at small p, and analyses built on it."""

from __future__ import annotations

import itertools
import math
import random
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction

from ..genus2 import (
    GenusTwoModel,
    JacobianOutcome,
    automorphism_count,
    cds_admissible,
    is_superspecial,
    jac_neighbors,
    node_id,
    product_neighbors,
    richelot_step,
)
from ..genus2.invariants import HASSE_WITT_MAX_P
from .formulas import lagrangian_count
from .walks import default_start

__all__ = [
    "CensusBudgetExceeded",
    "CensusResult",
    "census",
    "MixingReport",
    "mixing_stats",
    "mixing_bound",
    "Cycle",
    "find_cycles",
    "verify_cycle",
    "shared_pairs",
    "cds_closed_walks",
    "CENSUS_MAX_P",
]

CENSUS_MAX_P = 50


class CensusBudgetExceeded(RuntimeError):
    pass


@dataclass
class CensusResult:
    p: int
    jacobians: dict = field(default_factory=dict)
    products: dict = field(default_factory=dict)
    edges: dict = field(default_factory=dict)
    aut: dict = field(default_factory=dict)

    @property
    def vertices(self) -> list:
        return sorted(self.jacobians) + sorted(self.products)

    @property
    def mass(self) -> Fraction:
        return sum((Fraction(1, a) for a in self.aut.values()), Fraction(0))

    def is_closed(self) -> bool:
        return all(v in self.edges for targets in self.edges.values() for v in targets)

    def is_regular(self, degree: int = 15) -> bool:
        return all(len(t) == degree for t in self.edges.values())

    def asymmetric_edges(self) -> list:
        """Pairs (u, v) violating m(u,v) #Aut(v) = m(v,u) #Aut(u).

        Multiplicities themselves are not symmetric when the endpoints have
        different automorphism groups; weighted by #Aut they are.
        """
        counts = {u: Counter(t) for u, t in self.edges.items()}
        bad = []
        for u, cu in counts.items():
            for v, m in cu.items():
                if m * self.aut[v] != counts[v][u] * self.aut[u]:
                    bad.append((u, v))
        return bad

    def stationary(self) -> dict:
        """Stationary law of the uniform 15-choice walk: proportional to 1/#Aut."""
        total = self.mass
        return {v: Fraction(1, self.aut[v]) / total for v in self.edges}

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "jacobians": len(self.jacobians),
            "products": len(self.products),
            "vertices": len(self.edges),
            "mass": str(self.mass),
            "closed": self.is_closed(),
            "regular": self.is_regular(),
            "weighted_symmetric": not self.asymmetric_edges(),
            "aut_histogram": {str(k): v for k, v in sorted(Counter(self.aut.values()).items())},
        }


def census(
    p: int,
    start: GenusTwoModel | None = None,
    max_p: int = CENSUS_MAX_P,
    check_superspecial: bool = True,
) -> CensusResult:
    """Breadth-first closure of ``start`` under all 15 neighbour maps."""
    if p > max_p:
        raise CensusBudgetExceeded(f"full census refused for p={p} > {max_p}")
    if start is None:
        start, _ = default_start(p)
    res = CensusResult(p)
    queue = deque([("J", start)])
    seen = {node_id(start)}
    while queue:
        kind, w = queue.popleft()
        nid = node_id(w)
        if kind == "J":
            res.jacobians[nid] = w
            outs = jac_neighbors(w)
        else:
            res.products[nid] = w
            outs = product_neighbors(*w)
        targets = []
        for o in outs:
            if isinstance(o, JacobianOutcome):
                t = ("J", o.model)
            else:
                t = ("P", o.pair)
            tid = node_id(t[1])
            targets.append(tid)
            if tid not in seen:
                seen.add(tid)
                queue.append(t)
        res.edges[nid] = targets
        res.aut[nid] = automorphism_count(nid, w)
        if check_superspecial and kind == "J" and p <= HASSE_WITT_MAX_P and not is_superspecial(w):
            raise AssertionError(f"census vertex {nid} is not superspecial")
    return res


# -- mixing ------------------------------------------------------------------------


def mixing_bound(n: int, degree: int | None = None) -> float:
    """Per-vertex deviation bound (2 sqrt(N-1) / N)^n for an N-regular Ramanujan graph."""
    N = degree if degree is not None else lagrangian_count(2, 2)
    return (2 * math.sqrt(N - 1) / N) ** n


@dataclass
class MixingReport:
    p: int
    walk_len: int
    trials: int
    vertices: int
    bound: float
    tv_uniform: float
    tv_stationary: float
    max_dev_uniform: float
    max_dev_stationary: float
    exact_max_dev_uniform: float
    second_eigenvalue: float
    warnings: list = field(default_factory=list)

    def to_json(self) -> dict:
        return dict(self.__dict__)


def _exact_distribution(c: CensusResult, start_id: str, n: int) -> dict:
    dist = {start_id: 1.0}
    for _ in range(n):
        nxt: dict = {}
        for u, pu in dist.items():
            share = pu / len(c.edges[u])
            for v in c.edges[u]:
                nxt[v] = nxt.get(v, 0.0) + share
        dist = nxt
    return dist


def _second_eigenvalue(c: CensusResult) -> float:
    import numpy as np

    ids = sorted(c.edges)
    index = {v: i for i, v in enumerate(ids)}
    P = np.zeros((len(ids), len(ids)))
    for u, ts in c.edges.items():
        for v in ts:
            P[index[u], index[v]] += 1.0 / len(ts)
    # similar to a symmetric matrix via the stationary weights
    pi = np.array([float(c.stationary()[v]) for v in ids])
    s = np.sqrt(pi)
    S = (s[:, None] * P) / s[None, :]
    ev = np.sort(np.abs(np.linalg.eigvalsh((S + S.T) / 2)))[::-1]
    return float(ev[1]) if len(ev) > 1 else 0.0


def mixing_stats(p: int, walk_len: int, trials: int, seed: str = "0", start: GenusTwoModel | None = None, c: CensusResult | None = None) -> MixingReport:
    """Empirical endpoint law of uniform random walks compared with the expander bound.

    The walk picks one of the 15 outcomes uniformly; its limit law weights
    each vertex by 1/#Aut, so deviations from the uniform law do not decay
    to 0 and are reported as warnings rather than errors.
    """
    if c is None:
        c = census(p, start, check_superspecial=False)
    if start is None:
        start, _ = default_start(p)
    sid = node_id(start)
    rng = random.Random(seed)
    counts = Counter()
    for _ in range(trials):
        v = sid
        for _ in range(walk_len):
            v = rng.choice(c.edges[v])
        counts[v] += 1
    N = len(c.edges)
    emp = {v: counts[v] / trials for v in c.edges}
    stat = {v: float(x) for v, x in c.stationary().items()}
    uni = 1.0 / N
    dev_u = {v: abs(emp[v] - uni) for v in c.edges}
    dev_s = {v: abs(emp[v] - stat[v]) for v in c.edges}
    exact = _exact_distribution(c, sid, walk_len)
    bound = mixing_bound(walk_len)
    rep = MixingReport(
        p=p,
        walk_len=walk_len,
        trials=trials,
        vertices=N,
        bound=bound,
        tv_uniform=0.5 * sum(dev_u.values()),
        tv_stationary=0.5 * sum(dev_s.values()),
        max_dev_uniform=max(dev_u.values()),
        max_dev_stationary=max(dev_s.values()),
        exact_max_dev_uniform=max(abs(exact.get(v, 0.0) - uni) for v in c.edges),
        second_eigenvalue=_second_eigenvalue(c),
    )
    over = [v for v in c.edges if dev_u[v] > bound]
    if over:
        rep.warnings.append(
            f"{len(over)}/{N} vertices deviate from uniform by more than the bound {bound:.3g} "
            f"(max {rep.max_dev_uniform:.3g}; exact walk law max {rep.exact_max_dev_uniform:.3g})"
        )
    ram = 2 * math.sqrt(14) / 15
    if rep.second_eigenvalue > ram + 1e-9:
        rep.warnings.append(f"second eigenvalue {rep.second_eigenvalue:.4f} exceeds the Ramanujan value {ram:.4f}")
    return rep


# -- short cycles ----------------------------------------------------------------


def shared_pairs(a, b) -> int:
    return len(set(a) & set(b))


@dataclass
class Cycle:
    """Closed walk start -> ... -> start made of two short paths meeting at a vertex.

    ``left`` and ``right`` are splitting sequences from the start model; the
    cycle runs along ``left`` and back along ``right`` reversed.
    """

    vertices: list
    left: list
    right: list
    junction_shared: list

    @property
    def length(self) -> int:
        return len(self.left) + len(self.right)

    @property
    def cds_admissible(self) -> bool:
        return all(k == 0 for k in self.junction_shared)

    def to_json(self) -> dict:
        return {
            "length": self.length,
            "vertices": self.vertices,
            "left": [[list(pr) for pr in s] for s in self.left],
            "right": [[list(pr) for pr in s] for s in self.right],
            "junction_shared_pairs": self.junction_shared,
        }


def _paths(start, length):
    """All Jacobian-only paths of 1 or 2 steps (second step never the dual)."""
    from ..genus2 import SPLITTINGS

    first = []
    for s in SPLITTINGS:
        o = richelot_step(start, s)
        if isinstance(o, JacobianOutcome):
            first.append(((s,), [node_id(o.model)], o, []))
    if length == 1:
        return first
    second = []
    for (s,), ids, o, _ in first:
        for t in SPLITTINGS:
            if t == o.dual:
                continue
            o2 = richelot_step(o.model, t)
            if isinstance(o2, JacobianOutcome):
                second.append(((s, t), ids + [node_id(o2.model)], o2, [shared_pairs(t, o.dual)]))
    return second


def find_cycles(p: int, start: GenusTwoModel | None = None, max_len: int = 4) -> list[Cycle]:
    """Non-backtracking closed walks of length 2..max_len (max 4) through ``start``.

    Only cycles with pairwise distinct vertices are returned. Each carries,
    for its interior junctions, the number of root pairs the outgoing
    splitting shares with the incoming dual: 0 means the step is allowed
    in a CDS walk, 1 marks the composite-kernel collapse that produces the
    generic 4-cycles.
    """
    if start is None:
        start, _ = default_start(p)
    if not 2 <= max_len <= 4:
        raise ValueError("max_len must be 2, 3 or 4")
    sid = node_id(start)
    one = _paths(start, 1)
    cycles = []
    # length 2: two distinct edges to the same neighbour
    for a, b in itertools.combinations(one, 2):
        if a[1][-1] == b[1][-1] != sid:
            cycles.append(Cycle([sid, a[1][-1], sid], list(a[0]), list(b[0]), []))
    if max_len >= 3:
        two = _paths(start, 2)
        by_end = {}
        for path in two:
            by_end.setdefault(path[1][-1], []).append(path)
        for path in two:
            mid, end = path[1]
            if len({sid, mid, end}) != 3:
                continue
            for q in one:
                if q[1][-1] == end:
                    cycles.append(Cycle([sid, mid, end, sid], list(path[0]), list(q[0]), list(path[3])))
        if max_len >= 4:
            for end, group in by_end.items():
                for a, b in itertools.combinations(group, 2):
                    vs = [sid, a[1][0], end, b[1][0]]
                    if len(set(vs)) == 4:
                        cycles.append(Cycle(vs + [sid], list(a[0]), list(b[0]), a[3] + b[3]))
    return cycles


def verify_cycle(start: GenusTwoModel, cyc: Cycle) -> bool:
    """Recompute both halves of a cycle and check that they meet."""
    ends = []
    for seq, ids in ((cyc.left, cyc.vertices[1:len(cyc.left) + 1]), (cyc.right, cyc.vertices[::-1][1:len(cyc.right) + 1])):
        m = start
        for s, want in zip(seq, ids):
            o = richelot_step(m, s)
            if not isinstance(o, JacobianOutcome) or node_id(o.model) != want:
                return False
            m = o.model
        ends.append(node_id(m))
    return ends[0] == ends[1]



def cds_closed_walks(start: GenusTwoModel, start_dual, length: int = 4) -> tuple[int, list]:
    """Enumerate every CDS walk of the given length from ``start``.

    Returns (number of walks completed without meeting a product, vertex
    sequences of those that end back at ``start``).
    """
    sid = node_id(start)
    frontier = [(start, start_dual, [sid])]
    for _ in range(length):
        nxt = []
        for m, dual, ids in frontier:
            for s in cds_admissible(dual):
                o = richelot_step(m, s)
                if isinstance(o, JacobianOutcome):
                    nxt.append((o.model, o.dual, ids + [node_id(o.model)]))
        frontier = nxt
    closed = [ids for _, _, ids in frontier if ids[-1] == sid]
    return len(frontier), closed
