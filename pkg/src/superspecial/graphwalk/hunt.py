"""Parallel search for a walk that reaches a product of elliptic curves."""

from __future__ import annotations

import multiprocessing as mp
import os
from dataclasses import dataclass, field

from ..genus2 import GenusTwoModel, ProductOutcome, node_id
from .walks import WalkChain, WalkRecord, next_walk, target_start, walk_from

__all__ = ["HuntBudgetExceeded", "HuntReport", "WorkerResult", "run_worker", "hunt_product", "default_budget"]


def default_budget(p: int) -> int:
    env = os.environ.get("SUPERSPECIAL_MAX_STEPS")
    if env:
        return int(env)
    return 200 * p + 20000


class HuntBudgetExceeded(RuntimeError):
    def __init__(self, msg, walks_done, steps_done):
        super().__init__(msg)
        self.walks_done = walks_done
        self.steps_done = steps_done


@dataclass
class WorkerResult:
    worker: int
    seed: str
    found: bool
    walks: int
    steps: int
    # chain state before the successful walk
    chain_state: str | None = None


@dataclass
class HuntReport:
    p: int
    seed: str
    workers: int
    mode: str
    walks_done: int
    steps_done: int
    finder: int
    finder_walks: int
    finder_steps: int
    start: GenusTwoModel
    start_dual: tuple | None
    psi: list = field(default_factory=list)
    product: ProductOutcome | None = None

    @property
    def product_node(self) -> str:
        return node_id(self.product.pair)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "seed": self.seed,
            "workers": self.workers,
            "mode": self.mode,
            "walks_done": self.walks_done,
            "steps_done": self.steps_done,
            "finder": self.finder,
            "finder_walks": self.finder_walks,
            "finder_steps": self.finder_steps,
            "start_node": node_id(self.start),
            "product_node": self.product_node,
            "product": [self.product.j1.encode(), self.product.j2.encode()],
            "psi": [s.to_json() for s in self.psi],
        }


def run_worker(worker, seed, start, start_dual, mode, max_steps, bound=None) -> WorkerResult:
    """Walk from ``start`` with the chain seeded by ``seed`` until a product appears.

    Gives up after ``max_steps`` steps, or after ``bound()`` steps once
    another worker has found a product that quickly.
    """
    chain = WalkChain.from_seed(seed)
    walks = steps = 0
    while True:
        limit = max_steps if bound is None else min(max_steps, bound())
        if steps >= limit:
            return WorkerResult(worker, seed, False, walks, steps)
        before = chain.state
        digits, chain = next_walk(chain)
        walks += 1
        rec = walk_from(start, digits[: limit - steps], mode, "stop", start_dual)
        steps += rec.digits_used
        if rec.product is not None:
            return WorkerResult(worker, seed, True, walks, steps, before)


_SHARED = {}


def _pool_init(best):
    _SHARED["best"] = best


def _pool_task(args):
    best = _SHARED["best"]
    res = run_worker(*args, bound=lambda: best.value)
    if res.found:
        with best.get_lock():
            if res.steps < best.value:
                best.value = res.steps
    return res


def hunt_product(
    p: int,
    seed: str,
    workers: int = 1,
    mode: str = "appendix",
    start: GenusTwoModel | None = None,
    start_dual=None,
    max_steps: int | None = None,
    processes: int | None = None,
) -> HuntReport:
    """Run ``workers`` independent walkers; the one needing fewest steps wins.

    Worker w uses the seed ``f"{seed}-{w}"``. The winner is the smallest
    (steps, w); since every worker stops once it cannot beat the current
    best, the report does not depend on scheduling. ``steps_done`` sums
    each worker's steps capped at the winner's count, the work done by
    the time the winner finished if all walk at the same pace.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if start is None:
        start, start_dual = target_start(p)
    if max_steps is None:
        max_steps = default_budget(p)
    tasks = [(w, f"{seed}-{w}", start, start_dual, mode, max_steps) for w in range(workers)]
    if processes is None:
        processes = min(workers, os.cpu_count() or 1)
    if processes <= 1:
        best = [max_steps + 1]
        results = []
        for t in tasks:
            r = run_worker(*t, bound=lambda: best[0])
            if r.found:
                best[0] = min(best[0], r.steps)
            results.append(r)
    else:
        spawn = mp.get_context("spawn")
        shared = spawn.Value("q", max_steps + 1)
        with spawn.Pool(processes, initializer=_pool_init, initargs=(shared,)) as pool:
            results = pool.map(_pool_task, tasks)
    hits = [r for r in results if r.found]
    if not hits:
        raise HuntBudgetExceeded(
            f"no product within {max_steps} steps per worker",
            sum(r.walks for r in results),
            sum(r.steps for r in results),
        )
    win = min(hits, key=lambda r: (r.steps, r.worker))
    digits, _ = next_walk(WalkChain(win.chain_state, win.seed))
    rec: WalkRecord = walk_from(start, digits, mode, "stop", start_dual)
    return HuntReport(
        p=p,
        seed=seed,
        workers=workers,
        mode=mode,
        walks_done=win.walks,
        steps_done=sum(min(r.steps, win.steps) for r in results),
        finder=win.worker,
        finder_walks=win.walks,
        finder_steps=win.steps,
        start=start,
        start_dual=start_dual,
        psi=rec.steps,
        product=rec.product,
    )
