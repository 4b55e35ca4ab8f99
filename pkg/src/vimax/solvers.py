"""Removal-subset optimisation: pruned enumeration and simulated annealing."""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable

from vimax.errors import SizeLimitError
from vimax.flow import instance_vitality
from vimax.graph import Instance
from vimax.preprocess import candidates, key_neighbor_limit

DEFAULT_EXACT_CAP = 5_000_000


@dataclass(frozen=True)
class Solution:
    removed: frozenset[int]
    vitality: int
    vitality_effect: int
    method: str
    elapsed: float
    evaluations: int

    def names(self, inst: Instance) -> list[str]:
        return [inst.graph.names[v] for v in sorted(self.removed)]


@dataclass(frozen=True)
class SAParams:
    max_iterations: int = 10_000
    cooling_factor: float = 0.95
    pair_toggle_probability: float = 0.5
    initial_temperature: float | str = "auto"
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.cooling_factor < 1:
            raise ValueError("cooling_factor must lie in (0, 1)")
        if not 0 <= self.pair_toggle_probability <= 1:
            raise ValueError("pair_toggle_probability must lie in [0, 1]")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.initial_temperature != "auto" and not self.initial_temperature > 0:
            raise ValueError("initial_temperature must be positive or 'auto'")


class Objective:
    """Memoised L_k(G \\ S) with a count of distinct evaluations."""

    def __init__(self, inst: Instance):
        self.inst = inst
        self.cache: dict[frozenset[int], int] = {}
        self.evaluations = 0
        self.neighbors, self.neighbor_cap = key_neighbor_limit(inst)

    def __call__(self, removed: frozenset[int]) -> int:
        value = self.cache.get(removed)
        if value is None:
            value = instance_vitality(self.inst, removed)
            self.cache[removed] = value
            self.evaluations += 1
        return value

    def feasible(self, removed: frozenset[int]) -> bool:
        return (len(removed) <= self.inst.budget
                and len(removed & self.neighbors) <= self.neighbor_cap)


def _solution(obj: Objective, removed: frozenset[int], method: str, start: float) -> Solution:
    value = obj(removed)
    return Solution(removed, value, value - obj(frozenset()), method,
                    time.perf_counter() - start, obj.evaluations)


def search_space_size(n_candidates: int, budget: int) -> int:
    return sum(comb(n_candidates, j) for j in range(min(budget, n_candidates) + 1))


def solve_exact(inst: Instance, cap: int = DEFAULT_EXACT_CAP, method: str = "exact") -> Solution:
    """Best subset of the candidate pool with |S| <= budget.

    Restricting to candidates loses nothing: a Q-vertex never raises the
    key vertex's vitality. Ties go to the smaller set, then to the
    lexicographically smallest sorted id tuple.
    """
    start = time.perf_counter()
    pool = candidates(inst)
    size = search_space_size(len(pool), inst.budget)
    if size > cap:
        raise SizeLimitError(
            f"{size} subsets of {len(pool)} candidates exceed the exact-search cap {cap}; use anneal"
        )
    obj = Objective(inst)
    best, best_value = frozenset(), obj(frozenset())
    for r in range(1, min(inst.budget, len(pool)) + 1):
        for combo in combinations(pool, r):
            s = frozenset(combo)
            if not obj.feasible(s):
                continue
            value = obj(s)
            if value > best_value:
                best, best_value = s, value
    return _solution(obj, best, method, start)


def solve_single(inst: Instance) -> Solution:
    return solve_exact(inst.replace(budget=min(1, max(inst.graph.n - 1, 0))), method="single")


def initial_temperature(e_init: float) -> float:
    """Smallest T with exp(-0.1 * e_init / T) >= 0.95."""
    if e_init < 0:
        raise ValueError("initial objective must be non-negative")
    return 0.1 * max(e_init, 1) / -math.log(0.95)


def local_search(inst: Instance, start_set: Iterable[int] = (), _obj: Objective | None = None) -> Solution:
    """Toggle each candidate once in ascending order, keeping strict gains."""
    start = time.perf_counter()
    obj = _obj or Objective(inst)
    current = frozenset(start_set)
    if not obj.feasible(current):
        raise ValueError("starting subset is infeasible")
    value = obj(current)
    for v in candidates(inst):
        trial = current ^ {v}
        if obj.feasible(trial):
            tv = obj(trial)
            if tv > value:
                current, value = trial, tv
    return _solution(obj, current, "local_search", start)


def anneal(inst: Instance, params: SAParams = SAParams()) -> Solution:
    start = time.perf_counter()
    obj = Objective(inst)
    empty = frozenset()
    pool = candidates(inst)
    if inst.budget == 0 or not pool:
        return _solution(obj, empty, "anneal", start)

    rng = random.Random(params.seed)
    current, e_cur = empty, obj(empty)
    best, e_max = current, e_cur
    if params.initial_temperature == "auto":
        temp = initial_temperature(e_cur)
    else:
        temp = float(params.initial_temperature)

    for _ in range(params.max_iterations):
        if len(pool) >= 2 and rng.random() < params.pair_toggle_probability:
            flip = rng.sample(pool, 2)
        else:
            flip = [rng.choice(pool)]
        proposal = current.symmetric_difference(flip)
        if obj.feasible(proposal):
            e_new = obj(proposal)
            if e_new >= e_cur:
                accept = True
            else:
                # acceptance is measured against the best value seen so far
                accept = rng.random() < math.exp(-(e_max - e_new) / temp)
            if accept:
                current, e_cur = proposal, e_new
                if e_new > e_max:
                    best, e_max = proposal, e_new
        temp *= params.cooling_factor
        if temp == 0.0:
            temp = 5e-324

    polished = local_search(inst, best, _obj=obj)
    return Solution(polished.removed, polished.vitality, polished.vitality_effect, "anneal",
                    time.perf_counter() - start, obj.evaluations)
