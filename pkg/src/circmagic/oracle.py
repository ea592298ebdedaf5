"""Brute-force decision of distance magicness by pruned backtracking.

The search assigns labels to vertices and keeps, for every vertex u, the sum
of the labels already placed on N(u) and the number of unlabeled neighbours.
Pruning:

* a completed neighbourhood must sum to kappa = (valency / 2) * (n + 1);
* a neighbourhood with one free vertex forces that vertex's label;
* a partial neighbourhood sum must be reachable with the smallest / largest
  unused labels;
* (linear engine) the neighbourhood-sum equations are kept in reduced row
  echelon form, so labels implied by any combination of them are forced;
* translations act on labelings, so the label n is fixed on vertex 0, and the
  position of label n - 1 is restricted to orbit representatives under the
  multipliers fixing S.
"""

from __future__ import annotations

import enum
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .circulant import ConnectionSet, neighbors, stabilizer
from .modular import DomainError

DEFAULT_HARD_CAP = 16


def hard_cap() -> int:
    """Largest order for which an exhausted search is reported as non-existence."""
    return int(os.environ.get("CIRCMAGIC_HARD_CAP", DEFAULT_HARD_CAP))


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: Optional[int] = 2_000_000
    max_seconds: float = 0.0  # 0 means unlimited

    def __post_init__(self) -> None:
        if self.max_nodes is not None and self.max_nodes < 0:
            raise DomainError("max_nodes must be non-negative")
        if self.max_seconds < 0:
            raise DomainError("max_seconds must be non-negative")

    @property
    def bounded(self) -> bool:
        return self.max_nodes is not None or self.max_seconds > 0


class SearchStatus(enum.Enum):
    FOUND = "found"
    EXHAUSTED = "exhausted"
    BUDGET = "budget-exceeded"


@dataclass(frozen=True)
class SearchOutcome:
    status: SearchStatus
    values: Optional[tuple[int, ...]] = None  # labels by vertex when found
    nodes: int = 0
    depth: int = 0
    note: str = ""

    @property
    def found(self) -> bool:
        return self.status is SearchStatus.FOUND

    def stats(self) -> dict:
        return {"nodes": self.nodes, "depth": self.depth, "note": self.note}


class _OutOfBudget(Exception):
    pass


class _PlainSearch:
    """Neighbourhood-sum propagation only; one instance per run."""

    def __init__(self, S: ConnectionSet, budget: SearchBudget,
                 pair_offset: Optional[int] = None, low_parity: bool = False):
        n = S.n
        self.n = n
        self.kappa = len(S.reps) * (n + 1)
        self.nbrs = [neighbors(S, v) for v in range(n)]
        self.deg = len(self.nbrs[0])
        self.label = [0] * n
        self.used = [False] * (n + 2)
        self.nsum = [0] * n
        self.nfree = [self.deg] * n
        self.pair_offset = pair_offset
        self.low_parity = low_parity
        self.half = n // 2
        self.trail: list[int] = []
        self.budget = budget
        self.nodes = 0
        self.depth = 0
        self.t0 = time.monotonic()

    # -- domain -----------------------------------------------------------

    def allowed(self, v: int, lab: int) -> bool:
        if lab < 1 or lab > self.n or self.used[lab] or self.label[v]:
            return False
        if self.low_parity and ((v % 2 == 0) != (lab <= self.half)):
            return False
        return True

    def _bounds_ok(self, u: int) -> bool:
        k = self.nfree[u]
        rem = self.kappa - self.nsum[u]
        if k == 0:
            return rem == 0
        used = self.used
        lo = hi = 0
        cnt = 0
        lab = 1
        while cnt < k and lab <= self.n:
            if not used[lab]:
                lo += lab
                cnt += 1
            lab += 1
        if lo > rem:
            return False
        cnt = 0
        lab = self.n
        while cnt < k and lab >= 1:
            if not used[lab]:
                hi += lab
                cnt += 1
            lab -= 1
        return hi >= rem

    # -- assignment with propagation ---------------------------------------

    def _place(self, v: int, lab: int) -> None:
        self.label[v] = lab
        self.used[lab] = True
        for u in self.nbrs[v]:
            self.nsum[u] += lab
            self.nfree[u] -= 1
        self.trail.append(v)

    def _undo_to(self, mark: int) -> None:
        trail = self.trail
        while len(trail) > mark:
            v = trail.pop()
            lab = self.label[v]
            self.label[v] = 0
            self.used[lab] = False
            for u in self.nbrs[v]:
                self.nsum[u] -= lab
                self.nfree[u] += 1

    def assign(self, v: int, lab: int) -> bool:
        """Place lab on v and propagate; False on contradiction (caller undoes)."""
        queue = [(v, lab)]
        while queue:
            v, lab = queue.pop()
            if self.label[v]:
                if self.label[v] != lab:
                    return False
                continue
            if not self.allowed(v, lab):
                return False
            self._place(v, lab)
            if self.pair_offset is not None:
                queue.append(((v + self.pair_offset) % self.n, self.n + 1 - lab))
            for u in self.nbrs[v]:
                if not self._bounds_ok(u):
                    return False
                if self.nfree[u] == 1:
                    w = next(x for x in self.nbrs[u] if not self.label[x])
                    queue.append((w, self.kappa - self.nsum[u]))
        return True

    # -- search -------------------------------------------------------------

    def _tick(self) -> None:
        self.nodes += 1
        b = self.budget
        if b.max_nodes is not None and self.nodes > b.max_nodes:
            raise _OutOfBudget
        if b.max_seconds and self.nodes % 256 == 0 and time.monotonic() - self.t0 > b.max_seconds:
            raise _OutOfBudget

    def _select(self) -> Optional[int]:
        """Unlabeled vertex in the open neighbourhood with fewest free slots."""
        best_u, best_k = -1, self.deg + 1
        for u in range(self.n):
            k = self.nfree[u]
            if 0 < k < best_k:
                best_u, best_k = u, k
                if k == 1:
                    break
        if best_u < 0:
            return None
        for x in sorted(self.nbrs[best_u]):
            if not self.label[x]:
                return x
        return None  # pragma: no cover

    def run(self) -> bool:
        v = self._select()
        if v is None:
            return all(self.label)  # every neighbourhood closed at kappa
        self.depth = max(self.depth, len(self.trail))
        for lab in range(1, self.n + 1):
            if not self.allowed(v, lab):
                continue
            self._tick()
            mark = len(self.trail)
            if self.assign(v, lab) and self.run():
                return True
            self._undo_to(mark)
        return False

    def root(self, seeds: list[list[tuple[int, int]]]) -> bool:
        """Try each list of fixed (vertex, label) pairs in turn."""
        for seed in seeds:
            mark = len(self.trail)
            self._tick()
            if all(self.assign(v, lab) for v, lab in seed) and self.run():
                return True
            self._undo_to(mark)
        return False


class _LinearSearch:
    """Backtracking with exact propagation of the linear constraint system.

    Every constraint handled here is linear in the labels: neighbourhood
    sums, optional pair sums and the fixed seed labels.  The system is brought
    to reduced row echelon form over Q; the search branches on labels of the
    non-pivot vertices, and each pivot vertex is forced as soon as the
    vertices it depends on are labeled.  Partially determined pivots are
    pruned by interval bounds.
    """

    def __init__(self, S: ConnectionSet, budget: SearchBudget,
                 pair_offset: Optional[int] = None, low_parity: bool = False):
        self.n = S.n
        self.S = S
        self.kappa = len(S.reps) * (S.n + 1)
        self.pair_offset = pair_offset
        self.low_parity = low_parity
        self.budget = budget
        self.nodes = 0
        self.depth = 0
        self.t0 = time.monotonic()
        n = self.n
        base = []
        for u in range(n):
            row = [0] * (n + 1)
            for v in neighbors(S, u):
                row[v] += 1
            row[n] = self.kappa
            base.append(row)
        if pair_offset is not None:
            for v in range(n):
                w = (v + pair_offset) % n
                if v < w:
                    row = [0] * (n + 1)
                    row[v] = row[w] = 1
                    row[n] = n + 1
                    base.append(row)
        self.base = base

    def _tick(self) -> None:
        self.nodes += 1
        b = self.budget
        if b.max_nodes is not None and self.nodes > b.max_nodes:
            raise _OutOfBudget
        if b.max_seconds and self.nodes % 256 == 0 and time.monotonic() - self.t0 > b.max_seconds:
            raise _OutOfBudget

    def domain_ok(self, v: int, lab: int) -> bool:
        if lab < 1 or lab > self.n:
            return False
        return not self.low_parity or ((v % 2 == 0) == (lab <= self.n // 2))

    # -- linear algebra -----------------------------------------------------

    def _reduce(self, seed: list[tuple[int, int]]):
        """RREF of base + seed rows; None when inconsistent.

        Returns (pivots, free) where pivots maps a pivot vertex to
        (scale, const, [(free vertex, coef), ...]) meaning
        scale * x_pivot = const - sum(coef * x_free).
        """
        n = self.n
        rows = [[Fraction(c) for c in r] for r in self.base]
        for v, lab in seed:
            row = [Fraction(0)] * (n + 1)
            row[v] = Fraction(1)
            row[n] = Fraction(lab)
            rows.append(row)
        pivot_cols = []
        r = 0
        for col in range(n):
            piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            pr = rows[r]
            inv = 1 / pr[col]
            pr = rows[r] = [x * inv for x in pr]
            nz = [k for k in range(col, n + 1) if pr[k] != 0]
            for i in range(len(rows)):
                if i != r and rows[i][col] != 0:
                    f = rows[i][col]
                    ri = rows[i]
                    for k in nz:
                        ri[k] -= f * pr[k]
            pivot_cols.append(col)
            r += 1
        if any(row[n] != 0 for row in rows[r:]):
            return None
        pivset = set(pivot_cols)
        free = [v for v in range(n) if v not in pivset]
        pivots = {}
        for i, col in enumerate(pivot_cols):
            row = rows[i]
            terms = [(f, row[f]) for f in free if row[f] != 0]
            scale = 1
            for x in [row[n]] + [c for _, c in terms]:
                scale = scale * x.denominator // math.gcd(scale, x.denominator)
            pivots[col] = (scale, int(row[n] * scale), [(f, int(c * scale)) for f, c in terms])
        return pivots, free

    # -- search ---------------------------------------------------------------

    def _solve_seed(self, seed: list[tuple[int, int]]) -> Optional[list[int]]:
        n = self.n
        red = self._reduce(seed)
        if red is None:
            return None
        pivots, free = red
        # branching order: greedily complete as many pivot rows as possible
        order: list[int] = []
        remaining = set(free)
        deps = {p: {f for f, _ in terms} for p, (_, _, terms) in pivots.items()}
        while remaining:
            chosen = set(order)

            def score(f: int) -> tuple:
                done = sum(1 for d in deps.values() if f in d and d <= chosen | {f})
                touch = sum(1 for d in deps.values() if f in d)
                return (-done, -touch, f)

            f = min(remaining, key=score)
            order.append(f)
            remaining.discard(f)
        pos = {f: i for i, f in enumerate(order)}
        complete_at: list[list[int]] = [[] for _ in range(len(order) + 1)]
        touching: list[list[int]] = [[] for _ in range(len(order))]
        for p, d in deps.items():
            complete_at[max((pos[f] + 1 for f in d), default=0)].append(p)
            for f in d:
                touching[pos[f]].append(p)
        label = [0] * n
        used = [False] * (n + 1)

        def place_forced(level: int, placed: list[int]) -> bool:
            for p in complete_at[level]:
                scale, const, terms = pivots[p]
                num = const - sum(c * label[f] for f, c in terms)
                if num % scale:
                    return False
                val = num // scale
                if not self.domain_ok(p, val) or used[val]:
                    return False
                label[p] = val
                used[val] = True
                placed.append(p)
            return True

        def bounds_ok(level: int) -> bool:
            for p in touching[level]:
                scale, const, terms = pivots[p]
                lo = hi = const
                for f, c in terms:
                    if label[f]:
                        lo -= c * label[f]
                        hi -= c * label[f]
                    elif c > 0:
                        lo -= c * n
                        hi -= c
                    else:
                        lo -= c
                        hi -= c * n
                if hi < scale or lo > scale * n:
                    return False
            return True

        def unplace(placed: list[int]) -> None:
            for p in placed:
                used[label[p]] = False
                label[p] = 0

        placed0: list[int] = []
        if not place_forced(0, placed0):
            return None

        def rec(i: int) -> bool:
            if i == len(order):
                return True
            self.depth = max(self.depth, i)
            f = order[i]
            for lab in range(1, n + 1):
                if used[lab] or not self.domain_ok(f, lab):
                    continue
                self._tick()
                label[f] = lab
                used[lab] = True
                placed: list[int] = []
                if place_forced(i + 1, placed) and bounds_ok(i) and rec(i + 1):
                    return True
                unplace(placed)
                used[lab] = False
                label[f] = 0
            return False

        return list(label) if rec(0) else None

    def root(self, seeds: list[list[tuple[int, int]]]) -> Optional[list[int]]:
        for seed in seeds:
            self._tick()
            sol = self._solve_seed(seed)
            if sol is not None:
                return sol
        return None


_ENGINES = {"linear": _LinearSearch, "plain": _PlainSearch}


def _label_n_minus_1_positions(S: ConnectionSet) -> list[int]:
    n = S.n
    stab = stabilizer(S)
    reps = []
    seen: set[int] = set()
    for p in range(1, n):
        if p in seen:
            continue
        orbit = {(q * p) % n for q in stab}
        seen |= orbit
        reps.append(min(orbit))
    return reps


def _run(S: ConnectionSet, engine: str, budget: SearchBudget, seeds, **kw) -> tuple:
    try:
        cls = _ENGINES[engine]
    except KeyError:
        raise DomainError(f"unknown search engine {engine!r}") from None
    srch = cls(S, budget, **kw)
    try:
        if isinstance(srch, _PlainSearch):
            sol = list(srch.label) if srch.root(seeds) else None
        else:
            sol = srch.root(seeds)
    except _OutOfBudget:
        return None, srch, True
    return sol, srch, False


def search_labeling(S: ConnectionSet, budget: SearchBudget = SearchBudget(),
                    prefilter: bool = True, symmetry: bool = True,
                    engine: str = "linear") -> SearchOutcome:
    """Backtracking search for a distance magic labeling of Circ(n; S).

    ``engine`` selects the propagation: "linear" (exact elimination over the
    whole neighbourhood-sum system) or "plain" (each neighbourhood sum on its
    own).  Exhausted is only reported for n up to :func:`hard_cap`.
    """
    if not S.connected:
        raise DomainError(f"{S} is not connected")
    if prefilter:
        from .spectra import candidate_filter

        f = candidate_filter(S)
        if not f:
            return SearchOutcome(SearchStatus.EXHAUSTED, note=f"prefilter:{f.reason}")
    n = S.n
    if symmetry:
        seeds = [[(0, n), (p, n - 1)] for p in _label_n_minus_1_positions(S)]
    else:
        seeds = [[]]
    sol, srch, out = _run(S, engine, budget, seeds)
    if out:
        return SearchOutcome(SearchStatus.BUDGET, None, srch.nodes, srch.depth, "budget")
    if sol is not None:
        return SearchOutcome(SearchStatus.FOUND, tuple(sol), srch.nodes, srch.depth)
    if n > hard_cap():
        return SearchOutcome(SearchStatus.BUDGET, None, srch.nodes, srch.depth,
                             f"space exhausted above hard cap {hard_cap()}; non-existence not claimed")
    return SearchOutcome(SearchStatus.EXHAUSTED, None, srch.nodes, srch.depth)


def search_constrained(S: ConnectionSet, pair_offset: int, low_parity: bool = True,
                       budget: SearchBudget = SearchBudget(),
                       engine: str = "linear") -> SearchOutcome:
    """Search restricted to labelings with l(v) + l(v + pair_offset) = n + 1.

    With ``low_parity`` the even vertices receive exactly the labels 1..n/2.
    """
    n = S.n
    if n % 2:
        raise DomainError(f"pairing needs an even order, got {n}")
    if (2 * pair_offset) % n or pair_offset % n == 0:
        raise DomainError(f"pair offset {pair_offset} is not an involution of Z_{n}")
    if low_parity and pair_offset % 2 == 0:
        raise DomainError("low labels on even vertices need an odd pair offset")
    # even translations preserve both constraints and act transitively on odd vertices
    seed = [(1, n)] if low_parity else [(0, n)]
    sol, srch, out = _run(S, engine, budget, [seed], pair_offset=pair_offset, low_parity=low_parity)
    if out:
        return SearchOutcome(SearchStatus.BUDGET, None, srch.nodes, srch.depth, "budget")
    if sol is not None:
        return SearchOutcome(SearchStatus.FOUND, tuple(sol), srch.nodes, srch.depth)
    return SearchOutcome(SearchStatus.EXHAUSTED, None, srch.nodes, srch.depth)


def _scan_one(key: tuple[int, tuple[int, ...]], max_nodes: Optional[int], max_seconds: float) -> dict:
    from .circulant import make_connection_set
    from .families import decide
    from .spectra import candidate_filter

    n, reps = key
    S = make_connection_set(n, reps)
    budget = SearchBudget(max_nodes, max_seconds)
    t0 = time.perf_counter()
    filt = candidate_filter(S)
    verdict = decide(S, budget)
    # the search ignores the kernel filter so the two verdicts stay independent
    out = search_labeling(S, budget, prefilter=False)
    search_says = {SearchStatus.FOUND: "yes", SearchStatus.EXHAUSTED: "no"}.get(out.status, "unknown")
    decide_says = verdict.status.value
    if "unknown" in (search_says, decide_says):
        agree = None
    else:
        agree = search_says == decide_says
    return {
        "n": n,
        "set": str(S),
        "filter": "pass" if filt else f"fail:{filt.reason}",
        "decide": decide_says,
        "reason": verdict.reason,
        "search": search_says,
        "nodes": out.nodes,
        "agree": agree,
        "seconds": round(time.perf_counter() - t0, 4),
    }


def exhaustive_scan(n_max: int, budget: SearchBudget = SearchBudget(None), jobs: int = 1,
                    n_min: int = 7) -> list[dict]:
    """Compare decide with an unfiltered search on every class of order n_min..n_max.

    Records come back ordered by (n, reps) whatever the worker count.
    """
    from .circulant import enumerate_sets

    if n_max > hard_cap():
        raise DomainError(f"n_max = {n_max} exceeds the hard cap {hard_cap()}")
    keys = [(n, S.reps) for n in range(max(n_min, 7), n_max + 1) for S in enumerate_sets(n)]
    args = (keys, [budget.max_nodes] * len(keys), [budget.max_seconds] * len(keys))
    if jobs <= 1:
        return list(map(_scan_one, *args))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_scan_one, *args))


def scan_summary(records: list[dict]) -> dict:
    agree = sum(r["agree"] is True for r in records)
    disagree = [r["set"] for r in records if r["agree"] is False]
    return {"classes": len(records), "agree": agree, "disagree": disagree,
            "inconclusive": sum(r["agree"] is None for r in records)}
