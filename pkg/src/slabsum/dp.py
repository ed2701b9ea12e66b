"""Subset-sum reachability by bitset dynamic programming.

Rows are bit sets: bit s of row k means some subset of items k..n sums to s.
The suffix orientation makes "prefer excluding the earliest items"
reconstruction produce the lexicographically smallest solution vector.
A decision keeps one rolling row; reconstruction re-derives rows between
checkpoints spaced ~sqrt(n) apart, so memory stays near O(sqrt(n) * target)
bits while every answer remains exact.

Two interchangeable row kernels produce bit-identical tables: plain Python
ints for narrow rows, and preallocated numpy uint64 arrays for wide ones,
where avoiding per-op allocation is worth roughly an order of magnitude.
"""

from __future__ import annotations

import bisect
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .quantize import QuantizedNormal

try:
    import numpy as _np
except ImportError:  # pragma: no cover - numpy is a declared dependency
    _np = None

BUDGET_ENV = "SLABSUM_BUDGET_CELLS"
DEFAULT_BUDGET_CELLS = 1 << 34

# rows narrower than this many bits run on Python ints
ARRAY_KERNEL_MIN_BITS = 1 << 17


class BudgetError(RuntimeError):
    """A table or grid would exceed the configured resource budget."""

    def __init__(self, message: str, *, cells: int | None = None, cap: int | None = None):
        super().__init__(message)
        self.cells = cells
        self.cap = cap


def budget_cap(budget_cells: int | None = None) -> int:
    if budget_cells is not None:
        return budget_cells
    env = os.environ.get(BUDGET_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise BudgetError(f"{BUDGET_ENV} must be an integer, got {env!r}") from None
    return DEFAULT_BUDGET_CELLS


class _IntKernel:
    """Rows as Python ints; snapshots are free because ints are immutable."""

    def __init__(self, cap: int):
        self.cap = cap
        self.mask = (1 << (cap + 1)) - 1

    def one(self):
        return 1

    def apply(self, row: int, w: int) -> int:
        if w > self.cap:
            return row
        return (row | (row << w)) & self.mask

    @staticmethod
    def snapshot(row: int) -> int:
        return row

    @staticmethod
    def test(row: int, s: int) -> bool:
        return (row >> s) & 1 == 1


class _ArrayKernel:
    """Rows as uint64 arrays; shift/or stream through two reused buffers."""

    def __init__(self, cap: int):
        self.cap = cap
        self.words = (cap >> 6) + 1
        self.top_mask = _np.uint64((1 << ((cap & 63) + 1)) - 1)
        self._sh = _np.zeros(self.words, _np.uint64)
        self._carry = _np.zeros(self.words, _np.uint64)

    def one(self):
        row = _np.zeros(self.words, _np.uint64)
        row[0] = 1
        return row

    def apply(self, row, w: int):
        if w > self.cap:
            return row
        words = self.words
        q, r = divmod(w, 64)
        sh = self._sh
        sh[:q] = 0
        if r == 0:
            sh[q:] = row[: words - q]
        else:
            _np.left_shift(row[: words - q], _np.uint64(r), out=sh[q:])
            if q + 1 < words:
                carry = self._carry
                _np.right_shift(row[: words - q - 1], _np.uint64(64 - r),
                                out=carry[: words - q - 1])
                _np.bitwise_or(sh[q + 1:], carry[: words - q - 1], out=sh[q + 1:])
        _np.bitwise_or(row, sh, out=row)
        row[words - 1] &= self.top_mask
        return row

    @staticmethod
    def snapshot(row):
        return row.copy()

    @staticmethod
    def test(row, s: int) -> bool:
        return (int(row[s >> 6]) >> (s & 63)) & 1 == 1


def _make_kernel(cap: int):
    if _np is not None and cap + 1 >= ARRAY_KERNEL_MIN_BITS:
        return _ArrayKernel(cap)
    return _IntKernel(cap)


# -- fused decision scan -------------------------------------------------------
#
# Pure existence queries (no reconstruction) run a single compiled loop with
# one in-place row buffer: flat cost per table cell at every width, which the
# interpreted kernels cannot offer.  Falls back to the kernels when numba is
# unavailable; verdicts are identical either way.

_jit_scan = None
_jit_unavailable = False


def _get_jit_scan():
    global _jit_scan, _jit_unavailable
    if _jit_scan is not None or _jit_unavailable:
        return _jit_scan
    try:
        from numba import njit
    except ImportError:
        _jit_unavailable = True
        return None

    @njit(cache=True)
    def scan(q_arr, r_arr, inv_arr, words, top_mask, tau, early_stop):
        row = _np.zeros(words, _np.uint64)
        row[0] = _np.uint64(1)
        tau_word = tau >> 6
        tau_bit = _np.uint64(tau & 63)
        one = _np.uint64(1)
        zero = _np.uint64(0)
        rows = 0
        for idx in range(q_arr.shape[0]):
            q = q_arr[idx]
            r = r_arr[idx]
            rows += 1
            if r == zero:
                # descending order reads each source word before it is updated
                for j in range(words - 1, q - 1, -1):
                    row[j] |= row[j - q]
            else:
                inv = inv_arr[idx]
                for j in range(words - 1, q, -1):
                    row[j] |= (row[j - q] << r) | (row[j - q - 1] >> inv)
                row[q] |= row[0] << r
            row[words - 1] &= top_mask
            if early_stop and (row[tau_word] >> tau_bit) & one:
                return True, rows
        return ((row[tau_word] >> tau_bit) & one) != zero, rows

    _jit_scan = scan
    return _jit_scan


class _PreparedItems:
    """Shift decomposition of the item weights, reusable across targets."""

    def __init__(self, u):
        self.u = tuple(u)
        self.max_w = max(self.u, default=0)
        self.q = _np.array([w >> 6 for w in self.u], _np.int64)
        self.r = _np.array([w & 63 for w in self.u], _np.uint64)
        self.inv = _np.array([(64 - (w & 63)) % 64 for w in self.u], _np.uint64)


def _jit_decide(prepared: "_PreparedItems", tau: int, early_stop: bool,
                scan) -> tuple[bool, int]:
    """Existence verdict via the compiled scan; items above tau contribute
    nothing and are dropped up front."""
    if prepared.max_w > tau:
        prepared = _PreparedItems([w for w in prepared.u if w <= tau])
    words = (tau >> 6) + 1
    top_mask = _np.uint64((1 << ((tau & 63) + 1)) - 1)
    found, rows = scan(prepared.q, prepared.r, prepared.inv, words, top_mask,
                       tau, early_stop)
    return bool(found), int(rows)


@dataclass(frozen=True)
class DpRun:
    """One decision run: verdict, optional witness, and table-work accounting."""

    x: tuple[int, ...] | None
    found: bool
    rows_done: int
    cells: int


class ReachTable:
    """Checkpointed suffix reachability rows for one (items, cap) pair.

    reach(k) is the bit set of sums attainable from items k..n (1-based);
    reach(n+1) = {0}.  Rows between checkpoints are rebuilt on demand.
    """

    def __init__(self, u: tuple[int, ...], cap: int, *, budget_cells: int | None = None,
                 early_stop_bit: int | None = None, keep_checkpoints: bool = True):
        n = len(u)
        cells = (n + 1) * (cap + 1)
        limit = budget_cap(budget_cells)
        if cells > limit:
            raise BudgetError(
                f"reach table needs {cells} cells, budget is {limit}",
                cells=cells, cap=limit,
            )
        self.u = u
        self.cap = cap
        self.kernel = _make_kernel(cap)
        self.stride = max(1, math.isqrt(n))
        self.stopped_at: int | None = None

        kern = self.kernel
        row = kern.one()
        self.checkpoints = {n + 1: kern.snapshot(row)}
        next_cp = n + 1 - self.stride if keep_checkpoints else 0
        k = 1
        if isinstance(kern, _IntKernel) and not keep_checkpoints and early_stop_bit is None:
            # pure decision scan: no bookkeeping, and the final row does not
            # depend on item order
            mask = kern.mask
            for w in u:
                if w <= cap:
                    row = (row | (row << w)) & mask
        elif isinstance(kern, _IntKernel):
            # inlined hot loop: a method call per item would dominate narrow rows
            mask = kern.mask
            probe = (1 << early_stop_bit) if early_stop_bit is not None else 0
            for k in range(n, 0, -1):
                w = u[k - 1]
                if w <= cap:
                    row = (row | (row << w)) & mask
                if k == next_cp:
                    self.checkpoints[k] = row
                    next_cp -= self.stride
                if probe and row & probe:
                    self.stopped_at = k
                    break
        else:
            for k in range(n, 0, -1):
                row = kern.apply(row, u[k - 1])
                if k == next_cp:
                    self.checkpoints[k] = kern.snapshot(row)
                    next_cp -= self.stride
                if early_stop_bit is not None and kern.test(row, early_stop_bit):
                    self.stopped_at = k
                    break
        self.rows_done = n - k + 1 if n else 0
        self.checkpoints.setdefault(max(1, self.stopped_at or 1), kern.snapshot(row))
        self._cp_keys = sorted(self.checkpoints)
        self._block: dict[int, object] = {}

    def reach(self, k: int):
        """Row for items k..n; valid for k >= stopped_at (or 1 on a full run)."""
        row = self.checkpoints.get(k)
        if row is not None:
            return row
        row = self._block.get(k)
        if row is not None:
            return row
        kern = self.kernel
        cp = self._cp_keys[bisect.bisect_left(self._cp_keys, k)]
        self._block.clear()
        row = self.checkpoints[cp]
        for j in range(cp - 1, k - 1, -1):
            row = kern.apply(kern.snapshot(row), self.u[j - 1])
            self._block[j] = row
        return row

    def contains(self, k: int, sigma: int) -> bool:
        return 0 <= sigma <= self.cap and self.kernel.test(self.reach(k), sigma)


def dp_run(u, tau: int, *, want_solution: bool = True, early_stop: bool = True,
           budget_cells: int | None = None) -> DpRun:
    """Decide whether a subset of u sums to tau; reconstruct a witness if asked.

    Ties break toward excluding earlier items, so the returned vector is the
    lexicographically smallest solution.
    """
    u = tuple(u)
    n = len(u)
    if tau < 0 or tau > sum(u):
        return DpRun(None, False, 0, 0)
    if tau == 0:
        return DpRun((0,) * n if want_solution else None, True, 0, 0)

    if not want_solution:
        scan = _get_jit_scan()
        if scan is not None:
            cells = (n + 1) * (tau + 1)
            limit = budget_cap(budget_cells)
            if cells > limit:
                raise BudgetError(f"reach table needs {cells} cells, budget is {limit}",
                                  cells=cells, cap=limit)
            found, rows = _jit_decide(_PreparedItems(u), tau, early_stop, scan)
            return DpRun(None, found, rows, rows * (tau + 1))

    table = ReachTable(u, tau, budget_cells=budget_cells,
                       early_stop_bit=tau if early_stop else None,
                       keep_checkpoints=want_solution)
    cells = table.rows_done * (tau + 1)
    start = table.stopped_at if table.stopped_at is not None else 1
    if table.stopped_at is None and not table.contains(1, tau):
        return DpRun(None, False, table.rows_done, cells)
    if not want_solution:
        return DpRun(None, True, table.rows_done, cells)

    x = [0] * n
    sigma = tau
    for k in range(start, n + 1):
        if table.contains(k + 1, sigma):
            continue
        x[k - 1] = 1
        sigma -= u[k - 1]
        assert sigma >= 0
    assert sigma == 0
    xt = tuple(x)
    assert sum(w for w, b in zip(u, xt) if b) == tau
    return DpRun(xt, True, table.rows_done, cells)


def dp_decide(u, tau: int, *, budget_cells: int | None = None) -> tuple[int, ...] | None:
    """Witness for sum(u[i]*x[i]) == tau, or None if no subset attains it."""
    return dp_run(u, tau, want_solution=True, budget_cells=budget_cells).x


# -- the shifted-target family ------------------------------------------------


@dataclass(frozen=True)
class TargetFamily:
    """Integer targets within n of half the total: the window any vertex close
    to the central hyperplane must land in."""

    total: int
    window: tuple[int, ...]

    def t_of(self, tau: int) -> int:
        """Shift relative to ceil(total/2); for even totals, tau - total/2."""
        return tau - (self.total + 1) // 2


def family_window(total: int, n: int) -> TargetFamily:
    lo = max(0, (total + 1) // 2 - n)
    hi = min(total, total // 2 + n)
    return TargetFamily(total, tuple(range(lo, hi + 1)))


@dataclass(frozen=True)
class FamilyScan:
    family: TargetFamily
    results: tuple[tuple[int, tuple[int, ...] | None], ...]  # (t, witness) in scan order
    hit: tuple[int, tuple[int, ...]] | None
    targets_scanned: int
    cells: int


def solve_family(q: QuantizedNormal, *, first_only: bool = False,
                 center_out: bool = False, want_solution: bool = True,
                 early_stop: bool = True, budget_cells: int | None = None,
                 threads: int = 1) -> FamilyScan:
    """Run the decision DP over the whole target window.

    Targets are independent; with threads > 1 they run on a pool but results
    are always consumed in scan order, so output is identical for any thread
    count.  first_only stops at the first attainable target in scan order;
    center_out scans nearest-to-half first instead of ascending.
    """
    u = q.u
    total = q.total_u
    fam = family_window(total, q.n)
    order = fam.window
    if center_out:
        order = tuple(sorted(order, key=lambda tau: (abs(2 * tau - total), tau)))

    scan = _get_jit_scan() if not want_solution else None
    if scan is not None:
        # one shift decomposition serves every target in the window
        prepared = _PreparedItems(u)
        limit = budget_cap(budget_cells)

        def run(tau: int) -> DpRun:
            cells = (len(u) + 1) * (tau + 1)
            if cells > limit:
                raise BudgetError(f"reach table needs {cells} cells, budget is {limit}",
                                  cells=cells, cap=limit)
            found, rows = _jit_decide(prepared, tau, early_stop, scan)
            return DpRun(None, found, rows, rows * (tau + 1))
    else:
        def run(tau: int) -> DpRun:
            return dp_run(u, tau, want_solution=want_solution, early_stop=early_stop,
                          budget_cells=budget_cells)

    results: list[tuple[int, tuple[int, ...] | None]] = []
    hit: tuple[int, tuple[int, ...]] | None = None
    scanned = 0
    cells = 0

    if threads > 1:
        pool = ThreadPoolExecutor(max_workers=threads)
        runs = pool.map(run, order)
    else:
        pool = None
        runs = map(run, order)
    try:
        for tau, out in zip(order, runs):
            scanned += 1
            cells += out.cells
            t = fam.t_of(tau)
            results.append((t, out.x if out.found else None))
            if out.found and hit is None:
                hit = (t, out.x)
                if first_only:
                    break
    finally:
        if pool is not None:
            pool.shutdown(wait=False, cancel_futures=True)

    return FamilyScan(fam, tuple(results), hit, scanned, cells)
