import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slabsum import dp
from slabsum.dp import (BudgetError, ReachTable, dp_decide, dp_run,
                        family_window, solve_family)
from slabsum.instance import PartitionInstance
from slabsum.oracle import all_subset_sums
from slabsum.quantize import quantize


def test_hand_examples():
    assert dp_decide([1, 1, 2], 2) == (0, 0, 1)
    assert dp_decide([3, 5], 4) is None
    assert dp_decide([3, 5], 0) == (0, 0)
    assert dp_decide([3, 5], 9) is None  # above the total


def test_recurrence_row_by_row():
    u = (4, 2, 7, 1, 1)
    cap = sum(u)
    table = ReachTable(u, cap)
    n = len(u)
    # naive suffix recurrence: reach[k] = reach[k+1] | (reach[k+1] + u_k)
    expect = {n + 1: {0}}
    for k in range(n, 0, -1):
        prev = expect[k + 1]
        expect[k] = prev | {s + u[k - 1] for s in prev if s + u[k - 1] <= cap}
    for k in range(1, n + 2):
        got = {s for s in range(cap + 1) if table.contains(k, s)}
        assert got == expect[k]


def test_agrees_with_enumeration_on_all_targets():
    rng = random.Random(0)
    u = [rng.randrange(1, 257) for _ in range(16)]
    sums = all_subset_sums(u)
    for tau in range(sum(u) + 1):
        x = dp_decide(u, tau)
        assert (x is not None) == (tau in sums)
        if x is not None:
            assert sum(w for w, b in zip(u, x) if b) == tau


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(min_value=1, max_value=3000), min_size=1, max_size=14),
       st.integers(min_value=0, max_value=25000))
def test_reconstruction_validity(u, tau):
    x = dp_decide(u, tau)
    if x is not None:
        assert all(b in (0, 1) for b in x)
        assert sum(w for w, b in zip(u, x) if b) == tau


def test_lexicographically_smallest_witness():
    # both halves of (2,2,2,2) reach 4; the lex-smallest picks the later items
    assert dp_decide([2, 2, 2, 2], 4) == (0, 0, 1, 1)
    assert dp_decide([1, 2, 3], 3) == (0, 0, 1)


def test_budget_error():
    with pytest.raises(BudgetError) as err:
        dp_run([5, 5, 5], 10, budget_cells=10)
    assert err.value.cells == 4 * 11


def test_budget_env_override(monkeypatch):
    monkeypatch.setenv(dp.BUDGET_ENV, "10")
    with pytest.raises(BudgetError):
        dp_run([5, 5, 5], 10)
    monkeypatch.setenv(dp.BUDGET_ENV, "1000000")
    assert dp_run([5, 5, 5], 10).found


def test_family_window_shapes():
    fam = family_window(14, 2)
    assert fam.window == (5, 6, 7, 8, 9)
    assert [fam.t_of(t) for t in fam.window] == [-2, -1, 0, 1, 2]
    odd = family_window(15, 2)
    assert odd.window == (6, 7, 8, 9)
    # clamped at the boundaries
    tiny = family_window(3, 4)
    assert tiny.window == (0, 1, 2, 3)


def test_solve_family_fixture():
    q = quantize(PartitionInstance((3, 4)), big_n=10)
    scan = solve_family(q)
    got = dict(scan.results)
    assert got[-1] == (1, 0)
    assert got[1] == (0, 1)
    assert got[-2] is None and got[0] is None and got[2] is None
    assert scan.targets_scanned == 5


def test_solve_family_symmetric_half_target():
    q = quantize(PartitionInstance((9, 9, 9, 9)), c=2)
    scan = solve_family(q, first_only=True, center_out=True)
    t, x = scan.hit
    assert t == 0
    assert sum(x) == 2


def test_solve_family_thread_counts_agree():
    q = quantize(PartitionInstance(tuple(range(3, 23))), c=2)
    base = solve_family(q, center_out=True)
    for threads in (2, 4):
        again = solve_family(q, center_out=True, threads=threads)
        assert again.results == base.results
        assert again.hit == base.hit


def test_early_stop_and_full_rows_agree():
    rng = random.Random(5)
    u = [rng.randrange(1, 64) for _ in range(12)]
    for tau in range(0, sum(u) + 1, 7):
        fast = dp_run(u, tau)
        slow = dp_run(u, tau, early_stop=False)
        assert fast.found == slow.found
        assert fast.x == slow.x


def test_compiled_scan_matches_table_kernels():
    # the decision-only path runs a fused compiled loop; verdicts must be
    # identical to the reconstructing table for every target
    rng = random.Random(99)
    for trial in range(20):
        n = rng.randint(1, 20)
        u = [rng.randrange(1, 1 << rng.randint(1, 9)) for _ in range(n)]
        total = sum(u)
        taus = {rng.randrange(0, total + 1) for _ in range(30)}
        taus.update((0, total, total // 2, 63, 64, 65, 127, 128, 129))
        for tau in taus:
            if tau > total:
                continue
            for early in (True, False):
                quick = dp_run(u, tau, want_solution=False, early_stop=early)
                full = dp_run(u, tau, want_solution=True, early_stop=early)
                assert quick.found == full.found, (u, tau, early)


def test_compiled_scan_budget_error():
    with pytest.raises(BudgetError):
        dp_run([5, 5, 5], 10, want_solution=False, budget_cells=10)


def test_word_boundary_widths():
    # targets straddling 64-bit word edges exercise the carry logic
    u = [63, 64, 65, 1]
    sums = all_subset_sums(u)
    for tau in range(sum(u) + 1):
        assert dp_run(u, tau, want_solution=False).found == (tau in sums)
        assert (dp_decide(u, tau) is not None) == (tau in sums)
