"""Acceptance suite: one test per release criterion, at its stated tolerance.

Each test prints a PASS line with the measured quantity when it succeeds
(visible under pytest -s); a failing criterion fails its test.  Tolerances
are fixed here, not tuned at runtime.
"""

import json
import math
import random
import time
from fractions import Fraction

from slabsum import cli
from slabsum.bench import fit_loglog_slope, run_bench
from slabsum.dp import dp_decide
from slabsum.instance import (PartitionInstance, SspInstance, SsspInstance,
                              gen_planted, gen_random, write_instance)
from slabsum.numerics import Surd, sqrt_diff_within
from slabsum.oracle import all_subset_sums, iter_vertex_sums, min_vertex_L0, slab_population
from slabsum.quantize import QuantizationUnderflow, quantize, unit_gap_bound
from slabsum.slab import EmptyInner, VertexFound, decide
from slabsum.sssp import build_shells, solve


def _safe_bits(n: int) -> int:
    # largest m with sqrt(n) * 2^m <= n^2, so c=2 quantization cannot underflow
    return max(1, int(1.5 * math.log2(n)))


def test_c01_oracle_equivalence_exact_dp():
    t0 = time.perf_counter()
    pairs = 0
    for seed in range(500):
        rng = random.Random(seed)
        n = rng.randint(2, 16)
        m = rng.randint(1, 10)
        weights = tuple(rng.randrange(1, 1 << m) for _ in range(n))
        inst = SspInstance(weights, target=0, m=m, seed=seed)
        truth = all_subset_sums(inst.weights)
        total = inst.total
        for _ in range(50):
            tau = rng.randrange(0, total + 1)
            x = dp_decide(inst.weights, tau)
            assert (x is not None) == (tau in truth), (seed, tau)
            if x is not None:
                assert sum(w for w, b in zip(inst.weights, x) if b) == tau
            pairs += 1
    elapsed = time.perf_counter() - t0
    assert elapsed < 120
    print(f"PASS criterion 1: dp/oracle agreement on {pairs} pairs in {elapsed:.1f}s")


def test_c02_unit_gap_bound_exact():
    checked = 0
    underflows = 0
    seed = 0
    while checked < 1000:
        rng = random.Random(10_000 + seed)
        seed += 1
        n = rng.randint(4, 64)
        m = rng.randint(1, 32)
        c = rng.choice((2, 3))
        inst = gen_random(n, m, seed=rng.randrange(1 << 30))
        try:
            q = quantize(inst, c=c)
        except QuantizationUnderflow:
            underflows += 1
            continue
        # zero tolerance: exact comparison in the quadratic field
        assert (Surd(unit_gap_bound(q)) - q.unit_gap_sq).sign() >= 0, (n, m, c)
        assert q.unit_gap_sq.sign() >= 0
        checked += 1
    print(f"PASS criterion 2: unit-direction gap <= n/N^2 on 1000 instances "
          f"({underflows} underflowing draws skipped)")


def test_c03_quality_bound_exact():
    found = 0
    scanned = 0
    seed = 0
    while scanned < 500:
        rng = random.Random(20_000 + seed)
        seed += 1
        n = rng.randint(4, 32)
        m = rng.randint(1, 16)
        inst = gen_random(n, m, seed=rng.randrange(1 << 30))
        try:
            v = decide(inst, c=2)
        except QuantizationUnderflow:
            continue
        scanned += 1
        if isinstance(v, VertexFound):
            assert v.rel_error <= Fraction(2 * inst.n, inst.n ** 2), (n, m, seed)
            found += 1
    for k in range(100):
        rng = random.Random(30_000 + k)
        n = rng.randrange(4, 19, 2)
        inst = gen_planted(n, rng.randint(1, _safe_bits(n)), seed=rng.randrange(1 << 30))
        v = decide(inst, c=2)
        assert isinstance(v, VertexFound)
        assert v.rel_error <= Fraction(2 * inst.n, inst.n ** 2)
        found += 1
    print(f"PASS criterion 3: rel_error <= 2n/N exact on {found} vertex verdicts "
          f"(500 random + 100 planted instances)")


def test_c04_empty_inner_soundness():
    collected = 0
    attempts = 0
    seed = 0
    while collected < 200:
        rng = random.Random(40_000 + seed)
        seed += 1
        attempts += 1
        assert attempts < 20_000, "could not collect enough empty verdicts"
        n = rng.choice((6, 8, 10))
        m = rng.randint(4, 12)
        inst = gen_random(n, m, seed=rng.randrange(1 << 30))
        try:
            v = decide(inst, c=5)
        except QuantizationUnderflow:
            continue
        if not isinstance(v, EmptyInner):
            continue
        pop = slab_population(inst.weights, None, delta_sq=v.inner_thickness_sq)
        assert pop.count == 0, (n, m, seed, pop.witnesses[:3])
        collected += 1
    print(f"PASS criterion 4: inner slab vertex-free on {collected} empty verdicts "
          f"({attempts} instances sampled)")


def test_c05_planted_completeness():
    for k in range(200):
        rng = random.Random(50_000 + k)
        n = rng.randrange(4, 19, 2)
        m = rng.randint(1, _safe_bits(n))
        inst = gen_planted(n, m, seed=rng.randrange(1 << 30))
        v = decide(inst, c=2)
        assert isinstance(v, VertexFound), (n, m, k)
    print("PASS criterion 5: vertex found on all 200 planted instances")


def test_c06_complexity_scaling():
    t0 = time.perf_counter()
    rows = run_bench([64, 128, 256, 512], c=2, repeats=3, bits=16, seed=0)
    elapsed = time.perf_counter() - t0
    slope = fit_loglog_slope(rows)
    assert elapsed < 600
    assert 3.8 <= slope <= 5.2, slope
    print(f"PASS criterion 6: log-log slope {slope:.2f} within 4.5 +- 0.7 "
          f"({elapsed:.0f}s)")


def test_c07_merge_and_telescoping_exact():
    from slabsum.sssp import Shell, cross_sum, merge_pair, merge_tree, telescoped_l0

    rng = random.Random(7)
    n = 6
    for _ in range(100_000):
        c1 = tuple(Fraction(rng.randrange(-12, 13), 4) for _ in range(n))
        c2 = tuple(Fraction(rng.randrange(-12, 13), 4) for _ in range(n))
        r1 = Fraction(rng.randrange(1, 32), 4)
        r2 = Fraction(rng.randrange(1, 32), 4)
        x = tuple(Fraction(rng.randrange(-4, 9), 4) for _ in range(n))
        tree = merge_tree([Shell(center=c1, radius_sq=r1), Shell(center=c2, radius_sq=r2)])
        merged = tree.root
        left, right = merged.children
        assert 2 * merged.residual(x) == left.residual(x) + right.residual(x)
    for trial in range(1000):
        shells = [
            Shell(center=tuple(Fraction(rng.randrange(-8, 9), 2) for _ in range(n)),
                  radius_sq=Fraction(rng.randrange(1, 40), 2))
            for _ in range(4)
        ]
        tree = merge_tree(shells)
        x = tuple(Fraction(rng.randrange(0, 2)) for _ in range(n))
        true_m = [cross_sum(tree, q, x) for q in range(2)]
        l0 = sum(node.residual(x) ** 2 for node in tree.levels[0])
        assert telescoped_l0(tree, x, true_m) == l0, trial
    print("PASS criterion 7: merge identity on 1e5 pairs and telescoping on "
          "1e3 four-shell systems, exact")


def test_c08_slab_shell_transfer():
    n = 12
    for eps in (Fraction(1, 10), Fraction(1, 2)):
        rho = Fraction(6) / eps  # keeps n/(8 rho) <= eps/4
        delta = 2 * (eps / 2 + Fraction(n, 8) / rho)
        forward = 0
        converse = 0
        seed = 0
        while (forward < 10_000 or converse < 10_000) and seed < 400:
            weights = gen_planted(n, 2, seed=80_000 + seed).weights
            seed += 1
            m = sum(w * w for w in weights)
            total = sum(weights)
            radius_sq = rho * rho + Fraction(n, 4)
            for mask, s in iter_vertex_sums(weights):
                d = 2 * s - total
                in_slab = d * d <= eps * eps * m
                # |x - C_1|^2 as an exact value over sqrt(m)
                dist_sq = Surd(Fraction(n, 4) + rho * rho, rho * Fraction(d, m), m)
                in_shell_eps = sqrt_diff_within(dist_sq, radius_sq, eps / 2)
                if in_slab and forward < 10_000:
                    assert sqrt_diff_within(dist_sq, radius_sq, delta / 2), (seed, d)
                    forward += 1
                if in_shell_eps and converse < 10_000:
                    assert d * d <= delta * delta * m, (seed, d)
                    converse += 1
        assert forward >= 10_000 and converse >= 10_000
        print(f"PASS criterion 8: slab<->shell transfer at eps={eps} on "
              f"{forward}+{converse} vertices, exact")


def test_c09_sssp_end_to_end():
    base = gen_planted(12, 2, seed=5)
    dup = SsspInstance((base.weights, base.weights), rho=Fraction(10),
                       delta=Fraction(27, 20), m=2, seed=5,
                       planted_x=base.planted_x)
    cert = solve(dup)
    assert cert is not None
    assert cert.grid_size <= 10_000_000
    assert cert.l0_exact == 0
    # independent recomputation through the shell geometry
    from slabsum.oracle import eval_L0
    assert eval_L0(cert.x, build_shells(dup)) == 0

    contra = SsspInstance(((1, 1, 1, 1), (1, 1, 1, 2)), rho=Fraction(8),
                          delta=Fraction(1))
    assert solve(contra) is None
    best, _ = min_vertex_L0(contra)
    assert best > 5 * contra.delta
    print(f"PASS criterion 9: duplicate fixture solved exactly "
          f"(grid {cert.grid_size}), contradictory fixture refused "
          f"(oracle min L0 = {best} > 5*delta)")


def test_c10_determinism(tmp_path):
    part_path = tmp_path / "p.json"
    write_instance(part_path, gen_planted(12, 4, seed=9))
    sssp_path = tmp_path / "s.json"
    ones = gen_planted(4, 1, seed=0)
    write_instance(sssp_path, SsspInstance((ones.weights, ones.weights),
                                           rho=Fraction(4), delta=Fraction(1),
                                           planted_x=ones.planted_x))
    outputs: dict[str, set[bytes]] = {"slab": set(), "eps": set(), "sssp": set()}
    for trial in range(20):
        threads = (1, 2, 4)[trial % 3]
        out = tmp_path / f"v{trial}.json"
        code = cli.main(["decide-slab", "--in", str(part_path), "--c", "2",
                         "--threads", str(threads), "--out", str(out)])
        assert code in (0, 3)
        outputs["slab"].add(out.read_bytes())
        out2 = tmp_path / f"e{trial}.json"
        assert cli.main(["solve-fptas", "--in", str(part_path), "--epsilon", "1/8",
                         "--threads", str(threads), "--out", str(out2)]) in (0, 3)
        outputs["eps"].add(out2.read_bytes())
        out3 = tmp_path / f"s{trial}.json"
        assert cli.main(["solve-sssp", "--in", str(sssp_path),
                         "--out", str(out3)]) == 0
        outputs["sssp"].add(out3.read_bytes())
    for kind, blobs in outputs.items():
        assert len(blobs) == 1, f"{kind} verdicts differ across trials"
    doc = json.loads(next(iter(outputs["sssp"])))
    assert doc["found"]
    print("PASS criterion 10: byte-identical verdicts over 20 trials, "
          "threads in {1,2,4}")
