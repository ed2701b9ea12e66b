from fractions import Fraction

import pytest

from slabsum.instance import (ParseError, PartitionInstance, SspInstance,
                              SsspInstance, dumps_instance, gen_planted,
                              gen_random, gen_sssp_random, loads_instance,
                              read_instance, write_instance)
from slabsum.oracle import enumerate_partition


def test_gen_random_range_contract():
    inst = gen_random(4, 3, seed=7)
    assert inst.n == 4
    assert all(1 <= w < 8 for w in inst.weights)


def test_gen_random_single_value_range():
    assert gen_random(1, 1, seed=0).weights == (1,)


def test_gen_random_deterministic():
    assert gen_random(9, 6, seed=42) == gen_random(9, 6, seed=42)
    assert gen_random(9, 6, seed=42) != gen_random(9, 6, seed=43)


def test_gen_planted_pairs_for_n2():
    inst = gen_planted(2, 4, seed=1)
    assert inst.weights[0] == inst.weights[1]


def test_gen_planted_solution_exact():
    for seed in range(20):
        inst = gen_planted(10, 5, seed=seed)
        assert inst.total % 2 == 0
        hit = sum(w for w, b in zip(inst.weights, inst.planted_x) if b)
        assert 2 * hit == inst.total


def test_gen_planted_rejects_odd_n():
    with pytest.raises(ValueError):
        gen_planted(5, 4, seed=0)


def test_planted_instance_confirmed_by_enumeration():
    inst = gen_planted(12, 6, seed=3)
    report = enumerate_partition(inst)
    assert report.count >= 1
    assert report.min_distance_sq == 0


def test_instance_validation():
    with pytest.raises(ValueError):
        PartitionInstance(())
    with pytest.raises(ValueError):
        PartitionInstance((0, 1))
    with pytest.raises(ValueError):
        PartitionInstance((8,), m=3)
    with pytest.raises(ValueError):
        SspInstance((1, 2), target=9)
    with pytest.raises(ValueError):
        SsspInstance(((1, 2, 3), (1, 2, 3), (1, 2, 3)), rho=1, delta=1)  # p not a power of two
    with pytest.raises(ValueError):
        SsspInstance(((1, 2), (2, 1)), rho=1, delta=1)  # p == n


def test_round_trip_partition(tmp_path):
    inst = gen_planted(8, 4, seed=11)
    path = tmp_path / "a.json"
    write_instance(path, inst)
    assert read_instance(path) == inst


def test_round_trip_ssp_and_sssp(tmp_path):
    ssp = SspInstance((5, 9, 14), target=14, m=4)
    back = loads_instance(dumps_instance(ssp))
    assert back == ssp

    sssp = gen_sssp_random(6, 3, 2, seed=4, delta=Fraction(3, 2))
    path = tmp_path / "s.json"
    write_instance(path, sssp)
    again = read_instance(path)
    assert again == sssp
    assert again.rho == Fraction(6) / Fraction(3, 2)


def test_big_weight_survives_round_trip():
    w = int("999999999999999999999999")
    inst = PartitionInstance((w, 3))
    assert loads_instance(dumps_instance(inst)).weights[0] == w


def test_missing_weights_key():
    with pytest.raises(ParseError, match="weights"):
        loads_instance('{"kind": "partition", "meta": {}}')


def test_malformed_weight_reports_location():
    with pytest.raises(ParseError, match=r"weights\[1\]"):
        loads_instance('{"kind": "partition", "weights": ["3", "x"]}')


def test_non_string_integer_rejected():
    with pytest.raises(ParseError, match="decimal string"):
        loads_instance('{"kind": "partition", "weights": [3, 4]}')


def test_unknown_kind():
    with pytest.raises(ParseError, match="kind"):
        loads_instance('{"kind": "mystery", "weights": ["1"]}')


def test_invalid_json_is_parse_error():
    with pytest.raises(ParseError):
        loads_instance("{not json")
