import math

import numpy as np
import pytest

from quadtourn import enumeration as en
from quadtourn.quad import domination_number, quadrangularity
from quadtourn.tournament import (
    Tournament,
    add_receiver,
    add_transmitter,
    out_degree_one_extension,
    qr_tournament,
    three_cycle,
)

CLASS_COUNTS = [1, 1, 2, 4, 12, 56, 456, 6880, 191536]
ORDER2_COUNTEREXAMPLE = "1001100101010001100000101111"


@pytest.mark.parametrize("n", range(1, 10))
def test_class_counts(n):
    assert len(en.class_table(n).keys) == CLASS_COUNTS[n - 1]


@pytest.mark.parametrize("n", range(1, 10))
def test_orbit_sum(n):
    table = en.class_table(n)
    assert sum(math.factorial(n) // int(a) for a in table.aut) == 2 ** (n * (n - 1) // 2)


@pytest.mark.parametrize("n", range(1, 7))
def test_brute_force_oracle(n):
    assert en.brute_force_class_count(n) == CLASS_COUNTS[n - 1]


def test_keys_sorted_and_unique():
    keys = en.class_table(8).keys
    assert np.all(np.diff(keys.astype(np.int64)) > 0)


@pytest.mark.parametrize("n", range(1, 9))
def test_closed_under_duality(n):
    keys = set(int(k) for k in en.class_table(n).keys)
    assert en.dual_key_set(n) == keys


def test_key_roundtrip():
    t = qr_tournament(7)
    key = en.tournament_key(t)
    back = en.key_to_tournament(key, 7)
    assert back.is_isomorphic(t)
    assert en.tournament_key(back) == key


def test_order_guard():
    with pytest.raises(en.LongRunRequired):
        en.class_table(10)
    with pytest.raises(en.CapExceeded):
        en.class_table(11, long_run=True)


def test_enumerate_visitor():
    seen = []
    summary = en.enumerate_classes(5, visitor=lambda t: seen.append(t) or quadrangularity(t).quadrangular,
                                   name="quadrangular")
    assert summary.class_count == 12 == len(seen)
    assert summary.labeled_check_ok
    assert summary.filter_count == 0


def test_three_cycle_is_only_small_quadrangular():
    counts = [en.count_quadrangular(n)[1] for n in range(1, 9)]
    assert counts == [1, 1, 1, 0, 0, 0, 0, 0]
    assert en.count_quadrangular(3)[2][0].is_isomorphic(three_cycle())


def test_nine_vertex_quadrangular_classes():
    _, count, reps = en.count_quadrangular(9)
    assert count == 2
    a = add_receiver(add_transmitter(qr_tournament(7)))
    b = out_degree_one_extension(qr_tournament(7))
    assert not a.is_isomorphic(b)
    assert {en.tournament_key(a), en.tournament_key(b)} == {en.tournament_key(r) for r in reps}


def test_class_stats_agree_with_direct():
    stats = en.class_stats(6)
    for i, key in enumerate(en.class_table(6).keys):
        t = en.key_to_tournament(int(key), 6)
        r = quadrangularity(t)
        assert bool(stats.outq[i]) == r.out_quadrangular
        assert bool(stats.inq[i]) == r.in_quadrangular
        assert stats.min_out[i] == t.min_out_degree
        assert bool(stats.gamma_le2[i]) == (domination_number(t).gamma <= 2)
        assert bool(stats.dual_gamma_le2[i]) == (domination_number(t.dual()).gamma <= 2)


def test_order2_single_exception():
    bad = en.order2_exceptions()
    assert len(bad) == 1
    t = bad[0]
    assert t.is_isomorphic(Tournament.from_arc_bits(8, ORDER2_COUNTEREXAMPLE))
    assert domination_number(t).gamma == 3 and domination_number(t.dual()).gamma == 3
    assert not en.verify_order2()


def test_order3_and_gamma3():
    assert en.verify_order3()
    assert en.verify_unique_gamma3()


def test_final_theorem_small():
    assert en.verify_final_theorem(9)
    survivors = [e for n in range(1, 10) for e in en.final_theorem_report(n) if e.reason == "survivor"]
    assert len(survivors) == 1 and survivors[0].tournament.is_isomorphic(three_cycle())


def test_census(tmp_path):
    path = tmp_path / "c9.trn"
    assert en.write_census(9, path, only_quadrangular=True) == 2
    assert en.write_census(4, tmp_path / "c4.trn") == 4


def test_checkpoint_resume(tmp_path):
    parent = en.class_table(6)
    first = en.extend_level(parent, workdir=tmp_path)
    done = sorted(tmp_path.glob("*.done"))
    assert done
    again = en.extend_level(parent, workdir=tmp_path)
    assert np.array_equal(first.keys, again.keys)
    assert np.array_equal(first.keys, en.class_table(7).keys)
