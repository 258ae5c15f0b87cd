from __future__ import annotations

import json
import math

import pytest

from lcnindex.algnum import AlgReal, four_cos_sq, parse_value
from lcnindex.double import data_dir
from lcnindex.classify import (
    ANCHOR_BRAIDINGS,
    ANCHOR_TABLE,
    ClassifyError,
    Verdict,
    admissible_index_values,
    kl_lookup,
    kl_table,
    load_kl_table,
    lr_partial_index,
    section4_verdict,
    theta_for_graph,
    theta_index,
)


def su2_global_dim(k: int) -> float:
    return (k + 2) / (2 * math.sin(math.pi / (k + 2)) ** 2)


def test_theta_for_graph():
    assert theta_for_graph("A7") == (6, (0, 2))
    assert theta_for_graph("D8") == (12, (0, 2, 10, 12))
    assert theta_for_graph("D6") == (8, (0, 2, 6, 8))
    with pytest.raises(ClassifyError):
        theta_for_graph("E6")


def test_kl_lookup_examples():
    assert not kl_lookup(6, [0, 2])
    assert not kl_lookup(12, [0, 2, 10, 12])
    assert kl_lookup(12, [0, 12])
    assert kl_lookup(10, [0, 6])
    assert kl_lookup(28, [0, 10, 18, 28])
    assert kl_lookup(5, [0])
    assert not kl_lookup(6, [0, 6])


def test_table_records_pass_index_invariant():
    assert kl_table().bad_records(range(1, 61)) == {}


def test_table_indices_against_global_dimensions():
    # an extension with index d_theta turns dim C into dim C / d_theta^2
    recs = {r.label: r for r in kl_table().records}
    e6 = float(recs["E6"].index)
    assert abs(e6 * e6 * 4 - su2_global_dim(10)) < 1e-9  # Spin(5)_1 has dim 4
    e8 = float(recs["E8"].index)
    fib = (5 + math.sqrt(5)) / 2
    assert abs(e8 * e8 * fib - su2_global_dim(28)) < 1e-6
    for k in (4, 8, 12, 16):
        assert theta_index(k, (0, k)) == 2


def test_tampered_table_rejected(tmp_path):
    obj = json.loads((data_dir() / "kl_table.json").read_text())
    obj["records"][0]["index"] = AlgReal.rational(5).to_json()
    path = tmp_path / "kl_table.json"
    path.write_text(json.dumps(obj))
    with pytest.raises(ClassifyError):
        load_kl_table(path)


def _names():
    return [f"A{n}" for n in range(2, 31)] + [f"D{n}" for n in range(4, 31, 2)] + ["E6", "E8"]


def test_admissible_set():
    adm = {d for d in _names() if section4_verdict(d).admissible}
    assert adm == {"A2", "A3", "A5", "D4", "D6"}


def test_every_exclusion_rests_on_a_checked_step():
    for d in _names():
        v = section4_verdict(d)
        if v.admissible:
            continue
        assert v.index < 4
        anchors = [a for _, a in v.reasons]
        assert ANCHOR_TABLE in anchors or ANCHOR_BRAIDINGS in anchors
        if ANCHOR_TABLE in anchors:
            k, theta = theta_for_graph(d)
            assert not kl_lookup(k, theta)


def test_admissible_indices_are_graph_norms_and_listed():
    listed = [iv.value for iv in admissible_index_values(4)]
    for d in ("A2", "A3", "A5", "D4", "D6"):
        v = section4_verdict(d)
        assert v.index in listed and v.realization


def test_verdict_examples():
    a5 = section4_verdict("A5")
    assert a5.admissible and a5.index == 3 and "(S_3,S_2)" in a5.realization
    d6 = section4_verdict("D6")
    assert d6.index == four_cos_sq(10) and "Vir_{7/10}" in d6.realization
    e8 = section4_verdict("E8")
    assert not e8.admissible and e8.reasons[0][1] == ANCHOR_BRAIDINGS
    a7 = section4_verdict("A7")
    assert a7.headline() == "EXCLUDED: theta 0⊕2 not a local extension of SU(2)_6"


def test_verdict_json_and_invariants():
    v = section4_verdict("D8")
    again = Verdict.from_json(json.loads(json.dumps(v.to_json())))
    assert again.to_json() == v.to_json()
    with pytest.raises(ClassifyError):
        Verdict("X", True, AlgReal.rational(1))
    with pytest.raises(ClassifyError):
        Verdict("X", False, AlgReal.rational(1))


def test_admissible_index_values():
    full = admissible_index_values(parse_value("3+sqrt3"))
    assert [iv.value for iv in full] == [
        AlgReal.rational(1),
        AlgReal.rational(2),
        AlgReal.rational(3),
        (5 + parse_value("sqrt5")) / 2,
        AlgReal.rational(4),
        parse_value("3+sqrt3"),
    ]
    assert full[3].decimal() == "3.618033988750"
    assert full[5].decimal() == "4.732050807569"
    assert len(admissible_index_values(4)) == 5
    assert len(admissible_index_values(3)) == 3
    with pytest.raises(ClassifyError):
        admissible_index_values(5)


def test_lr_partial_index():
    assert lr_partial_index(3, {0, 2}) == four_cos_sq(10)
    assert lr_partial_index(3, {0}) == 1
    full = lr_partial_index(3, {0, 1, 2, 3})
    assert full == 2 * four_cos_sq(10)
    assert abs(float(full) - su2_global_dim(3)) < 1e-12
    with pytest.raises(ClassifyError):
        lr_partial_index(3, {2})
