from __future__ import annotations

import itertools
import json

import pytest

from lcnindex.double import a_odd_double, bundled_double, product_double
from lcnindex.embed import (
    EmbeddingError,
    EmbeddingReport,
    braiding_count,
    braiding_report,
    candidate_images,
    count_embeddings,
    double_for,
)
from lcnindex.fusion import d2n_even_ring, pointed_ring, su2_even


def brute_force_embeddings(delta, D, use_edges=True):
    """Every injective unit-preserving map with matching dims (and edges),
    preserving all structure constants; plain enumeration."""
    R = D.ring
    others = [i for i in range(delta.rank) if i != delta.unit]
    pools = []
    for lam in others:
        pool = [b for b in range(R.rank) if b != R.unit and R.dims[b] == delta.dims[lam]]
        if use_edges:
            pool = [b for b in pool if D.edge(b, lam) >= 1]
        pools.append(pool)
    found = []
    for images in itertools.product(*pools):
        if len(set(images)) != len(images):
            continue
        phi = {delta.unit: R.unit, **dict(zip(others, images))}
        if all(
            R.nij(phi[i], phi[j], phi[k]) == delta.nij(i, j, k)
            for i in range(delta.rank)
            for j in range(delta.rank)
            for k in range(delta.rank)
        ):
            found.append(phi)
    return found


def test_candidate_images_a5():
    D = a_odd_double(2)
    assert candidate_images(D.base, D, "2") == ["(0,2)", "(2,0)", "(2,2)-"]


def test_candidate_images_d6():
    base = d2n_even_ring(3)
    D = product_double(base)
    assert candidate_images(base, D, "2") == ["(0,2)", "(2,0)", "(4+,4-)", "(4-,4+)"]


def test_candidate_images_e6():
    D = bundled_double("E6")
    assert sorted(candidate_images(D.base, D, "2")) == sorted(["(2,0)", "(8,0)", "(1,1)", "(5,1)_1", "(5,1)_2"])


def test_a5_count():
    D = a_odd_double(2)
    assert count_embeddings(D.base, D).count == 3


def test_d6_count():
    base = d2n_even_ring(3)
    assert count_embeddings(base, product_double(base)).count == 4


def test_e6_no_embeddings_and_elimination():
    rep = braiding_report("E6")
    assert rep.count == 0
    entry = next(e for e in rep.pruning_log if e["object"] == "2")
    by_image = {item["image"]: item for item in entry["search"]}
    assert by_image["(2,0)"]["embeddings"] == 0
    assert "(2,0) x (2,0) = (0,0)+(2,0)+(4,0)" in by_image["(2,0)"]["eliminated_by"]


def test_e8_no_embeddings():
    rep = braiding_report("E8")
    assert rep.count == 0
    entry = next(e for e in rep.pruning_log if e["object"] == "2")
    assert entry["candidates"] == ["(2,0)"]


@pytest.mark.parametrize(
    "diagram,expected",
    [("A2", 1), ("A3", 2), ("A4", 2), ("A5", 3), ("A6", 2), ("A7", 2), ("A8", 2), ("A9", 2),
     ("D4", 3), ("D6", 4), ("D8", 2), ("D10", 2), ("D12", 2)],
)
def test_small_braiding_counts(diagram, expected):
    assert braiding_count(diagram) == expected


@pytest.mark.parametrize("diagram", ["A3", "A4", "A5", "A7", "D4", "D6", "D8"])
def test_search_agrees_with_brute_force(diagram):
    D = double_for(diagram)
    rep = count_embeddings(D.base, D)
    brute = brute_force_embeddings(D.base, D)
    as_names = sorted(
        json.dumps({D.base.objects[l]: D.ring.objects[b] for l, b in phi.items()}, sort_keys=True) for phi in brute
    )
    assert sorted(json.dumps(e, sort_keys=True) for e in rep.embeddings) == as_names


def test_edge_condition_matters_for_z3():
    Z3 = pointed_ring(3)
    D = product_double(Z3)
    assert count_embeddings(Z3, D).count == 3
    assert len(brute_force_embeddings(Z3, D, use_edges=False)) == 8


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_coordinate_embeddings_for_a_even(n):
    base = su2_even(2 * n - 1)
    D = product_double(base)
    rep = count_embeddings(base, D)
    left = {o: f"({o},0)" for o in base.objects}
    right = {o: f"(0,{o})" for o in base.objects}
    assert sorted(map(str, rep.embeddings)) == sorted([str(left), str(right)])


@pytest.mark.parametrize("n", [6, 7, 8])
def test_d2n_generator_pruned_by_dimension(n):
    rep = braiding_report(f"D{2 * n}")
    entry = next(e for e in rep.pruning_log if e["object"] == "2")
    assert entry["candidates"] == ["(0,2)", "(2,0)"]
    assert rep.count == 2


def test_report_json_round_trip_and_determinism():
    a = braiding_report("D6").dumps()
    b = braiding_report("D6").dumps()
    assert a == b
    rep = EmbeddingReport.from_json(json.loads(a))
    assert rep.dumps() == a
    bad = json.loads(a)
    bad["count"] = 7
    with pytest.raises(EmbeddingError):
        EmbeddingReport.from_json(bad)


def test_out_of_range_and_mismatched_base():
    with pytest.raises(EmbeddingError):
        braiding_count("A40")
    with pytest.raises(EmbeddingError):
        braiding_count("D7")
    with pytest.raises(EmbeddingError):
        count_embeddings(su2_even(3), a_odd_double(2))
