import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from walklab.configmodel import (
    DegreeSequence,
    check_nice,
    effective_min_degree,
    is_simple,
    nu,
    predicted_cover,
    predicted_p_simple,
    random_band_sequence,
    read_degree_file,
    regular_sequence,
    sample_configuration,
    sample_simple,
    write_degree_file,
)
from walklab.errors import ParameterError, RejectionFailure
from walklab.graph import complete, cycle


def test_degree_sequence_derived_quantities():
    seq = DegreeSequence((3, 3, 4, 4, 5, 5))
    assert seq.n == 6
    assert seq.m == 12
    assert seq.theta == 4.0
    assert seq.minimum == 3 and seq.maximum == 5
    assert seq.counts == {3: 2, 4: 2, 5: 2}


def test_degree_sequence_validation():
    with pytest.raises(ParameterError):
        DegreeSequence((3, 3, 3))  # odd sum
    with pytest.raises(ParameterError):
        DegreeSequence((0, 2))
    with pytest.raises(ParameterError):
        DegreeSequence(())


def test_single_edge_sequence_is_deterministic():
    seq = DegreeSequence((1, 1))
    for index in range(5):
        g = sample_configuration(seq, seed=0, index=index)
        assert [(u, v) for u, v, _ in g.edges] == [(0, 1)]


def test_two_degree_two_vertices_matching_frequencies():
    # 3 perfect matchings on 4 stubs: 2 give the double edge, 1 gives two loops
    seq = DegreeSequence((2, 2))
    double = loops = 0
    for index in range(3000):
        g = sample_configuration(seq, seed=42, index=index)
        kinds = sorted((u, v) for u, v, _ in g.edges)
        if kinds == [(0, 1), (0, 1)]:
            double += 1
        elif kinds == [(0, 0), (1, 1)]:
            loops += 1
        else:
            raise AssertionError(f"impossible outcome {kinds}")
    assert abs(double / 3000 - 2 / 3) < 0.04
    assert abs(loops / 3000 - 1 / 3) < 0.04


def test_degrees_are_preserved_exactly():
    seq = DegreeSequence((1, 2, 3, 4, 4, 2))
    for index in range(20):
        g = sample_configuration(seq, seed=7, index=index)
        assert tuple(g.degrees.tolist()) == seq.degrees


def test_claw_plus_pendant_is_never_simple():
    seq = DegreeSequence((1, 3))
    for index in range(50):
        assert not is_simple(sample_configuration(seq, seed=3, index=index))
    with pytest.raises(RejectionFailure, match="acceptance 0/"):
        sample_simple(seq, seed=3, max_tries=200)


def test_unique_simple_outcomes():
    out = sample_simple(regular_sequence(4, 3), seed=1)
    assert out.graph == complete(4)
    assert out.attempts >= 1
    out = sample_simple(DegreeSequence((2, 2, 2)), seed=1)
    assert out.graph == cycle(3)


def test_simple_sampling_is_uniform_on_four_cycles():
    # the 3 simple realizations of (2,2,2,2) are the 3 labelled 4-cycles
    seq = DegreeSequence((2, 2, 2, 2))
    counts = {}
    samples = 3000
    for seed in range(samples):
        g = sample_simple(seq, seed=seed).graph
        key = tuple((u, v) for u, v, _ in sorted(g.edges))
        counts[key] = counts.get(key, 0) + 1
    assert len(counts) == 3
    expected = samples / 3
    chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
    assert chi2 < 15.0  # df=2; 0.999 quantile is 13.8


def test_nu_closed_forms():
    assert nu(regular_sequence(10, 3)) == pytest.approx(2.0)
    assert nu(regular_sequence(8, 5)) == pytest.approx(4.0)
    assert nu(DegreeSequence((1, 1, 1, 1))) == 0.0
    assert predicted_p_simple(DegreeSequence((1, 1))) == 1.0
    assert predicted_p_simple(regular_sequence(20, 3)) == pytest.approx(math.exp(-2))


def test_empirical_acceptance_matches_prediction():
    seq = regular_sequence(100, 3)
    simple = sum(
        1 for index in range(3000) if sample_configuration(seq, seed=11, index=index).is_simple
    )
    assert abs(simple / 3000 - math.exp(-2)) < 0.03


def test_sampled_cubic_graphs_are_usually_connected():
    seq = regular_sequence(200, 3)
    connected = sum(
        1 for seed in range(100) if sample_simple(seq, seed=seed).graph.is_connected
    )
    assert connected >= 99


def test_effective_min_degree_threshold():
    seq = DegreeSequence((3,) + (5,) * 199)
    assert effective_min_degree(seq) == 5  # one vertex of degree 3 is below 1%
    assert effective_min_degree(seq, fraction=0.004) == 3
    assert effective_min_degree(regular_sequence(10, 3)) == 3


def test_effective_min_degree_fallback_when_nothing_qualifies():
    seq = DegreeSequence((3, 3, 4, 4, 5, 5))
    assert effective_min_degree(seq, fraction=0.9) == 3


def test_regular_sequences_are_nice():
    for n in (100, 1000):
        report = check_nice(regular_sequence(n, 3))
        assert report.nice
        assert report.effective_minimum == 3
        assert all(c["passed"] for c in report.conditions.values())


def test_min_degree_two_fails_condition_ii():
    report = check_nice(DegreeSequence((2,) * 50))
    assert not report.conditions["ii_minimum_degree"]["passed"]
    assert not report.nice


def test_sparse_high_degree_minority_is_nice():
    # a handful of degree-4 vertices below the effective minimum 5
    n = 10**6
    seq = DegreeSequence((4, 4) + (5,) * (n - 2))
    report = check_nice(seq)
    assert report.effective_minimum == 5
    assert report.nice


def test_heavy_average_degree_fails_condition_i():
    n = 64
    seq = DegreeSequence((20,) * n)
    report = check_nice(seq)
    assert not report.conditions["i_average_degree"]["passed"]


def test_niceness_report_serializes():
    import json

    report = check_nice(regular_sequence(100, 3))
    loaded = json.loads(report.to_json())
    assert loaded["nice"] is True
    assert loaded["parameters"]["kappa"] == pytest.approx(1 / 12)
    assert set(loaded["conditions"]) == {
        "i_average_degree",
        "ii_minimum_degree",
        "iii_low_degree_counts",
        "iv_effective_degree_mass",
        "v_maximum_degree",
        "vi_upper_tail",
    }


def test_predicted_cover_values():
    seq = regular_sequence(1000, 3)
    assert predicted_cover(seq) == pytest.approx(2 * 1000 * math.log(1000))
    seq4 = regular_sequence(100, 4)
    assert predicted_cover(seq4) == pytest.approx(1.5 * 100 * math.log(100))
    with pytest.raises(ParameterError):
        predicted_cover(DegreeSequence((2, 2, 2, 2)))


def test_random_band_sequence_properties():
    seq = random_band_sequence(20, 3, 6, seed=5)
    assert seq.n == 20
    assert all(3 <= d <= 6 for d in seq.degrees)
    assert sum(seq.degrees) % 2 == 0
    again = random_band_sequence(20, 3, 6, seed=5)
    assert seq == again
    other = random_band_sequence(20, 3, 6, seed=6)
    assert seq != other


def test_degree_file_round_trip(tmp_path):
    seq = DegreeSequence((3, 4, 5, 4))
    path = tmp_path / "degrees.txt"
    write_degree_file(path, seq)
    assert read_degree_file(path) == seq
    path.write_text("# comment\n3\n\n3\n")
    assert read_degree_file(path) == DegreeSequence((3, 3))
    path.write_text("3 3 4\n4\n")
    assert read_degree_file(path) == DegreeSequence((3, 3, 4, 4))
    path.write_text("3 x 4\n")
    with pytest.raises(ParameterError, match="expected an integer"):
        read_degree_file(path)


@settings(max_examples=30, deadline=None)
@given(
    st.lists(st.integers(min_value=1, max_value=6), min_size=2, max_size=12),
    st.integers(min_value=0, max_value=100),
)
def test_configuration_always_realizes_the_degrees(raw, seed):
    if sum(raw) % 2 != 0:
        raw[0] += 1
    seq = DegreeSequence(tuple(raw))
    g = sample_configuration(seq, seed=seed)
    assert tuple(g.degrees.tolist()) == seq.degrees
    assert g.m == seq.m
