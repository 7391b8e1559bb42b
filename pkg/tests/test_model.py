import json

import pytest
from hypothesis import given, strategies as st

from fdenvelope.model import (
    EnvelopeCurve,
    IDENTITY_CDF,
    PValueFamily,
    ReferenceFamily,
    StepCdf,
)


def test_step_cdf_eval_right_continuous():
    cdf = StepCdf(support=(0.1, 0.5), values=(0.3, 1.0))
    assert cdf.eval(0.05) == 0.0
    assert cdf.eval(0.1) == 0.3  # jump included at the point
    assert cdf.eval(0.3) == 0.3
    assert cdf.eval(0.5) == 1.0
    assert cdf.eval(0.9) == 1.0


def test_step_cdf_left_limit():
    cdf = StepCdf(support=(0.1, 0.5), values=(0.3, 1.0))
    assert cdf.left_limit(0.1) == 0.0
    assert cdf.left_limit(0.5) == 0.3
    assert cdf.left_limit(0.2) == 0.3


def test_identity_cdf_is_clamped_identity():
    assert IDENTITY_CDF.eval(-0.5) == 0.0
    assert IDENTITY_CDF.eval(0.25) == 0.25
    assert IDENTITY_CDF.eval(2.0) == 1.0


def test_step_cdf_validation():
    with pytest.raises(ValueError):
        StepCdf(support=(0.5, 0.1), values=(0.1, 0.5))
    with pytest.raises(ValueError):
        StepCdf(support=(0.1, 0.5), values=(0.5, 0.1))
    with pytest.raises(ValueError):
        StepCdf(support=(0.1,), values=(0.1, 0.2))
    with pytest.raises(ValueError):
        StepCdf(support=(0.1,), values=(1.5,))
    with pytest.raises(ValueError):
        StepCdf(support=(0.1,), values=(0.1,), identity=True)


def test_step_cdf_json_round_trip():
    cdf = StepCdf(support=(0.0625, 0.375, 1.0), values=(0.0625, 0.375, 1.0))
    assert StepCdf.from_json(cdf.to_json()) == cdf
    assert StepCdf.from_json({"identity": True}) == IDENTITY_CDF


@given(st.lists(st.floats(0, 1), min_size=1, max_size=8), st.floats(0, 1))
def test_left_limit_never_exceeds_eval(pts, t):
    support = tuple(sorted(set(pts)))
    cdf = StepCdf(support=support, values=support)
    assert cdf.left_limit(t) <= cdf.eval(t)


def test_family_counts_and_regions():
    fam = PValueFamily.homogeneous([0.5, 0.1, 0.1, 0.9])
    assert fam.m == 4
    assert fam.count_at_most(0.1) == 2
    assert fam.region(0.1) == frozenset({1, 2})
    assert fam.t_grid() == (0.0, 0.1, 0.5, 0.9)


def test_family_sort_is_stable_on_ties():
    fam = PValueFamily.homogeneous([0.3, 0.1, 0.3, 0.1])
    assert fam.sort().order == (1, 3, 0, 2)


def test_family_merged_support_always_contains_zero():
    cdf = StepCdf(support=(0.25, 1.0), values=(0.25, 1.0))
    fam = PValueFamily((0.5,), (cdf,))
    assert fam.merged_support()[0] == 0.0
    assert 0.25 in fam.merged_support()


def test_family_validation():
    with pytest.raises(ValueError):
        PValueFamily((0.1,), ())
    with pytest.raises(ValueError):
        PValueFamily((1.5,), (IDENTITY_CDF,))
    with pytest.raises(ValueError):
        PValueFamily((0.1,), (IDENTITY_CDF,), labels=("a", "b"))


def test_family_json_round_trip():
    cdf = StepCdf(support=(0.1, 1.0), values=(0.1, 1.0))
    fam = PValueFamily((0.1, 0.4), (cdf, IDENTITY_CDF), labels=("a", "b"))
    again = PValueFamily.from_json(json.loads(json.dumps(fam.to_json())))
    assert again == fam


def test_reference_family_regularized():
    ref = ReferenceFamily(
        regions=(frozenset({0}), frozenset({0, 1}), frozenset({0, 1, 2})),
        zetas=(3, 1, 2),
        structure="topk",
    )
    # suffix minima, then cap at |R_k|
    assert ref.regularized().zetas == (1, 1, 2)
    assert ref.is_nested()


def test_envelope_curve_csv_contract():
    curve = EnvelopeCurve(
        method="simes",
        alpha=0.2,
        pvalues_sorted=(0.1, 0.2),
        vhat=(0, 1),
    )
    lines = curve.to_csv().split("\n")
    assert lines[0] == "k,p_k,vhat,dhat"
    assert lines[1] == "1,0.1,0,1"
    assert lines[2] == "2,0.2,1,1"
    assert curve.dhat == (1, 1)


def test_envelope_curve_json_includes_m0_only_when_set():
    c = EnvelopeCurve("dkw", 0.1, (0.5,), (1,))
    assert "m0_hat" not in c.to_json()
    c2 = EnvelopeCurve("dkw-adaptive", 0.1, (0.5,), (1,), m0_hat=1)
    assert c2.to_json()["m0_hat"] == 1
