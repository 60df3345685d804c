import pytest

import joycehkt

SU5 = {"algebra": {"factors": [{"type": "A", "rank": 4}]}, "isotropy": {"m": 2, "trivial": True}}


def test_presets_listed():
    names = joycehkt.presets()
    assert "su3-group" in names and "su5-einstein" in names


def test_su5_einstein_coefficients():
    assert joycehkt.einstein_coefficients(SU5) == pytest.approx([0.4, 0.2], abs=1e-12)


def test_layer_metric_residuals():
    r = joycehkt.residuals(SU5, [2.0, 1.0])
    assert r["hkt"] < 1e-9
    assert r["hyperhermitian"] < 1e-9
    assert not r["btp"]
    assert joycehkt.residuals(SU5, [1.0, 1.0])["btp"]


def test_verify_preset():
    report, code = joycehkt.verify({"preset": "su3-group"})
    assert code == 0
    assert report["summary"]["all_match"]
    assert [c["verdict"] for c in report["checks"]] == ["pass"] * len(report["checks"])


def test_decompose():
    rep = joycehkt.decompose(SU5)
    assert rep["coset"]["einstein_coefficients"] == ["2/5", "1/5"]


def test_invalid_config_raises():
    with pytest.raises(joycehkt.InvalidInput):
        joycehkt.verify({"algebra": {"factors": [{"type": "Q", "rank": 3}]}, "isotropy": {"m": 1}})
