"""Smoke test for the qdeform extension module.

Build and install first:
    pip install --no-build-isolation -e crates/py
then run with `python python/smoke_test.py` or `pytest python/`.
"""

import math

import qdeform


def test_bracket():
    params = qdeform.DeformationParams(0.8, 1.2)
    assert math.isclose(params.bracket(2.0), 2.45, rel_tol=1e-13)
    assert params.bracket(0.0) == 0.0
    assert params.step == 1.0


def test_invalid_params():
    try:
        qdeform.DeformationParams(-1.0, 1.0)
    except ValueError as err:
        assert "NonPositiveBase" in str(err)
    else:
        raise AssertionError("negative base accepted")


def test_fock_relations():
    params = qdeform.DeformationParams(0.8, 1.2, ladder=True)
    rep = qdeform.FockRep("GChJ", params, 6)
    assert rep.dim == 6
    assert math.isclose(rep.a[1][2] ** 2, 2.45, rel_tol=1e-12)
    report = rep.check("GChJ_8", 1e-10)
    assert report["verdict"] == "pass", report

    shifted = qdeform.FockRep("GChJ_shifted", qdeform.DeformationParams(0.5, 1.0, ladder=True), 4, nu0=1.0)
    c1 = shifted.casimir_c1()
    assert math.isclose(c1[0][0], 0.5, rel_tol=1e-14)


def test_calculus_and_ope():
    params = qdeform.DeformationParams(0.5, 1.0)
    assert qdeform.delta_n({1: 1 + 0j}, 0, 1.0, params) == {1: 3 + 0j}
    by_residue = qdeform.ope_residue_variation({2: 1 + 0j, -1: 2j}, 1, 0.5, params)
    by_rule = qdeform.delta_n({2: 1 + 0j, -1: 2j}, 1, 0.5, params)
    assert by_residue.keys() == by_rule.keys()
    assert all(abs(by_residue[k] - by_rule[k]) < 1e-12 for k in by_rule)
    coefficients, expected = qdeform.mode_bracket(1, 0, 2.0, {1: 1 + 0j}, params)
    assert abs(coefficients[1] - expected) < 1e-13
    assert qdeform.virasoro_structure(1, 0, params) == (0.25, 0.125, 1.0)


def test_correlators():
    assert abs(qdeform.qpochhammer(0.5, 0.5) - 0.28878809508660242) < 1e-12
    params = qdeform.DeformationParams(0.8, 1.1)
    g = qdeform.two_point(1.0, 0.3, 0.5, params)
    assert abs(g - 1.4701581589739314) < 1e-12
    assert qdeform.ward_residual(0.5, params) < 1e-8


def test_run_suite():
    record = qdeform.run_suite("gchj", 0.8, 1.2, dim=8)
    assert record["verdict"] == "pass", record
    record = qdeform.run_suite("hp-eq36", 0.5, 1.0)
    assert record["verdict"] == "documented"
    assert "open question" in record["note"]


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            fn()
            print(f"ok  {name}")
