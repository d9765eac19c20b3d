import json

import pytest

from sparsefactor import arith, fermat, sparse_diff, sparse_exp
from sparsefactor.model import (
    Certificate,
    FactorResult,
    SearchBudget,
    WeakClassReport,
    report_from_json,
    report_to_json,
    result_from_dict,
    result_from_json,
    result_to_dict,
    result_to_json,
    verify_certificate,
)


def test_verify_scaled_fermat_witness():
    cert = Certificate("ExtendedFermatOffset", {"x": 204, "y": 2})
    assert 204 ** 2 - 2 ** 2 == 4 * 10403
    assert verify_certificate(10403, cert)


def test_verify_classic_witness():
    assert verify_certificate(15, Certificate("ClassicFermat", {"x": 4, "y": 1}))
    assert not verify_certificate(15, Certificate("ClassicFermat", {"x": 5, "y": 1}))


def test_verify_rejects_trivial_split():
    # x - y = 1 factors 15 as 1 * 15: not a real certificate
    assert not verify_certificate(15, Certificate("ClassicFermat", {"x": 8, "y": 7}))


def test_verify_malformed_never_raises():
    bad = [
        Certificate("ClassicFermat", {}),
        Certificate("ClassicFermat", {"x": "junk", "y": []}),
        Certificate("SparseDifference", {"a": 1}),
        Certificate("SparseExponent", {"kind": "grid"}),
        Certificate("SparseExponent", {"kind": "nonsense", "base": 2}),
        Certificate("TrialDivision", {"divisor": "x"}),
        Certificate("BsgsFermat", {"x": 1, "y": None}),
    ]
    for cert in bad:
        assert verify_certificate(10403, cert) is False
    with pytest.raises(ValueError):
        verify_certificate(1, bad[0])


def test_verify_offset_witness_checks_anchor():
    good = Certificate("ExtendedFermatOffset",
                       {"a": 0, "t": 0, "x": 204, "y": 2})
    assert verify_certificate(10403, good)
    wrong_anchor = Certificate("ExtendedFermatOffset",
                               {"a": 5, "t": 0, "x": 204, "y": 2})
    assert not verify_certificate(10403, wrong_anchor)


def test_certificate_method_validation():
    with pytest.raises(ValueError):
        Certificate("NoSuchMethod", {})


def test_factor_result_invariants():
    with pytest.raises(ValueError):
        FactorResult("Factored")
    with pytest.raises(ValueError):
        FactorResult("Factored", (1, 15))
    r = FactorResult("Factored", (3, 5),
                     Certificate("TrialDivision", {"divisor": 3}), ops=1)
    assert r.factored


def test_budget_defaults_base_two():
    b = SearchBudget.default_for(448316072600119)
    assert b.k == 6          # ceil(log2 of 49 bits)
    assert b.v_max == 13     # ceil(49 / 4)
    assert b.t_max == 49 * 49
    assert b.op_cap >= 1
    with pytest.raises(ValueError):
        SearchBudget(k=0, v_max=3, t_max=5)


def _round_trip(result, n):
    blob = result_to_json(result)
    back = result_from_json(blob)
    assert back == result
    assert result_to_json(back) == blob
    if result.factored:
        assert verify_certificate(n, back.certificate)
    return json.loads(blob)


def test_json_round_trip_every_engine():
    cases = [
        (10403, arith.trial_division(10403, 200)),
        (253, arith.pollard_pm1(253, 11)),
        (2881, fermat.classic_fermat(2881, 10)),
        (10403, fermat.extended_fermat_offset(10403, 0, 8)),
        (10403, fermat.extended_fermat_sparse(
            10403, SearchBudget(k=1, v_max=3, t_max=8))),
        (10403, fermat.bsgs_fermat(10403, 2)),
        (15049, sparse_diff.sparse_difference_factor(
            15049, SearchBudget(k=2, v_max=8, t_max=4, multipliers=(1,)))),
        (253, sparse_exp.sparse_exponent_factor(
            253, SearchBudget(k=2, v_max=6, t_max=4))),
        (253, sparse_exp.germain_factor(253, 4)),
        (4294967297, sparse_exp.cyclotomic_form_factor(
            4294967297, ("fermat", 5), SearchBudget(k=2, v_max=6, t_max=4))),
        (2047, sparse_exp.cyclotomic_form_factor(
            2047, ("mersenne", 11), SearchBudget(k=2, v_max=5, t_max=4))),
    ]
    for n, result in cases:
        assert result.factored, result
        payload = _round_trip(result, n)
        assert payload["status"] == "Factored"
        assert int(payload["p"]) * int(payload["q"]) == n
        assert isinstance(payload["p"], str)  # decimal-string integers
        assert isinstance(payload["ops"], int)


def test_json_round_trip_non_factored():
    for result in (arith.trial_division(10403, 50),
                   FactorResult("ProbablePrime", None, None, 0)):
        blob = result_to_json(result)
        assert result_from_json(blob) == result


def test_json_field_names_fixed():
    r = arith.trial_division(10403, 200)
    payload = result_to_dict(r)
    assert set(payload) == {"status", "p", "q", "method", "witness", "ops"}
    assert result_from_dict(payload) == r


def test_report_round_trip():
    rep = WeakClassReport(frozenset("bg"),
                          {"g": {"difference": 2, "weight": 1}},
                          SearchBudget(k=3, v_max=8, t_max=64))
    back = report_from_json(report_to_json(rep))
    assert back.classes == rep.classes
    assert back.witnesses["g"]["difference"] == 2
    assert back.checked_with == rep.checked_with
    with pytest.raises(ValueError):
        WeakClassReport(frozenset("e"))
