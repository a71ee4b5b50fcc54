import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opeq.conditions import ConditionReport
from opeq.matio import (
    MatrixFileError,
    RunReport,
    digest_matrix,
    emit_json,
    emit_matrix,
    load_matrix,
    matrix_to_doc,
    parse_matrix_doc,
    parse_matrix_text,
    save_matrix,
)

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


def test_frozen_documents():
    m = parse_matrix_text('{"rows":1,"cols":1,"data":[[1.0,0.0]]}')
    assert m.shape == (1, 1) and m[0, 0] == 1.0
    m = parse_matrix_text('{"rows":2,"cols":1,"data":[[0,1],[0,-1]]}')
    assert m[0, 0] == 1j and m[1, 0] == -1j


@given(st.lists(st.tuples(finite, finite), min_size=1, max_size=12))
@settings(max_examples=200)
def test_roundtrip_is_bit_exact(entries):
    a = np.array([complex(re, im) for re, im in entries]).reshape(len(entries), 1)
    b = parse_matrix_text(emit_matrix(a))
    assert np.array_equal(a.view(np.float64), b.view(np.float64))


def test_roundtrip_extreme_values():
    a = np.array(
        [[0.0, -0.0], [5e-324, 1.7976931348623157e308], [1e-308, -1e300]], dtype=complex
    )
    b = parse_matrix_text(emit_matrix(a))
    assert np.array_equal(a.view(np.float64), b.view(np.float64))


def test_parse_error_loci():
    cases = {
        '{"rows":2,"cols":2,"data":[[1,0]]}': "data",
        '{"rows":1,"cols":1,"data":[[1]]}': "data[0]",
        '{"rows":1,"cols":1}': "missing field",
        '{"rows":0,"cols":1,"data":[]}': "rows",
        '{"rows":1,"cols":1,"data":[[true,0]]}': "data[0][0]",
        '{"rows":1,"cols":1,"data":[[Infinity,0]]}': "finite",
        "[1,2,3]": "expected a JSON object",
        "garbage": "not valid JSON",
    }
    for text, needle in cases.items():
        with pytest.raises(MatrixFileError) as err:
            parse_matrix_text(text)
        assert needle in str(err.value)


def test_emit_refuses_non_finite():
    with pytest.raises(MatrixFileError):
        emit_matrix(np.array([[np.inf]], dtype=complex))


def test_file_roundtrip(tmp_path):
    path = tmp_path / "m.json"
    a = np.array([[1.5, -2.25], [0.1, 1e-12]], dtype=complex)
    save_matrix(str(path), a)
    b = load_matrix(str(path))
    assert np.array_equal(a.view(np.float64), b.view(np.float64))


def test_load_missing_file_names_path(tmp_path):
    with pytest.raises(MatrixFileError) as err:
        load_matrix(str(tmp_path / "nope.json"))
    assert "nope.json" in str(err.value)


def test_digest_stable():
    a = np.eye(3)
    assert digest_matrix(a) == digest_matrix(a.copy())
    assert digest_matrix(a) != digest_matrix(2 * a)


def test_emit_json_is_valid_json_and_deterministic():
    doc = {"a": [1.0, 2.5, -0.0], "b": {"c": True, "d": None}, "e": "text"}
    t1 = emit_json(doc)
    t2 = emit_json(doc)
    assert t1 == t2
    assert json.loads(t1) == json.loads(json.dumps(doc))


def test_report_document_shape():
    rep = RunReport(
        command="check range",
        outcome="unsolvable",
        inputs={"A": "sha256:00", "B": "sha256:01"},
        residuals={"witness": 1.0},
        conditions=[ConditionReport(name="range_inclusion", holds=False, witness=1.0)],
    )
    doc = json.loads(rep.emit())
    assert doc["outcome"] == "unsolvable"
    assert doc["conditions"][0]["holds"] is False
    assert doc["solution"] is None


def test_report_outcome_validation():
    with pytest.raises(Exception):
        RunReport(command="solve pt", outcome="maybe")
    with pytest.raises(Exception):
        RunReport(command="solve pt", outcome="solved", solution=None)
    # non-solve commands carry no solution matrix even when they pass
    RunReport(command="demo ex1", outcome="solved")


def test_matrix_doc_rejects_non_2d():
    with pytest.raises(MatrixFileError):
        matrix_to_doc(np.zeros(3))
    with pytest.raises(MatrixFileError):
        parse_matrix_doc({"rows": 1, "cols": 2, "data": [[1, 0], "x"]})
