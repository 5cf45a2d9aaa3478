"""Document models, classify handler, canonical serialization."""

import json

import numpy as np
import pytest
from pydantic import ValidationError

from thetanull.errors import DomainError
from thetanull.sampling import random_block_tau
from thetanull.service import (
    InputDocument,
    Options,
    ReportDocument,
    classify,
    render_report,
    render_selftest,
    selftest,
)

DIAG2 = {
    "genus": 2,
    "tau": [
        [{"re": 0.0, "im": 1.0}, {"re": 0.0, "im": 0.0}],
        [{"re": 0.0, "im": 0.0}, {"re": 0.0, "im": 1.0}],
    ],
}


def test_input_document_round_trip():
    doc = InputDocument.model_validate(DIAG2)
    again = InputDocument.model_validate_json(doc.model_dump_json())
    assert again == doc
    assert doc.options == Options()  # defaults filled in


def test_input_document_rejects_unknown_fields():
    bad = dict(DIAG2, extra="nope")
    with pytest.raises(ValidationError):
        InputDocument.model_validate(bad)


def test_input_document_rejects_ragged_tau():
    bad = {"genus": 2, "tau": [[{"re": 0.0, "im": 1.0}]]}
    doc = InputDocument.model_validate(bad)
    with pytest.raises(DomainError):
        doc.to_siegel()


def test_document_from_siegel_point():
    tau = random_block_tau(np.random.default_rng(50), 1, 1)
    doc = InputDocument.of(tau)
    back = doc.to_siegel()
    assert np.allclose(back.entries, tau.entries)


def test_classify_report_fields_and_determinism():
    doc = InputDocument.model_validate(DIAG2)
    rep = classify(doc)
    assert rep.stratum == 2
    assert rep.verdict is None  # not genus 4
    assert [v.characteristic for v in rep.vanishing] == ["11/11"]
    assert rep.ranks[0].rank == 2
    assert len(rep.ranks[0].singular_values) == 2
    assert rep.certificates.max_eval_err > 0.0
    assert rep.certificates.vanish_tol == 1e-10
    text = render_report(rep)
    assert text == render_report(classify(doc))
    assert text.endswith("\n")
    parsed = json.loads(text)
    assert list(parsed) == ["input", "vanishing", "ranks", "stratum", "verdict", "certificates"]
    # report document round-trips through its own JSON
    assert ReportDocument.model_validate_json(render_report(rep)) == rep


def test_classify_genus4_has_verdict():
    tau = random_block_tau(np.random.default_rng(51), 2, 2)
    rep = classify(InputDocument.of(tau))
    assert rep.verdict == "REDUCIBLE_CANDIDATE"
    assert rep.stratum == 2


def test_options_validation():
    with pytest.raises(ValidationError):
        Options(target_eps=0.0)
    with pytest.raises(ValidationError):
        Options(vanish_tol=-1.0)
    doc = InputDocument.model_validate(
        dict(DIAG2, options={"vanish_tol": 1e-6})
    )
    rep = classify(doc)
    assert rep.certificates.vanish_tol == 1e-6


def test_selftest_report_serialization():
    rep = selftest(name_filter="local_polynomial", seed=3)
    assert rep.passed and len(rep.criteria) == 1
    assert rep.criteria[0].name == "local_polynomial"
    assert rep.seed == 3
    text = render_selftest(rep)
    assert text == render_selftest(selftest(name_filter="local_polynomial", seed=3))


def test_selftest_unknown_filter_yields_empty_failed_report():
    rep = selftest(name_filter="no_such_criterion")
    assert rep.criteria == []
    assert rep.passed is False
