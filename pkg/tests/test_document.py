from __future__ import annotations

import io
import json

import numpy as np
import pytest

from tropibary.document import dump_document, load_document, parse_document, round_trip
from tropibary.errors import DocumentError, ValidationError

from .conftest import NEG_INF


def doc_text(**overrides) -> str:
    raw = {
        "version": "tropibary/1",
        "space": {"points": [[0, 1], [3, 0], [1, 1]], "metric": "sup"},
        "measures": {"m1": {"weights": [0, -1, "-Inf"]}, "d": {"weights": ["-Inf", 0, "-Inf"]}},
        "meta_measures": {"M": {"atoms": ["m1", "d"], "weights": [0, "-Inf"]}},
    }
    raw.update(overrides)
    return json.dumps(raw)


class TestLoad:
    def test_minimal(self):
        doc = parse_document('{"version": "tropibary/1", "space": {"points": [[0]]}, "measures": {"x": {"weights": [0]}}}')
        assert doc.measure("x").is_dirac

    def test_support_size(self):
        doc = parse_document(doc_text())
        assert doc.measure("m1").support == [0, 1]

    def test_normalization_error_names_object(self):
        with pytest.raises(ValidationError) as exc:
            parse_document(doc_text(measures={"bad": {"weights": [-1, -2, "-Inf"]}}))
        assert "normalization: max weight must be 0" in str(exc.value)
        assert "'bad'" in str(exc.value)

    def test_dangling_reference(self):
        with pytest.raises(ValidationError, match="dangling"):
            parse_document(doc_text(meta_measures={"M": {"atoms": ["ghost"], "weights": [0]}}))

    def test_parse_error_position(self):
        with pytest.raises(DocumentError) as exc:
            parse_document('{"version": "tropibary/1",\n  "space": }')
        assert exc.value.line == 2

    def test_rejects_bare_infinity(self):
        with pytest.raises(DocumentError):
            parse_document(doc_text().replace('"-Inf"', "-Infinity"))

    def test_version_and_keys(self):
        with pytest.raises(ValidationError, match="version"):
            parse_document(doc_text(version="tropibary/0"))
        with pytest.raises(ValidationError, match="unknown"):
            parse_document(doc_text(extra=1))

    def test_explicit_metric(self):
        doc = parse_document(json.dumps({"version": "tropibary/1", "space": {"metric": [[0, 2], [2, 0]]}}))
        assert doc.space.dist[0, 1] == 2.0 and doc.space.coords is None

    def test_stream(self):
        assert load_document(io.StringIO(doc_text())) == parse_document(doc_text())

    def test_missing_file(self, tmp_path):
        with pytest.raises(DocumentError):
            load_document(tmp_path / "none.json")


class TestRoundTrip:
    def test_preserves_bottom(self):
        doc = parse_document(doc_text())
        again = round_trip(doc)
        assert again == doc
        assert again.meta("M").weights.tolist() == [0.0, NEG_INF]
        assert again.meta_specs["M"][1][1] == NEG_INF
        assert '"-Inf"' in dump_document(doc)

    def test_explicit_metric_round_trip(self):
        doc = parse_document(json.dumps({"version": "tropibary/1", "space": {"metric": [[0, 2], [2, 0]]},
                                         "measures": {"a": {"weights": [0, -0.1]}}}))
        assert round_trip(doc) == doc
        assert np.array_equal(round_trip(doc).measure("a").weights, [0.0, -0.1])
