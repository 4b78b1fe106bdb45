"""The ``tropibary/1`` document format: one space plus named measures.

Example::

    {
      "version": "tropibary/1",
      "space": {"points": [[0, 1], [3, 0]], "metric": "sup"},
      "measures": {"m1": {"weights": [0, -2]}},
      "meta_measures": {"M": {"atoms": ["m1"], "weights": [0]}}
    }

``metric`` is ``"sup"`` (the default, needs ``points``) or an explicit
matrix. Scalars are JSON numbers or the string ``"-Inf"``.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Any

import numpy as np

from .errors import DocumentError, ValidationError
from .maxplus import parse_scalar, to_token
from .measure import GroundSpace, IdempotentMeasure, MetaMeasure, sup_metric
from .space import PointConfig

VERSION = "tropibary/1"


@dataclass(eq=False)
class Document:
    space: GroundSpace
    measures: dict[str, IdempotentMeasure] = field(default_factory=dict)
    meta_specs: dict[str, tuple[tuple[str, ...], np.ndarray]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for name, m in self.measures.items():
            if m.space != self.space:
                raise ValidationError("measure lives on another space", name=f"measure {name!r}")
        for name, (atoms, w) in self.meta_specs.items():
            for a in atoms:
                if a not in self.measures:
                    raise ValidationError(f"dangling reference to measure {a!r}", name=f"meta_measure {name!r}")
            try:
                self._build_meta(atoms, w)
            except ValidationError as exc:
                raise ValidationError(exc.message, name=f"meta_measure {name!r}") from exc

    def _build_meta(self, atoms: tuple[str, ...], w: np.ndarray) -> MetaMeasure:
        return MetaMeasure(tuple(self.measures[a] for a in atoms), w)

    @property
    def meta_measures(self) -> dict[str, MetaMeasure]:
        return {name: self._build_meta(*spec) for name, spec in self.meta_specs.items()}

    def measure(self, name: str) -> IdempotentMeasure:
        try:
            return self.measures[name]
        except KeyError:
            raise ValidationError(f"no measure named {name!r}") from None

    def meta(self, name: str) -> MetaMeasure:
        if name not in self.meta_specs:
            raise ValidationError(f"no meta-measure named {name!r}")
        return self._build_meta(*self.meta_specs[name])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Document):
            return False
        return (
            self.space == other.space
            and self.measures.keys() == other.measures.keys()
            and all(self.measures[k] == other.measures[k] for k in self.measures)
            and self.meta_specs.keys() == other.meta_specs.keys()
            and all(
                self.meta_specs[k][0] == other.meta_specs[k][0]
                and np.array_equal(self.meta_specs[k][1], other.meta_specs[k][1])
                for k in self.meta_specs
            )
        )


def _reject_constant(token: str) -> Any:
    raise ValueError(f"non-standard constant {token}; write -inf as \"-Inf\"")


def _scalars(tokens: Any, what: str) -> np.ndarray:
    if not isinstance(tokens, list):
        raise ValidationError("expected a list of scalars", name=what)
    return np.array([parse_scalar(t, name=what) for t in tokens], dtype=float)


def _require(obj: Any, kind: type, what: str) -> Any:
    if not isinstance(obj, kind):
        raise ValidationError(f"expected {kind.__name__}", name=what)
    return obj


def _parse_space(raw: Any) -> GroundSpace:
    raw = _require(raw, dict, "space")
    labels = raw.get("labels")
    metric = raw.get("metric", "sup")
    points = raw.get("points")
    try:
        if points is not None:
            rows = _require(points, list, "space.points")
            cfg = PointConfig(
                np.array([_scalars(r if isinstance(r, list) else [r], "space.points") for r in rows])
            )
            if not isinstance(metric, str):
                metric = np.array([_scalars(r, "space.metric") for r in _require(metric, list, "space.metric")])
            return GroundSpace.from_points(cfg, metric, labels)
        if isinstance(metric, str):
            raise ValidationError("the sup metric needs points", name="space")
        dist = np.array([_scalars(r, "space.metric") for r in _require(metric, list, "space.metric")])
        return GroundSpace.from_matrix(dist, labels)
    except ValidationError as exc:
        if exc.name:
            raise
        raise ValidationError(exc.message, name="space") from exc


def parse_document(text: str) -> Document:
    try:
        raw = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"parse error: {exc.msg}", line=exc.lineno, column=exc.colno) from exc
    except ValueError as exc:
        raise DocumentError(f"parse error: {exc}") from exc
    raw = _require(raw, dict, "document")
    if raw.get("version") != VERSION:
        raise ValidationError(f"unsupported version {raw.get('version')!r} (expected {VERSION!r})", name="document")
    unknown = set(raw) - {"version", "space", "measures", "meta_measures"}
    if unknown:
        raise ValidationError(f"unknown keys {sorted(unknown)}", name="document")
    if "space" not in raw:
        raise ValidationError("missing space", name="document")
    space = _parse_space(raw["space"])
    measures = {}
    for name, spec in _require(raw.get("measures", {}), dict, "measures").items():
        what = f"measure {name!r}"
        spec = _require(spec, dict, what)
        try:
            measures[name] = IdempotentMeasure(space, _scalars(spec.get("weights"), what))
        except ValidationError as exc:
            raise ValidationError(exc.message, name=what) from exc
    metas = {}
    for name, spec in _require(raw.get("meta_measures", {}), dict, "meta_measures").items():
        what = f"meta_measure {name!r}"
        spec = _require(spec, dict, what)
        atoms = _require(spec.get("atoms"), list, what)
        if not all(isinstance(a, str) for a in atoms):
            raise ValidationError("atoms must be measure names", name=what)
        metas[name] = (tuple(atoms), _scalars(spec.get("weights"), what))
    return Document(space, measures, metas)


def load_document(source: str | Path | IO[str]) -> Document:
    """Read and fully validate a document from a path or an open text stream."""
    if isinstance(source, (str, Path)):
        try:
            text = Path(source).read_text(encoding="utf-8")
        except OSError as exc:
            raise DocumentError(f"cannot read {source}: {exc.strerror}") from exc
    else:
        text = source.read()
    return parse_document(text)


def space_to_dict(space: GroundSpace) -> dict[str, Any]:
    out: dict[str, Any] = {"labels": list(space.labels)}
    if space.coords is not None:
        pts = space.coords.points
        out["points"] = [[to_token(x) for x in row] for row in pts]
        if np.all(np.isfinite(pts)) and np.array_equal(sup_metric(pts), space.dist):
            out["metric"] = "sup"
            return out
    out["metric"] = [[float(x) for x in row] for row in space.dist]
    return out


def document_to_dict(doc: Document) -> dict[str, Any]:
    return {
        "version": VERSION,
        "space": space_to_dict(doc.space),
        "measures": {k: {"weights": [to_token(x) for x in m.weights]} for k, m in doc.measures.items()},
        "meta_measures": {
            k: {"atoms": list(atoms), "weights": [to_token(x) for x in w]} for k, (atoms, w) in doc.meta_specs.items()
        },
    }


def dump_document(doc: Document) -> str:
    return json.dumps(document_to_dict(doc), indent=2) + "\n"


def round_trip(doc: Document) -> Document:
    return load_document(io.StringIO(dump_document(doc)))
