"""Idempotent measures on finite metric spaces and tropical polytopes.

The modules mirror the layers of the calculus: ``maxplus`` (scalars),
``space`` (tropical convex hulls), ``measure`` (idempotent measures),
``metric`` (the d_n / d_I distances), ``barycenter`` and ``bundlecheck``
(the explicit deformations and their checker).
"""

from __future__ import annotations

from .barycenter import EmbeddedSpace, barycenter_meta, fiber_witness
from .bundlecheck import TWReport, tw_verify
from .document import Document, load_document
from .errors import DocumentError, TropibaryError, ValidationError
from .maxplus import NEG_INF, JPair, odot, oplus
from .measure import GroundSpace, IdempotentMeasure, MetaMeasure, dirac, evaluate, pushforward
from .metric import DistanceResult, dI, dn_exact
from .space import PointConfig, TropicalHull, extremal_witness, hull_membership

__all__ = [
    "NEG_INF", "JPair", "oplus", "odot",
    "PointConfig", "TropicalHull", "hull_membership", "extremal_witness",
    "GroundSpace", "IdempotentMeasure", "MetaMeasure", "dirac", "evaluate", "pushforward",
    "DistanceResult", "dn_exact", "dI",
    "EmbeddedSpace", "barycenter_meta", "fiber_witness",
    "TWReport", "tw_verify",
    "Document", "load_document",
    "TropibaryError", "ValidationError", "DocumentError",
]
