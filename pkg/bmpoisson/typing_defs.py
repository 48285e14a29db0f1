from __future__ import annotations

from typing import Any, Literal, Mapping, Protocol, TypeGuard, TypedDict, runtime_checkable

import numpy as np

__all__ = [
    "OutputFormat",
    "VerdictName",
    "MultiVectorTerm",
    "MultiVectorJSON",
    "LeafSidecar",
    "GlueReportJSON",
    "DiscrepancyJSON",
    "BivectorField",
    "Reportable",
    "is_multivector_json",
]


# ----------------------------- Tags ------------------------------------------

OutputFormat = Literal["json", "csv", "text"]
VerdictName = Literal["matches", "proportional", "mismatch", "ambiguous"]


# ----------------------------- Interchange formats ---------------------------

class MultiVectorTerm(TypedDict):
    indices: list[int]           # strictly increasing, entries in 1..4
    coeff: str                   # polynomial grammar, e.g. "-1*x1^2 + 1*x2^2"


class MultiVectorJSON(TypedDict):
    grade: int
    terms: list[MultiVectorTerm]


class LeafSidecar(TypedDict, total=False):
    """JSON written next to a traced leaf CSV."""
    model: str | None
    hamiltonians: list[str]
    step: float
    n_steps: int
    casimir_drift: float
    hit_singular_set: bool
    start: list[float]


class GlueReportJSON(TypedDict):
    max_jacobiator: float
    rank_histogram: dict[str, dict[str, int]]
    params: dict[str, Any]


class DiscrepancyJSON(TypedDict):
    location: str
    printed_text: str
    computed: str
    verdict: VerdictName


# ----------------------------- Type guards -----------------------------------

def is_multivector_json(obj: Any) -> TypeGuard[MultiVectorJSON]:
    """Shallow shape check used before handing user JSON to the decoder."""
    if not isinstance(obj, Mapping):
        return False
    if not isinstance(obj.get("grade"), int) or not isinstance(obj.get("terms"), list):
        return False
    return all(
        isinstance(t, Mapping) and isinstance(t.get("indices"), list) and isinstance(t.get("coeff"), str)
        for t in obj["terms"]
    )


# ----------------------------- Protocols -------------------------------------

@runtime_checkable
class BivectorField(Protocol):
    """
    Numeric bivector: maps points of shape ``(..., 4)`` to antisymmetric
    matrices of shape ``(..., 4, 4)``.
    """

    def __call__(self, points: Any) -> np.ndarray:
        ...


@runtime_checkable
class Reportable(Protocol):
    """Anything the CLI can emit in each of the three output formats."""

    def to_json(self) -> Any:
        ...

    def to_rows(self) -> list[list[Any]]:
        ...

    def to_text(self) -> str:
        ...
