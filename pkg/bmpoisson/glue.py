"""
Numeric gluing of a local model into a regular rank-2 structure.

On a chart around the singular set the glued bivector is

* ``pi_S`` on the closed inner tube ``r <= r0``,
* ``pi_F`` outside the outer tube ``r >= r1``,
* ``(g*sigma + rho) * pi_F`` in between,

where ``r`` is the distance to the singular set, ``g`` the pointwise ratio
``pi_S = g * pi_F`` and ``sigma``, ``rho = 1 - sigma`` smooth cutoffs. The
Jacobi identity of the result is checked by finite differences on grids.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Sequence

import numpy as np

from .errors import FoliationMismatchError, GlueError
from .models import LocalModel, ModelId, model as lookup_model
from .multivector import MultiVector, matrix_ranks, numeric_field
from .poly import Polynomial, as_polynomial, format_polynomial
from .typing_defs import BivectorField, GlueReportJSON

log = logging.getLogger("bmpoisson.glue")

PROPORTIONALITY_TOL = 1e-8
SINGULAR_EPS = 1e-12
DEFAULT_CHUNK = 4096

PointFn = Callable[[np.ndarray], np.ndarray]


# ---------------------------------------------------------------------- cutoffs
def _psi(x: np.ndarray) -> np.ndarray:
    """``exp(-1/x)`` for ``x > 0``, else 0."""
    x = np.asarray(x, dtype=float)
    positive = x > 0.0
    safe = np.where(positive, x, 1.0)
    return np.where(positive, np.exp(-1.0 / safe), 0.0)


def smooth_bump(r0: float, r1: float) -> Callable[[Any], Any]:
    """C-infinity radial cutoff: 1 on ``r <= r0``, 0 on ``r >= r1``, monotone between."""
    if not 0 < r0 < r1:
        raise GlueError(f"smooth_bump needs 0 < r0 < r1, got r0={r0}, r1={r1}")
    width = r1 - r0

    def bump(r: Any) -> Any:
        s = (r1 - np.asarray(r, dtype=float)) / width
        a, b = _psi(s), _psi(1.0 - s)
        value = a / (a + b)
        return float(value) if np.ndim(value) == 0 else value

    return bump


class RegionLabel(str, enum.Enum):
    V_S = "V_S"
    U_S = "U_S"
    W = "W"


class PointClass(str, enum.Enum):
    SINGULAR = "singular"
    V_S = "V_S"
    OVERLAP = "overlap"
    EXTERIOR = "exterior"


@dataclass(frozen=True)
class Region:
    label: RegionLabel
    predicate: PointFn

    def contains(self, points: Any) -> np.ndarray:
        return np.asarray(self.predicate(np.asarray(points, dtype=float)), dtype=bool)


@dataclass(frozen=True)
class Cutoff:
    sigma: PointFn
    rho: PointFn


def tube_regions(distance: PointFn, r0: float, r1: float, eps: float) -> dict[RegionLabel, Region]:
    return {
        RegionLabel.V_S: Region(RegionLabel.V_S, lambda p: distance(p) < r0),
        RegionLabel.U_S: Region(RegionLabel.U_S, lambda p: distance(p) < r1),
        RegionLabel.W: Region(RegionLabel.W, lambda p: distance(p) > r0 * (1.0 - eps)),
    }


def tube_cutoff(distance: PointFn, r0: float, r1: float) -> Cutoff:
    bump = smooth_bump(r0, r1)
    return Cutoff(
        sigma=lambda p: np.asarray(bump(distance(p)), dtype=float),
        rho=lambda p: 1.0 - np.asarray(bump(distance(p)), dtype=float),
    )


# ---------------------------------------------------------------------- transition
def _ratio(s: np.ndarray, f: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Least-squares ``g`` with ``s ~ g * f`` and the relative residual, over leading axes."""
    num = np.sum(s * f, axis=(-2, -1))
    den = np.sum(f * f, axis=(-2, -1))
    degenerate = den == 0.0
    g = num / np.where(degenerate, 1.0, den)
    resid = np.linalg.norm(s - g[..., None, None] * f, axis=(-2, -1)) / (
        1.0 + np.linalg.norm(s, axis=(-2, -1))
    )
    resid = np.where(degenerate, np.inf, resid)
    return g, resid


def _as_field(pi: "MultiVector | BivectorField") -> BivectorField:
    return numeric_field(pi) if isinstance(pi, MultiVector) else pi


def transition_g(
    pi_S: "MultiVector | BivectorField",
    pi_F: "MultiVector | BivectorField",
    point: Sequence[float],
    *,
    tol: float = PROPORTIONALITY_TOL,
) -> float:
    p = np.asarray(point, dtype=float)
    s = np.asarray(_as_field(pi_S)(p), dtype=float)
    f = np.asarray(_as_field(pi_F)(p), dtype=float)
    g, resid = _ratio(s, f)
    if not float(resid) <= tol:
        raise FoliationMismatchError(point=tuple(map(float, p)), residual=float(resid))
    return float(g)


# ---------------------------------------------------------------------- glued structure
@dataclass(frozen=True)
class GluedStructure:
    model: LocalModel
    pi_S: MultiVector
    pi_F: BivectorField
    regions: Mapping[RegionLabel, Region]
    cutoffs: Cutoff
    r0: float
    r1: float
    eps: float
    flipped_singular_part: bool = False
    strict: bool = True
    params: Mapping[str, Any] = field(default_factory=dict)

    def distance(self, points: Any) -> np.ndarray:
        return self.model.singular_distance(points)

    def singular_field(self, points: Any) -> np.ndarray:
        return numeric_field(self.pi_S)(points)

    def g(self, points: Any) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        s = self.singular_field(pts)
        f = np.asarray(self.pi_F(pts), dtype=float)
        return self._checked_ratio(pts, s, f)

    def _checked_ratio(self, pts: np.ndarray, s: np.ndarray, f: np.ndarray) -> np.ndarray:
        g, resid = _ratio(s, f)
        if self.strict and np.size(resid) and not np.all(resid <= PROPORTIONALITY_TOL):
            flat = np.reshape(resid, -1)
            worst = int(np.argmax(np.where(np.isfinite(flat), flat, np.finfo(float).max)))
            point = np.reshape(pts, (-1, 4))[worst]
            raise FoliationMismatchError(point=tuple(map(float, point)), residual=float(flat[worst]))
        return g

    def label_points(self, points: Any) -> np.ndarray:
        r = self.distance(points)
        return np.select(
            [r <= SINGULAR_EPS, r <= self.r0, r < self.r1],
            [PointClass.SINGULAR.value, PointClass.V_S.value, PointClass.OVERLAP.value],
            default=PointClass.EXTERIOR.value,
        )


def build_glued_structure(
    m: "str | ModelId | LocalModel",
    *,
    k_s: Any = "1",
    kappa: Any = "2 + x1^2",
    pi_F: "MultiVector | BivectorField | None" = None,
    r0: float = 0.5,
    r1: float = 1.0,
    eps: float = 0.1,
    cutoff: Cutoff | None = None,
    strict: bool = True,
) -> GluedStructure:
    """
    Glue ``k_s * normal_form`` into ``pi_F`` (default ``kappa * normal_form``).

    When the transition ratio is negative the singular part is replaced by
    its negative so that ``g > 0`` on the overlap.
    """
    lm = m if isinstance(m, LocalModel) else lookup_model(m)
    if not 0 < r0 < r1:
        raise GlueError(f"tubes need 0 < r0 < r1, got r0={r0}, r1={r1}")
    if not 0 <= eps < 1:
        raise GlueError(f"eps must lie in [0, 1), got {eps}")
    k_poly = as_polynomial(k_s)
    pi_S = lm.conformal(k_poly)
    if pi_F is None:
        kappa_poly: Polynomial | None = as_polynomial(kappa)
        field_F = numeric_field(lm.conformal(kappa_poly))
    else:
        kappa_poly = None
        field_F = _as_field(pi_F)
    distance = lm.singular_distance
    regions = tube_regions(distance, r0, r1, eps)
    cutoffs = cutoff or tube_cutoff(distance, r0, r1)

    probe = np.array([(r0 + r1) / 2.0, 0.0, 0.0, 0.0])
    g_probe, resid = _ratio(numeric_field(pi_S)(probe), np.asarray(field_F(probe), dtype=float))
    if strict and not float(resid) <= PROPORTIONALITY_TOL:
        raise FoliationMismatchError(point=tuple(map(float, probe)), residual=float(resid))
    flipped = bool(g_probe < 0)
    if flipped:
        log.info("%s: transition ratio negative, using -pi_S", lm.code)
        pi_S = -pi_S

    params = {
        "model": lm.code,
        "k_s": format_polynomial(k_poly),
        "kappa": format_polynomial(kappa_poly) if kappa_poly is not None else None,
        "r0": r0,
        "r1": r1,
        "eps": eps,
        "flipped_singular_part": flipped,
    }
    return GluedStructure(
        model=lm,
        pi_S=pi_S,
        pi_F=field_F,
        regions=regions,
        cutoffs=cutoffs,
        r0=r0,
        r1=r1,
        eps=eps,
        flipped_singular_part=flipped,
        strict=strict,
        params=params,
    )


def glue(gs: GluedStructure, points: Any) -> np.ndarray:
    """Evaluate the glued bivector; ``(..., 4)`` points give ``(..., 4, 4)`` matrices."""
    pts = np.asarray(points, dtype=float)
    r = gs.distance(pts)
    s = gs.singular_field(pts)
    f = np.asarray(gs.pi_F(pts), dtype=float)
    inner = r <= gs.r0
    outer = r >= gs.r1
    mid = ~(inner | outer)
    out = np.where(inner[..., None, None], s, f)
    if np.any(mid):
        pm = pts[mid]
        g = gs._checked_ratio(pm, s[mid], f[mid])
        weight = g * np.asarray(gs.cutoffs.sigma(pm)) + np.asarray(gs.cutoffs.rho(pm))
        out[mid] = weight[..., None, None] * f[mid]
    return out


def interpolation_weight(gs: GluedStructure, points: Any) -> np.ndarray:
    """``g*sigma + rho``; every point must be off the singular set."""
    pts = np.asarray(points, dtype=float)
    return gs.g(pts) * np.asarray(gs.cutoffs.sigma(pts)) + np.asarray(gs.cutoffs.rho(pts))


# ---------------------------------------------------------------------- grids
@dataclass(frozen=True)
class AxisSpec:
    lo: float
    hi: float
    n: int

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n)


@dataclass(frozen=True)
class GridSpec:
    axes: tuple[AxisSpec, AxisSpec, AxisSpec, AxisSpec]

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """``lo:hi:n`` for every axis, or four comma-separated axis specs."""
        parts = [p.strip() for p in str(text).split(",")]
        if len(parts) == 1:
            parts = parts * 4
        if len(parts) != 4:
            raise GlueError(f"grid spec needs 1 or 4 axis specs, got {len(parts)}: {text!r}")
        axes = []
        for part in parts:
            fields = part.split(":")
            if len(fields) != 3:
                raise GlueError(f"malformed grid axis {part!r}; expected lo:hi:n")
            try:
                lo, hi, n = float(fields[0]), float(fields[1]), int(fields[2])
            except ValueError as exc:
                raise GlueError(f"malformed grid axis {part!r}: {exc}") from exc
            if n < 1 or (n > 1 and not lo < hi):
                raise GlueError(f"grid axis {part!r} needs n >= 1 and lo < hi")
            axes.append(AxisSpec(lo, hi, n))
        return cls(tuple(axes))  # type: ignore[arg-type]

    @property
    def size(self) -> int:
        return int(np.prod([a.n for a in self.axes]))

    def points(self) -> np.ndarray:
        mesh = np.meshgrid(*(a.values() for a in self.axes), indexing="ij")
        return np.stack(mesh, axis=-1).reshape(-1, 4)

    def __str__(self) -> str:
        specs = {f"{a.lo:g}:{a.hi:g}:{a.n}" for a in self.axes}
        if len(specs) == 1:
            return specs.pop()
        return ",".join(f"{a.lo:g}:{a.hi:g}:{a.n}" for a in self.axes)


# Central-difference stencils: (offset in units of h, weight); divide by h.
_STENCILS = {
    2: ((-1, -0.5), (1, 0.5)),
    4: ((-2, 1 / 12), (-1, -8 / 12), (1, 8 / 12), (2, -1 / 12)),
}


def _evaluator(target: "GluedStructure | MultiVector | BivectorField") -> BivectorField:
    if isinstance(target, GluedStructure):
        return lambda pts: glue(target, pts)
    return _as_field(target)


def jacobiator_at(
    target: "GluedStructure | MultiVector | BivectorField",
    points: Any,
    *,
    h: float = 1e-4,
    order: int = 4,
) -> np.ndarray:
    """
    Largest component of ``J^{ijk} = sum_l (P^{li} d_l P^{jk} + P^{lj} d_l P^{ki} + P^{lk} d_l P^{ij})``
    at each point, with finite-difference derivatives.
    """
    if h <= 0:
        raise GlueError("finite-difference spacing h must be positive")
    try:
        stencil = _STENCILS[order]
    except KeyError:
        raise GlueError(f"unsupported stencil order {order}; use 2 or 4") from None
    fn = _evaluator(target)
    pts = np.asarray(points, dtype=float).reshape(-1, 4)
    P = np.asarray(fn(pts), dtype=float)
    D = np.zeros((pts.shape[0], 4, 4, 4))
    for axis in range(4):
        shift = np.zeros(4)
        shift[axis] = h
        for offset, weight in stencil:
            D[:, axis] += weight * np.asarray(fn(pts + offset * shift), dtype=float)
    D /= h
    T = np.einsum("nli,nljk->nijk", P, D)
    J = T + np.transpose(T, (0, 3, 1, 2)) + np.transpose(T, (0, 2, 3, 1))
    return np.max(np.abs(J), axis=(1, 2, 3))


def _distance_for(target: Any) -> PointFn | None:
    return target.distance if isinstance(target, GluedStructure) else None


def jacobiator_grid(
    target: "GluedStructure | MultiVector | BivectorField",
    grid: "GridSpec | str",
    *,
    h: float = 1e-4,
    order: int = 4,
    exclude: float = 1e-3,
    chunk: int = DEFAULT_CHUNK,
) -> float:
    """Max finite-difference Jacobiator over the grid, skipping points within *exclude* of the singular set."""
    spec = GridSpec.parse(grid) if isinstance(grid, str) else grid
    pts = spec.points()
    distance = _distance_for(target)
    if distance is not None and exclude > 0:
        pts = pts[distance(pts) >= exclude]
    worst = 0.0
    for start in range(0, pts.shape[0], chunk):
        block = jacobiator_at(target, pts[start:start + chunk], h=h, order=order)
        if block.size:
            worst = max(worst, float(np.max(block)))
    log.info("jacobiator over %d points (h=%g, order=%d): %.3e", pts.shape[0], h, order, worst)
    return worst


def rank_profile(
    target: "GluedStructure | MultiVector | BivectorField",
    grid: "GridSpec | str",
    *,
    labels: PointFn | None = None,
    chunk: int = DEFAULT_CHUNK,
) -> dict[str, dict[int, int]]:
    """Rank histogram per point class (``singular``, ``V_S``, ``overlap``, ``exterior``)."""
    spec = GridSpec.parse(grid) if isinstance(grid, str) else grid
    pts = spec.points()
    fn = _evaluator(target)
    if labels is None:
        if isinstance(target, GluedStructure):
            labels = target.label_points
        else:
            labels = lambda p: np.full(p.shape[:-1], "all")
    histogram: dict[str, dict[int, int]] = {}
    for start in range(0, pts.shape[0], chunk):
        block = pts[start:start + chunk]
        ranks = matrix_ranks(fn(block))
        for label, rank in zip(labels(block), ranks):
            bucket = histogram.setdefault(str(label), {})
            bucket[int(rank)] = bucket.get(int(rank), 0) + 1
    return histogram


# ---------------------------------------------------------------------- report
@dataclass
class GlueReport:
    max_jacobiator: float
    rank_histogram: dict[str, dict[int, int]]
    params: dict[str, Any]

    def to_json(self) -> GlueReportJSON:
        return {
            "max_jacobiator": self.max_jacobiator,
            "rank_histogram": {
                label: {str(rank): count for rank, count in sorted(bucket.items())}
                for label, bucket in sorted(self.rank_histogram.items())
            },
            "params": dict(self.params),
        }

    def to_rows(self) -> list[list[Any]]:
        rows: list[list[Any]] = [["bucket", "rank", "count"]]
        for label, bucket in sorted(self.rank_histogram.items()):
            for rank, count in sorted(bucket.items()):
                rows.append([label, rank, count])
        return rows

    def to_text(self) -> str:
        lines = [f"max jacobiator: {self.max_jacobiator:.3e}"]
        for key in sorted(self.params):
            lines.append(f"  {key} = {self.params[key]}")
        lines.append("rank histogram:")
        for label, bucket in sorted(self.rank_histogram.items()):
            counts = ", ".join(f"rank {r}: {c}" for r, c in sorted(bucket.items()))
            lines.append(f"  {label:<9} {counts}")
        return "\n".join(lines)


def glue_report(
    gs: GluedStructure,
    grid: "GridSpec | str",
    *,
    h: float = 1e-4,
    order: int = 4,
    exclude: float = 1e-3,
) -> GlueReport:
    spec = GridSpec.parse(grid) if isinstance(grid, str) else grid
    params = dict(gs.params)
    params.update({"grid": str(spec), "h": h, "order": order, "exclude": exclude})
    return GlueReport(
        max_jacobiator=jacobiator_grid(gs, spec, h=h, order=order, exclude=exclude),
        rank_histogram=rank_profile(gs, spec),
        params=params,
    )
