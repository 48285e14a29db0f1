"""
Leaf-level symplectic data.

* transcribed tangent frames ``(u, v)`` to the Casimir level sets, their
  validity residuals and a sign-repaired variant;
* the induced leaf form ``omega(u, v) = <alpha, v>`` with ``B(alpha) = u``;
* leaf tracing by fixed-step RK4 along Hamiltonian vector fields.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import LeafGeometryError, NotTangentError, SingularPointError
from .models import LocalModel, ModelId, model as lookup_model
from .multivector import MultiVector, matrix_ranks, numeric_field
from .poly import Polynomial, as_polynomial, format_polynomial
from .typing_defs import BivectorField, LeafSidecar

log = logging.getLogger("bmpoisson.leaves")

Point = tuple[float, float, float, float]

FRAME_TOL = 1e-10
TANGENT_TOL = 1e-8
SINGULAR_RADIUS = 1e-6

# Probe for the sign repair; generic enough that no component vanishes.
_PROBE = (0.3, 0.7, 0.5, 0.0)


def _as_point(point: Sequence[float]) -> np.ndarray:
    p = np.asarray(point, dtype=float)
    if p.shape != (4,):
        raise ValueError(f"a point has 4 coordinates, got shape {p.shape}")
    return p


# ---------------------------------------------------------------------- frames
@dataclass(frozen=True)
class _FrameRow:
    """
    ``u = (su1*x2, su2*x1, 0, 0) / rho`` and
    ``v = (sv1*x1^2*x3 / rho^2, sv2*x1*x2*x3 / rho^2, x1, 0)``;
    dim-1 rows have no horizontal part in ``v``.
    """

    u_signs: tuple[int, int]
    v_signs: tuple[int, int]

    def evaluate(self, p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        x1, x2, x3 = p[0], p[1], p[2]
        rho2 = x1 * x1 + x2 * x2
        rho = np.sqrt(rho2)
        u = np.array([self.u_signs[0] * x2, self.u_signs[1] * x1, 0.0, 0.0]) / rho
        v = np.array(
            [self.v_signs[0] * x1 * x1 * x3 / rho2, self.v_signs[1] * x1 * x2 * x3 / rho2, x1, 0.0]
        )
        return u, v

    def describe(self) -> tuple[str, str]:
        """Text of ``u`` and ``v`` in the package's multivector notation."""
        u = f"({_signed(self.u_signs[0], 'x2*d1', lead=True)} {_signed(self.u_signs[1], 'x1*d2')}) / rho"
        if self.v_signs == (0, 0):
            return u, "x1*d3"
        horizontal = (
            f"({_signed(self.v_signs[0], 'x1^2*x3*d1', lead=True)} {_signed(self.v_signs[1], 'x1*x2*x3*d2')}) / rho^2"
        )
        return u, f"{horizontal} + x1*d3"


def _signed(sign: int, body: str, *, lead: bool = False) -> str:
    if lead:
        return body if sign > 0 else f"-{body}"
    return f"+ {body}" if sign > 0 else f"- {body}"


_FRAME_ROWS: dict[str, _FrameRow] = {
    "c0-i0": _FrameRow((-1, 1), (-1, -1)),
    "c0-i3": _FrameRow((-1, 1), (-1, -1)),
    "s0-i1": _FrameRow((1, 1), (-1, 1)),
    "s0-i2": _FrameRow((-1, 1), (-1, -1)),
    "c1-i0": _FrameRow((-1, 1), (0, 0)),
    "c1-i2": _FrameRow((-1, 1), (0, 0)),
    "s1-i1": _FrameRow((1, 1), (0, 0)),
}


@dataclass(frozen=True)
class LeafFrame:
    u: Point
    v: Point
    point: Point

    def as_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return np.asarray(self.u), np.asarray(self.v)


@dataclass(frozen=True)
class FrameValidity:
    """Largest annihilation residual and the orthogonality residual of a frame."""

    annihilation: float
    orthogonality: float

    def ok(self, tol: float = FRAME_TOL) -> bool:
        return self.annihilation <= tol and self.orthogonality <= tol


def _resolve(m: "str | ModelId | LocalModel") -> LocalModel:
    return m if isinstance(m, LocalModel) else lookup_model(m)


def _check_off_axis(p: np.ndarray) -> None:
    if p[0] * p[0] + p[1] * p[1] == 0.0:
        raise LeafGeometryError("frame undefined on axis")


def _make_frame(row: _FrameRow, p: np.ndarray) -> LeafFrame:
    u, v = row.evaluate(p)
    return LeafFrame(tuple(map(float, u)), tuple(map(float, v)), tuple(map(float, p)))


def _validity(lm: LocalModel, frame: LeafFrame) -> FrameValidity:
    p = frame.point
    u, v = frame.as_arrays()
    worst = 0.0
    for dc in lm.differentials():
        grad = np.array([c.evaluate(p) for c in dc.components])
        scale = 1.0 + float(np.linalg.norm(grad))
        worst = max(worst, abs(float(grad @ u)) / scale, abs(float(grad @ v)) / scale)
    return FrameValidity(worst, abs(float(u @ v)))


def leaf_frame(m: "str | ModelId | LocalModel", point: Sequence[float]) -> LeafFrame:
    """The transcribed ``(u, v)`` pair for the model's row, evaluated at *point*."""
    lm = _resolve(m)
    p = _as_point(point)
    _check_off_axis(p)
    return _make_frame(_FRAME_ROWS[lm.code], p)


def frame_validity(
    m: "str | ModelId | LocalModel", point: Sequence[float], *, repaired: bool = False
) -> FrameValidity:
    lm = _resolve(m)
    frame = corrected_frame(lm, point) if repaired else leaf_frame(lm, point)
    return _validity(lm, frame)


@lru_cache(maxsize=None)
def _repaired_row(code: str) -> tuple[_FrameRow, bool]:
    """Transcribed row, or the one with fewest flipped signs that passes at the probe."""
    lm = lookup_model(code)
    row = _FRAME_ROWS[code]
    p = np.asarray(_PROBE)
    candidates = []
    for flips in itertools.product((1, -1), repeat=4):
        cand = _FrameRow(
            (row.u_signs[0] * flips[0], row.u_signs[1] * flips[1]),
            (row.v_signs[0] * flips[2], row.v_signs[1] * flips[3]),
        )
        candidates.append((sum(f < 0 for f in flips), flips, cand))
    for _, flips, cand in sorted(candidates, key=lambda c: (c[0], [-f for f in c[1]])):
        if _validity(lm, _make_frame(cand, p)).ok():
            repaired = cand != row
            if repaired:
                log.debug("%s: transcribed frame repaired to %s", code, cand)
            return cand, repaired
    raise LeafGeometryError(f"{code}: no sign repair yields a tangent orthogonal frame")


def corrected_frame(m: "str | ModelId | LocalModel", point: Sequence[float]) -> LeafFrame:
    """Like :func:`leaf_frame`, with the minimal sign repair applied where the transcription fails."""
    lm = _resolve(m)
    p = _as_point(point)
    _check_off_axis(p)
    row, _ = _repaired_row(lm.code)
    return _make_frame(row, p)


def frame_needs_repair(m: "str | ModelId | LocalModel") -> bool:
    return _repaired_row(_resolve(m).code)[1]


def frame_text(m: "str | ModelId | LocalModel", *, repaired: bool = False) -> tuple[str, str]:
    code = _resolve(m).code
    row = _repaired_row(code)[0] if repaired else _FRAME_ROWS[code]
    return row.describe()


# ---------------------------------------------------------------------- leaf form
def _matrix_at(pi: "MultiVector | BivectorField", p: np.ndarray) -> np.ndarray:
    field_fn = numeric_field(pi) if isinstance(pi, MultiVector) else pi
    return np.asarray(field_fn(p), dtype=float)


def _solve_bundle(m: np.ndarray, w: np.ndarray, name: str, tol: float) -> np.ndarray:
    """Minimum-norm ``alpha`` with ``B(alpha) = w``; ``B`` acts as ``m @ alpha``."""
    alpha, *_ = np.linalg.lstsq(m, w, rcond=None)
    residual = float(np.linalg.norm(m @ alpha - w))
    if residual > tol * (1.0 + float(np.linalg.norm(w))):
        raise NotTangentError(vector_name=name, residual=residual, tolerance=tol)
    return alpha


def _prepared(pi, point, u, v) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    p = _as_point(point)
    m = _matrix_at(pi, p)
    if int(matrix_ranks(m)) == 0:
        raise SingularPointError(f"singular point {tuple(map(float, p))}")
    return m, np.asarray(u, dtype=float), np.asarray(v, dtype=float)


def symplectic_eval(
    pi: "MultiVector | BivectorField",
    point: Sequence[float],
    u: Sequence[float],
    v: Sequence[float],
    *,
    tol: float = TANGENT_TOL,
) -> float:
    """``omega(u, v) = <alpha, v>`` where ``B(alpha) = u`` (minimum-norm solve)."""
    m, uu, vv = _prepared(pi, point, u, v)
    alpha = _solve_bundle(m, uu, "u", tol)
    _solve_bundle(m, vv, "v", tol)
    return float(alpha @ vv)


def symplectic_eval_dual(
    pi: "MultiVector | BivectorField",
    point: Sequence[float],
    u: Sequence[float],
    v: Sequence[float],
    *,
    tol: float = TANGENT_TOL,
) -> float:
    """``omega(u, v) = -<beta, u>`` where ``B(beta) = v``."""
    m, uu, vv = _prepared(pi, point, u, v)
    _solve_bundle(m, uu, "u", tol)
    beta = _solve_bundle(m, vv, "v", tol)
    return float(-(beta @ uu))


def leaf_density(point: Sequence[float], k_value: float) -> float:
    """``x1 / (k * sqrt(x1^2 + x2^2))``."""
    p = _as_point(point)
    _check_off_axis(p)
    if k_value == 0:
        raise LeafGeometryError("conformal factor k must be nonzero")
    return float(p[0] / (k_value * np.hypot(p[0], p[1])))


def proposition_form(m: "str | ModelId | LocalModel", k_value: float, point: Sequence[float]) -> float:
    """``leaf_density * |u| |v|`` on the transcribed frame: the density times the area form."""
    frame = leaf_frame(m, point)
    u, v = frame.as_arrays()
    return leaf_density(point, k_value) * float(np.linalg.norm(u) * np.linalg.norm(v))


# ---------------------------------------------------------------------- tracing
@dataclass
class LeafSample:
    points: list[Point]
    casimir_drift: float
    model: ModelId | None
    hamiltonians: list[str] = field(default_factory=list)
    step: float = 0.0
    n_steps: int = 0
    hit_singular_set: bool = False

    @property
    def start(self) -> Point:
        return self.points[0]

    def max_radius(self) -> float:
        return float(np.max(np.linalg.norm(np.asarray(self.points)[:, :3], axis=1)))

    def sidecar(self) -> LeafSidecar:
        return {
            "model": self.model.code if self.model else None,
            "hamiltonians": list(self.hamiltonians),
            "step": self.step,
            "n_steps": self.n_steps,
            "casimir_drift": self.casimir_drift,
            "hit_singular_set": self.hit_singular_set,
            "start": list(self.start),
        }


def _gradient_fn(h: Polynomial) -> Callable[[np.ndarray], np.ndarray]:
    grad = h.gradient()

    def fn(p: np.ndarray) -> np.ndarray:
        return np.array([g.evaluate(p) for g in grad])

    return fn


def _rk4_step(f: Callable[[np.ndarray], np.ndarray], y: np.ndarray, dt: float) -> np.ndarray:
    k1 = dt * f(y)
    k2 = dt * f(y + 0.5 * k1)
    k3 = dt * f(y + 0.5 * k2)
    k4 = dt * f(y + k3)
    return y + (k1 / 6 + k2 / 3 + k3 / 3 + k4 / 6)


def trace_leaf(
    pi: "MultiVector | BivectorField",
    start: Sequence[float],
    hamiltonians: Sequence["Polynomial | str"],
    step: float,
    n_steps: int,
    *,
    model: "str | ModelId | LocalModel | None" = None,
    casimirs: Sequence[Polynomial] | None = None,
    singular_radius: float = SINGULAR_RADIUS,
) -> LeafSample:
    """
    Integrate ``X_h = B(dh)`` with fixed-step RK4 for each ``h`` in turn.

    The trajectories are concatenated. With a model, the singular set is the
    model's and its Casimir ``C1`` measures drift; without one, a point counts
    as singular when the evaluated matrix has norm below ``singular_radius``.
    """
    if step <= 0:
        raise LeafGeometryError("step must be positive")
    if n_steps < 0:
        raise LeafGeometryError("n_steps must be non-negative")
    lm = _resolve(model) if model is not None else None
    field_fn = numeric_field(pi) if isinstance(pi, MultiVector) else pi
    hs = [as_polynomial(h) for h in hamiltonians]
    if casimirs is None:
        casimirs = [lm.casimirs[0]] if lm else []

    def near_singular(p: np.ndarray) -> bool:
        if lm is not None:
            return float(lm.singular_distance(p)) < singular_radius
        return float(np.linalg.norm(field_fn(p))) < singular_radius

    y = _as_point(start)
    if near_singular(y):
        raise SingularPointError(f"singular point: trace cannot start at {tuple(map(float, y))}")

    c0 = [c.evaluate(y) for c in casimirs]
    points: list[Point] = [tuple(map(float, y))]
    drift = 0.0
    hit = False
    for h in hs:
        grad = _gradient_fn(h)

        def rhs(p: np.ndarray, grad=grad) -> np.ndarray:
            return np.asarray(field_fn(p), dtype=float) @ grad(p)

        for _ in range(n_steps):
            y = _rk4_step(rhs, y, step)
            if near_singular(y):
                hit = True
                log.info("trace stopped: hit singular set after %d points", len(points))
                break
            points.append(tuple(map(float, y)))
            for c, ref in zip(casimirs, c0):
                drift = max(drift, abs(c.evaluate(y) - ref))
        if hit:
            break
    log.debug("traced %d points, drift %.3e", len(points), drift)
    return LeafSample(
        points=points,
        casimir_drift=float(drift),
        model=lm.id if lm else None,
        hamiltonians=[format_polynomial(h) for h in hs],
        step=float(step),
        n_steps=int(n_steps),
        hit_singular_set=hit,
    )
