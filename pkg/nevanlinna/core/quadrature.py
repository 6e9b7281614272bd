"""Adaptive cubature over boxes in R^d with optional tan compactification.

Every axis of the integration box is mapped either through ``t = tan(theta)`` (unbounded axes
become ``(-pi/2, pi/2)``) or clipped to a finite window. Cells carry an embedded Gauss 7 /
Kronrod 15 tensor rule; the cell with the largest error is bisected along the axis whose
Gauss substitution moves the estimate most. Leaves are summed in subdivision tree order.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cache, reduce
from itertools import product
from typing import Callable, Sequence

import numpy as np

from nevanlinna.core.log import LOGGER

Integrand = Callable[[np.ndarray], np.ndarray]

_XGK = np.array(
    [
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144845693013,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.000000000000000000000000000000000,
    ]
)
_WGK = np.array(
    [
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714,
    ]
)
_WG = np.array(
    [
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327,
    ]
)


class TruncationPolicy(str, Enum):
    COMPACTIFY = "compactify"
    WINDOWED = "windowed"


@dataclass(frozen=True, slots=True)
class QuadratureSpec:
    abs_tol: float = 1e-9
    rel_tol: float = 1e-8
    max_depth: int = 40
    truncation: TruncationPolicy = TruncationPolicy.COMPACTIFY
    window: float = 1e3
    initial_divisions: int = 4
    max_evaluations: int = 4_000_000
    overflow_guard: float = 1e10

    def __post_init__(self) -> None:
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("quadrature tolerances must be positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")
        if self.window <= 0:
            raise ValueError("window must be positive")
        if self.initial_divisions < 1 or self.max_evaluations < 1:
            raise ValueError("initial_divisions and max_evaluations must be positive")

    def tolerance(self, value: complex) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))

    def with_tolerance(self, tol: float) -> QuadratureSpec:
        return replace(self, abs_tol=tol, rel_tol=tol)


@dataclass(frozen=True, slots=True)
class IntegrationResult:
    value: complex
    error: float
    converged: bool
    evaluations: int = 0

    @classmethod
    def exact(cls, value: complex, evaluations: int = 1) -> IntegrationResult:
        converged = bool(np.isfinite(value.real) and np.isfinite(value.imag))
        return cls(complex(value), 0.0 if converged else math.inf, converged, evaluations)

    @classmethod
    def zero(cls) -> IntegrationResult:
        return cls(0j, 0.0, True, 0)

    @property
    def is_finite(self) -> bool:
        return self.converged and math.isfinite(abs(self.value))

    def scaled(self, factor: complex) -> IntegrationResult:
        return IntegrationResult(self.value * factor, self.error * abs(factor), self.converged, self.evaluations)

    def __add__(self, other: IntegrationResult) -> IntegrationResult:
        return IntegrationResult(
            self.value + other.value,
            self.error + other.error,
            self.converged and other.converged,
            self.evaluations + other.evaluations,
        )


@dataclass(frozen=True, slots=True)
class _TensorRule:
    nodes: np.ndarray
    kronrod: np.ndarray
    gauss: np.ndarray
    axis_gauss: np.ndarray


@cache
def _tensor_rule(dimension: int) -> _TensorRule:
    nodes_1d = np.concatenate([-_XGK[:7], [0.0], _XGK[6::-1]])
    kronrod_1d = np.concatenate([_WGK[:7], [_WGK[7]], _WGK[6::-1]])
    gauss_1d = np.zeros(15)
    gauss_1d[[1, 13]] = _WG[0]
    gauss_1d[[3, 11]] = _WG[1]
    gauss_1d[[5, 9]] = _WG[2]
    gauss_1d[7] = _WG[3]

    grids = np.meshgrid(*([nodes_1d] * dimension), indexing="ij")
    nodes = np.stack([grid.ravel() for grid in grids], axis=-1)

    def outer(weights: Sequence[np.ndarray]) -> np.ndarray:
        return np.asarray(reduce(np.multiply.outer, weights)).ravel()

    kronrod = outer([kronrod_1d] * dimension)
    gauss = outer([gauss_1d] * dimension)
    axis_gauss = np.stack(
        [outer([gauss_1d if b == a else kronrod_1d for b in range(dimension)]) for a in range(dimension)]
    )
    return _TensorRule(nodes=nodes, kronrod=kronrod, gauss=gauss, axis_gauss=axis_gauss)


@dataclass(slots=True)
class _Cell:
    lower: np.ndarray
    upper: np.ndarray
    depth: int
    path: tuple[int, ...]
    value: complex = 0j
    error: float = 0.0
    axis_errors: np.ndarray = field(default_factory=lambda: np.zeros(0))


class _SingularIntegrand(Exception):
    def __init__(self, evaluations: int) -> None:
        super().__init__(f"non-finite value after {evaluations} evaluations")
        self.evaluations = evaluations


class QuadratureEngine:
    def __init__(self, spec: QuadratureSpec | None = None) -> None:
        self._spec = spec or QuadratureSpec()

    @property
    def spec(self) -> QuadratureSpec:
        return self._spec

    def integrate_box(
        self,
        integrand: Integrand,
        lower: Sequence[float] | np.ndarray,
        upper: Sequence[float] | np.ndarray,
    ) -> IntegrationResult:
        """Integrate ``integrand`` (points of shape ``(m, d)`` to values ``(m,)``) over a box.

        Bounds may be infinite. With the windowed policy infinite bounds are clipped to
        ``[-window, window]``.
        """
        lo = np.asarray(lower, dtype=float).reshape(-1)
        hi = np.asarray(upper, dtype=float).reshape(-1)
        if lo.shape != hi.shape:
            raise ValueError("lower and upper bounds differ in dimension")
        dimension = lo.size
        if dimension == 0:
            value = complex(np.asarray(integrand(np.zeros((1, 0))), dtype=complex).reshape(-1)[0])
            return IntegrationResult.exact(value)
        if np.any(hi <= lo):
            return IntegrationResult.zero()

        compactify = self._spec.truncation is TruncationPolicy.COMPACTIFY
        if compactify:
            lo, hi = np.arctan(lo), np.arctan(hi)
        else:
            window = self._spec.window
            lo, hi = np.clip(lo, -window, window), np.clip(hi, -window, window)
            if np.any(hi <= lo):
                return IntegrationResult.zero()

        try:
            return self._adapt(integrand, lo, hi, compactify)
        except _SingularIntegrand as exc:
            LOGGER.warning("integrand is not finite on the integration domain: %s", exc)
            return IntegrationResult(complex(math.nan, math.nan), math.inf, False, exc.evaluations)

    def _adapt(self, integrand: Integrand, lo: np.ndarray, hi: np.ndarray, compactify: bool) -> IntegrationResult:
        spec = self._spec
        dimension = lo.size
        rule = _tensor_rule(dimension)
        divisions = spec.initial_divisions if dimension <= 2 else min(spec.initial_divisions, 2)

        edges = [np.linspace(lo[a], hi[a], divisions + 1) for a in range(dimension)]
        cells: list[_Cell] = []
        for index, corner in enumerate(product(range(divisions), repeat=dimension)):
            cell_lo = np.array([edges[a][corner[a]] for a in range(dimension)])
            cell_hi = np.array([edges[a][corner[a] + 1] for a in range(dimension)])
            cells.append(_Cell(cell_lo, cell_hi, depth=0, path=(index,)))

        evaluations = self._evaluate(integrand, rule, cells, compactify, 0)
        live = {id(cell): cell for cell in cells}
        heap = [(-cell.error, order, id(cell)) for order, cell in enumerate(cells)]
        heapq.heapify(heap)
        counter = len(cells)
        total_value = complex(sum(cell.value for cell in cells))
        total_error = float(sum(cell.error for cell in cells))
        frozen_error = 0.0

        while total_error > spec.tolerance(total_value) and heap:
            if evaluations >= spec.max_evaluations:
                LOGGER.debug("quadrature stopped after %d evaluations", evaluations)
                break
            _, _, key = heapq.heappop(heap)
            cell = live[key]
            if cell.depth >= spec.max_depth:
                frozen_error += cell.error
                if frozen_error > spec.tolerance(total_value):
                    LOGGER.debug("quadrature error is stuck at depth %d", spec.max_depth)
                    break
                continue

            if np.any(cell.axis_errors > 0):
                axis = int(np.argmax(cell.axis_errors))
            else:
                axis = int(np.argmax(cell.upper - cell.lower))
            middle = 0.5 * (cell.lower[axis] + cell.upper[axis])
            left_hi, right_lo = cell.upper.copy(), cell.lower.copy()
            left_hi[axis] = middle
            right_lo[axis] = middle
            children = [
                _Cell(cell.lower.copy(), left_hi, cell.depth + 1, cell.path + (0,)),
                _Cell(right_lo, cell.upper.copy(), cell.depth + 1, cell.path + (1,)),
            ]
            evaluations = self._evaluate(integrand, rule, children, compactify, evaluations)

            del live[key]
            total_value += sum(child.value for child in children) - cell.value
            total_error += sum(child.error for child in children) - cell.error
            for child in children:
                live[id(child)] = child
                heapq.heappush(heap, (-child.error, counter, id(child)))
                counter += 1

        leaves = sorted(live.values(), key=lambda c: c.path)
        value = complex(math.fsum(c.value.real for c in leaves), math.fsum(c.value.imag for c in leaves))
        error = math.fsum(c.error for c in leaves)
        converged = error <= spec.tolerance(value)
        if not converged:
            LOGGER.debug("quadrature did not converge: value=%s error=%.3e", value, error)
        return IntegrationResult(value, error, converged, evaluations)

    @staticmethod
    def _evaluate(
        integrand: Integrand,
        rule: _TensorRule,
        cells: list[_Cell],
        compactify: bool,
        evaluations: int,
    ) -> int:
        lower = np.stack([cell.lower for cell in cells])
        upper = np.stack([cell.upper for cell in cells])
        half = 0.5 * (upper - lower)
        middle = 0.5 * (upper + lower)
        count, size, dimension = len(cells), rule.nodes.shape[0], lower.shape[1]

        u = middle[:, None, :] + half[:, None, :] * rule.nodes[None, :, :]
        with np.errstate(all="ignore"):
            if compactify:
                points = np.tan(u)
                jacobian = np.prod(1.0 / np.cos(u) ** 2, axis=-1)
            else:
                points = u
                jacobian = np.ones((count, size))
            raw = np.asarray(integrand(points.reshape(-1, dimension)), dtype=complex).reshape(count, size)
            values = raw * jacobian
        evaluations += count * size
        if not np.all(np.isfinite(values)):
            raise _SingularIntegrand(evaluations)

        volume = np.prod(half, axis=-1)
        kronrod = values @ rule.kronrod
        gauss = values @ rule.gauss
        axis_gauss = values @ rule.axis_gauss.T
        for index, cell in enumerate(cells):
            cell.value = complex(volume[index] * kronrod[index])
            cell.error = float(volume[index] * abs(kronrod[index] - gauss[index]))
            cell.axis_errors = volume[index] * np.abs(kronrod[index] - axis_gauss[index])
        return evaluations
