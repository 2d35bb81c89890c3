"""
Взвешенный метод наименьших квадратов для многочленов на выборках.

Строки системы - ограничения групп (значение или производная порядка a
в точке выборки), столбцы - мономы носителя после аффинного
масштабирования осей z_i → (z_i − c_i)/r_i. Столбцы нормируются,
регуляризация Тихонова добавляется строками λ_r·I.

Опционально многочлен ищется в виде (z_k − μ)^m · q(z) (множитель
носителя): производные такого произведения считаются по формуле Лейбница.
"""

import logging
from dataclasses import dataclass, field
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..config.settings import ApproximationSettings
from ..core.exceptions import DimensionError, PreconditionError, ValidationError
from ..series.enumerations import MultiIndex
from ..series.polynomial import MultiPolynomial

logger = logging.getLogger(__name__)


def _falling(n: int, k: int) -> int:
    """Убывающий факториал n(n−1)…(n−k+1); 0 при k > n."""
    if k > n:
        return 0
    result = 1
    for j in range(k):
        result *= n - j
    return result


@dataclass(frozen=True)
class AxisScaling:
    """Аффинное отображение осей u_i = (z_i − c_i)/r_i."""

    centers: Tuple[complex, ...]
    radii: Tuple[float, ...]

    @classmethod
    def enclosing(cls, points: np.ndarray) -> "AxisScaling":
        """Диски, охватывающие проекции точек на каждую ось."""
        points = np.asarray(points, dtype=complex)
        centers, radii = [], []
        for axis in range(points.shape[1]):
            column = points[:, axis]
            c = complex(
                (column.real.min() + column.real.max()) / 2.0,
                (column.imag.min() + column.imag.max()) / 2.0,
            )
            r = float(np.abs(column - c).max())
            centers.append(c)
            radii.append(r if r > 0 else 1.0)
        return cls(tuple(centers), tuple(radii))


@dataclass(frozen=True)
class SupportMultiplier:
    """Множитель (z_axis − center)^power, axis 0-based."""

    axis: int
    center: complex
    power: int

    def __post_init__(self):
        if self.power < 0:
            raise ValidationError("multiplier.power", f"степень должна быть ≥ 0, получено {self.power}")


@dataclass(eq=False)
class ConstraintGroup:
    """
    Группа ограничений: значения ∂^order цели в точках подгонки и валидации.

    Ошибка группы в отчёте - sup |∂^order P − значение| по валидационным
    точкам без весов.
    """

    label: str
    fit_points: np.ndarray
    fit_values: np.ndarray
    validation_points: np.ndarray
    validation_values: np.ndarray
    weight: float = 1.0
    order: Optional[MultiIndex] = None

    def __post_init__(self):
        self.fit_points = np.asarray(self.fit_points, dtype=complex)
        self.validation_points = np.asarray(self.validation_points, dtype=complex)
        dimension = self.fit_points.shape[1]
        self.fit_points = self.fit_points.reshape(-1, dimension)
        self.validation_points = self.validation_points.reshape(-1, dimension)
        self.fit_values = np.asarray(self.fit_values, dtype=complex).reshape(-1)
        self.validation_values = np.asarray(self.validation_values, dtype=complex).reshape(-1)
        if self.order is None:
            self.order = (0,) * dimension
        self.order = tuple(int(x) for x in self.order)

        if len(self.fit_values) != len(self.fit_points):
            raise ValidationError(
                f"group.{self.label}", f"{len(self.fit_points)} точек, но {len(self.fit_values)} значений"
            )
        if len(self.validation_values) != len(self.validation_points):
            raise ValidationError(f"group.{self.label}", "число валидационных значений не совпадает")
        if len(self.order) != dimension:
            raise DimensionError(f"group.{self.label}.order", f"порядок {self.order} не длины {dimension}")
        if not self.weight > 0:
            raise ValidationError(f"group.{self.label}.weight", "вес должен быть > 0")

    @property
    def dimension(self) -> int:
        return self.fit_points.shape[1]

    @classmethod
    def from_target(
        cls,
        label: str,
        target,
        fit_points: np.ndarray,
        validation_points: np.ndarray,
        weight: float = 1.0,
        order: Optional[MultiIndex] = None,
    ) -> "ConstraintGroup":
        """Группа со значениями цели, вычисленными в точках."""
        return cls(
            label=label,
            fit_points=fit_points,
            fit_values=target.values(fit_points, order),
            validation_points=validation_points,
            validation_values=target.values(validation_points, order),
            weight=weight,
            order=order,
        )


@dataclass
class FitTask:
    """Задача подгонки многочлена по группам ограничений."""

    groups: List[ConstraintGroup]
    support: List[MultiIndex]
    ridge: float = ApproximationSettings.RIDGE
    scaling: Optional[AxisScaling] = None
    multiplier: Optional[SupportMultiplier] = None
    lawson_iterations: int = ApproximationSettings.LAWSON_ITERATIONS
    independent_validation: bool = True

    def __post_init__(self):
        if not self.support:
            raise ValidationError("support", "носитель не может быть пустым")
        if not self.groups:
            raise ValidationError("groups", "нет групп ограничений")
        if sum(len(g.fit_points) for g in self.groups) < 1:
            raise ValidationError("groups", "нет строк ограничений")
        if self.ridge < 0:
            raise ValidationError("ridge", "λ_r должно быть ≥ 0")
        dimensions = {g.dimension for g in self.groups}
        if len(dimensions) != 1:
            raise DimensionError("groups", "группы разной размерности")
        self.support = [tuple(int(x) for x in a) for a in self.support]
        if any(len(a) != self.dimension for a in self.support):
            raise DimensionError("support", "мультииндексы носителя не той длины")

    @property
    def dimension(self) -> int:
        return self.groups[0].dimension

    def all_fit_points(self) -> np.ndarray:
        return np.concatenate([g.fit_points for g in self.groups])


@dataclass
class FitReport:
    """Результат подгонки."""

    polynomial: MultiPolynomial
    group_errors: Dict[str, float]
    residual_norm: float
    condition: float
    support: List[MultiIndex]
    grading_bound: Optional[int] = None
    warnings: List[str] = field(default_factory=list)
    independent_validation: bool = True
    lawson_iterations: int = 0
    group_orders: Dict[str, MultiIndex] = field(default_factory=dict)

    @property
    def support_size(self) -> int:
        return len(self.support)

    @property
    def max_error(self) -> float:
        return max(self.group_errors.values()) if self.group_errors else 0.0

    def summary(self) -> str:
        parts = ", ".join(f"{k}={v:.3e}" for k, v in self.group_errors.items())
        return (
            f"носитель {self.support_size}, B={self.grading_bound}, cond={self.condition:.2e}, "
            f"ошибки: {parts}"
        )


# ==================== МАТРИЦА СИСТЕМЫ ====================


def _power_table(x: np.ndarray, degree: int) -> np.ndarray:
    """Матрица (N, degree+1) степеней x^0..x^degree (последовательные умножения)."""
    table = np.ones((len(x), degree + 1), dtype=complex)
    if degree > 0:
        table[:, 1:] = np.cumprod(np.repeat(x[:, None], degree, axis=1), axis=1)
    return table


def _axis_columns(
    z: np.ndarray,
    degree: int,
    k: int,
    center: complex,
    radius: float,
    multiplier: Optional[SupportMultiplier],
) -> np.ndarray:
    """
    Матрица (N, degree+1): ∂^k по оси от [множитель] · u^b, b = 0..degree.

    u = (z − c)/r, ∂^j u^b = b!/(b−j)! u^{b−j} / r^j.
    """
    powers = _power_table((z - center) / radius, degree)
    b = np.arange(degree + 1)

    def derived_powers(j: int) -> np.ndarray:
        coeff = np.asarray([_falling(int(n), j) for n in b], dtype=float) / radius**j
        return coeff[None, :] * powers[:, np.maximum(b - j, 0)]

    if multiplier is None:
        return derived_powers(k)

    m = multiplier.power
    w_powers = _power_table(z - multiplier.center, m)
    total = np.zeros((len(z), degree + 1), dtype=complex)
    for j in range(min(k, m) + 1):
        outer = comb(k, j) * _falling(m, j) * w_powers[:, m - j]
        total += outer[:, None] * derived_powers(k - j)
    return total


def _design_matrix(
    points: np.ndarray,
    order: MultiIndex,
    support: np.ndarray,
    scaling: AxisScaling,
    multiplier: Optional[SupportMultiplier],
) -> np.ndarray:
    columns = np.ones((len(points), len(support)), dtype=complex)
    for axis in range(points.shape[1]):
        degree = int(support[:, axis].max())
        axis_multiplier = multiplier if multiplier is not None and multiplier.axis == axis else None
        table = _axis_columns(
            points[:, axis],
            degree,
            order[axis],
            scaling.centers[axis],
            scaling.radii[axis],
            axis_multiplier,
        )
        columns *= table[:, support[:, axis]]
    return columns


def _to_polynomial(
    solution: np.ndarray,
    support: Sequence[MultiIndex],
    scaling: AxisScaling,
    multiplier: Optional[SupportMultiplier],
) -> MultiPolynomial:
    """Обратное масштабирование: коэффициент при (z − c)^b равен x_b / r^b."""
    radii = np.asarray(scaling.radii)
    coefficients = {}
    for x, a in zip(solution, support):
        coefficients[a] = x / float(np.prod(radii ** np.asarray(a)))
    q = MultiPolynomial(len(scaling.centers), coefficients, scaling.centers)
    if multiplier is None:
        return q
    return q.times_axis_power(multiplier.axis, multiplier.center, multiplier.power)


def group_error(polynomial: MultiPolynomial, points: np.ndarray, values: np.ndarray, order) -> float:
    """sup |∂^order P − значение| по точкам."""
    if len(points) == 0:
        return 0.0
    return float(np.max(np.abs(polynomial.values(points, order) - values)))


# ==================== РЕШЕНИЕ ====================


class PolynomialFitter:
    """Решатель задач FitTask."""

    def __init__(self):
        self.logger = logging.getLogger(self.__class__.__name__)

    def _assemble(self, task: FitTask, scaling: AxisScaling, support: np.ndarray):
        blocks, rhs, group_rows = [], [], []
        for group in task.groups:
            matrix = _design_matrix(group.fit_points, group.order, support, scaling, task.multiplier)
            blocks.append(group.weight * matrix)
            rhs.append(group.weight * group.fit_values)
            group_rows.append(len(group.fit_points))
        return np.concatenate(blocks), np.concatenate(rhs), group_rows

    def _solve(self, matrix: np.ndarray, rhs: np.ndarray, ridge: float) -> np.ndarray:
        if ridge > 0:
            size = matrix.shape[1]
            matrix = np.vstack([matrix, ridge * np.eye(size, dtype=complex)])
            rhs = np.concatenate([rhs, np.zeros(size, dtype=complex)])
        solution, _, _, _ = np.linalg.lstsq(matrix, rhs, rcond=None)
        return solution

    def fit(self, task: FitTask) -> FitReport:
        """
        Решает задачу наименьших квадратов.

        Returns:
            FitReport: Многочлен в исходных координатах и ошибки групп
        """
        scaling = task.scaling or AxisScaling.enclosing(task.all_fit_points())
        support = np.asarray(task.support, dtype=np.int64)
        matrix, rhs, group_rows = self._assemble(task, scaling, support)

        norms = np.linalg.norm(matrix, axis=0)
        norms[norms == 0] = 1.0
        scaled = matrix / norms[None, :]

        singular = np.linalg.svd(scaled, compute_uv=False)
        condition = float(singular.max() / singular.min()) if singular.min() > 0 else float("inf")
        warnings: List[str] = []
        if condition > ApproximationSettings.CONDITION_WARNING:
            message = f"плохая обусловленность матрицы системы: {condition:.2e}"
            warnings.append(message)
            self.logger.warning(message)

        row_weights = np.ones(len(rhs))
        solution = self._solve(scaled, rhs, task.ridge)
        best = solution
        best_score = self._weighted_max(scaled, rhs, solution)

        iterations = 0
        for _ in range(max(0, task.lawson_iterations)):
            residual = np.abs(scaled @ solution - rhs)
            if residual.max() == 0:
                break
            row_weights = row_weights * residual
            row_weights /= row_weights.sum()
            root = np.sqrt(row_weights)
            solution = self._solve(scaled * root[:, None], rhs * root, task.ridge)
            iterations += 1
            score = self._weighted_max(scaled, rhs, solution)
            if score < best_score:
                best, best_score = solution, score

        coefficients = best / norms
        residual_norm = float(np.linalg.norm(scaled @ best - rhs))
        polynomial = _to_polynomial(coefficients, task.support, scaling, task.multiplier)

        errors = {
            g.label: group_error(polynomial, g.validation_points, g.validation_values, g.order)
            for g in task.groups
        }
        report = FitReport(
            polynomial=polynomial,
            group_errors=errors,
            residual_norm=residual_norm,
            condition=condition,
            support=list(task.support),
            warnings=warnings,
            independent_validation=task.independent_validation,
            lawson_iterations=iterations,
            group_orders={g.label: g.order for g in task.groups},
        )
        self.logger.debug(f"Подгонка: {report.summary()}")
        return report

    @staticmethod
    def _weighted_max(matrix: np.ndarray, rhs: np.ndarray, solution: np.ndarray) -> float:
        return float(np.max(np.abs(matrix @ solution - rhs)))


def fit_polynomial(task: FitTask) -> FitReport:
    """Подгонка многочлена по задаче (см. PolynomialFitter.fit)."""
    return PolynomialFitter().fit(task)


def check_disjoint(
    first: np.ndarray,
    second: np.ndarray,
    first_values: np.ndarray,
    second_values: np.ndarray,
    tolerance: float = ApproximationSettings.OVERLAP_TOLERANCE,
    chunk: int = 64,
) -> None:
    """
    Проверяет, что совпадающие точки двух выборок имеют совместимые цели.

    Raises:
        PreconditionError: Точки ближе tolerance с различающимися значениями
    """
    first = np.asarray(first, dtype=complex)
    second = np.asarray(second, dtype=complex)
    for start in range(0, len(second), chunk):
        block = second[start:start + chunk]
        distance = np.max(np.abs(block[:, None, :] - first[None, :, :]), axis=2)
        close = np.argwhere(distance <= tolerance)
        for i, j in close:
            if abs(second_values[start + i] - first_values[j]) > tolerance:
                raise PreconditionError(
                    "compacts",
                    f"выборки K и L пересекаются в точке {tuple(first[j])} с разными целями",
                )
