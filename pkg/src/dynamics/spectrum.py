"""Eigenvalues of the Class I minor B and the forward-dynamics verdict.

The characteristic polynomial comes from the Faddeev–LeVerrier recursion
and its roots from simultaneous (Weierstrass–Durand–Kerner) iteration.
A Gelfand estimate ‖B^m‖^{1/m} cross-checks the spectral radius.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from src.analysis.fixpoint import invariant_face
from src.core.matrix import Matrix
from src.errors import RootFindingFailedError, SolverLimitError, ValidationError

logger = logging.getLogger("idempotent_dynamics")

MAX_DIMENSION = 32
MAX_SWEEPS = 10_000
GELFAND_POWER = 64
GELFAND_TOLERANCE = 1e-2
UNIT_TOLERANCE = 1e-9
ROOT_RESIDUAL = 1e-14
CLUSTER_FACTOR = 10.0
POLISH_STEPS = 8
STAGNATION_SWEEPS = 500


class SpectrumVerdict(str, Enum):
    ALL_INSIDE = "all_inside"
    ALL_OUTSIDE = "all_outside"
    MIXED = "mixed"


@dataclass(frozen=True)
class AsymptoticClass1:
    kept_indices: tuple[int, ...]
    eigenvalues: tuple[complex, ...]
    verdict: SpectrumVerdict
    n_stable: int
    n_unstable: int
    n_unit: int
    spectral_radius: float
    gelfand_estimate: float
    low_confidence: bool

    def to_record(self) -> dict:
        return {
            "kept_indices": list(self.kept_indices),
            "eigenvalues": [[float(z.real) + 0.0, float(z.imag) + 0.0] for z in self.eigenvalues],
            "verdict": self.verdict.value,
            "n_stable": self.n_stable,
            "n_unstable": self.n_unstable,
            "n_unit": self.n_unit,
            "spectral_radius": self.spectral_radius,
            "gelfand_estimate": self.gelfand_estimate,
            "low_confidence": self.low_confidence,
        }


def characteristic_polynomial(B: np.ndarray) -> np.ndarray:
    """Coefficients of det(λI − B), highest degree first (monic)."""
    n = B.shape[0]
    coefficients = [1.0]
    M = np.zeros_like(B, dtype=float)
    identity = np.eye(n)
    for k in range(1, n + 1):
        M = B @ M + coefficients[-1] * identity
        coefficients.append(-float(np.trace(B @ M)) / k)
    return np.array(coefficients)


def polynomial_residual(coefficients: np.ndarray, z: complex) -> float:
    """|p(z)| relative to Σ |c_k| max(1, |z|)^k."""
    scale = float(np.polyval(np.abs(coefficients), max(1.0, abs(z))))
    return float(abs(np.polyval(coefficients, z))) / scale


def polynomial_roots(coefficients: np.ndarray, max_sweeps: int = MAX_SWEEPS,
                     seed: int = 0) -> np.ndarray:
    """All roots of a monic polynomial by simultaneous iteration.

    Starting points sit on a circle of the Cauchy radius; stagnating runs
    are restarted from randomly perturbed points.
    """
    degree = len(coefficients) - 1
    if degree == 0:
        return np.zeros(0, dtype=complex)
    if degree == 1:
        return np.array([-coefficients[1] + 0j])
    rng = np.random.default_rng(seed)
    radius = 1.0 + float(np.max(np.abs(coefficients[1:])))
    z = radius * (0.4 + 0.9j) ** np.arange(degree) / abs(0.4 + 0.9j) ** np.arange(degree)
    best = math.inf
    last_improvement = 0
    for sweep in range(1, max_sweeps + 1):
        step = np.zeros(degree, dtype=complex)
        for i in range(degree):
            others = z[i] - np.delete(z, i)
            denominator = np.prod(others)
            if denominator == 0:
                denominator = 1e-300
            step[i] = np.polyval(coefficients, z[i]) / denominator
            z[i] -= step[i]
        residual = max(polynomial_residual(coefficients, v) for v in z)
        size = max(1.0, float(np.max(np.abs(z))))
        if residual <= ROOT_RESIDUAL or float(np.max(np.abs(step))) <= 1e-15 * size:
            logger.debug("Roots converged after %d sweeps (residual %.2e)", sweep, residual)
            return z
        if residual < best * 0.999:
            best = residual
            last_improvement = sweep
        elif sweep - last_improvement >= STAGNATION_SWEEPS:
            logger.debug("Root iteration stagnated at sweep %d; restarting", sweep)
            z = z + radius * 1e-3 * (rng.standard_normal(degree) + 1j * rng.standard_normal(degree))
            best = math.inf
            last_improvement = sweep
    raise RootFindingFailedError(f"root iteration did not converge in {max_sweeps} sweeps")


def cluster_radius(multiplicity: int, scale: float = 1.0) -> float:
    """How far apart the copies of an m-fold root can land.

    A stop at relative residual ROOT_RESIDUAL pins an m-fold root only to
    about ROOT_RESIDUAL**(1/m), so the radius widens with the multiplicity.
    """
    return CLUSTER_FACTOR * (ROOT_RESIDUAL * scale) ** (1.0 / multiplicity)


def _polish(coefficients: np.ndarray, z: complex, multiplicity: int, radius: float) -> complex:
    """Newton on p^(m-1), which has a simple root where p has an m-fold one."""
    derivative = np.polyder(coefficients, multiplicity - 1)
    slope = np.polyder(derivative)
    start = z
    for _ in range(POLISH_STEPS):
        d = complex(np.polyval(slope, z))
        if d == 0:
            break
        step = complex(np.polyval(derivative, z)) / d
        z -= step
        if abs(step) <= 1e-16 * max(1.0, abs(z)):
            break
    return z if abs(z - start) <= radius else start


def cluster_roots(roots: np.ndarray, coefficients: np.ndarray | None = None) -> tuple[complex, ...]:
    """Collapse the scattered copies of repeated roots onto one value.

    Groups are tried from the largest multiplicity down, each with its own
    radius. With ``coefficients`` the group mean is polished on the
    (m−1)-th derivative of the polynomial.
    """
    scale = 1.0 if coefficients is None else float(np.sum(np.abs(coefficients)))
    remaining = list(roots)
    result = []
    while remaining:
        seed = remaining.pop(0)
        group = [seed]
        for m in range(len(remaining) + 1, 1, -1):
            radius = cluster_radius(m, scale) * max(1.0, abs(seed))
            near = sorted((z for z in remaining if abs(z - seed) <= radius), key=lambda z: abs(z - seed))
            if len(near) + 1 >= m:
                group += near[:m - 1]
                break
        for z in group[1:]:
            remaining.remove(z)
        m = len(group)
        center = complex(np.mean(group))
        if m > 1 and coefficients is not None:
            center = _polish(coefficients, center, m, cluster_radius(m, scale) * max(1.0, abs(center)))
        if abs(center.imag) <= cluster_radius(max(m, 2), scale) * max(1.0, abs(center)):
            center = complex(center.real, 0.0)
        result.extend([center] * m)
    return tuple(sorted(result, key=lambda z: (-abs(z), z.real, z.imag)))


def gelfand_estimate(B: np.ndarray, power: int = GELFAND_POWER) -> float:
    """‖B^power‖_∞^{1/power} by repeated squaring with rescaling."""
    squarings = int(round(math.log2(power)))
    if 2 ** squarings != power:
        raise ValidationError("Gelfand power must be a power of two")
    log_scale = 0.0
    P = np.array(B, dtype=float)
    for _ in range(squarings):
        P = P @ P
        log_scale *= 2.0
        norm = float(np.max(np.sum(np.abs(P), axis=1)))
        if norm == 0.0:
            return 0.0
        P /= norm
        log_scale += math.log(norm)
    return math.exp(log_scale / power)


def class1_asymptotics(A: Matrix, unit_tol: float = UNIT_TOLERANCE, *,
                       max_sweeps: int = MAX_SWEEPS, max_dimension: int = MAX_DIMENSION,
                       gelfand_power: int = GELFAND_POWER,
                       gelfand_tolerance: float = GELFAND_TOLERANCE) -> AsymptoticClass1:
    """Magnitude partition of the eigenvalues of B, the minor on the non-zero rows."""
    zero_rows = invariant_face(A)
    kept = tuple(i for i in range(1, A.n + 1) if i not in zero_rows)
    n0 = len(kept)
    if n0 > max_dimension:
        raise SolverLimitError(f"eigenvalue solver limited to n0 <= {max_dimension}")
    if n0 == 0:
        return AsymptoticClass1(kept, (), SpectrumVerdict.ALL_INSIDE, 0, 0, 0, 0.0, 0.0, False)
    B = A.minor(kept)
    coefficients = characteristic_polynomial(B)
    eigenvalues = cluster_roots(polynomial_roots(coefficients, max_sweeps), coefficients)
    magnitudes = [abs(z) for z in eigenvalues]
    n_stable = sum(1 for r in magnitudes if r < 1.0 - unit_tol)
    n_unstable = sum(1 for r in magnitudes if r > 1.0 + unit_tol)
    n_unit = n0 - n_stable - n_unstable
    if n_stable == n0:
        verdict = SpectrumVerdict.ALL_INSIDE
    elif n_unstable == n0:
        verdict = SpectrumVerdict.ALL_OUTSIDE
    else:
        verdict = SpectrumVerdict.MIXED
    rho = max(magnitudes)
    gelfand = gelfand_estimate(B, gelfand_power)
    low_confidence = abs(gelfand - rho) > gelfand_tolerance * max(1.0, rho)
    if low_confidence:
        logger.warning("Spectral radius %.6g disagrees with Gelfand estimate %.6g", rho, gelfand)
    return AsymptoticClass1(kept, eigenvalues, verdict, n_stable, n_unstable, n_unit,
                            float(rho), float(gelfand), low_confidence)
