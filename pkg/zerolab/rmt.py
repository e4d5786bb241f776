"""
Haar sampling from the classical compact groups

This module provides Haar-distributed draws from U(N), SO(2N), SO(2N+1),
O(2N) and USp(2N), their eigenangles, and the one-level density and pair
correlation statistics evaluated on a single draw.
"""

import logging
import math
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.linalg import qr
from scipy.stats import kstest

from zerolab.configuration_service import get_configuration
from zerolab.errors import InvalidInputError, NumericalError
from zerolab.models import AngleScaling, GroupName
from zerolab.testfn import FourierPair

logger = logging.getLogger("zerolab.rmt")


def matrix_size(group: GroupName, dim_parameter: int) -> int:
    """Matrix size n of G(N): N for U, 2N+1 for SO_odd, 2N otherwise."""
    group = GroupName(group)
    if group == GroupName.U:
        return dim_parameter
    if group == GroupName.SO_ODD:
        return 2 * dim_parameter + 1
    return 2 * dim_parameter


class HaarDrawConfig(BaseModel):
    """
    One Haar draw.

    Attributes:
        group: Group family
        dim_parameter: N, at least 1
        seed: 64-bit master seed
    """
    model_config = ConfigDict(frozen=True)

    group: GroupName = Field(description="Group family")
    dim_parameter: int = Field(ge=1, description="Dimension parameter N")
    seed: int = Field(default=0, ge=0, lt=2**64, description="Master seed")

    @property
    def matrix_size(self) -> int:
        return matrix_size(self.group, self.dim_parameter)


class EigenangleSample(BaseModel):
    """Eigenangles in (-pi, pi] of one sampled matrix, sorted ascending."""
    model_config = ConfigDict(frozen=True)

    group: GroupName
    matrix_size: int = Field(ge=1)
    angles: Tuple[float, ...]

    @model_validator(mode="after")
    def validate_angles(self):
        """Exactly n angles, all on the principal branch."""
        if len(self.angles) != self.matrix_size:
            raise ValueError(f"expected {self.matrix_size} angles, got {len(self.angles)}")
        if any(not -math.pi < a <= math.pi for a in self.angles):
            raise ValueError("angles must lie in (-pi, pi]")
        return self

    def as_array(self) -> np.ndarray:
        return np.asarray(self.angles, dtype=np.float64)


def draw_generator(seed: int, index: Optional[int] = None) -> np.random.Generator:
    """
    Counter-based generator for one draw.

    The stream depends only on (seed, index), so draws can run in any order
    on any number of workers.
    """
    spawn_key = () if index is None else (int(index),)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed), spawn_key=spawn_key)))


def _complex_ginibre(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar unitary: QR of a complex Ginibre matrix with the phases of diag(R) moved into Q."""
    q, r = qr(_complex_ginibre(rng, (n, n)))
    d = np.diag(r)
    return q * (d / np.abs(d))


def haar_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar orthogonal: QR of a real Gaussian matrix with the signs of diag(R) moved into Q."""
    q, r = qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def haar_special_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    """
    Haar element of SO(n).

    A Haar orthogonal draw with determinant -1 has its first column negated.
    Right multiplication by the fixed reflection diag(-1, 1, ..., 1) maps
    Haar measure on the det = -1 coset onto Haar measure on SO(n).
    """
    q = haar_orthogonal(n, rng)
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def symplectic_form(N: int) -> np.ndarray:
    """J = [[0, I], [-I, 0]] of size 2N."""
    eye = np.eye(N)
    zero = np.zeros((N, N))
    return np.block([[zero, eye], [-eye, zero]])


def haar_symplectic(N: int, rng: np.random.Generator) -> np.ndarray:
    """
    Haar element of USp(2N) by quaternionic Gram-Schmidt.

    The result has the block form [[A, B], [-conj(B), conj(A)]]: column N+k
    is -J conj(column k). Each new column is a complex Gaussian vector made
    orthogonal to every earlier column and its partner, then normalized by
    a positive real, the quaternionic analogue of a positive diag(R).
    """
    n = 2 * N
    J = symplectic_form(N)
    q = np.zeros((n, n), dtype=np.complex128)
    for k in range(N):
        v = _complex_ginibre(rng, n)
        if k:
            basis = np.concatenate([q[:, :k], q[:, N:N + k]], axis=1)
            # twice for numerical orthogonality
            for _ in range(2):
                v = v - basis @ (basis.conj().T @ v)
        v = v / np.linalg.norm(v)
        q[:, k] = v
        q[:, N + k] = -J @ v.conj()
    return q


def unitarity_residual(m: np.ndarray) -> float:
    """max |M^H M - I|."""
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))


def symplectic_residual(m: np.ndarray) -> float:
    """max |M^T J M - J|."""
    J = symplectic_form(m.shape[0] // 2)
    return float(np.max(np.abs(m.T @ J @ m - J)))


def sample_matrix(group: GroupName, dim_parameter: int, rng: np.random.Generator) -> np.ndarray:
    """Draw one Haar matrix from G(N)."""
    group = GroupName(group)
    n = matrix_size(group, dim_parameter)
    if group == GroupName.U:
        return haar_unitary(n, rng)
    if group == GroupName.USP:
        return haar_symplectic(dim_parameter, rng)
    if group == GroupName.O:
        return haar_orthogonal(n, rng)
    return haar_special_orthogonal(n, rng)


def eigenangles(m: np.ndarray) -> np.ndarray:
    """Sorted eigenangles of a unitary matrix on the branch (-pi, pi]."""
    angles = np.angle(np.linalg.eigvals(m))
    angles[angles <= -np.pi] = np.pi
    return np.sort(angles)


def haar_sample(config: HaarDrawConfig, draw_index: Optional[int] = None,
                tol: Optional[float] = None) -> EigenangleSample:
    """
    Eigenangles of one Haar draw.

    Args:
        config: Group, dimension parameter and master seed
        draw_index: Position of the draw within an ensemble
        tol: Unitarity tolerance, ZEROLAB_UNITARITY_TOL by default

    Returns:
        EigenangleSample

    Raises:
        NumericalError: the sampled matrix fails the unitarity (or symplectic) check
    """
    tol = tol if tol is not None else get_configuration().get_rmt_config()["unitarity_tol"]
    m = sample_matrix(config.group, config.dim_parameter, draw_generator(config.seed, draw_index))

    residual = unitarity_residual(m)
    if config.group == GroupName.USP:
        residual = max(residual, symplectic_residual(m))
    if residual > tol:
        raise NumericalError(
            f"sampled {config.group.value} matrix failed the unitarity check",
            {"group": config.group.value, "matrix_size": config.matrix_size,
             "seed": config.seed, "draw_index": draw_index, "residual": residual, "tol": tol},
        )

    return EigenangleSample(group=config.group, matrix_size=config.matrix_size,
                            angles=tuple(eigenangles(m).tolist()))


def scale_factor(group: GroupName, n: int, scaling: AngleScaling = AngleScaling.MATRIX_SIZE) -> int:
    """
    Multiplier L in theta_tilde = L*theta/(2*pi).

    MATRIX_SIZE uses L = n. EFFECTIVE uses n-1 for SO_even, SO_odd and O,
    n+1 for USp and n for U; with those the finite-n expectation of
    sum phi(theta_tilde) equals the limiting pairing up to the tail of phi.
    """
    if AngleScaling(scaling) == AngleScaling.MATRIX_SIZE:
        return n
    group = GroupName(group)
    if group == GroupName.U:
        return n
    if group == GroupName.USP:
        return n + 1
    return n - 1


def normalize_angles(sample: EigenangleSample, scaling: AngleScaling = AngleScaling.MATRIX_SIZE) -> np.ndarray:
    """Angles rescaled to unit mean spacing."""
    L = scale_factor(sample.group, sample.matrix_size, scaling)
    return L * sample.as_array() / (2.0 * np.pi)


def one_level_density(sample: EigenangleSample, fp: FourierPair,
                      scaling: AngleScaling = AngleScaling.MATRIX_SIZE) -> float:
    """Sum of phi over all normalized eigenangles, both signs included."""
    return float(np.sum(fp.eval(normalize_angles(sample, scaling))))


def pair_correlation(sample: EigenangleSample, fp: FourierPair,
                     scaling: AngleScaling = AngleScaling.MATRIX_SIZE) -> float:
    """
    (1/n) * sum over j != k of phi applied to normalized angle differences.

    Differences are taken on the circle, i.e. reduced to [-pi, pi) before
    rescaling.
    """
    n = sample.matrix_size
    if n < 2:
        raise InvalidInputError("pair correlation needs at least two angles")
    angles = sample.as_array()
    diffs = angles[:, None] - angles[None, :]
    diffs = np.mod(diffs + np.pi, 2.0 * np.pi) - np.pi
    L = scale_factor(sample.group, n, scaling)
    values = fp.eval(L * diffs / (2.0 * np.pi))
    off_diagonal = values.sum() - np.trace(values)
    return float(off_diagonal / n)


def uniformity_statistic(angles: np.ndarray) -> float:
    """Kolmogorov-Smirnov distance of theta/(2 pi) + 1/2 from the uniform law on [0, 1]."""
    return float(kstest(np.asarray(angles) / (2.0 * np.pi) + 0.5, "uniform").statistic)


def symmetry_defect(sample: EigenangleSample) -> float:
    """Largest distance between the sorted angles and the sorted negated angles."""
    angles = sample.as_array()
    # pi is its own negative on the circle
    mirrored = np.sort(np.where(angles >= np.pi, np.pi, -angles))
    return float(np.max(np.abs(angles - mirrored)))
