"""Entropies, mutual information and Gaussian discord on covariance matrices.

Two entropy notions coexist here and must not be mixed up:

* :func:`shannon_entropy` is the differential entropy of the Gaussian
  quadrature distribution. Its absolute value carries a (2*pi*e) offset per
  quadrature; the offset cancels in every information difference we form.
* :func:`von_neumann_entropy` is the quantum entropy from the symplectic
  spectrum. Discord is built from this one.

Everything is reported in bits. ``LOG_BASE`` is the single knob: set it to
``numpy.e`` in a cross-check session to get nats.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, NumericFailureError, UnphysicalStateError
from .gaussian import SYMPLECTIC_TOL, CovarianceMatrix, reduce, symplectic_eigenvalues

LOG_BASE = 2.0

# Negative information values within this of zero clamp to 0; beyond it they
# raise. Also the agreement tolerance for the two CMI evaluation routes.
CLAMP_TOL = 1e-9

# Fixed golden-section budget: interval shrinks below 1e-12 rad, and a fixed
# count keeps the minimizer deterministic across thread schedules.
GOLDEN_ITERATIONS = 60


@dataclass(frozen=True)
class Partition:
    """Disjoint mode groups (A, B, S) inside one multimode state.

    S may be empty (plain mutual information); A and B may not.
    """

    subsystem_a: tuple[int, ...]
    subsystem_b: tuple[int, ...]
    subsystem_s: tuple[int, ...] = ()

    def __post_init__(self):
        a = tuple(int(m) for m in self.subsystem_a)
        b = tuple(int(m) for m in self.subsystem_b)
        s = tuple(int(m) for m in self.subsystem_s)
        object.__setattr__(self, "subsystem_a", a)
        object.__setattr__(self, "subsystem_b", b)
        object.__setattr__(self, "subsystem_s", s)
        if not a or not b:
            raise InvalidArgumentError("subsystems A and B must be non-empty")
        combined = a + b + s
        if len(set(combined)) != len(combined):
            raise InvalidArgumentError(f"partition groups overlap: A={a}, B={b}, S={s}")

    def validate_against(self, state: CovarianceMatrix):
        n = state.n_modes
        for m in self.subsystem_a + self.subsystem_b + self.subsystem_s:
            if not 0 <= m < n:
                raise InvalidArgumentError(f"partition references mode {m}, state has {n} modes")


@dataclass(frozen=True)
class HomodyneProjector:
    """A quadrature direction for homodyne detection.

    ``angle`` 0 measures x, pi/2 measures p. The projector onto the measured
    direction is the rank-1 symmetric matrix x x^T with x = (cos a, sin a).
    """

    angle: float

    def __post_init__(self):
        if not 0.0 <= self.angle < np.pi:
            raise InvalidArgumentError(f"homodyne angle must lie in [0, pi), got {self.angle}")

    @property
    def direction(self) -> np.ndarray:
        return np.array([np.cos(self.angle), np.sin(self.angle)])

    @property
    def matrix(self) -> np.ndarray:
        x = self.direction
        return np.outer(x, x)


@dataclass(frozen=True)
class DiscordResult:
    """Gaussian discord D(B|A) together with the terms behind it."""

    value: float
    angle: float
    entropy_a: float
    entropy_joint: float
    conditional_entropy: float


@dataclass(frozen=True)
class InfoReport:
    """One state's worth of information measures, with the raw terms kept."""

    cmi: float
    mi: float
    discord: float
    entropy_terms: tuple[tuple[str, float], ...]
    discord_terms: DiscordResult


def _log(value: float) -> float:
    return float(np.log(value) / np.log(LOG_BASE))


def _logdet(gamma: np.ndarray, label: str) -> float:
    """log-determinant in the active base; non-positive det is a hard error."""
    sign, logdet = np.linalg.slogdet(gamma)
    if sign <= 0.0:
        raise NumericFailureError(f"non-positive determinant for {label}")
    return float(logdet / np.log(LOG_BASE))


def shannon_entropy(state: CovarianceMatrix) -> float:
    """Differential entropy of the quadrature distribution, in bits.

    H = (1/2) * log((2 pi e)^d * det Gamma) with d the full quadrature
    dimension (two per mode). Single vacuum mode: log2(2 pi e) ~ 4.094342.
    """
    dim = state.data.shape[0]
    return 0.5 * (dim * _log(2.0 * np.pi * np.e) + _logdet(state.data, "state"))


def _g(x: np.ndarray) -> np.ndarray:
    # thermal-spectrum entropy term; x = 1 contributes exactly 0 (0 log 0 := 0)
    xp = (x + 1.0) / 2.0
    xm = (x - 1.0) / 2.0
    out = xp * np.log(xp)
    mask = xm > 0.0
    out[mask] -= xm[mask] * np.log(xm[mask])
    return out / np.log(LOG_BASE)


def von_neumann_entropy(state: CovarianceMatrix) -> float:
    """Quantum entropy from the symplectic spectrum, in bits.

    Zero for pure states (vacuum, EPR); thermal(2) gives ~1.377444.
    Raises unphysical-state if any symplectic eigenvalue sits below shot
    noise by more than the clamp tolerance.
    """
    eigs = symplectic_eigenvalues(state)
    low = float(eigs.min())
    if low < 1.0 - SYMPLECTIC_TOL:
        raise UnphysicalStateError(f"symplectic eigenvalue {low:.6g} below shot noise")
    return float(np.sum(_g(eigs)))


def _clamp_info(value: float, label: str) -> float:
    if value < -CLAMP_TOL:
        raise NumericFailureError(f"{label} = {value:.3e} is negative beyond tolerance")
    return 0.0 if value < 0.0 else value


def conditional_mutual_information(state: CovarianceMatrix, p: Partition) -> float:
    """I(A:B|S) in bits, S non-empty.

    Evaluated two independent ways and cross-checked to ``CLAMP_TOL``:

    * half the log of det(Gamma_AS) det(Gamma_BS) / (det(Gamma_S)
      det(Gamma_ABS)), where the (2 pi e) powers cancel;
    * the four-term Shannon entropy sum H(AS) + H(BS) - H(S) - H(ABS).

    Disagreement between the routes, or a non-positive determinant, raises
    a numeric failure rather than returning a junk value.
    """
    p.validate_against(state)
    if not p.subsystem_s:
        raise InvalidArgumentError("conditioning set S is empty; use mutual_information")
    g_as = reduce(state, p.subsystem_a + p.subsystem_s)
    g_bs = reduce(state, p.subsystem_b + p.subsystem_s)
    g_s = reduce(state, p.subsystem_s)
    g_abs = reduce(state, p.subsystem_a + p.subsystem_b + p.subsystem_s)

    from_dets = 0.5 * (
        _logdet(g_as.data, "Gamma_AS") + _logdet(g_bs.data, "Gamma_BS")
        - _logdet(g_s.data, "Gamma_S") - _logdet(g_abs.data, "Gamma_ABS"))
    from_entropies = (shannon_entropy(g_as) + shannon_entropy(g_bs)
                      - shannon_entropy(g_s) - shannon_entropy(g_abs))
    if abs(from_dets - from_entropies) > CLAMP_TOL:
        raise NumericFailureError(
            f"CMI routes disagree: {from_dets!r} (determinants) vs {from_entropies!r} (entropies)")
    return _clamp_info(from_dets, "conditional mutual information")


def mutual_information(state: CovarianceMatrix, p: Partition) -> float:
    """I(A:B) = H(A) + H(B) - H(AB) in bits; requires an empty S."""
    p.validate_against(state)
    if p.subsystem_s:
        raise InvalidArgumentError("mutual_information takes an empty conditioning set")
    h_a = shannon_entropy(reduce(state, p.subsystem_a))
    h_b = shannon_entropy(reduce(state, p.subsystem_b))
    h_ab = shannon_entropy(reduce(state, p.subsystem_a + p.subsystem_b))
    return _clamp_info(h_a + h_b - h_ab, "mutual information")


def homodyne_condition(state: CovarianceMatrix, measured_mode: int,
                       proj: HomodyneProjector) -> CovarianceMatrix:
    """State of the remaining modes after homodyning one mode.

    Schur-complement update Gamma_rest - C (X Gamma_m X)^+ C^T. The
    pseudo-inverse of the rank-1 piece is closed-form: with x the measured
    direction and q = x^T Gamma_m x, it is x x^T / q. No SVD, no rank
    tolerance.

    Args:
        state: at least two modes.
        measured_mode: which mode is detected (and removed).
        proj: quadrature direction of the detection.

    Returns:
        Covariance of the remaining modes, original relative order.
    """
    n = state.n_modes
    if not 0 <= measured_mode < n:
        raise InvalidArgumentError(f"measured mode {measured_mode} out of range for {n} modes")
    if n < 2:
        raise InvalidArgumentError("conditioning requires at least one unmeasured mode")
    rest = [m for m in range(n) if m != measured_mode]
    rest_idx = np.concatenate([(2 * m, 2 * m + 1) for m in rest]).astype(int)
    meas = state.mode_slice(measured_mode)
    x = proj.direction
    q = float(x @ state.data[meas, meas] @ x)
    if q <= 0.0:
        raise NumericFailureError(f"measured quadrature variance {q:.6g} is not positive")
    cx = state.data[rest_idx, meas] @ x
    return CovarianceMatrix(state.data[np.ix_(rest_idx, rest_idx)] - np.outer(cx, cx) / q)


def _minimize_over_angle(objective) -> tuple[float, float]:
    """Deterministic golden-section minimum of objective over [0, pi/2].

    Seeds at 0, pi/4, pi/2 catch the boundary optima of x/p-decoupled
    states; strict comparisons make the earliest seed win any tie, so flat
    objectives report angle 0.
    """
    best_angle, best_val = 0.0, objective(0.0)
    for theta in (np.pi / 4.0, np.pi / 2.0):
        val = objective(theta)
        if val < best_val:
            best_angle, best_val = theta, val
    inv_phi = (np.sqrt(5.0) - 1.0) / 2.0
    lo, hi = 0.0, np.pi / 2.0
    c = hi - inv_phi * (hi - lo)
    d = lo + inv_phi * (hi - lo)
    fc, fd = objective(c), objective(d)
    for _ in range(GOLDEN_ITERATIONS):
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - inv_phi * (hi - lo)
            fc = objective(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + inv_phi * (hi - lo)
            fd = objective(d)
    mid = (lo + hi) / 2.0
    val = objective(mid)
    if val < best_val:
        best_angle, best_val = mid, val
    return best_angle, best_val


def gaussian_discord(state: CovarianceMatrix, a_mode: int, b_mode: int) -> DiscordResult:
    """Gaussian discord D(B|A): A is homodyned, B is inferred.

    D = S(Gamma_A) - S(Gamma_AB) + min over homodyne angle of S(Gamma_B|x_A),
    all von Neumann. The minimization is restricted to homodyne quadrature
    measurements; see the report fields for the terms and the chosen angle.
    States whose blocks are proportional to the identity have an angle-free
    conditional entropy, so the reported angle is then arbitrary.
    """
    if a_mode == b_mode:
        raise InvalidArgumentError("discord needs two distinct modes")
    pair = reduce(state, [a_mode, b_mode])
    s_a = von_neumann_entropy(reduce(pair, [0]))
    s_ab = von_neumann_entropy(pair)

    def conditional(theta: float) -> float:
        left = homodyne_condition(pair, 0, HomodyneProjector(theta))
        return von_neumann_entropy(left)

    angle, s_cond = _minimize_over_angle(conditional)
    value = _clamp_info(s_a - s_ab + s_cond, "discord")
    return DiscordResult(value=value, angle=angle, entropy_a=s_a,
                         entropy_joint=s_ab, conditional_entropy=s_cond)


def info_report(state: CovarianceMatrix, p: Partition) -> InfoReport:
    """CMI, MI and discord for one state under one partition.

    Discord is a pairwise quantity, so A and B must each be a single mode
    here; CMI conditions on S, MI ignores it.
    """
    if len(p.subsystem_a) != 1 or len(p.subsystem_b) != 1:
        raise InvalidArgumentError("info_report needs single-mode A and B")
    cmi = conditional_mutual_information(state, p)
    mi = mutual_information(state, Partition(p.subsystem_a, p.subsystem_b))
    disc = gaussian_discord(state, p.subsystem_a[0], p.subsystem_b[0])
    terms = (
        ("H(A,S)", shannon_entropy(reduce(state, p.subsystem_a + p.subsystem_s))),
        ("H(B,S)", shannon_entropy(reduce(state, p.subsystem_b + p.subsystem_s))),
        ("H(S)", shannon_entropy(reduce(state, p.subsystem_s))),
        ("H(A,B,S)", shannon_entropy(reduce(state, p.subsystem_a + p.subsystem_b + p.subsystem_s))),
    )
    return InfoReport(cmi=cmi, mi=mi, discord=disc.value, entropy_terms=terms, discord_terms=disc)
