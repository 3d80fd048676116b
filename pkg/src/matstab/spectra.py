"""Stability regions, spectra and region-membership verdicts.

The stability region is a closed enumeration of subsets of the complex
plane, each symmetric with respect to the real axis.  Membership is
always decided with a deadband of width ``tol`` around the region
boundary, so that strict-inequality regions never produce a false
"inside" for an eigenvalue sitting numerically on the boundary.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "Status", "Verdict", "Membership", "Inertia",
    "Region", "HalfPlaneLeft", "HalfPlaneRight", "Disk", "SectorRight",
    "ComplementSector", "RealLine", "PositiveRealAxis", "NegativeRealAxis",
    "Hyperbolic", "PunctureOrigin", "LMIRegion", "EMIRegion",
    "EigenSolverError", "eigenvalues", "conjugate_paired", "default_tol",
    "region_membership", "region_stable", "inertia", "gershgorin",
    "simulate_decay", "spectral_abscissa", "decay_horizon",
]


class EigenSolverError(RuntimeError):
    """Dense eigenvalue iteration failed to converge."""


class Status(str, Enum):
    PROVED = "proved"
    REFUTED = "refuted"
    UNKNOWN = "unknown"


@dataclass
class Verdict:
    """Three-valued analysis outcome with provenance.

    ``reason`` names the criterion that fired.  A refutation always
    carries a witness object; a proof either carries a re-verifiable
    certificate or names an exact criterion.  ``seed`` records the RNG
    seed when the verdict came out of a sampling procedure.
    """

    status: Status
    reason: str
    witness: object = None
    seed: object = None

    def __post_init__(self):
        if self.status is Status.REFUTED and self.witness is None:
            raise ValueError("a refutation requires a witness")
        if self.status is Status.PROVED and not self.reason:
            raise ValueError("a proof requires a reason")

    @property
    def proved(self):
        return self.status is Status.PROVED

    @property
    def refuted(self):
        return self.status is Status.REFUTED


class Membership(str, Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


@dataclass
class Inertia:
    """Eigenvalue counts (inside, on boundary, outside) w.r.t. a region."""

    i_plus: int
    i_zero: int
    i_minus: int

    def as_tuple(self):
        return (self.i_plus, self.i_zero, self.i_minus)


# ---------------------------------------------------------------------------
# Regions
# ---------------------------------------------------------------------------

class Region:
    """Base tag for the closed enumeration of stability regions."""

    name = "region"


@dataclass(frozen=True)
class HalfPlaneLeft(Region):
    name = "half-plane-left"


@dataclass(frozen=True)
class HalfPlaneRight(Region):
    name = "half-plane-right"


@dataclass(frozen=True)
class Disk(Region):
    """Open disk |z - center| < radius with a real center."""

    center: float = 0.0
    radius: float = 1.0
    name = "disk"

    def __post_init__(self):
        if not (self.radius > 0):
            raise ValueError("disk radius must be positive")


@dataclass(frozen=True)
class SectorRight(Region):
    """Open sector |arg z| < theta around the positive real axis."""

    theta: float
    name = "sector-right"

    def __post_init__(self):
        if not (0 < self.theta < math.pi / 2):
            raise ValueError("sector angle must lie in (0, pi/2)")


@dataclass(frozen=True)
class ComplementSector(Region):
    """Complement of the closed sector |arg z| <= theta, origin excluded."""

    theta: float
    name = "complement-sector"

    def __post_init__(self):
        if not (0 < self.theta < math.pi / 2):
            raise ValueError("sector angle must lie in (0, pi/2)")


@dataclass(frozen=True)
class RealLine(Region):
    name = "real-line"


@dataclass(frozen=True)
class PositiveRealAxis(Region):
    name = "positive-real-axis"


@dataclass(frozen=True)
class NegativeRealAxis(Region):
    name = "negative-real-axis"


@dataclass(frozen=True)
class Hyperbolic(Region):
    """Complex plane minus the imaginary axis."""

    name = "hyperbolic"


@dataclass(frozen=True)
class PunctureOrigin(Region):
    """Complex plane minus the origin."""

    name = "puncture-origin"


def _sym(m):
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("region data must be a square matrix")
    if not np.allclose(m, m.T, atol=1e-12 * (1.0 + abs(m).max(initial=0.0))):
        raise ValueError("region data must be symmetric")
    return 0.5 * (m + m.T)


@dataclass(frozen=True)
class LMIRegion(Region):
    """Region {z : L + M z + M^T conj(z) negative definite}, L symmetric."""

    l: np.ndarray
    m: np.ndarray
    name = "lmi"

    def __post_init__(self):
        object.__setattr__(self, "l", _sym(self.l))
        m = np.asarray(self.m, dtype=float)
        if m.shape != self.l.shape:
            raise ValueError("L and M must have equal shape")
        object.__setattr__(self, "m", m)

    def characteristic(self, z):
        return self.l + z * self.m + np.conj(z) * self.m.T


@dataclass(frozen=True)
class EMIRegion(Region):
    """Region {z : R11 + R12 z + R12^T conj(z) + R22 z conj(z) neg. def.}."""

    r11: np.ndarray
    r12: np.ndarray
    r22: np.ndarray
    name = "emi"

    def __post_init__(self):
        object.__setattr__(self, "r11", _sym(self.r11))
        object.__setattr__(self, "r22", _sym(self.r22))
        r12 = np.asarray(self.r12, dtype=float)
        if r12.shape != self.r11.shape or self.r22.shape != self.r11.shape:
            raise ValueError("R blocks must have equal shape")
        object.__setattr__(self, "r12", r12)

    def characteristic(self, z):
        return (self.r11 + z * self.r12 + np.conj(z) * self.r12.T
                + (z * np.conj(z)).real * self.r22)


# ---------------------------------------------------------------------------
# Eigenvalues
# ---------------------------------------------------------------------------

def _as_square(a):
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    if not np.isfinite(a).all():
        raise ValueError("matrix entries must be finite")
    return a


def eigenvalues(a):
    """Spectrum of a real square matrix, sorted by (real, imag).

    The dense solver is the standard balanced Hessenberg reduction with
    shifted QR iteration (LAPACK); non-convergence raises
    ``EigenSolverError``.  Real input keeps the returned multiset closed
    under conjugation.
    """
    a = _as_square(a)
    try:
        w = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(str(exc)) from exc
    return np.sort_complex(w)


def conjugate_paired(spectrum, tol=1e-8):
    """True when the multiset of eigenvalues is symmetric about the real axis."""
    left = [z for z in spectrum if z.imag > tol]
    right = [z for z in spectrum if z.imag < -tol]
    if len(left) != len(right):
        return False
    scale = 1.0 + max((abs(z) for z in spectrum), default=0.0)
    right = list(right)
    for z in left:
        match = None
        for i, w in enumerate(right):
            if abs(np.conj(z) - w) <= tol * scale:
                match = i
                break
        if match is None:
            return False
        right.pop(match)
    return True


def default_tol(z):
    """Boundary deadband around a point: 1e-8 * (1 + |z|)."""
    return 1e-8 * (1.0 + abs(z))


# ---------------------------------------------------------------------------
# Membership
# ---------------------------------------------------------------------------

def _classify(value, tol):
    # value < 0 inside, value > 0 outside, |value| <= tol boundary band
    if value < -tol:
        return Membership.INSIDE
    if value > tol:
        return Membership.OUTSIDE
    return Membership.BOUNDARY


def region_membership(z, region, tol=None):
    """Classify a complex point against a region with a boundary band.

    Thin regions (the real line and its half-axes) have empty interior;
    for these, "inside" means the defining equalities hold within ``tol``
    and the strict inequalities hold with margin ``tol``.
    """
    z = complex(z)
    if tol is None:
        tol = default_tol(z)
    if tol <= 0:
        raise ValueError("tol must be positive")

    if isinstance(region, HalfPlaneLeft):
        return _classify(z.real, tol)
    if isinstance(region, HalfPlaneRight):
        return _classify(-z.real, tol)
    if isinstance(region, Disk):
        return _classify(abs(z - region.center) - region.radius, tol)
    if isinstance(region, SectorRight):
        if abs(z) <= tol:
            return Membership.BOUNDARY
        return _classify(abs(np.angle(z)) - region.theta, tol)
    if isinstance(region, ComplementSector):
        if abs(z) <= tol:
            return Membership.BOUNDARY
        return _classify(region.theta - abs(np.angle(z)), tol)
    if isinstance(region, RealLine):
        return Membership.INSIDE if abs(z.imag) <= tol else Membership.OUTSIDE
    if isinstance(region, PositiveRealAxis):
        if abs(z.imag) > tol:
            return Membership.OUTSIDE
        return _classify(-z.real, tol)
    if isinstance(region, NegativeRealAxis):
        if abs(z.imag) > tol:
            return Membership.OUTSIDE
        return _classify(z.real, tol)
    if isinstance(region, Hyperbolic):
        # complement of the imaginary axis: never "outside", the axis is
        # the whole boundary
        return Membership.INSIDE if abs(z.real) > tol else Membership.BOUNDARY
    if isinstance(region, PunctureOrigin):
        return Membership.INSIDE if abs(z) > tol else Membership.BOUNDARY
    if isinstance(region, (LMIRegion, EMIRegion)):
        f = region.characteristic(z)
        lam = np.linalg.eigvalsh(f)[-1]
        return _classify(float(lam), tol)
    raise TypeError(f"unknown region {region!r}")


def membership_values(zs, region, tol):
    """Vectorized signed boundary distance; negative means strictly inside.

    Thin regions return +inf for points off the carrier line so that the
    strict-inside test ``value < -tol`` matches ``region_membership``.
    """
    zs = np.asarray(zs, dtype=complex)
    if isinstance(region, HalfPlaneLeft):
        return zs.real.copy()
    if isinstance(region, HalfPlaneRight):
        return -zs.real
    if isinstance(region, Disk):
        return np.abs(zs - region.center) - region.radius
    if isinstance(region, SectorRight):
        v = np.abs(np.angle(zs)) - region.theta
        return np.where(np.abs(zs) <= tol, 0.0, v)
    if isinstance(region, ComplementSector):
        v = region.theta - np.abs(np.angle(zs))
        return np.where(np.abs(zs) <= tol, 0.0, v)
    if isinstance(region, RealLine):
        return np.where(np.abs(zs.imag) <= tol, -np.inf, np.inf)
    if isinstance(region, PositiveRealAxis):
        return np.where(np.abs(zs.imag) <= tol, -zs.real, np.inf)
    if isinstance(region, NegativeRealAxis):
        return np.where(np.abs(zs.imag) <= tol, zs.real, np.inf)
    if isinstance(region, Hyperbolic):
        return -np.abs(zs.real)
    if isinstance(region, PunctureOrigin):
        return -np.abs(zs)
    if isinstance(region, (LMIRegion, EMIRegion)):
        out = np.empty(zs.shape, dtype=float)
        flat = zs.ravel()
        res = out.ravel()
        for i, z in enumerate(flat):
            res[i] = float(np.linalg.eigvalsh(region.characteristic(z))[-1])
        return out
    raise TypeError(f"unknown region {region!r}")


def region_stable(a, region, tol=None):
    """Proved iff every eigenvalue of ``a`` lies strictly inside ``region``.

    Any eigenvalue classified boundary-or-outside refutes, with that
    eigenvalue as the witness.  Unknown is reserved for solver failure.
    """
    try:
        spec = eigenvalues(a)
    except EigenSolverError as exc:
        return Verdict(Status.UNKNOWN, f"eigensolver-failure: {exc}")
    for z in spec:
        t = default_tol(z) if tol is None else tol
        if region_membership(z, region, t) is not Membership.INSIDE:
            return Verdict(Status.REFUTED, "eigenvalue-outside-region",
                           witness={"eigenvalue": complex(z),
                                    "region": region.name})
    return Verdict(Status.PROVED, "all-eigenvalues-inside")


def inertia(a, region, tol=None):
    """Counts of eigenvalues inside / on the boundary of / outside a region."""
    spec = eigenvalues(a)
    plus = zero = minus = 0
    for z in spec:
        t = default_tol(z) if tol is None else tol
        m = region_membership(z, region, t)
        if m is Membership.INSIDE:
            plus += 1
        elif m is Membership.BOUNDARY:
            zero += 1
        else:
            minus += 1
    return Inertia(plus, zero, minus)


def gershgorin(a, tol=1e-9):
    """Row disc localization and the resulting Hurwitz verdict.

    Returns the discs (center a_ii, radius = off-diagonal row sum) and
    Proved when every disc lies strictly in the open left half-plane;
    Unknown otherwise (the localization never refutes).
    """
    a = _as_square(a)
    n = a.shape[0]
    radii = abs(a).sum(axis=1) - abs(np.diag(a))
    disks = [(float(a[i, i]), float(radii[i])) for i in range(n)]
    worst = max((c + r for c, r in disks), default=-np.inf)
    if worst < -tol:
        verdict = Verdict(Status.PROVED, "gershgorin-discs-in-left-half-plane")
    else:
        verdict = Verdict(Status.UNKNOWN, "gershgorin-inconclusive")
    return disks, verdict


def spectral_abscissa(a):
    return float(max(z.real for z in eigenvalues(a)))


def decay_horizon(a, target=1e-8, t_min=1.0, t_max=1e4):
    """Horizon T with ||exp(a T)|| below ``target``, from the eigenbasis bound.

    Uses ||exp(a t)|| <= cond(V) * exp(alpha t) with alpha the spectral
    abscissa; only meaningful for alpha < 0.
    """
    alpha = spectral_abscissa(a)
    if alpha >= 0:
        raise ValueError("decay horizon requires a Hurwitz-stable matrix")
    _, v = np.linalg.eig(_as_square(a))
    kappa = np.linalg.cond(v)
    t = (math.log(target) - math.log(max(kappa, 1.0))) / alpha
    return float(min(max(t, t_min), t_max))


def simulate_decay(m, horizon, step):
    """Max trajectory-norm ratio of x' = m x over canonical basis starts.

    Integrates with the classical fixed-step fourth-order one-step method
    from every canonical basis vector at once and returns
    max_i ||x_i(T)|| / ||x_i(0)||.  Overflow is reported as ``inf``
    (a divergence witness), not an exception.
    """
    m = _as_square(m)
    if step <= 0:
        raise ValueError("step must be positive")
    if horizon < step:
        raise ValueError("horizon must be at least one step")
    n = m.shape[0]
    x = np.eye(n)
    steps = int(round(horizon / step))
    h = horizon / steps
    for _ in range(steps):
        k1 = m @ x
        k2 = m @ (x + 0.5 * h * k1)
        k3 = m @ (x + 0.5 * h * k2)
        k4 = m @ (x + h * k3)
        x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.isfinite(x).all() or abs(x).max() > 1e150:
            return math.inf
    return float(np.linalg.norm(x, axis=0).max())
