"""m-sign pattern classes and Monte-Carlo requires/allows semantics.

The real line is partitioned into seven cells: (-inf,-1), {-1}, (-1,0),
{0}, (0,1), {1}, (1,inf).  A pattern assigns one cell per entry, and the
pattern class is everything entrywise consistent with it.  The exact
set-level notions have no general decision procedure, so the verdicts
here are sampling-based: ``requires`` can only be refuted, ``allows``
can only be proved.
"""

from dataclasses import dataclass

import numpy as np

from .dstability import falsify
from .spectra import Membership, Status, Verdict, region_membership, region_stable

__all__ = [
    "CELLS", "MPattern", "m_pattern_of", "sample_from",
    "requires_stability_mc", "allows_stability_mc", "region_cells",
]

# cell id -> (kind, data); intervals are open, singletons exact
CELLS = {
    1: ("interval", (-np.inf, -1.0)),
    2: ("singleton", -1.0),
    3: ("interval", (-1.0, 0.0)),
    4: ("singleton", 0.0),
    5: ("interval", (0.0, 1.0)),
    6: ("singleton", 1.0),
    7: ("interval", (1.0, np.inf)),
}


@dataclass(frozen=True)
class MPattern:
    """n x n array of cell tags 1..7."""

    cells: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.cells, dtype=int)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise ValueError("pattern must be square")
        if not np.isin(c, list(CELLS)).all():
            raise ValueError("cell tags must lie in 1..7")
        object.__setattr__(self, "cells", c)

    @property
    def n(self):
        return self.cells.shape[0]


def _cell_of(value, tol=1e-12):
    for tag in (2, 4, 6):
        if abs(value - CELLS[tag][1]) <= tol:
            return tag
    if value < -1.0:
        return 1
    if value < 0.0:
        return 3
    if value < 1.0:
        return 5
    return 7


def m_pattern_of(a):
    """Cell tags of every entry of a matrix."""
    a = np.asarray(a, dtype=float)
    tags = np.empty(a.shape, dtype=int)
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            tags[i, j] = _cell_of(a[i, j])
    return MPattern(tags)


# sampling margins keep the pattern-of round trip exact: open intervals
# are sampled away from their endpoints, unbounded cells capped at 1e3
_MARGIN_LO = 1e-3
_MARGIN_HI = 0.999
_UNBOUNDED_LO = 1.001
_UNBOUNDED_HI = 1e3


def _sample_cell(tag, rng):
    kind, data = CELLS[tag]
    if kind == "singleton":
        return data
    lo, hi = data
    if lo == -np.inf:
        return -np.exp(rng.uniform(np.log(_UNBOUNDED_LO), np.log(_UNBOUNDED_HI)))
    if hi == np.inf:
        return np.exp(rng.uniform(np.log(_UNBOUNDED_LO), np.log(_UNBOUNDED_HI)))
    if (lo, hi) == (-1.0, 0.0):
        return -np.exp(rng.uniform(np.log(_MARGIN_LO), np.log(_MARGIN_HI)))
    return np.exp(rng.uniform(np.log(_MARGIN_LO), np.log(_MARGIN_HI)))


def sample_from(pattern, rng):
    """One matrix from the pattern class; membership re-check always passes."""
    n = pattern.n
    out = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            out[i, j] = _sample_cell(int(pattern.cells[i, j]), rng)
    return out


def requires_stability_mc(pattern, region, gclass, op, samples=200,
                          inner_samples=32, seed=0):
    """Monte-Carlo refuter for "every class member is class-stable".

    Each sampled member is screened against the region directly and then
    falsified over the given class and operation.  Any hit refutes the
    requires-claim with the member (and offending class element)
    embedded; surviving the budget is Unknown, never Proved.
    """
    rng = np.random.default_rng(seed)
    for idx in range(samples):
        m = sample_from(pattern, rng)
        base = region_stable(m, region)
        if base.refuted:
            return Verdict(Status.REFUTED, "member-not-region-stable",
                           witness={"member": m, "inner": base.witness,
                                    "sample_index": idx}, seed=seed)
        inner = falsify(m, gclass, op, region, samples=inner_samples,
                        seed=int(rng.integers(0, 2 ** 31)))
        if inner.refuted:
            return Verdict(Status.REFUTED, "member-falsified",
                           witness={"member": m, "inner": inner.witness,
                                    "sample_index": idx}, seed=seed)
    return Verdict(Status.UNKNOWN, "requires-budget-exhausted", seed=seed)


def allows_stability_mc(pattern, region, samples=200, seed=0):
    """Monte-Carlo prover for "some class member is region-stable"."""
    rng = np.random.default_rng(seed)
    for idx in range(samples):
        m = sample_from(pattern, rng)
        if region_stable(m, region).proved:
            return Verdict(Status.PROVED, "stable-member-found",
                           witness={"member": m, "sample_index": idx},
                           seed=seed)
    return Verdict(Status.UNKNOWN, "allows-budget-exhausted", seed=seed)


def region_cells(a, region, tol=None):
    """Alternative region-relative tagging of the entries.

    Tags each real entry by its position relative to the region:
    "inside", "outside", "boundary", or "zero".  This is the
    boundary-aware variant of the partition; no requires/allows claims
    are attached to it.
    """
    a = np.asarray(a, dtype=float)
    tags = np.empty(a.shape, dtype=object)
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            v = a[i, j]
            t = 1e-12 * (1.0 + abs(v)) if tol is None else tol
            if abs(v) <= t:
                tags[i, j] = "zero"
            else:
                m = region_membership(complex(v, 0.0), region, t)
                tags[i, j] = {Membership.INSIDE: "inside",
                              Membership.BOUNDARY: "boundary",
                              Membership.OUTSIDE: "outside"}[m]
    return tags
