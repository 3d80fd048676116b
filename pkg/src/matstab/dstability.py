"""Matrix-class samplers, falsification and D-stability criteria.

Convention note: the canonical stability region of the library is the
open left half-plane.  Criteria whose natural statement lives in the
positive-stability convention (all eigenvalues in the right half-plane)
say so in their docstring; the CLI flips the input once so that callers
never mix conventions.

Every refutation embeds a replayable witness: the sampled class member,
the realized product, the offending eigenvalue and the stream seed.
"""

from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from . import lyapunov
from .matrix_core import (MINOR_ENUM_CAP, additive_compound_2, as_matrix,
                          block_hadamard, classify, minor_tol,
                          principal_minors, w_map)
from .spectra import (Disk, EigenSolverError, EMIRegion, HalfPlaneLeft,
                      Membership, Status, Verdict, default_tol, eigenvalues,
                      membership_values, region_membership, region_stable)

__all__ = [
    "GClass", "PositiveDiagonal", "DiagonalNormLt1", "VertexDiagonal",
    "AlphaScalar", "AlphaBlockSPD", "SPD", "OrderedDiagonal",
    "IntervalDiagonal", "SignPatternDiagonal", "EntrywisePositiveRank",
    "NegativeDiagonal", "BinOp", "Multiply", "Add", "HadamardProduct",
    "BlockHadamardProduct", "sample_g", "apply_op", "FalsificationWitness",
    "falsify", "necessary_p0plus", "sufficient_suite", "li_wang_stable",
    "MultiPoly", "johnson_tesi_poly", "johnson_tesi_sufficient",
    "hadamard_p_test", "total_stability_scan", "fisher_fuller_stabilize",
    "vertex_schur_check",
]


def _log_uniform(rng, lo, hi, size=None):
    return np.exp(rng.uniform(np.log(lo), np.log(hi), size=size))


def _check_partition(partition, n):
    seen = sorted(i for block in partition for i in block)
    if seen != list(range(n)):
        raise ValueError("partition blocks must be disjoint and cover 0..n-1")


# ---------------------------------------------------------------------------
# Matrix classes G
# ---------------------------------------------------------------------------

class GClass:
    """Base for the parameterized matrix classes with samplers."""

    bounded = False
    name = "gclass"

    def sample(self, rng, n):
        raise NotImplementedError

    def contains(self, g, tol=1e-9):
        raise NotImplementedError

    def sample_checked(self, rng, n):
        g = self.sample(rng, n)
        assert self.contains(g), f"sampler left the class {self.name}"
        return g

    def sample_batch(self, rng, n, k):
        """(k, n, n) stack of checked samples; diagonal classes vectorize."""
        diag = self._sample_diag_batch(rng, n, k)
        if diag is None:
            return np.stack([self.sample_checked(rng, n) for _ in range(k)])
        out = np.zeros((k, n, n))
        idx = np.arange(n)
        out[:, idx, idx] = diag
        return out

    def _sample_diag_batch(self, rng, n, k):
        return None


def _is_diagonal(g, tol):
    return bool(np.all(np.abs(g - np.diag(np.diag(g))) <= tol))


@dataclass(frozen=True)
class PositiveDiagonal(GClass):
    """Positive diagonal matrices; samples are log-uniform over six decades."""

    low: float = 1e-3
    high: float = 1e3
    name = "positive-diagonal"

    def sample(self, rng, n):
        return np.diag(_log_uniform(rng, self.low, self.high, n))

    def contains(self, g, tol=1e-9):
        return _is_diagonal(g, tol) and bool((np.diag(g) > 0).all())

    def _sample_diag_batch(self, rng, n, k):
        d = _log_uniform(rng, self.low, self.high, (k, n))
        assert (d > 0).all()
        return d


@dataclass(frozen=True)
class NegativeDiagonal(GClass):
    low: float = 1e-3
    high: float = 1e3
    name = "negative-diagonal"

    def sample(self, rng, n):
        return -np.diag(_log_uniform(rng, self.low, self.high, n))

    def contains(self, g, tol=1e-9):
        return _is_diagonal(g, tol) and bool((np.diag(g) < 0).all())

    def _sample_diag_batch(self, rng, n, k):
        d = -_log_uniform(rng, self.low, self.high, (k, n))
        assert (d < 0).all()
        return d


@dataclass(frozen=True)
class DiagonalNormLt1(GClass):
    """Diagonal matrices with every |d_ii| < 1 (the Schur D-stability class)."""

    name = "diagonal-norm-lt1"
    bounded = True

    def sample(self, rng, n):
        return np.diag(rng.uniform(-1.0, 1.0, n))

    def contains(self, g, tol=1e-9):
        return _is_diagonal(g, tol) and bool((np.abs(np.diag(g)) < 1.0).all())

    def _sample_diag_batch(self, rng, n, k):
        d = rng.uniform(-1.0, 1.0, (k, n))
        assert (np.abs(d) < 1.0).all()
        return d


@dataclass(frozen=True)
class VertexDiagonal(GClass):
    """Diagonal matrices with entries +-1; a finite class."""

    name = "vertex-diagonal"
    bounded = True

    def sample(self, rng, n):
        return np.diag(rng.integers(0, 2, n) * 2.0 - 1.0)

    def contains(self, g, tol=1e-9):
        return _is_diagonal(g, tol) and bool(
            (np.abs(np.abs(np.diag(g)) - 1.0) <= tol).all())

    def _sample_diag_batch(self, rng, n, k):
        return rng.integers(0, 2, (k, n)) * 2.0 - 1.0


@dataclass(frozen=True)
class AlphaScalar(GClass):
    """Positive diagonal matrices constant on each partition block."""

    partition: tuple
    name = "alpha-scalar"

    def sample(self, rng, n):
        _check_partition(self.partition, n)
        d = np.empty(n)
        for block in self.partition:
            d[list(block)] = _log_uniform(rng, 1e-3, 1e3)
        return np.diag(d)

    def contains(self, g, tol=1e-9):
        if not _is_diagonal(g, tol) or not (np.diag(g) > 0).all():
            return False
        d = np.diag(g)
        return all(np.ptp(d[list(block)]) <= tol * (1.0 + abs(d).max())
                   for block in self.partition)


@dataclass(frozen=True)
class AlphaBlockSPD(GClass):
    """Symmetric positive definite matrices that are block diagonal."""

    partition: tuple
    name = "alpha-block-spd"

    def sample(self, rng, n):
        _check_partition(self.partition, n)
        g = np.zeros((n, n))
        for block in self.partition:
            idx = list(block)
            g[np.ix_(idx, idx)] = _spd_sample(rng, len(idx))
        return g

    def contains(self, g, tol=1e-9):
        mask = np.ones_like(g, dtype=bool)
        for block in self.partition:
            idx = list(block)
            mask[np.ix_(idx, idx)] = False
        if np.abs(g[mask]).max(initial=0.0) > tol:
            return False
        return _spd_contains(g, tol)


def _spd_sample(rng, n):
    q, _ = np.linalg.qr(rng.normal(size=(n, n)))
    lam = _log_uniform(rng, 1e-3, 1e3, n)
    return (q * lam) @ q.T


def _spd_contains(g, tol):
    if np.abs(g - g.T).max() > tol * (1.0 + np.abs(g).max()):
        return False
    return bool(np.linalg.eigvalsh(0.5 * (g + g.T))[0] > 0)


@dataclass(frozen=True)
class SPD(GClass):
    """Symmetric positive definite matrices."""

    name = "spd"

    def sample(self, rng, n):
        return _spd_sample(rng, n)

    def contains(self, g, tol=1e-9):
        return _spd_contains(g, tol)


@dataclass(frozen=True)
class OrderedDiagonal(GClass):
    """Positive diagonals ordered along a permutation: d_t(i) >= d_t(i+1)."""

    tau: tuple
    name = "ordered-diagonal"

    def sample(self, rng, n):
        if sorted(self.tau) != list(range(n)):
            raise ValueError("tau must be a permutation of 0..n-1")
        values = np.sort(_log_uniform(rng, 1e-3, 1e3, n))[::-1]
        d = np.empty(n)
        d[list(self.tau)] = values
        return np.diag(d)

    def contains(self, g, tol=1e-9):
        if not _is_diagonal(g, tol) or not (np.diag(g) > 0).all():
            return False
        d = np.diag(g)[list(self.tau)]
        return bool((d[:-1] >= d[1:] - tol * (1.0 + d.max())).all())


@dataclass(frozen=True)
class IntervalDiagonal(GClass):
    """Diagonal box 0 < d_min <= d <= d_max; infinite upper bounds allowed.

    With any infinite upper bound the class is unbounded and the sampler
    caps that entry at 1e3 times its lower bound.
    """

    d_min: tuple
    d_max: tuple
    name = "interval-diagonal"

    def __post_init__(self):
        lo = np.asarray(self.d_min, dtype=float)
        hi = np.asarray(self.d_max, dtype=float)
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ValueError("interval bounds must be equal-length vectors")
        if not ((lo > 0).all() and (lo < hi).all()):
            raise ValueError("need componentwise 0 < d_min < d_max")
        object.__setattr__(self, "d_min", tuple(lo))
        object.__setattr__(self, "d_max", tuple(hi))

    @property
    def bounded(self):
        return bool(np.isfinite(self.d_max).all())

    def sample(self, rng, n):
        lo = np.asarray(self.d_min)
        hi = np.asarray(self.d_max)
        if lo.size != n:
            raise ValueError("interval bounds do not match the dimension")
        hi = np.where(np.isfinite(hi), hi, 1e3 * lo)
        return np.diag(_log_uniform(rng, lo, hi))

    def contains(self, g, tol=1e-9):
        if not _is_diagonal(g, tol):
            return False
        d = np.diag(g)
        return bool((d >= np.asarray(self.d_min)).all()
                    and (d <= np.asarray(self.d_max)).all())


@dataclass(frozen=True)
class SignPatternDiagonal(GClass):
    """Nonsingular diagonal matrices with a fixed sign pattern."""

    signs: tuple
    name = "sign-pattern-diagonal"

    def sample(self, rng, n):
        s = np.asarray(self.signs, dtype=float)
        if s.size != n or not np.all(np.abs(s) == 1.0):
            raise ValueError("signs must be a vector of +-1 matching n")
        return np.diag(s * _log_uniform(rng, 1e-3, 1e3, n))

    def contains(self, g, tol=1e-9):
        if not _is_diagonal(g, tol):
            return False
        return bool((np.sign(np.diag(g)) == np.asarray(self.signs)).all())


@dataclass(frozen=True)
class EntrywisePositiveRank(GClass):
    """Entry-wise positive matrices of rank at most k (sums of outer products)."""

    k: int = 1
    name = "entrywise-positive-rank"

    def sample(self, rng, n):
        if not 1 <= self.k <= n:
            raise ValueError("rank must lie in 1..n")
        g = np.zeros((n, n))
        for _ in range(self.k):
            u = _log_uniform(rng, 10 ** -1.5, 10 ** 1.5, n)
            v = _log_uniform(rng, 10 ** -1.5, 10 ** 1.5, n)
            g += np.outer(u, v)
        return g

    def contains(self, g, tol=1e-9):
        if not (g > 0).all():
            return False
        return np.linalg.matrix_rank(g, tol=1e-9 * (1.0 + abs(g).max())) <= self.k


# ---------------------------------------------------------------------------
# Binary operations
# ---------------------------------------------------------------------------

class BinOp:
    name = "binop"

    def apply(self, g, a):
        raise NotImplementedError

    def apply_batch(self, gs, a):
        return np.stack([self.apply(g, a) for g in gs])


@dataclass(frozen=True)
class Multiply(BinOp):
    name = "multiply"

    def apply(self, g, a):
        return g @ a

    def apply_batch(self, gs, a):
        return gs @ a


@dataclass(frozen=True)
class Add(BinOp):
    name = "add"

    def apply(self, g, a):
        return g + a

    def apply_batch(self, gs, a):
        return gs + a


@dataclass(frozen=True)
class HadamardProduct(BinOp):
    name = "hadamard"

    def apply(self, g, a):
        return g * a

    def apply_batch(self, gs, a):
        return gs * a


@dataclass(frozen=True)
class BlockHadamardProduct(BinOp):
    block: int
    name = "block-hadamard"

    def apply(self, g, a):
        return block_hadamard(g, a, self.block)


def sample_g(gclass, rng, n):
    """One matrix provably in the class; the structural check is asserted."""
    return gclass.sample_checked(rng, n)


def apply_op(op, g, a):
    """Realize G o A for the given binary operation."""
    return op.apply(np.asarray(g, dtype=float), as_matrix(a))


# ---------------------------------------------------------------------------
# Falsification
# ---------------------------------------------------------------------------

@dataclass
class FalsificationWitness:
    """A sampled class member whose realized product exits the region."""

    g: np.ndarray
    realized: np.ndarray
    eigenvalue: complex
    sample_index: int
    seed: object
    note: str = ""


def _region_is_bounded(region):
    # conservative: used only to trigger the unbounded-class refutation
    if isinstance(region, Disk):
        return True
    if isinstance(region, EMIRegion):
        return bool(np.linalg.eigvalsh(region.r22)[0] > 0)
    return False


def _unbounded_witness(a, gclass, op, region, rng, tol):
    """Concrete witness for the bounded-region / unbounded-class refutation."""
    n = a.shape[0]
    base = gclass.sample_checked(rng, n)
    for scale in (10.0 ** k for k in range(0, 13)):
        g = base * scale
        if not gclass.contains(g):
            continue
        m = apply_op(op, g, a)
        spec = eigenvalues(m)
        for z in spec:
            t = default_tol(z) if tol is None else tol
            if region_membership(z, region, t) is not Membership.INSIDE:
                return g, m, complex(z)
    return None


def falsify(a, gclass, op, region, samples=10000, seed=0, tol=None,
            batch=256):
    """Sample the class and hunt for a spectrum outside the region.

    Refuted embeds the replayable witness; Unknown after the budget.
    Never returns Proved.  A bounded region paired with an unbounded
    class is refuted up front: no matrix is stable for such a pair, and
    a concrete scaled witness is attached whenever one exists.
    """
    a = as_matrix(a)
    n = a.shape[0]
    rng = np.random.default_rng(seed)

    if _region_is_bounded(region) and not gclass.bounded:
        found = _unbounded_witness(a, gclass, op, region, rng, tol)
        if found is not None:
            g, m, z = found
            wit = FalsificationWitness(g, m, z, -1, seed,
                                       note="unbounded-class-scaling")
        else:
            wit = FalsificationWitness(None, None, None, -1, seed,
                                       note="unbounded-class-no-finite-witness")
        return Verdict(Status.REFUTED, "unbounded-class-bounded-region",
                       witness=wit, seed=seed)

    done = 0
    while done < samples:
        b = min(batch, samples - done)
        gs = gclass.sample_batch(rng, n, b)
        ms = op.apply_batch(gs, a)
        try:
            specs = np.linalg.eigvals(ms)
        except np.linalg.LinAlgError:
            # isolate the convergence failure; skip only that sample
            specs = np.full((b, n), 0.0, dtype=complex)
            for i in range(b):
                try:
                    specs[i] = np.linalg.eigvals(ms[i])
                except np.linalg.LinAlgError:
                    specs[i] = np.nan
        # vectorized screen; flagged candidates are re-checked one by one
        if tol is None:
            tols = 1e-8 * (1.0 + np.abs(specs))
            screen_tol = 1e-8
        else:
            tols = np.full(specs.shape, tol)
            screen_tol = tol
        values = membership_values(specs, region, screen_tol)
        bad = ~(values < -tols)
        hits = np.nonzero(bad.any(axis=1))[0]
        for i in hits:
            g = gs[i]
            m = op.apply(g, a)
            try:
                spec = eigenvalues(m)
            except EigenSolverError:
                continue  # cannot witness a sample the solver rejects
            for z in spec:
                t = default_tol(z) if tol is None else tol
                if region_membership(z, region, t) is not Membership.INSIDE:
                    wit = FalsificationWitness(g, m, complex(z),
                                               done + int(i), seed)
                    return Verdict(Status.REFUTED, "sampled-counterexample",
                                   witness=wit, seed=seed)
        done += b
    return Verdict(Status.UNKNOWN, "falsification-budget-exhausted", seed=seed)


# ---------------------------------------------------------------------------
# Necessary and sufficient conditions
# ---------------------------------------------------------------------------

def necessary_p0plus(a, mode="multiplicative"):
    """Necessary condition for D-stability of a Hurwitz-convention matrix.

    Both multiplicative and additive D-stability force -A to be a P0+
    matrix; a failing minor refutes D-stability outright.  Passing proves
    nothing, so the best non-refuted status is Unknown with the flag
    ``necessary-p0plus-passed``.
    """
    a = as_matrix(a)
    if mode not in ("multiplicative", "additive"):
        raise ValueError(f"unknown mode {mode!r}")
    n = a.shape[0]
    if n > MINOR_ENUM_CAP:
        raise ValueError(f"minor enumeration capped at n = {MINOR_ENUM_CAP}")
    b = -a
    sums = {}
    for alpha, value in principal_minors(b):
        k = len(alpha)
        tol = minor_tol(b, k)
        if value < -tol:
            return Verdict(Status.REFUTED, f"not-p0-{mode}",
                           witness={"indices": alpha, "minor": value,
                                    "matrix": "-A"})
        sums[k] = sums.get(k, 0.0) + value
    for k in sorted(sums):
        if sums[k] <= minor_tol(b, k):
            return Verdict(Status.REFUTED, f"p0-minor-sums-vanish-{mode}",
                           witness={"order": k, "sum": sums[k],
                                    "matrix": "-A"})
    return Verdict(Status.UNKNOWN, "necessary-p0plus-passed")


def _is_triangular(a, tol):
    upper = np.all(np.abs(a[np.tril_indices_from(a, -1)]) <= tol)
    lower = np.all(np.abs(a[np.triu_indices_from(a, 1)]) <= tol)
    return upper or lower


def sufficient_suite(a, budget=lyapunov.DEFAULT_BUDGET):
    """Sufficient D-stability tests, positive-stability convention.

    Any Proved item implies D-stability of ``a`` (D a positive stable for
    every positive diagonal D).  Items: diagonal stability by certificate
    search, M-matrix, strict diagonal dominance with positive diagonal,
    triangular with positive diagonal, tridiagonal P-matrix, and the
    W-map route (the off-diagonal absolute-value image of -A, or of its
    inverse, Hurwitz stable implies diagonal stability).
    """
    a = as_matrix(a)
    rep = classify(a)
    tol = minor_tol(a, 1)
    diag_pos = bool((np.diag(a) > tol).all())
    out = []

    search = lyapunov.diagonal_stability_search(-a, budget=budget)
    if search.proved:
        out.append(("diagonal-stability", Verdict(
            Status.PROVED, "diagonally-stable", witness=search.witness)))
    else:
        out.append(("diagonal-stability", search))

    def exact(name, flag):
        if flag:
            out.append((name, Verdict(Status.PROVED, name)))
        else:
            out.append((name, Verdict(Status.UNKNOWN, f"{name}-premise-fails")))

    exact("m-matrix", bool(rep.m_matrix))
    exact("strict-diagonal-dominance",
          diag_pos and (rep.strict_row_dd or rep.strict_col_dd))
    exact("triangular-positive-diagonal", diag_pos and _is_triangular(a, tol))
    exact("tridiagonal-p-matrix", bool(rep.tridiagonal and rep.p))

    b = -a
    w_ok = region_stable(w_map(b), HalfPlaneLeft()).proved
    if not w_ok and abs(np.linalg.det(b)) > minor_tol(b, a.shape[0]):
        w_ok = region_stable(w_map(np.linalg.inv(b)), HalfPlaneLeft()).proved
    exact("w-map-stable", w_ok)
    return out


def li_wang_stable(a):
    """Exact Hurwitz test through the second additive compound.

    A is Hurwitz iff its second additive compound is Hurwitz and
    (-1)^n det A is positive.
    """
    a = as_matrix(a)
    n = a.shape[0]
    det = float(np.linalg.det(a))
    sign_ok = ((-1.0) ** n) * det > 0
    if n == 1:
        if sign_ok:
            return Verdict(Status.PROVED, "li-wang-scalar")
        return Verdict(Status.REFUTED, "li-wang-determinant-sign",
                       witness={"det": det})
    inner = region_stable(additive_compound_2(a), HalfPlaneLeft())
    if inner.proved and sign_ok:
        return Verdict(Status.PROVED, "li-wang-compound-stable")
    if not sign_ok:
        return Verdict(Status.REFUTED, "li-wang-determinant-sign",
                       witness={"det": det, "n": n})
    return Verdict(Status.REFUTED, "li-wang-compound-unstable",
                   witness=inner.witness)


# ---------------------------------------------------------------------------
# Determinant-polynomial tests
# ---------------------------------------------------------------------------

JOHNSON_TESI_CAP = 4


class MultiPoly:
    """Sparse real polynomial in d_1..d_n keyed by exponent tuples."""

    def __init__(self, coeffs=None):
        self.coeffs = dict(coeffs or {})

    def __add__(self, other):
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0.0) + c
        return MultiPoly(out)

    def __mul__(self, other):
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0.0) + c1 * c2
        return MultiPoly(out)

    def __neg__(self):
        return MultiPoly({e: -c for e, c in self.coeffs.items()})

    def evaluate(self, point):
        point = np.asarray(point, dtype=float)
        total = 0.0
        for e, c in self.coeffs.items():
            total += c * np.prod(point ** np.asarray(e))
        return float(total)

    def nonzero(self, tol=0.0):
        return {e: c for e, c in self.coeffs.items() if abs(c) > tol}


def _det_poly(entries, nvars):
    """Determinant of a matrix of MultiPoly entries by column expansion."""
    zero = MultiPoly({})
    memo = {}

    def minor(rows):
        if not rows:
            return MultiPoly({(0,) * nvars: 1.0})
        key = rows
        if key in memo:
            return memo[key]
        col = len(entries) - len(rows)
        acc = zero
        for pos, r in enumerate(rows):
            entry = entries[r][col]
            if not entry.coeffs:
                continue
            sub = minor(rows[:pos] + rows[pos + 1:])
            term = entry * sub
            if pos % 2:
                term = -term
            acc = acc + term
        memo[key] = acc
        return acc

    return minor(tuple(range(len(entries))))


def johnson_tesi_poly(a):
    """Exact expansion of det [[A, D], [-D, A]] in the diagonal unknowns.

    Every d_i enters the 2n x 2n determinant at most squared.  The
    symbolic expansion grows exponentially, so the dimension is capped
    at n = 4.
    """
    a = as_matrix(a)
    n = a.shape[0]
    if n > JOHNSON_TESI_CAP:
        raise ValueError(f"symbolic determinant capped at n = {JOHNSON_TESI_CAP}")

    def const(c):
        return MultiPoly({(0,) * n: float(c)} if c != 0.0 else {})

    def unit(i, sign):
        e = [0] * n
        e[i] = 1
        return MultiPoly({tuple(e): sign})

    size = 2 * n
    entries = [[const(0.0)] * size for _ in range(size)]
    for i in range(n):
        for j in range(n):
            entries[i][j] = const(a[i, j])
            entries[n + i][n + j] = const(a[i, j])
        entries[i][n + i] = unit(i, 1.0)
        entries[n + i][i] = unit(i, -1.0)
    return _det_poly(entries, n)


def johnson_tesi_sufficient(a, tol=None):
    """Sufficient D-stability test: Hurwitz plus a nonnegative expansion.

    Proved when the matrix is Hurwitz stable and every coefficient of the
    determinant polynomial is nonnegative; Unknown otherwise (the test is
    one-directional).
    """
    a = as_matrix(a)
    base = region_stable(a, HalfPlaneLeft())
    if not base.proved:
        return Verdict(Status.UNKNOWN, "johnson-tesi-not-hurwitz")
    poly = johnson_tesi_poly(a)
    if tol is None:
        scale = max((abs(c) for c in poly.coeffs.values()), default=1.0)
        tol = 1e-9 * (1.0 + scale)
    worst = min(poly.coeffs.values(), default=0.0)
    if worst >= -tol:
        return Verdict(Status.PROVED, "johnson-tesi-nonnegative-coefficients")
    offender = min(poly.coeffs.items(), key=lambda kv: kv[1])
    return Verdict(Status.UNKNOWN, "johnson-tesi-negative-coefficient",
                   witness={"exponents": offender[0], "coefficient": offender[1]})


HADAMARD_P_CAP = 10


def _p_matrix_violation(m):
    """First failing principal minor of a P-matrix test, or None."""
    n = m.shape[0]
    for k in range(1, n + 1):
        tol = minor_tol(m, k)
        for alpha in combinations(range(n), k):
            val = float(np.linalg.det(m[np.ix_(alpha, alpha)]))
            if val <= tol:
                return alpha, val
    return None


def hadamard_p_test(a, samples=1000, seed=0):
    """Sampled Hadamard P-property test, positive-stability convention.

    Diagonal stability forces A o S to be a P-matrix for every nonzero
    symmetric positive semidefinite S; one sampled failure refutes
    diagonal stability.  Samples are random correlation matrices (PSD,
    unit diagonal): positive scaling of S cannot change the P-property,
    so the unit-diagonal normalization loses nothing.
    """
    a = as_matrix(a)
    n = a.shape[0]
    if n > HADAMARD_P_CAP:
        raise ValueError(f"hadamard sampling capped at n = {HADAMARD_P_CAP}")
    rng = np.random.default_rng(seed)
    for idx in range(samples):
        b = rng.normal(size=(n, n))
        b /= np.linalg.norm(b, axis=1, keepdims=True)
        s = b @ b.T
        np.fill_diagonal(s, 1.0)
        bad = _p_matrix_violation(a * s)
        if bad is not None:
            alpha, val = bad
            return Verdict(Status.REFUTED, "hadamard-p-violation",
                           witness={"s": s, "indices": alpha, "minor": val,
                                    "sample_index": idx}, seed=seed)
    return Verdict(Status.UNKNOWN, "hadamard-p-budget-exhausted", seed=seed)


# ---------------------------------------------------------------------------
# Scans and constructive searches
# ---------------------------------------------------------------------------

TOTAL_SCAN_CAP = 10


def total_stability_scan(a, depth=None, samples=2000, budget=2000, seed=0):
    """Necessary / sufficient / falsification sweep over principal submatrices.

    Hurwitz convention.  Returns a map from 0-based index tuples to the
    per-submatrix verdict record plus an ``overall`` aggregate that is
    Refuted as soon as any submatrix is refuted.
    """
    a = as_matrix(a)
    n = a.shape[0]
    if n > TOTAL_SCAN_CAP:
        raise ValueError(f"total scan capped at n = {TOTAL_SCAN_CAP}")
    if depth is None:
        depth = n
    results = {}
    overall = Verdict(Status.UNKNOWN, "total-scan-no-refutation", seed=seed)
    for k in range(1, depth + 1):
        for alpha in combinations(range(n), k):
            sub = a[np.ix_(alpha, alpha)]
            nec = necessary_p0plus(sub)
            record = {"necessary": nec}
            if nec.refuted:
                record["verdict"] = Verdict(Status.REFUTED,
                                            f"submatrix-{nec.reason}",
                                            witness=nec.witness)
            else:
                suite = sufficient_suite(-sub, budget=budget)
                record["sufficient"] = suite
                fal = falsify(sub, PositiveDiagonal(), Multiply(),
                              HalfPlaneLeft(), samples=samples, seed=seed)
                record["falsify"] = fal
                if fal.refuted:
                    record["verdict"] = Verdict(Status.REFUTED,
                                                "submatrix-falsified",
                                                witness=fal.witness)
                elif any(v.proved for _, v in suite):
                    record["verdict"] = Verdict(Status.PROVED,
                                                "submatrix-sufficient")
                else:
                    record["verdict"] = Verdict(Status.UNKNOWN,
                                                "submatrix-undecided")
            results[alpha] = record
            if record["verdict"].refuted and not overall.refuted:
                overall = Verdict(Status.REFUTED,
                                  f"principal-submatrix-{alpha}-refuted",
                                  witness=record["verdict"].witness, seed=seed)
    if not overall.refuted:
        proved_all = all(rec["verdict"].proved for rec in results.values())
        if proved_all:
            overall = Verdict(Status.PROVED, "all-submatrices-sufficient",
                              seed=seed)
    results["overall"] = overall
    return results


def fisher_fuller_stabilize(a, budget=200):
    """Search a positive diagonal D making the spectrum of D A positive simple.

    Premise: all leading principal minors of ``a`` are positive; existence
    is then guaranteed, and geometric diagonals diag(eps^0, .., eps^{n-1})
    realize it for small eps.  The sweep is log-scale over
    eps in [1e-6, 1]; budget exhaustion returns Unknown.
    """
    a = as_matrix(a)
    n = a.shape[0]
    lead = [float(np.linalg.det(a[:k, :k])) for k in range(1, n + 1)]
    if any(d <= minor_tol(a, k + 1) for k, d in enumerate(lead)):
        raise ValueError("premise fails: leading principal minors must be positive")
    for eps in np.logspace(0.0, -6.0, max(budget, 2)):
        d = eps ** np.arange(n)
        spec = eigenvalues(d[:, None] * a)
        scale = max(abs(spec).max(), 1e-300)
        if np.abs(spec.imag).max() > 1e-8 * scale:
            continue
        real = np.sort(spec.real)
        if real[0] <= 1e-12 * scale:
            continue
        spread = real[-1] - real[0]
        if n > 1 and (spread <= 0 or np.diff(real).min() <= 1e-6 * spread):
            continue
        return Verdict(Status.PROVED, "fisher-fuller-diagonal-found",
                       witness={"epsilon": float(eps), "factor": np.diag(d),
                                "spectrum": real.tolist()})
    return Verdict(Status.UNKNOWN, "fisher-fuller-budget-exhausted")


VERTEX_ENUM_CAP = 16


def vertex_schur_check(a, tol=None):
    """Exhaustive spectral-radius check over all +-1 diagonal multipliers.

    Refuted kills Schur D-stability (vertex stability is necessary for
    it); Proved asserts vertex stability only.  Enumeration is 2^n,
    capped at n = 16.
    """
    a = as_matrix(a)
    n = a.shape[0]
    if n > VERTEX_ENUM_CAP:
        raise ValueError(f"vertex enumeration capped at n = {VERTEX_ENUM_CAP}")
    disk = Disk(0.0, 1.0)
    for signs in product((1.0, -1.0), repeat=n):
        d = np.asarray(signs)
        m = d[:, None] * a
        spec = eigenvalues(m)
        for z in spec:
            t = default_tol(z) if tol is None else tol
            if region_membership(z, disk, t) is not Membership.INSIDE:
                return Verdict(Status.REFUTED, "vertex-spectral-radius",
                               witness={"signs": signs,
                                        "eigenvalue": complex(z),
                                        "spectral_radius": float(abs(spec).max())})
    return Verdict(Status.PROVED, "vertex-stable")
