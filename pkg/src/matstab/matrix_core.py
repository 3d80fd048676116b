"""Dense matrix constructions and determinantal class predicates.

All index sets in witnesses and in :func:`principal_minors` output are
0-based tuples.  Minor-based predicates use floating determinants with
the scale-aware zero tolerance ``1e-10 * (1 + ||A||_inf ** k)`` for an
order-``k`` minor.
"""

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

__all__ = [
    "MINOR_ENUM_CAP", "as_matrix", "minor_tol", "hadamard", "kronecker",
    "block_hadamard", "compound", "additive_compound_2", "comparison_matrix",
    "w_map", "sign_pattern", "principal_minors", "leading_minors",
    "is_z_matrix", "is_metzler", "is_m_matrix", "generalized_diag_dominant",
    "square_dd_every_order", "ClassReport", "classify",
]

# Full principal-minor enumeration grows as 2^n; beyond this cap classify
# degrades to the flags computable without enumeration.
MINOR_ENUM_CAP = 14
_PAIRWISE_MINOR_CAP = 8


def as_matrix(a):
    """Validate and return a dense square float matrix."""
    m = np.asarray(a, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] == 0:
        raise ValueError("matrix must be nonempty")
    if not np.isfinite(m).all():
        raise ValueError("matrix entries must be finite")
    return m


def minor_tol(a, order):
    return 1e-10 * (1.0 + np.linalg.norm(a, np.inf) ** order)


def hadamard(a, b):
    """Entry-wise product of two equal-size matrices."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ValueError("hadamard product needs equal dimensions")
    return a * b


def kronecker(a, b):
    """Kronecker product; block (i, j) of the result is a_ij * b."""
    return np.kron(as_matrix(a), as_matrix(b))


def block_hadamard(h, g, block):
    """Blockwise ordinary products H_ij @ G_ij on a grid of `block`-size blocks."""
    h, g = as_matrix(h), as_matrix(g)
    if h.shape != g.shape:
        raise ValueError("block hadamard product needs equal dimensions")
    n = h.shape[0]
    if block <= 0 or n % block != 0:
        raise ValueError(f"block size {block} does not divide dimension {n}")
    k = n // block
    out = np.empty_like(h)
    for i in range(k):
        for j in range(k):
            r = slice(i * block, (i + 1) * block)
            c = slice(j * block, (j + 1) * block)
            out[r, c] = h[r, c] @ g[r, c]
    return out


def compound(a, j):
    """j-th multiplicative compound: all j x j minors in lexicographic order."""
    a = as_matrix(a)
    n = a.shape[0]
    if not 1 <= j <= n:
        raise ValueError(f"compound order must be in 1..{n}, got {j}")
    rows = list(combinations(range(n), j))
    m = len(rows)
    out = np.empty((m, m))
    for p, alpha in enumerate(rows):
        sub = a[np.ix_(alpha, range(n))]
        for q, beta in enumerate(rows):
            out[p, q] = np.linalg.det(sub[:, beta])
    return out


def additive_compound_2(a):
    """Second additive compound; its spectrum is the pairwise eigenvalue sums."""
    a = as_matrix(a)
    n = a.shape[0]
    if n < 2:
        raise ValueError("second additive compound needs n >= 2")
    pairs = list(combinations(range(n), 2))
    m = len(pairs)
    out = np.zeros((m, m))
    eye = np.eye(n)
    for p, (i, j) in enumerate(pairs):
        for q, (k, l) in enumerate(pairs):
            # two-determinant sum over the 2x2 crossings with the identity
            out[p, q] = (a[i, k] * eye[j, l] - eye[i, l] * a[j, k]
                         + eye[i, k] * a[j, l] - a[i, l] * eye[j, k])
    return out


def comparison_matrix(a):
    """|a_ii| on the diagonal, -|a_ij| off the diagonal."""
    a = as_matrix(a)
    out = -abs(a)
    np.fill_diagonal(out, abs(np.diag(a)))
    return out


def w_map(a):
    """Keep the diagonal, replace off-diagonal entries by absolute values."""
    a = as_matrix(a)
    out = abs(a)
    np.fill_diagonal(out, np.diag(a))
    return out


def sign_pattern(a):
    """Entry-wise sign matrix with values in {-1, 0, +1}."""
    return np.sign(as_matrix(a))


def principal_minors(a, max_order=None):
    """All principal minors up to ``max_order`` as (index tuple, value) pairs.

    Enumeration is capped at n = 14 (2^n growth).
    """
    a = as_matrix(a)
    n = a.shape[0]
    if n > MINOR_ENUM_CAP:
        raise ValueError(f"principal minor enumeration capped at n = {MINOR_ENUM_CAP}")
    if max_order is None:
        max_order = n
    if not 1 <= max_order <= n:
        raise ValueError(f"max_order must be in 1..{n}")
    out = []
    for k in range(1, max_order + 1):
        for alpha in combinations(range(n), k):
            sub = a[np.ix_(alpha, alpha)]
            out.append((alpha, float(np.linalg.det(sub))))
    return out


def leading_minors(a):
    a = as_matrix(a)
    return [float(np.linalg.det(a[:k, :k])) for k in range(1, a.shape[0] + 1)]


def is_z_matrix(a, tol=None):
    a = as_matrix(a)
    if tol is None:
        tol = minor_tol(a, 1)
    off = a - np.diag(np.diag(a))
    return bool((off <= tol).all())


def is_metzler(a, tol=None):
    return is_z_matrix(-as_matrix(a), tol)


def is_m_matrix(a, tol=None):
    """Z-matrix with all principal minors positive.

    For Z-matrices positivity of the leading principal minors already
    forces positivity of all principal minors, so the test runs in O(n^3)
    and carries no enumeration cap.
    """
    a = as_matrix(a)
    if not is_z_matrix(a, tol):
        return False
    for k, d in enumerate(leading_minors(a), start=1):
        if d <= minor_tol(a, k):
            return False
    return True


def generalized_diag_dominant(a):
    """Existence of positive row weights m with m_i|a_ii| > sum m_j|a_ij|.

    Equivalent to the comparison matrix being an M-matrix.
    """
    return is_m_matrix(comparison_matrix(a))


def square_dd_every_order(a):
    """Strict row square diagonal dominance for every order of minors.

    For each order k and each row set alpha, the squared principal minor
    must dominate the sum of squares over all other column sets.  The
    pair enumeration is combinatorial, so the test is limited to n <= 8.
    """
    a = as_matrix(a)
    n = a.shape[0]
    if n > _PAIRWISE_MINOR_CAP:
        raise ValueError(f"pairwise minor enumeration capped at n = {_PAIRWISE_MINOR_CAP}")
    for k in range(1, n + 1):
        sets = list(combinations(range(n), k))
        for alpha in sets:
            rows = a[alpha, :]
            diag = np.linalg.det(rows[:, alpha])
            rest = sum(np.linalg.det(rows[:, beta]) ** 2
                       for beta in sets if beta != alpha)
            if diag ** 2 <= rest:
                return False
    return True


@dataclass
class ClassReport:
    """Boolean class flags with a witness for every decided-false flag.

    Flags left ``None`` were not decidable (minor enumeration capped).
    The flag lattice ``m_matrix => z & p``, ``p => p0_plus => p0`` and
    ``h_plus => h_matrix`` holds by construction.
    """

    z: bool = None
    metzler: bool = None
    p: bool = None
    p0: bool = None
    p0_plus: bool = None
    m_matrix: bool = None
    hicksian: bool = None
    strict_row_dd: bool = None
    strict_col_dd: bool = None
    ndd: bool = None
    pdd: bool = None
    tridiagonal: bool = None
    normal: bool = None
    sign_symmetric: bool = None
    h_matrix: bool = None
    h_plus: bool = None
    witnesses: dict = field(default_factory=dict)

    def flags(self):
        return {k: v for k, v in self.__dict__.items() if k != "witnesses"}


def _p_flags(a, witnesses, prefix="", negate=False):
    """P / P0 / P0+ flags from a full principal-minor sweep."""
    m = -a if negate else a
    p = p0 = True
    order_sums = {}
    p_wit = p0_wit = None
    for alpha, value in principal_minors(m):
        k = len(alpha)
        tol = minor_tol(m, k)
        order_sums[k] = order_sums.get(k, 0.0) + value
        if value <= tol and p:
            p = False
            p_wit = {"indices": alpha, "value": value}
        if value < -tol and p0:
            p0 = False
            p0_wit = {"indices": alpha, "value": value}
    q = True
    q_wit = None
    for k, s in sorted(order_sums.items()):
        if s <= minor_tol(m, k):
            q = False
            q_wit = {"order": k, "sum": s}
            break
    p0_plus = p0 and q
    if p_wit is not None:
        witnesses[prefix + "p"] = p_wit
    if p0_wit is not None:
        witnesses[prefix + "p0"] = p0_wit
    if not p0_plus:
        witnesses[prefix + "p0_plus"] = p0_wit or q_wit
    return p, p0, p0_plus


def classify(a):
    """Full class report for a dense square matrix.

    Minor-based flags need 2^n principal minors and are reported as
    ``None`` beyond n = 14; the pairwise sign-symmetry sweep is further
    capped at n = 8.  Generalized diagonal dominance (the NDD / PDD and
    H-matrix flags) is decided through the M-matrix test on the
    comparison matrix.
    """
    a = as_matrix(a)
    n = a.shape[0]
    w = {}
    rep = ClassReport(witnesses=w)
    tol1 = minor_tol(a, 1)
    off = a - np.diag(np.diag(a))

    rep.z = bool((off <= tol1).all())
    if not rep.z:
        i, j = np.unravel_index(np.argmax(off), off.shape)
        w["z"] = {"entry": (int(i), int(j)), "value": float(a[i, j])}
    rep.metzler = bool((off >= -tol1).all())
    if not rep.metzler:
        i, j = np.unravel_index(np.argmin(off), off.shape)
        w["metzler"] = {"entry": (int(i), int(j)), "value": float(a[i, j])}

    radii = abs(off).sum(axis=1)
    diag = np.diag(a)
    rep.strict_row_dd = bool((abs(diag) > radii + tol1).all())
    if not rep.strict_row_dd:
        i = int(np.argmin(abs(diag) - radii))
        w["strict_row_dd"] = {"row": i, "diag": float(diag[i]),
                              "radius": float(radii[i])}
    col_radii = abs(off).sum(axis=0)
    rep.strict_col_dd = bool((abs(diag) > col_radii + tol1).all())
    if not rep.strict_col_dd:
        i = int(np.argmin(abs(diag) - col_radii))
        w["strict_col_dd"] = {"column": i, "diag": float(diag[i]),
                              "radius": float(col_radii[i])}

    rep.tridiagonal = bool(all(abs(a[i, j]) <= tol1
                               for i in range(n) for j in range(n)
                               if abs(i - j) > 1))
    rep.normal = bool(np.allclose(a @ a.T, a.T @ a,
                                  atol=1e-10 * (1.0 + np.linalg.norm(a) ** 2)))

    rep.h_matrix = is_m_matrix(comparison_matrix(a))
    rep.h_plus = rep.h_matrix and bool((diag >= -tol1).all())
    gdd = rep.h_matrix  # generalized diagonal dominance, same test
    rep.ndd = gdd and bool((diag < -tol1).all())
    rep.pdd = gdd and bool((diag > tol1).all())

    if n <= MINOR_ENUM_CAP:
        rep.p, rep.p0, rep.p0_plus = _p_flags(a, w)
        hick_p, _, _ = _p_flags(a, w, prefix="hicksian:", negate=True)
        rep.hicksian = hick_p
        rep.m_matrix = rep.z and rep.p
        if not rep.m_matrix:
            w.setdefault("m_matrix", w.get("z") or w.get("p"))
    if n <= _PAIRWISE_MINOR_CAP:
        rep.sign_symmetric = True
        for k in range(1, n + 1):
            sets = list(combinations(range(n), k))
            for ai in range(len(sets)):
                for bi in range(ai + 1, len(sets)):
                    alpha, beta = sets[ai], sets[bi]
                    m1 = np.linalg.det(a[np.ix_(alpha, beta)])
                    m2 = np.linalg.det(a[np.ix_(beta, alpha)])
                    if m1 * m2 < -minor_tol(a, 2 * k):
                        rep.sign_symmetric = False
                        w["sign_symmetric"] = {"rows": alpha, "cols": beta,
                                               "product": float(m1 * m2)}
                        break
                if rep.sign_symmetric is False:
                    break
            if rep.sign_symmetric is False:
                break
    return rep
