"""Pseudorandomness audits for host graphs.

The second eigenvalue (in absolute value) of the adjacency matrix drives
everything downstream: the mixing inequality, the joinedness bound
``λn/d`` and small-set expansion.  These functions compute it and try to
falsify the consequences by sampling.  A sampled violation means the
supplied ``λ`` is wrong, never that the underlying inequality is.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np
import scipy.sparse.linalg as spla

from .graph_core import Graph

DENSE_CUTOFF = 2000
DEFAULT_TOL = 1e-6


class SpectralError(RuntimeError):
    def __init__(self, message: str, residual: float = math.inf):
        super().__init__(message)
        self.residual = residual


class JoinednessError(RuntimeError):
    def __init__(self, message: str, a_set: list[int], b_set: list[int]):
        super().__init__(message)
        self.a_set = a_set
        self.b_set = b_set


class ExpansionPreconditionError(ValueError):
    def __init__(self, vertex: int, degree: int, needed: float):
        super().__init__(f"vertex {vertex} has {degree} neighbours in Y, needs {needed}")
        self.vertex = vertex


@dataclass
class SpectralReport:
    n: int
    d: Fraction
    lambda_hat: float
    method: str
    residual_tol: float
    regular: bool = True
    # λ2 == d: disconnected; λn == -d: a bipartite component
    degenerate: bool = False
    lambda_2: float = math.nan
    lambda_min: float = math.nan

    def to_dict(self) -> dict:
        out = asdict(self)
        out["d"] = float(self.d)
        return out


def _average_degree(g: Graph) -> Fraction:
    return Fraction(2 * g.num_edges, g.n) if g.n else Fraction(0)


def second_eigenvalue(g: Graph, tol: float = DEFAULT_TOL, maxiter: int | None = None) -> SpectralReport:
    """``max(|λ2|, |λn|)`` of the adjacency matrix.

    Dense symmetric eigensolve up to ``DENSE_CUTOFF`` vertices; above that,
    Lanczos on the adjacency matrix with the all-ones direction projected
    out (regular graphs) or on the two spectral ends (irregular graphs).
    """
    n = g.n
    d = _average_degree(g)
    regular = g.is_regular()
    if n < 2:
        return SpectralReport(n, d, 0.0, "dense", tol, regular)
    if n <= DENSE_CUTOFF:
        vals = np.linalg.eigvalsh(g.adjacency_matrix(sparse=False))
        lam2, lam_min = float(vals[-2]), float(vals[0])
        lam = max(abs(lam2), abs(lam_min))
        method = "dense"
    else:
        lam2, lam_min, lam = _iterative(g, d, regular, tol, maxiter)
        method = "iterative"
    dd = float(d)
    degenerate = regular and (abs(lam2 - dd) <= 1e3 * tol or abs(lam_min + dd) <= 1e3 * tol)
    return SpectralReport(n, d, lam, method, tol, regular, degenerate, lam2, lam_min)


def _iterative(g: Graph, d: Fraction, regular: bool, tol: float, maxiter):
    a = g.adjacency_matrix()
    n = g.n
    try:
        if regular:
            shift = float(d) / n

            def mv(x):
                x = np.asarray(x).ravel()
                return a @ x - shift * x.sum() * np.ones(n)

            op = spla.LinearOperator((n, n), matvec=mv, dtype=np.float64)
            top = spla.eigsh(op, k=2, which="LA", tol=tol, maxiter=maxiter, return_eigenvectors=False)
            bottom = spla.eigsh(op, k=1, which="SA", tol=tol, maxiter=maxiter, return_eigenvectors=False)
            # the projected all-ones direction sits at 0; the top two then hold λ2
            lam2 = float(max(top))
            lam_min = float(min(bottom))
        else:
            top = spla.eigsh(a, k=2, which="LA", tol=tol, maxiter=maxiter, return_eigenvectors=False)
            bottom = spla.eigsh(a, k=1, which="SA", tol=tol, maxiter=maxiter, return_eigenvectors=False)
            lam2 = float(min(top))
            lam_min = float(min(bottom))
    except spla.ArpackNoConvergence as exc:
        vals = exc.eigenvalues
        raise SpectralError(
            f"Lanczos did not converge ({len(vals)} eigenvalues found)", residual=float("nan")
        ) from exc
    return lam2, lam_min, max(abs(lam2), abs(lam_min))


def lower_bound(n: int, d: float) -> float:
    """``sqrt(d (n - d) / (n - 1))``, the smallest possible second eigenvalue."""
    return math.sqrt(d * (n - d) / (n - 1))


def check_lower_bound(report: SpectralReport, tol: float | None = None) -> bool:
    tol = report.residual_tol if tol is None else tol
    return report.lambda_hat >= lower_bound(report.n, float(report.d)) - tol


@dataclass
class MixingAudit:
    """``violation_count`` counts every failing pair; ``violations`` keeps the first few."""

    samples: int
    violations: list[tuple[list[int], list[int], float]] = field(default_factory=list)
    violation_count: int = 0
    max_normalized_deviation: float = 0.0

    @property
    def ok(self) -> bool:
        return self.violation_count == 0


def _edge_counts(a, xa: np.ndarray, xb: np.ndarray) -> np.ndarray:
    # e(A, B) counts ordered pairs, so an edge inside A ∩ B counts twice
    return np.einsum("ij,ij->i", xa, (a @ xb.T).T)


def mixing_audit(
    g: Graph,
    lambda_hat: float,
    samples: int = 1000,
    seed: int = 0,
    tol: float = 1e-9,
    batch: int = 2000,
    keep: int = 10,
) -> MixingAudit:
    """Sample pairs ``(A, B)`` and test ``|e(A,B) - d|A||B|/n| < λ sqrt(|A||B|)``."""
    rng = np.random.default_rng(seed)
    n = g.n
    d = float(_average_degree(g))
    a = g.adjacency_matrix()
    audit = MixingAudit(samples)
    done = 0
    while done < samples:
        size = min(batch, samples - done)
        xa = _random_subsets(rng, n, size)
        xb = _random_subsets(rng, n, size)
        e = _edge_counts(a, xa, xb)
        sa, sb = xa.sum(axis=1), xb.sum(axis=1)
        dev = np.abs(e - d * sa * sb / n)
        bound = lambda_hat * np.sqrt(sa * sb)
        norm = dev / np.sqrt(sa * sb)
        audit.max_normalized_deviation = max(audit.max_normalized_deviation, float(norm.max()))
        bad = np.nonzero(dev >= bound + tol)[0]
        audit.violation_count += len(bad)
        for i in bad[: max(0, keep - len(audit.violations))]:
            audit.violations.append(
                (np.flatnonzero(xa[i]).tolist(), np.flatnonzero(xb[i]).tolist(), float(dev[i]))
            )
        done += size
    return audit


def _random_subsets(rng: np.random.Generator, n: int, count: int) -> np.ndarray:
    sizes = rng.integers(1, n + 1, size=count)
    keys = rng.random((count, n))
    ranks = np.argsort(np.argsort(keys, axis=1), axis=1)
    return (ranks < sizes[:, None]).astype(np.float64)


def find_unjoined_pair(
    g: Graph, m: int, samples: int = 1000, seed: int = 0
) -> tuple[list[int], list[int]] | None:
    """Look for disjoint ``A, B`` of size ``m`` with no edge between them.

    For each sampled ``A`` the best possible ``B`` is taken from the vertices
    outside ``A ∪ N(A)``, so a sampled ``A`` is refuted exactly.
    """
    n = g.n
    if m < 1 or 2 * m > n:
        return None
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        a_set = rng.choice(n, size=m, replace=False)
        blocked = set(a_set.tolist())
        for v in a_set:
            blocked.update(g.adj[int(v)])
        free = [v for v in range(n) if v not in blocked]
        if len(free) >= m:
            return sorted(int(v) for v in a_set), free[:m]
    return None


def joined_bound(g: Graph, report: SpectralReport, samples: int = 1000, seed: int = 0) -> int:
    """``ceil(λn/d)``, after a sampled search for a disjoint pair with no edges."""
    m = max(1, math.ceil(report.lambda_hat * g.n / float(report.d)))
    witness = find_unjoined_pair(g, m, samples, seed)
    if witness is not None:
        raise JoinednessError(
            f"found disjoint sets of size {m} with no edges; λ is underestimated", *witness
        )
    return m


@dataclass
class ExpansionAudit:
    passed: bool
    checked: int
    witness: list[int] | None = None

    def __bool__(self) -> bool:
        return self.passed


def expansion_audit(
    g: Graph,
    x_set,
    y_set,
    min_deg_into_y: float,
    d_factor: int,
    sample_budget: int,
    max_size: int,
    seed: int = 0,
) -> ExpansionAudit:
    """Sample ``S ⊆ X`` with ``|S| <= max_size`` and test ``|N(S) ∩ Y| >= D|S|``."""
    xs = sorted(set(x_set))
    ys = set(y_set)
    for v in xs:
        deg = g.degree_into(v, ys)
        if deg < min_deg_into_y:
            raise ExpansionPreconditionError(v, deg, min_deg_into_y)
    rng = np.random.default_rng(seed)
    top = min(max_size, len(xs))
    for i in range(sample_budget):
        size = int(rng.integers(1, top + 1))
        s = [xs[j] for j in rng.choice(len(xs), size=size, replace=False)]
        s_set = set(s)
        nbrs: set[int] = set()
        for v in s:
            nbrs.update(g.adj[v])
        reach = len((nbrs - s_set) & ys)
        if reach < d_factor * size:
            return ExpansionAudit(False, i + 1, sorted(s))
    return ExpansionAudit(True, sample_budget)
