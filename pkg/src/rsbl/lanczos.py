"""Block Lanczos with full reorthogonalization and Rayleigh-Ritz extraction.

The process builds an orthonormal basis of the block Krylov subspace
``range[Omega, A Omega, ..., A^(l-1) Omega]`` one block per step, applying
the operator exactly once per step so a run of ``l`` steps costs exactly
``b * l`` matrix-vector products (the initial block costs none). Each new
block is re-projected against the whole basis twice before its QR.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import RankDeficientError, as_matrix, qr_factor


class BreakdownError(Exception):
    """A new Lanczos block was rank-deficient: abort and resample the initial block."""

    def __init__(self, step: int):
        self.step = step
        super().__init__(f"rank-deficient block at step {step}")


class NoConvergenceError(Exception):
    """The matvec budget was exhausted before all targets converged."""

    def __init__(self, matvecs: int):
        self.matvecs = matvecs
        super().__init__(f"no convergence within {matvecs} matvecs")


class LinearOperator:
    """Symmetric linear operator applied blockwise, with a matvec counter.

    ``apply`` receives an n-by-b block and must act linearly and
    symmetrically; each call increments the counter by the block width.
    The counter is the only mutable state, so an operator instance must not
    be shared across concurrent basis builds.
    """

    def __init__(self, n: int, apply_block):
        if n < 1:
            raise ValueError("operator dimension must be positive")
        self.n = n
        self._apply = apply_block
        self.matvec_count = 0

    def apply(self, block: np.ndarray) -> np.ndarray:
        if block.ndim != 2 or block.shape[0] != self.n:
            raise ValueError(f"block must be {self.n} x b, got {block.shape}")
        self.matvec_count += block.shape[1]
        out = self._apply(block)
        if out.shape != block.shape:
            raise ValueError("operator changed the block shape")
        return out

    @classmethod
    def from_dense(cls, a) -> "LinearOperator":
        a = as_matrix(a, "A")
        if a.shape[0] != a.shape[1]:
            raise ValueError("dense operator must be square")
        return cls(a.shape[0], lambda block: a @ block)

    @classmethod
    def from_diagonal(cls, diag) -> "LinearOperator":
        d = np.asarray(diag, dtype=np.float64).reshape(-1)
        if not np.isfinite(d).all():
            raise ValueError("diagonal contains non-finite entries")
        col = d[:, None]
        return cls(d.size, lambda block: col * block)


def symmetry_defect(op: LinearOperator, rng, probes: int = 3) -> float:
    """Max of ``|x'(Ay) - y'(Ax)| / (|x||y|)`` over random probe pairs.

    Spot-check helper for the operator contract; the caller scales the
    result by its own estimate of ``||A||``.
    """
    worst = 0.0
    for _ in range(probes):
        x = rng.standard_normal(op.n, 1)
        y = rng.standard_normal(op.n, 1)
        ax = op.apply(x)
        ay = op.apply(y)
        defect = abs((x.T @ ay).item() - (y.T @ ax).item())
        worst = max(worst, defect / (np.linalg.norm(x) * np.linalg.norm(y)))
    return worst


@dataclass
class BlockKrylovBasis:
    """Orthonormal block Krylov basis with its projected block tridiagonal.

    ``last_beta`` couples the basis to the next (unbuilt) block and yields
    residual estimates without extra operator applications. With the
    abort-and-resample breakdown policy no step ever deflates, so the
    per-step flags stay False.
    """

    n: int
    b: int
    steps: int
    V: np.ndarray
    T: np.ndarray
    last_beta: np.ndarray
    deflation_flags: tuple


@dataclass
class RitzSet:
    """Selected Ritz approximations: ascending values, lifted vectors, residual estimates."""

    values: np.ndarray
    vectors: np.ndarray
    residual_norms: np.ndarray


class _Process:
    """Incremental block Lanczos state shared by the public drivers."""

    def __init__(self, op: LinearOperator, omega, capacity: int):
        omega = as_matrix(omega, "Omega")
        if omega.shape[0] != op.n:
            raise ValueError("initial block row count must match the operator")
        self.op = op
        self.n, self.b = omega.shape
        self.capacity = capacity
        try:
            q0, _ = qr_factor(omega)
        except RankDeficientError as exc:
            raise BreakdownError(0) from exc
        self.V = np.empty((self.n, self.b * capacity))
        self.V[:, : self.b] = q0
        self.alphas: list = []
        self.betas: list = []
        self.steps = 0
        self._pending = None
        self._pending_scale = 0.0

    def advance(self):
        """Run one block step: extend the basis if needed, then apply the operator."""
        b = self.b
        if self.steps >= self.capacity:
            raise ValueError("process capacity exhausted")
        if self.steps > 0:
            # rank gate floored at the pre-orthogonalization scale so an
            # (almost) invariant subspace registers as a breakdown instead
            # of admitting roundoff noise as a basis block
            try:
                q, r = qr_factor(self._pending)
            except RankDeficientError as exc:
                raise BreakdownError(self.steps + 1) from exc
            if np.min(np.abs(np.diag(r))) < 1e-12 * self._pending_scale:
                raise BreakdownError(self.steps + 1)
            self.V[:, self.steps * b:(self.steps + 1) * b] = q
            self.betas.append(r)
        cur = self.V[:, self.steps * b:(self.steps + 1) * b]
        w = self.op.apply(cur)
        alpha = cur.T @ w
        self.alphas.append(0.5 * (alpha + alpha.T))
        self._pending_scale = float(np.linalg.norm(w))
        basis = self.V[:, : (self.steps + 1) * b]
        for _ in range(2):
            w = w - basis @ (basis.T @ w)
        self._pending = w
        self.steps += 1

    def t_matrix(self) -> np.ndarray:
        b, ell = self.b, self.steps
        t = np.zeros((b * ell, b * ell))
        for i, a in enumerate(self.alphas):
            t[i * b:(i + 1) * b, i * b:(i + 1) * b] = a
        for i, beta in enumerate(self.betas):
            t[(i + 1) * b:(i + 2) * b, i * b:(i + 1) * b] = beta
            t[i * b:(i + 1) * b, (i + 1) * b:(i + 2) * b] = beta.T
        return t

    def ritz_values(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.t_matrix())

    def last_beta(self) -> np.ndarray:
        # R factor of the pending remainder; no gate, a tiny residual block
        # simply signals an (almost) invariant subspace.
        r = np.linalg.qr(self._pending, mode="r")
        signs = np.where(np.diag(r) < 0.0, -1.0, 1.0)
        return signs[:, None] * r

    def snapshot(self) -> BlockKrylovBasis:
        return BlockKrylovBasis(
            n=self.n,
            b=self.b,
            steps=self.steps,
            V=self.V[:, : self.steps * self.b].copy(),
            T=self.t_matrix(),
            last_beta=self.last_beta(),
            deflation_flags=tuple(False for _ in range(self.steps)),
        )


def block_lanczos(op: LinearOperator, omega, steps: int) -> BlockKrylovBasis:
    """Run ``steps`` block Lanczos steps with full reorthogonalization.

    Parameters
    ----------
    op:
        Symmetric operator; its counter increases by exactly ``b * steps``.
    omega:
        Initial n-by-b block (orthonormalized internally, no matvec cost).
    steps:
        Number of block steps; ``b * steps <= n`` is required.
    """
    omega = as_matrix(omega, "Omega")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if omega.shape[1] * steps > op.n:
        raise ValueError("requested subspace exceeds the operator dimension")
    proc = _Process(op, omega, capacity=steps)
    for _ in range(steps):
        proc.advance()
    return proc.snapshot()


def rayleigh_ritz(basis: BlockKrylovBasis, how_many: int, which: str = "largest") -> RitzSet:
    """Extract Ritz pairs from the projected matrix and lift them through the basis."""
    dim = basis.b * basis.steps
    if not 1 <= how_many <= dim:
        raise ValueError(f"how_many must be in [1, {dim}]")
    if which not in ("largest", "smallest"):
        raise ValueError("which must be 'largest' or 'smallest'")
    values, vectors = np.linalg.eigh(basis.T)
    idx = np.arange(dim - how_many, dim) if which == "largest" else np.arange(how_many)
    return _lift(basis, values, vectors, idx)


def _lift(basis: BlockKrylovBasis, values, vectors, idx) -> RitzSet:
    sel = vectors[:, idx]
    lifted = basis.V @ sel
    bottom = basis.last_beta @ sel[-basis.b:, :]
    residuals = np.linalg.norm(bottom, axis=0)
    return RitzSet(values=values[idx], vectors=lifted, residual_norms=residuals)


def match_targets(values, targets, tol: float):
    """Match sorted targets to sorted Ritz values within ``tol``, one-to-one.

    Greedy earliest-compatible assignment over the two ascending sequences;
    returns the matched indices, or None when some target has no partner.
    """
    idx = []
    j = 0
    for t in targets:
        while j < len(values) and values[j] < t - tol:
            j += 1
        if j < len(values) and abs(values[j] - t) <= tol:
            idx.append(j)
            j += 1
        else:
            return None
    return idx


def run_until_converged(
    op: LinearOperator,
    omega,
    targets,
    tol: float = 1e-10,
    max_matvecs: int | None = None,
) -> tuple[int, RitzSet]:
    """Step one block at a time until every target eigenvalue is matched.

    After each block step the Ritz values of the projected matrix are
    compared against the known target eigenvalues; convergence is declared
    at the first step where every target has a Ritz value within ``tol``
    (absolute), and the matvec count at that step is returned along with
    the matched Ritz pairs.
    """
    omega = as_matrix(omega, "Omega")
    targets = np.sort(np.asarray(targets, dtype=np.float64).reshape(-1))
    if targets.size == 0:
        raise ValueError("need at least one target eigenvalue")
    b = omega.shape[1]
    full_budget = b * (op.n // b)
    if max_matvecs is None:
        max_matvecs = full_budget
    max_steps = min(max_matvecs, full_budget) // b
    if targets.size > max_steps * b:
        raise ValueError("more targets than the subspace budget allows")
    proc = _Process(op, omega, capacity=max_steps)
    for step in range(1, max_steps + 1):
        proc.advance()
        if step * b < targets.size:
            continue
        values = proc.ritz_values()
        idx = match_targets(values, targets, tol)
        if idx is not None:
            basis = proc.snapshot()
            _, vectors = np.linalg.eigh(basis.T)
            return step * b, _lift(basis, values, vectors, np.asarray(idx))
    raise NoConvergenceError(max_steps * b)
