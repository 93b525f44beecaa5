"""Cluster-robustness quantities for randomized small-block Lanczos.

The central object is the tangent of the largest principal angle between
the invariant subspace of a targeted eigenvalue cluster and the block
Krylov subspace built from a Gaussian initial block. The angle is computed
by two independent routes (a Lanczos basis split and an explicit block
Vandermonde factorization), compared against the structural bound
``c_Omega * G_d``, and swept over synthetic spectra in Monte Carlo
experiments.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import derive_stream_id
from .lanczos import LinearOperator, block_lanczos, rayleigh_ritz
from .linalg import (
    RngStream,
    SingularMatrixError,
    as_matrix,
    gaussian_matrix,
    smallest_singular,
    spectral_norm,
)
from .matpoly import (
    ChainBreakdownError,
    NodeSet,
    SingularVandermondeError,
    block_vandermonde,
    chi_quantities,
    fundamental_via_chain,
    solvent_chain,
)


class SingularKError(Exception):
    """The leading block of the Krylov factorization is singular."""


class SingularBlockError(Exception):
    """A partition block of the initial matrix is singular."""


class ZeroGapError(Exception):
    """The eigenvalue gap required by the Chebyshev bound vanishes."""


class SingularDifferenceError(Exception):
    """The difference of the two solvents is singular."""


@dataclass(frozen=True)
class ClusterSpec:
    """Synthetic diagonal spectrum with a targeted eigenvalue cluster.

    The cluster consists of ``d`` diagonal blocks of size ``b`` inside
    ``[cluster_min, cluster_max]``; all remaining eigenvalues sit outside
    that interval. The test matrix is diagonal with the cluster leading,
    which loses no generality for Gaussian initial blocks (rotation
    invariance); the targeted invariant subspace is then spanned by the
    leading ``b*d`` coordinates.
    """

    n: int
    b: int
    d: int
    lambda_blocks: tuple
    lambda_perp: np.ndarray
    cluster_min: float
    cluster_max: float
    allow_zero_relgap: bool = False
    lambda_min: float = field(init=False)
    lambda_max: float = field(init=False)
    relgap: float = field(init=False)

    def __post_init__(self):
        blocks = tuple(
            np.asarray(blk, dtype=np.float64).reshape(-1) for blk in self.lambda_blocks
        )
        perp = np.asarray(self.lambda_perp, dtype=np.float64).reshape(-1)
        if len(blocks) != self.d or any(blk.size != self.b for blk in blocks):
            raise ValueError("need d cluster blocks of size b")
        if perp.size != self.n - self.b * self.d:
            raise ValueError("lambda_perp must have n - b*d entries")
        allv = np.concatenate(blocks + (perp,))
        if not np.isfinite(allv).all():
            raise ValueError("spectrum contains non-finite entries")
        lo, hi = float(self.cluster_min), float(self.cluster_max)
        if not lo <= hi:
            raise ValueError("cluster interval endpoints out of order")
        for blk in blocks:
            if blk.min() < lo or blk.max() > hi:
                raise ValueError("cluster blocks must lie inside the cluster interval")
        if perp.size and np.any((perp >= lo) & (perp <= hi)):
            raise ValueError("lambda_perp entries must lie outside the cluster interval")
        if self.d >= 2:
            gap = min(
                float(np.min(np.abs(blocks[i][:, None] - blocks[j][None, :])))
                for i in range(self.d)
                for j in range(i + 1, self.d)
            )
        else:
            gap = math.inf
        width = float(allv.max() - allv.min())
        relgap = gap / width if width > 0.0 else math.inf
        if relgap <= 0.0 and not self.allow_zero_relgap:
            raise ValueError("relgap must be positive (pass allow_zero_relgap to override)")
        object.__setattr__(self, "lambda_blocks", blocks)
        object.__setattr__(self, "lambda_perp", perp)
        object.__setattr__(self, "lambda_min", float(allv.min()))
        object.__setattr__(self, "lambda_max", float(allv.max()))
        object.__setattr__(self, "relgap", float(relgap))

    def spectrum(self) -> np.ndarray:
        return np.concatenate(self.lambda_blocks + (self.lambda_perp,))

    def operator(self) -> LinearOperator:
        return LinearOperator.from_diagonal(self.spectrum())

    def block_count(self) -> int:
        if self.n % self.b != 0:
            raise ValueError("n must be a multiple of b for the block partition")
        return self.n // self.b

    def omega_blocks(self, omega) -> list:
        omega = as_matrix(omega, "Omega")
        if omega.shape != (self.n, self.b):
            raise ValueError(f"Omega must be {self.n} x {self.b}")
        m = self.block_count()
        return [omega[i * self.b:(i + 1) * self.b] for i in range(m)]

    def perp_lambda_blocks(self) -> list:
        m = self.block_count()
        return [
            self.lambda_perp[i * self.b:(i + 1) * self.b] for i in range(m - self.d)
        ]


def tan_angle_krylov(spec: ClusterSpec, omega, steps: int) -> float:
    """Tangent of the largest principal angle via a block Lanczos basis.

    The orthonormal Krylov basis is split into its leading ``b*d`` rows V
    and the remainder; the tangent is the spectral norm of the remainder
    times the (pseudo-)inverse of V. Returns ``inf`` when V is singular at
    the 1e-14 gate, which is the correct tangent whenever an in-cluster
    eigenvalue has multiplicity above b.
    """
    bd = spec.b * spec.d
    if spec.b * steps < bd:
        raise ValueError("need at least d block steps to resolve the cluster")
    basis = block_lanczos(spec.operator(), omega, steps)
    top = basis.V[:bd, :]
    bottom = basis.V[bd:, :]
    svals = np.linalg.svd(top, compute_uv=False)
    if svals[-1] < 1e-14:
        return math.inf
    coeffs, *_ = np.linalg.lstsq(top.T, bottom.T, rcond=None)
    return spectral_norm(coeffs.T)


def _perp_vandermonde(spec: ClusterSpec, blocks) -> np.ndarray:
    rows = []
    for lam, om in zip(spec.perp_lambda_blocks(), blocks[spec.d:]):
        b_mat = np.linalg.solve(om, lam[:, None] * om)
        power = np.eye(spec.b)
        row = [power]
        for _ in range(spec.d - 1):
            power = power @ b_mat
            row.append(power)
        rows.append(np.hstack(row))
    return np.vstack(rows)


def _block_diag(blocks) -> np.ndarray:
    b = blocks[0].shape[0]
    out = np.zeros((b * len(blocks), b * len(blocks)))
    for i, blk in enumerate(blocks):
        out[i * b:(i + 1) * b, i * b:(i + 1) * b] = blk
    return out


def tan_angle_vandermonde(spec: ClusterSpec, omega, nodes: NodeSet | None = None) -> float:
    """Tangent of the largest principal angle via the explicit factorization.

    The leading rows of the Krylov matrix factor as ``K = D * Van`` with D
    the block diagonal of the first d partition blocks of Omega and Van the
    block Vandermonde of the conjugated nodes; the trailing rows factor the
    same way over the out-of-cluster blocks. The tangent is
    ``||K_perp @ inv(K)||``.
    """
    blocks = spec.omega_blocks(omega)
    if nodes is None:
        nodes = NodeSet(spec.lambda_blocks, tuple(blocks[: spec.d]))
    van = block_vandermonde(nodes)
    k_mat = _block_diag(blocks[: spec.d]) @ van
    k_perp = _block_diag(blocks[spec.d:]) @ _perp_vandermonde(spec, blocks)
    svals = np.linalg.svd(k_mat, compute_uv=False)
    if svals[0] == 0.0 or svals[-1] < 1e-14 * svals[0]:
        raise SingularKError("leading Krylov block fails the 1e-14 gate")
    coeffs = np.linalg.solve(k_mat.T, k_perp.T)
    return spectral_norm(coeffs.T)


def c_omega(spec: ClusterSpec, omega) -> float:
    """Initial-block conditioning factor of the structural bound.

    Product of ``sqrt(d*n - b*d^2)``, the worst inverse norm over the d
    leading partition blocks, the worst norm over the trailing blocks, and
    the worst norm*inverse-norm over the trailing blocks. The trailing-norm
    factor enters twice, once alone and once inside the conditioning term,
    exactly as the bound is defined.
    """
    blocks = spec.omega_blocks(omega)
    m = spec.block_count()
    if m <= spec.d:
        raise ValueError("need at least one out-of-cluster block (m > d)")
    svals = [np.linalg.svd(blk, compute_uv=False) for blk in blocks]
    for sv in svals:
        if sv[0] == 0.0 or sv[-1] < 1e-14 * sv[0]:
            raise SingularBlockError("partition block fails the 1e-14 gate")
    inv_lead = max(1.0 / sv[-1] for sv in svals[: spec.d])
    norm_tail = max(sv[0] for sv in svals[spec.d:])
    cond_tail = max(sv[0] / sv[-1] for sv in svals[spec.d:])
    return math.sqrt(spec.d * spec.n - spec.b * spec.d**2) * inv_lead * norm_tail * cond_tail


def outside_grid(spec: ClusterSpec, grid_size: int = 1000) -> np.ndarray:
    """Sample points on the spectrum range minus the cluster interval.

    All out-of-cluster eigenvalues are always included; a uniform grid over
    the two complement segments (sized proportionally to their lengths)
    adds a safety margin for the continuous supremum.
    """
    lo, hi = spec.cluster_min, spec.cluster_max
    segments = []
    if spec.lambda_min < lo:
        segments.append((spec.lambda_min, lo))
    if hi < spec.lambda_max:
        segments.append((hi, spec.lambda_max))
    total = sum(b - a for a, b in segments)
    pts = [spec.lambda_perp]
    for a, b_end in segments:
        count = max(2, int(round(grid_size * (b_end - a) / total))) if total > 0 else 0
        if count:
            pts.append(np.linspace(a, b_end, count))
    cand = np.concatenate(pts) if pts else np.empty(0)
    return cand[(cand < lo) | (cand > hi)]


def growth_Gd(spec: ClusterSpec, chains, grid_size: int = 1000) -> float:
    """Largest fundamental-polynomial norm over the out-of-cluster sample set."""
    samples = outside_grid(spec, grid_size)
    if samples.size == 0:
        raise ValueError("no sample points outside the cluster interval")
    best = 0.0
    for chain in chains:
        for lam in samples:
            best = max(best, spectral_norm(fundamental_via_chain(chain, float(lam))))
    return best


@dataclass(frozen=True)
class RobustnessReport:
    """Per-trial record of the structural-bound experiment."""

    seed: int
    tan_angle_krylov: float
    tan_angle_vandermonde: float
    c_omega: float
    chi_mono: float
    chi_coef: float
    g_d: float
    bound: float
    bound_holds: bool
    cond_vandermonde: float
    cond_k: float
    max_chain_cond: float
    retries: int


_RESAMPLE_ERRORS = (
    SingularMatrixError,
    ChainBreakdownError,
    SingularVandermondeError,
    SingularKError,
    SingularBlockError,
)


def structural_bound_trial(
    spec: ClusterSpec,
    seed: int,
    base_stream: int = 0,
    grid_size: int = 1000,
    max_retries: int = 8,
) -> RobustnessReport:
    """Sample a Gaussian initial block and evaluate the structural bound.

    Draws that hit a measure-zero degeneracy (singular partition block,
    chain breakdown, singular Vandermonde) are resampled on fresh stream
    ids up to ``max_retries`` times; the retry count is recorded.
    """
    if spec.d >= 2 and not spec.relgap > 0.0:
        raise ValueError("structural bound requires a positive relgap")
    last_exc: Exception | None = None
    for attempt in range(max_retries + 1):
        rng = RngStream(seed, stream_id=base_stream + attempt)
        omega = gaussian_matrix(spec.n, spec.b, rng)
        try:
            blocks = spec.omega_blocks(omega)
            nodes = NodeSet(spec.lambda_blocks, tuple(blocks[: spec.d]))
            chains = tuple(solvent_chain(nodes, k) for k in range(spec.d))
            tan_van = tan_angle_vandermonde(spec, omega, nodes=nodes)
        except _RESAMPLE_ERRORS as exc:
            last_exc = exc
            continue
        tan_kry = tan_angle_krylov(spec, omega, spec.d)
        c_om = c_omega(spec, omega)
        if spec.d >= 2:
            chi_mono, chi_coef = chi_quantities(
                nodes, chains, (spec.cluster_min, spec.cluster_max)
            )
        else:
            chi_mono, chi_coef = 1.0, 1.0
        g_d = growth_Gd(spec, chains, grid_size)
        bound = c_om * g_d
        van = block_vandermonde(nodes)
        k_mat = _block_diag(blocks[: spec.d]) @ van
        return RobustnessReport(
            seed=seed,
            tan_angle_krylov=tan_kry,
            tan_angle_vandermonde=tan_van,
            c_omega=c_om,
            chi_mono=chi_mono,
            chi_coef=chi_coef,
            g_d=g_d,
            bound=bound,
            bound_holds=bool(tan_van <= bound * (1.0 + 1e-8)),
            cond_vandermonde=float(np.linalg.cond(van, 1)),
            cond_k=float(np.linalg.cond(k_mat, 1)),
            max_chain_cond=max(max(c.inversion_conds) for c in chains),
            retries=attempt,
        )
    raise RuntimeError(f"persistent degeneracy after {max_retries} retries: {last_exc}")


@dataclass(frozen=True)
class ExperimentFamily:
    """One of the two synthetic sweep designs for the conjecture experiments.

    Cluster blocks sit at uniformly spaced eigenvalues in
    ``[alpha*k + beta*(k-1), alpha*k + beta*(k+1)] / cluster_dim`` for
    ``k = 1..d``, so ``beta`` controls the cluster radius and ``alpha`` the
    gap between neighboring blocks. The beta sweep fixes ``alpha = 1`` and
    halves beta twelve times; the alpha sweep fixes ``beta = 1e-4`` and
    halves alpha ten times. The out-of-cluster spectrum makes the cluster
    either exterior (all other eigenvalues below) or interior (half below,
    half above).
    """

    sweep: str
    variant: str
    n: int = 1000
    cluster_dim: int = 60

    def __post_init__(self):
        if self.sweep not in ("beta", "alpha"):
            raise ValueError("sweep must be 'beta' or 'alpha'")
        if self.variant not in ("exterior", "interior"):
            raise ValueError("variant must be 'exterior' or 'interior'")

    @property
    def d_values(self) -> tuple:
        return (2, 3, 4, 5) if self.sweep == "beta" else (2, 3, 4)

    @property
    def sweep_values(self) -> tuple:
        count = 12 if self.sweep == "beta" else 10
        return tuple(2.0 ** -i for i in range(1, count + 1))

    def alpha_beta(self, value: float) -> tuple[float, float]:
        return (1.0, value) if self.sweep == "beta" else (value, 1e-4)

    def spec_for(self, d: int, value: float) -> ClusterSpec:
        if self.cluster_dim % d != 0:
            raise ValueError(f"cluster dimension {self.cluster_dim} not divisible by d={d}")
        b = self.cluster_dim // d
        alpha, beta = self.alpha_beta(value)
        blocks = tuple(
            np.linspace(
                (alpha * k + beta * (k - 1)) / self.cluster_dim,
                (alpha * k + beta * (k + 1)) / self.cluster_dim,
                b,
            )
            for k in range(1, d + 1)
        )
        rest = self.n - self.cluster_dim
        if self.variant == "exterior":
            perp = -1.0 - np.arange(1, rest + 1) / rest
        else:
            half = rest // 2
            perp = np.concatenate(
                [-1.0 - np.arange(1, half + 1) / half, 4.0 + np.arange(1, half + 1) / half]
            )
        return ClusterSpec(
            n=self.n,
            b=b,
            d=d,
            lambda_blocks=blocks,
            lambda_perp=perp,
            cluster_min=float(blocks[0][0]),
            cluster_max=float(blocks[-1][-1]),
        )


@dataclass(frozen=True)
class QuantileSummary:
    """Median and quartiles of the measured angle for one sweep configuration."""

    d: int
    sweep_value: float
    relgap: float
    median: float
    q25: float
    q75: float
    trials: int


def _quantile(sorted_samples: np.ndarray, q: float) -> float:
    """Linear-interpolation quantile that stays total when samples hit inf."""
    pos = q * (sorted_samples.size - 1)
    lo, hi = int(math.floor(pos)), int(math.ceil(pos))
    if sorted_samples[lo] == sorted_samples[hi]:
        return float(sorted_samples[lo])
    frac = pos - lo
    return float((1.0 - frac) * sorted_samples[lo] + frac * sorted_samples[hi])


def conjecture_experiment(
    family: ExperimentFamily,
    trials: int,
    master_seed: int,
    d_values=None,
    sweep_values=None,
) -> list:
    """Monte Carlo sweep of the measured tangent over one experiment family.

    Per configuration the tangent is sampled over independent Gaussian
    initial blocks; the trial streams are derived from the configuration
    key, so results are deterministic given the master seed and
    independent of scheduling.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    summaries = []
    for d in tuple(d_values) if d_values is not None else family.d_values:
        for value in tuple(sweep_values) if sweep_values is not None else family.sweep_values:
            spec = family.spec_for(d, value)
            key = (
                f"cluster-robustness|{family.variant}|{family.sweep}"
                f"|n={family.n}|bd={family.cluster_dim}|d={d}|v={value!r}"
            )
            samples = np.empty(trials)
            for t in range(trials):
                rng = RngStream(master_seed, derive_stream_id(key, t))
                omega = gaussian_matrix(spec.n, spec.b, rng)
                samples[t] = tan_angle_krylov(spec, omega, d)
            samples.sort()
            summaries.append(
                QuantileSummary(
                    d=d,
                    sweep_value=value,
                    relgap=spec.relgap,
                    median=_quantile(samples, 0.5),
                    q25=_quantile(samples, 0.25),
                    q75=_quantile(samples, 0.75),
                    trials=trials,
                )
            )
    return summaries


def sandwich_d2(b1, b2) -> tuple[float, float, float, bool]:
    """Two-sided bound linking ``||inv(B1 - B2)||`` to the stacked 2x2 block matrix.

    Returns ``(lower, middle, upper, holds)`` where the middle term is the
    squared inverse norm of ``[[I, B1], [I, B2]]`` and the outer terms are
    ``(3 -/+ sqrt(5))/2`` multiples of the squared inverse difference norm
    (the upper one with the ``1 + (||B1||^2 + 1) ...`` correction).
    """
    b1 = as_matrix(b1, "B1")
    b2 = as_matrix(b2, "B2")
    if b1.shape != b2.shape or b1.shape[0] != b1.shape[1]:
        raise ValueError("B1 and B2 must be square with equal shapes")
    b = b1.shape[0]
    diff = b1 - b2
    sv = np.linalg.svd(diff, compute_uv=False)
    if sv[0] == 0.0 or sv[-1] < 1e-12 * sv[0]:
        raise SingularDifferenceError("B1 - B2 fails the 1e-12 gate")
    inv_sq = (1.0 / sv[-1]) ** 2
    stacked = np.block([[np.eye(b), b1], [np.eye(b), b2]])
    middle = (1.0 / smallest_singular(stacked)) ** 2
    lower = (3.0 - math.sqrt(5.0)) / 2.0 * inv_sq
    upper = (3.0 + math.sqrt(5.0)) / 2.0 * (1.0 + (spectral_norm(b1) ** 2 + 1.0) * inv_sq)
    holds = lower <= middle * (1.0 + 1e-8) and middle <= upper * (1.0 + 1e-8)
    return lower, middle, upper, holds


def probe_solvent_difference(
    lam_i,
    lam_j,
    trials: int,
    master_seed: int,
    quantiles=(0.01, 0.25, 0.5, 0.75, 0.99),
) -> dict:
    """Empirical quantiles of the smallest singular value of ``B_i - B_j``.

    Both solvents share deterministic diagonal spectra but carry fresh
    independent Gaussian eigenvector matrices per trial. Purely an
    observational probe of the non-commuting difficulty; nothing is
    asserted about the distribution.
    """
    lam_i = np.asarray(lam_i, dtype=np.float64).reshape(-1)
    lam_j = np.asarray(lam_j, dtype=np.float64).reshape(-1)
    if lam_i.size != lam_j.size:
        raise ValueError("spectra must have equal size")
    if np.min(np.abs(lam_i[:, None] - lam_j[None, :])) == 0.0:
        raise ValueError("spectra must be disjoint")
    b = lam_i.size
    samples = np.empty(trials)
    for t in range(trials):
        rng = RngStream(master_seed, t)
        om_i = gaussian_matrix(b, b, rng)
        om_j = gaussian_matrix(b, b, rng)
        b_i = np.linalg.solve(om_i, lam_i[:, None] * om_i)
        b_j = np.linalg.solve(om_j, lam_j[:, None] * om_j)
        samples[t] = smallest_singular(b_i - b_j)
    return {float(q): float(np.quantile(samples, q)) for q in quantiles}


def chebyshev_value(degree: int, x: float) -> float:
    """Chebyshev polynomial of the first kind at ``x >= 1`` via the closed form."""
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    if x < 1.0:
        raise ValueError("closed form requires x >= 1")
    t = x + math.sqrt(x * x - 1.0)
    return 0.5 * (t**degree + t**-degree)


def chebyshev_accel_check(
    spec: ClusterSpec, omega, steps: int
) -> tuple[float, float, bool]:
    """Compare the deep-subspace angle against the Chebyshev-accelerated reference.

    The cluster must hold the largest ``b*d`` eigenvalues with a positive
    gap to the rest; the reference divides the d-step angle by the
    Chebyshev factor at ``1 + 2 * gap / spectral width``.
    """
    if steps < spec.d:
        raise ValueError("steps must be at least d")
    lam_bd = min(float(blk.min()) for blk in spec.lambda_blocks)
    lam_next = float(spec.lambda_perp.max()) if spec.lambda_perp.size else -math.inf
    gap = lam_bd - lam_next
    if not gap > 0.0:
        raise ZeroGapError("cluster must hold the strictly largest eigenvalues")
    gamma = gap / (spec.lambda_max - spec.lambda_min)
    measured = tan_angle_krylov(spec, omega, steps)
    base = tan_angle_krylov(spec, omega, spec.d)
    reference = base / chebyshev_value(steps - spec.d, 1.0 + 2.0 * gamma)
    holds = measured <= reference * (1.0 + 1e-6)
    return measured, reference, holds


@dataclass(frozen=True)
class LowRankReport:
    """Observed low-rank approximation quality against the dense-SVD optimum."""

    spectral_error: float
    frobenius_error: float
    best_spectral: float
    best_frobenius: float
    eps: float
    spectral_within: bool
    frobenius_within: bool
    rayleigh_errors: np.ndarray
    rayleigh_threshold: float
    rayleigh_within: bool


def lowrank_check(a_hat, b: int, d: int, steps: int, eps: float, rng: RngStream) -> LowRankReport:
    """Measure block-Krylov low-rank approximation quality (report only).

    Runs block Lanczos on the Gram operator of ``a_hat``, projects onto the
    top ``b*d`` Ritz vectors, and reports spectral / Frobenius errors
    against ``(1 + eps)`` times the best rank-``b*d`` errors from a dense
    SVD, plus the per-vector Rayleigh quotient accuracy. The inequalities
    rest on a conjectured bound, so they are recorded, not asserted.
    """
    a_hat = as_matrix(a_hat, "A_hat")
    n_rows, n_cols = a_hat.shape
    if n_rows < n_cols:
        raise ValueError("a_hat must have at least as many rows as columns")
    rank = b * d
    if rank > n_cols:
        raise ValueError("target rank exceeds the column count")
    op = LinearOperator(n_cols, lambda block: a_hat.T @ (a_hat @ block))
    omega = gaussian_matrix(n_cols, b, rng)
    basis = block_lanczos(op, omega, steps)
    ritz = rayleigh_ritz(basis, rank, which="largest")
    v = ritz.vectors
    resid = a_hat - (a_hat @ v) @ v.T
    spectral_error = spectral_norm(resid)
    frobenius_error = float(np.linalg.norm(resid))
    svals = np.linalg.svd(a_hat, compute_uv=False)
    best_spectral = float(svals[rank]) if rank < svals.size else 0.0
    best_frobenius = float(np.sqrt(np.sum(svals[rank:] ** 2)))
    eigs_desc = svals**2
    lam_next = float(eigs_desc[rank]) if rank < eigs_desc.size else 0.0
    col_norms_sq = np.sum((a_hat @ v) ** 2, axis=0)
    rayleigh_errors = np.abs(col_norms_sq[::-1] - eigs_desc[:rank])
    threshold = eps * lam_next
    return LowRankReport(
        spectral_error=spectral_error,
        frobenius_error=frobenius_error,
        best_spectral=best_spectral,
        best_frobenius=best_frobenius,
        eps=eps,
        spectral_within=bool(spectral_error <= (1.0 + eps) * best_spectral + 1e-12),
        frobenius_within=bool(frobenius_error <= (1.0 + eps) * best_frobenius + 1e-12),
        rayleigh_errors=rayleigh_errors,
        rayleigh_threshold=threshold,
        rayleigh_within=bool(np.all(rayleigh_errors <= threshold + 1e-12)),
    )
