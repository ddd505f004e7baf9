#!/usr/bin/env python3
"""
Verification harness for dynkin-walk
Reproduces the determinant, rank, Smith normal form and eigen-data claims
for D_n over a range of n, plus the GF(2) rank bound over a random corpus.
Integer claims are compared exactly; closed-form real claims in log space.
"""

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import chain
from typing import Any, Callable, Dict, Iterable, List, Optional

import numpy as np
import psutil
from rich.console import Console
from rich.progress import BarColumn, Progress, SpinnerColumn, TextColumn, TimeElapsedColumn

from .checks import LOG2, CheckResult, log_abs_product
from .errors import DimensionError, InvalidParameterError, NotApplicableError
from .exact_linalg import (
    BigMatrix,
    block_pad,
    det_bareiss,
    is_smith_normal_form,
    rank_mod2,
    rank_rational,
    smith_normal_form,
    snf_witness_holds,
    submatrix,
)
from .graph_core import (
    Graph,
    adjacency_matrix,
    build_dynkin_d,
    divisor_of_partition,
    dynkin_partition,
    emit_graph6,
    random_corpus,
)
from .walk import main_eigenvalue_count_numeric, walk_matrix

logger = logging.getLogger("dynkin-walk.verify")


@dataclass(frozen=True)
class VerifySettings:
    """Tolerances and range caps handed to every worker"""
    eig_tol: float = 1e-9
    det_tol: float = 1e-8
    orth_tol: float = 1e-9
    vanish_tol: float = 1e-10
    relwa_tol: float = 1e-7
    relwa_n_max: int = 40
    numeric_n_max: int = 24
    eigen_tol: float = 1e-8
    jacobi_threshold: float = 1e-13
    jacobi_max_sweeps: int = 100

    @classmethod
    def from_config(cls, config) -> "VerifySettings":
        defaults = cls()
        return cls(
            eig_tol=config.getfloat("numeric", "check_tol", fallback=defaults.eig_tol),
            det_tol=config.getfloat("numeric", "det_tol", fallback=defaults.det_tol),
            orth_tol=config.getfloat("numeric", "orth_tol", fallback=defaults.orth_tol),
            vanish_tol=config.getfloat("numeric", "vanish_tol", fallback=defaults.vanish_tol),
            relwa_tol=config.getfloat("numeric", "relwa_tol", fallback=defaults.relwa_tol),
            relwa_n_max=config.getint("verify", "relwa_n_max", fallback=defaults.relwa_n_max),
            numeric_n_max=config.getint("verify", "numeric_n_max", fallback=defaults.numeric_n_max),
            eigen_tol=config.getfloat("numeric", "eigen_tol", fallback=defaults.eigen_tol),
            jacobi_threshold=config.getfloat("numeric", "jacobi_threshold", fallback=defaults.jacobi_threshold),
            jacobi_max_sweeps=config.getint("numeric", "jacobi_max_sweeps", fallback=defaults.jacobi_max_sweeps),
        )


# ---------------------------------------------------------------------------
# closed-form eigen data of the divisor matrix
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class EigData:
    """lambda_k = 2cos(alpha_k), xi_k = (cos(i*alpha_k))_{i=0..n-2}, alpha_k = (2k-1)pi/(2(n-1))

    Column k-1 of `xis` is xi_k.
    """
    n: int
    alphas: np.ndarray
    lambdas: np.ndarray
    xis: np.ndarray

    def xi(self, k: int) -> np.ndarray:
        return self.xis[:, k - 1]


def closed_form_eigdata(n: int) -> EigData:
    if n < 4:
        raise InvalidParameterError(f"eigen data is defined for n >= 4, got n={n}")
    k = np.arange(1, n)
    alphas = (2 * k - 1) * np.pi / (2 * (n - 1))
    lambdas = 2.0 * np.cos(alphas)
    xis = np.cos(np.outer(np.arange(n - 1), alphas))
    return EigData(n, alphas, lambdas, xis)


def _dynkin_divisor(n: int) -> BigMatrix:
    return divisor_of_partition(build_dynkin_d(n), dynkin_partition(n)).B


def verify_eig_residuals(n: int, tol: float = 1e-9) -> CheckResult:
    """max_k ||B^T xi_k - lambda_k xi_k||_inf"""
    eig = closed_form_eigdata(n)
    Bt = np.array(_dynkin_divisor(n).to_lists(), dtype=float).T
    residual = float(np.max(np.abs(Bt @ eig.xis - eig.xis * eig.lambdas)))
    return CheckResult("eigen_residual", {"n": n}, residual < tol, residual)


def verify_fordet(n: int, tol: float = 1e-8, orth_tol: float = 1e-9) -> CheckResult:
    """Rows of [xi_1..xi_{n-1}] are orthogonal with squared norms n-1, (n-1)/2, ...;
    |det| = 2^{-(n-2)/2} (n-1)^{(n-1)/2}"""
    M = closed_form_eigdata(n).xis
    expected_gram = np.diag([n - 1.0] + [(n - 1) / 2.0] * (n - 2))
    orth_residual = float(np.max(np.abs(M @ M.T - expected_gram)))
    sign, logdet = np.linalg.slogdet(M)
    expected_log = -0.5 * (n - 2) * LOG2 + 0.5 * (n - 1) * math.log(n - 1)
    det_residual = abs(float(logdet) - expected_log)
    passed = orth_residual < orth_tol and det_residual < tol
    return CheckResult("eigvec_determinant", {"n": n}, passed, det_residual, int(sign),
                       {"orthogonality_residual": orth_residual,
                        "abs_det": math.exp(float(logdet)),
                        "log2_abs_det": float(logdet) / LOG2})


def vanishing_indices_exact(n: int) -> List[int]:
    """j in 1..n-1 with (n-2)(2j-1) / (2(n-1)) an odd integer, i.e. e^T xi_j = 0"""
    out = []
    for j in range(1, n):
        q, r = divmod((n - 2) * (2 * j - 1), 2 * (n - 1))
        if r == 0 and q % 2 == 1:
            out.append(j)
    return out


def check_residue_systems(n: int) -> Optional[bool]:
    """Complete-residue-system facts behind the cosine products; None when n is a multiple of 4 or too small"""
    if n % 4 == 2 and n >= 6:
        m = (n - 2) // 4
        residues = {m * (2 * j - 1) % (4 * m + 1) for j in range(1, 4 * m + 2)}
        return residues == set(range(4 * m + 1))
    if n % 2 == 1 and n >= 3:
        m = (n - 1) // 2
        residues = [(2 * m - 1) * (2 * j - 1) % (8 * m) for j in range(-2 * m + 1, 2 * m + 1)]
        return sorted(residues) == list(range(1, 8 * m, 2))
    return None


def etxi_case_exponent(n: int) -> Optional[Fraction]:
    """Case-wise exponent of prod e^T xi_j: 1 - n/2 (n = 2 mod 4) or 1/2 - n/2 (n odd)"""
    if n % 4 == 0:
        return None
    if n % 2 == 0:
        return 1 - Fraction(n, 2)
    return Fraction(1, 2) - Fraction(n, 2)


def verify_etxi(n: int, tol: float = 1e-8, vanish_tol: float = 1e-10) -> CheckResult:
    """prod_j e^T xi_j = +-2^{1-ceil(n/2)} when 4 does not divide n; otherwise only j = n/2 vanishes"""
    eig = closed_form_eigdata(n)
    values = [math.fsum(eig.xis[:, k]) for k in range(n - 1)]
    closed = [math.sin(0.5 * (n - 1) * a) * math.cos(0.5 * (n - 2) * a) / math.sin(0.5 * a)
              for a in eig.alphas]
    closed_residual = max(abs(x - y) for x, y in zip(values, closed))

    vanishing = [j for j, x in enumerate(values, start=1) if abs(x) < vanish_tol]
    exact_vanishing = vanishing_indices_exact(n)
    residues = check_residue_systems(n)
    unified = 1 - (n + 1) // 2
    case_exponent = etxi_case_exponent(n)

    detail: Dict[str, Any] = {
        "vanishing": vanishing,
        "exact_vanishing": exact_vanishing,
        "closed_form_residual": closed_residual,
        "unified_exponent": unified,
        "case_exponent": None if case_exponent is None else str(case_exponent),
        "residue_systems": "n/a" if residues is None else residues,
    }
    consistent = vanishing == exact_vanishing and closed_residual < tol and residues is not False

    if n % 4 == 0:
        passed = consistent and vanishing == [n // 2]
        return CheckResult("etxi", {"n": n}, passed, closed_residual, 1, detail)

    log_value, sign = log_abs_product(values)
    residual = abs(log_value - unified * LOG2)
    detail["log2_product"] = log_value / LOG2
    passed = consistent and not vanishing and residual < tol
    return CheckResult("etxi", {"n": n}, passed, residual, sign, detail)


def verify_relwa(m: BigMatrix, tol: float = 1e-7, gap_tol: float = 1e-8,
                 vanish_tol: float = 1e-8) -> CheckResult:
    """det W(M) = prod_{k<j}(lambda_j - lambda_k) prod_j e^T xi_j / det[xi_1..xi_m]
    and rank W(M) = #{j : e^T xi_j != 0}, with xi_j eigenvectors of M^T"""
    if not m.is_square:
        raise DimensionError(f"expected a square matrix, got {m.rows}x{m.cols}")
    size = m.rows
    M = np.array(m.to_lists(), dtype=float)
    w, xi = np.linalg.eig(M.T)
    if np.max(np.abs(w.imag), initial=0.0) > gap_tol:
        raise NotApplicableError("matrix has non-real eigenvalues")
    w, xi = w.real, xi.real
    order = np.argsort(w)
    w, xi = w[order], xi[:, order]
    if size > 1 and float(np.min(np.diff(w))) < gap_tol:
        raise NotApplicableError("eigenvalues are not pairwise distinct")

    etxi = xi.sum(axis=0)
    W = walk_matrix(m)
    det_exact = det_bareiss(W)
    rank_exact = rank_rational(W)
    numeric_rank = int(np.sum(np.abs(etxi) > vanish_tol))
    rank_ok = numeric_rank == rank_exact

    if det_exact == 0:
        det_residual = 0.0
        det_ok = numeric_rank < size
    else:
        log_vand, sign_vand = log_abs_product(w[j] - w[k] for j in range(size) for k in range(j))
        log_etxi, sign_etxi = log_abs_product(etxi)
        sign_xi, logdet_xi = np.linalg.slogdet(xi)
        log_rhs = log_vand + log_etxi - float(logdet_xi)
        sign_rhs = sign_vand * sign_etxi * int(sign_xi)
        det_residual = abs(log_rhs - math.log(abs(det_exact)))
        det_ok = det_residual < tol and sign_rhs == (1 if det_exact > 0 else -1)

    Wf = np.array(W.to_lists(), dtype=float)
    lhs = Wf.T @ xi
    rhs = np.vander(w, size, increasing=True).T * etxi
    identity_residual = float(np.max(np.abs(lhs - rhs)) / max(1.0, float(np.max(np.abs(rhs)))))
    identity_ok = identity_residual < tol

    return CheckResult("relwa", {"size": size}, det_ok and rank_ok and identity_ok,
                       max(det_residual, identity_residual), 1 if det_exact >= 0 else -1,
                       {"det_exact": str(det_exact), "rank_exact": rank_exact,
                        "numeric_rank": numeric_rank, "identity_residual": identity_residual})


# ---------------------------------------------------------------------------
# per-n reports
# ---------------------------------------------------------------------------

@dataclass
class VerifyReport:
    """Predicted against computed invariants of D_n; every flag is recomputable from the other fields"""
    n: int
    det_hat: str
    det_hat_sign: int
    predicted_det_magnitude: str
    rank_W: int
    rank_hat: int
    predicted_rank: int
    snf_diag: List[str]
    predicted_snf: Optional[List[str]]
    rank2: int
    predicted_rank2: Optional[int]
    odd_invariant_factors: int
    eigen_residual: float
    vanishing_indices: List[int]
    residue_systems: Optional[bool]
    etxi_case_exponent: Optional[str]
    flags: Dict[str, bool] = field(default_factory=dict)
    timing: Optional[Dict[str, float]] = None

    @property
    def passed(self) -> bool:
        return all(self.flags.values())

    def failed_flags(self) -> List[str]:
        return [name for name, ok in self.flags.items() if not ok]

    def to_dict(self, include_timing: bool = False) -> Dict[str, Any]:
        data = asdict(self)
        if not include_timing:
            data.pop("timing")
        return data


def verify_dynkin(n: int, settings: Optional[VerifySettings] = None) -> VerifyReport:
    """Every determinant, rank, SNF and eigen-data claim for one n"""
    settings = settings or VerifySettings()
    started = time.perf_counter()
    g = build_dynkin_d(n)
    W = walk_matrix(adjacency_matrix(g))
    hat = submatrix(W, range(1, n), range(n - 1))
    B = divisor_of_partition(g, dynkin_partition(n)).B

    quarter = n % 4 == 0
    half_up = (n + 1) // 2
    predicted_rank = n - 2 if quarter else n - 1
    predicted_det = 0 if quarter else 2 ** (n // 2 - 1)
    predicted_snf = None if quarter else [1] * half_up + [2] * (n // 2 - 1) + [0]

    det_hat = det_bareiss(hat)
    rank_W = rank_rational(W)
    rank_hat = rank_rational(hat)
    snf_W = smith_normal_form(W)
    snf_hat = smith_normal_form(hat)
    snf_padded = smith_normal_form(block_pad(hat))
    rank2 = rank_mod2(W)
    odd = sum(1 for d in snf_W.diag if d % 2)

    eig_check = verify_eig_residuals(n, settings.eig_tol)
    fordet_check = verify_fordet(n, settings.det_tol, settings.orth_tol)
    etxi_check = verify_etxi(n, settings.det_tol, settings.vanish_tol)

    flags = {
        "hat_det": abs(det_hat) == predicted_det,
        "hat_rank": rank_hat == predicted_rank,
        "walk_rank": rank_W == predicted_rank,
        "twin_rows": W.row(0) == W.row(1),
        "hat_equals_divisor_walk": hat == walk_matrix(B),
        "snf_divisibility": is_smith_normal_form(snf_W.diag),
        "snf_witness": snf_witness_holds(W, snf_W),
        "padded_snf": snf_W.diag == snf_padded.diag,
        "hat_invariant_prefix": snf_W.diag[:n - 1] == snf_hat.diag and snf_W.diag[n - 1] == 0,
        "rank_matches_snf": rank_W == snf_W.rank,
        "det_matches_snf": abs(det_hat) == math.prod(snf_hat.diag),
        "rank2_bound": rank2 <= half_up,
        "rank2_odd_factors": rank2 == odd,
        "eigen_residual": eig_check.passed,
        "eigvec_determinant": fordet_check.passed,
        "etxi": etxi_check.passed,
    }
    if not quarter:
        flags["snf_pattern"] = list(snf_W.diag) == predicted_snf
        flags["rank2_exact"] = rank2 == half_up
    if n <= settings.relwa_n_max:
        flags["relwa"] = verify_relwa(B, settings.relwa_tol).passed
    if n <= settings.numeric_n_max:
        numeric = main_eigenvalue_count_numeric(g, settings.eigen_tol, settings.jacobi_threshold,
                                                settings.jacobi_max_sweeps)
        flags["main_eigen_numeric"] = numeric == rank_W

    case_exponent = etxi_case_exponent(n)
    report = VerifyReport(
        n=n,
        det_hat=str(det_hat),
        det_hat_sign=(det_hat > 0) - (det_hat < 0),
        predicted_det_magnitude=str(predicted_det),
        rank_W=rank_W,
        rank_hat=rank_hat,
        predicted_rank=predicted_rank,
        snf_diag=[str(d) for d in snf_W.diag],
        predicted_snf=None if predicted_snf is None else [str(d) for d in predicted_snf],
        rank2=rank2,
        predicted_rank2=None if quarter else half_up,
        odd_invariant_factors=odd,
        eigen_residual=eig_check.residual,
        vanishing_indices=etxi_check.detail["vanishing"],
        residue_systems=check_residue_systems(n),
        etxi_case_exponent=None if case_exponent is None else str(case_exponent),
        flags=flags,
        timing={
            "seconds": time.perf_counter() - started,
            "rss_mb": psutil.Process().memory_info().rss / (1024 * 1024),
        },
    )
    if not report.passed:
        logger.warning(f"n={n}: failed checks {report.failed_flags()}")
    return report


def verify_dynkin_range(n_from: int, n_to: int, settings: Optional[VerifySettings] = None,
                        workers: int = 1,
                        on_report: Optional[Callable[[VerifyReport], None]] = None) -> List[VerifyReport]:
    """Reports for n_from..n_to, evaluated independently and returned in order of n"""
    if not 4 <= n_from <= n_to:
        raise InvalidParameterError(f"need 4 <= from <= to, got from={n_from}, to={n_to}")
    settings = settings or VerifySettings()
    ns = list(range(n_from, n_to + 1))
    reports: Dict[int, VerifyReport] = {}

    if workers <= 1 or len(ns) == 1:
        for n in ns:
            reports[n] = verify_dynkin(n, settings)
            if on_report:
                on_report(reports[n])
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(ns))) as pool:
            # largest n first; they dominate the wall time
            futures = {pool.submit(verify_dynkin, n, settings): n for n in reversed(ns)}
            for future in as_completed(futures):
                report = future.result()
                reports[report.n] = report
                if on_report:
                    on_report(report)
    return [reports[n] for n in ns]


# ---------------------------------------------------------------------------
# GF(2) rank bound over corpora
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Rank2Violation:
    """A graph whose walk matrix has GF(2) rank above ceil(n/2)"""
    n: int
    graph6: str
    rank2: int
    bound: int


def check_rank2_graphs(graphs: Iterable[Graph]) -> List[Rank2Violation]:
    violations = []
    for g in graphs:
        rank2 = rank_mod2(walk_matrix(adjacency_matrix(g)))
        bound = (g.n + 1) // 2
        if rank2 > bound:
            violations.append(Rank2Violation(g.n, emit_graph6(g), rank2, bound))
            logger.warning(f"GF(2) rank {rank2} exceeds {bound} for {emit_graph6(g)}")
    return violations


def verify_rank2_corpus(count: int, n_max: int, seed: int,
                        dynkin_max: Optional[int] = None) -> List[Rank2Violation]:
    """Bound check on `count` seeded G(n, 1/2) graphs plus D_4..D_{dynkin_max}"""
    dynkin_max = n_max if dynkin_max is None else dynkin_max
    graphs = chain(random_corpus(count, n_max, seed),
                   (build_dynkin_d(n) for n in range(4, dynkin_max + 1)))
    return check_rank2_graphs(graphs)


# ---------------------------------------------------------------------------
# engine
# ---------------------------------------------------------------------------

class VerifyEngine:
    """Runs the harness with a worker pool and progress display on stderr"""

    def __init__(self, config, logger):
        self.config = config
        self.logger = logger
        self.console = Console(stderr=True)
        self.settings = VerifySettings.from_config(config)

    def worker_count(self, requested: Optional[int] = None) -> int:
        workers = requested if requested is not None else self.config.getint("verify", "workers", fallback=0)
        if workers <= 0:
            workers = psutil.cpu_count(logical=False) or psutil.cpu_count() or 1
        return workers

    def run_range(self, n_from: int, n_to: int, workers: Optional[int] = None,
                  show_progress: bool = True) -> List[VerifyReport]:
        workers = self.worker_count(workers)
        self.logger.info(f"Verifying D_n for n={n_from}..{n_to} with {workers} worker(s)")
        started = time.perf_counter()

        with Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            BarColumn(),
            TimeElapsedColumn(),
            console=self.console,
            disable=not show_progress,
            transient=True,
        ) as progress:
            task = progress.add_task(f"Verifying D_{n_from}..D_{n_to}", total=max(0, n_to - n_from + 1))

            def advance(report: VerifyReport):
                progress.advance(task)
                self.logger.debug(f"n={report.n} done in {report.timing['seconds']:.2f}s")

            reports = verify_dynkin_range(n_from, n_to, self.settings, workers, advance)

        failed = [r.n for r in reports if not r.passed]
        self.logger.info(f"Verified {len(reports)} values of n in {time.perf_counter() - started:.1f}s; "
                         f"failures at {failed or 'none'}")
        return reports

    def run_corpus(self, count: int, n_max: int, seed: int,
                   dynkin_max: Optional[int] = None) -> List[Rank2Violation]:
        self.logger.info(f"GF(2) rank bound over {count} graphs (n <= {n_max}, seed={seed})")
        with self.console.status("[bold green]Checking GF(2) ranks..."):
            violations = verify_rank2_corpus(count, n_max, seed, dynkin_max)
        self.logger.info(f"{len(violations)} violation(s)")
        return violations
