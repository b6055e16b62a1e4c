"""One-parameter tuning of the interpolation parameter and table reproduction."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from typing import Iterable, Optional

from .criteria import (
    HONEYCOMB,
    HYPERCUBIC,
    LatticeKind,
    ThresholdReport,
    kset_for,
    threshold_for,
)
from .profiles import CoefficientProfile, validate_profile
from .scalars import QuadraticScalar, qf_approx, qf_make, qf_to_float

TABLE_TOLERANCE = 0.005

# Published small-ell thresholds: ell -> (t_ell, ell^2 t_ell).
PAPER_TABLES = {
    ("hypercubic", 2): {
        2: (0.667, 2.667), 3: (0.395, 3.547), 4: (0.257, 4.102), 5: (0.181, 4.503),
        6: (0.134, 4.808), 7: (0.104, 5.049), 8: (0.082, 5.245), 9: (0.067, 5.407),
    },
    ("hypercubic", 3): {
        2: (0.667, 2.667), 3: (0.400, 3.593), 4: (0.264, 4.212), 5: (0.188, 4.685),
        6: (0.141, 5.061), 7: (0.110, 5.369), 8: (0.088, 5.627), 9: (0.073, 5.846),
    },
    ("honeycomb", 2): {
        3: (0.246, 2.212), 4: (0.161, 2.576), 5: (0.113, 2.824), 6: (0.084, 3.003),
        7: (0.065, 3.140), 8: (0.051, 3.247), 9: (0.042, 3.333),
    },
    ("triangular", 2): {
        3: (1.318, 11.861), 4: (0.872, 13.946), 5: (0.628, 15.700), 6: (0.476, 17.113),
        7: (0.373, 18.263), 8: (0.301, 19.213), 9: (0.248, 20.010),
    },
}

_INVPHI = (math.sqrt(5) - 1) / 2


def paper_table(lattice: LatticeKind) -> dict:
    try:
        return PAPER_TABLES[(lattice.name, lattice.dim)]
    except KeyError:
        raise KeyError(f"no published table for {lattice}") from None


def paper_lambda_times_ell(lattice: LatticeKind) -> QuadraticScalar:
    """The published choice of ``lambda * ell`` for each lattice family."""
    if lattice.name == HYPERCUBIC:
        return qf_make(-2, 2, 2)
    if lattice.name == HONEYCOMB:
        return qf_make(Fraction(-30, 11))
    return qf_make(Fraction(-30, 11), Fraction(20, 11), 5)


def paper_lambda(lattice: LatticeKind, ell: int) -> QuadraticScalar:
    return paper_lambda_times_ell(lattice) / ell


@dataclass(frozen=True)
class TuneConfig:
    lattice: LatticeKind
    ell: int
    lambda_bracket: tuple = (-6.0, 6.0)
    grid_points: int = 481
    refine_iters: int = 60
    mode: str = "lambda_only"
    honeycomb_k1: str = "published"

    def __post_init__(self):
        lo, hi = self.lambda_bracket
        if not lo < hi:
            raise ValueError("lambda bracket must be ordered")
        if self.grid_points < 16:
            raise ValueError("grid_points must be at least 16")
        if self.mode not in ("lambda_only", "paper_default"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.ell < 2:
            raise ValueError("ell must be >= 2")


@dataclass(frozen=True)
class TuneResult:
    lambda_star: Optional[QuadraticScalar]
    report: Optional[ThresholdReport]
    evaluations: int
    mode: str

    @property
    def found(self) -> bool:
        return self.report is not None


@dataclass(frozen=True)
class TableRow:
    ell: int
    t_ell: float
    ell_sq_t: float
    lambda_star: float
    feasible: bool
    t_exact: Optional[QuadraticScalar] = None

    def rounded(self, digits: int = 3) -> Decimal:
        return round_half_away(self.t_exact if self.t_exact is not None else self.t_ell, digits)


def round_half_away(x, digits: int = 3) -> Decimal:
    if isinstance(x, QuadraticScalar):
        x = qf_approx(x, 128)
    if isinstance(x, Fraction):
        # 40 significant digits is far beyond the rounding position
        value = Decimal(x.numerator) / Decimal(x.denominator)
    else:
        value = Decimal(repr(x))
    q = Decimal(1).scaleb(-digits)
    return value.quantize(q, rounding=ROUND_HALF_UP)


def evaluate(lattice: LatticeKind, ell: int, lam, honeycomb_k1: str = "published") -> Optional[ThresholdReport]:
    """Exact threshold at ``lam`` or ``None`` when the profile or constants are infeasible."""
    profile = CoefficientProfile.from_lambda(ell, lam)
    if not validate_profile(profile).ok:
        return None
    report = threshold_for(kset_for(lattice, profile, check=False, honeycomb_k1=honeycomb_k1))
    if not report.feasible:
        return None
    return report


def _golden_min(f, a: float, b: float, iters: int):
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def optimize_lambda(cfg: TuneConfig) -> TuneResult:
    """Minimise ``t_ell`` over ``lambda`` with ``lambda * ell`` in the bracket.

    Grid scan, then golden-section refinement inside the best grid cell.  The
    published parameter is always included as a candidate.  Infeasible points
    are skipped.  The final report is exact at the returned parameter.
    """
    lattice, ell = cfg.lattice, cfg.ell
    default_lam = paper_lambda(lattice, ell)
    hk = cfg.honeycomb_k1
    default = evaluate(lattice, ell, default_lam, hk)
    if cfg.mode == "paper_default":
        return TuneResult(default_lam if default else None, default, 1, cfg.mode)

    reports: dict[float, ThresholdReport] = {}

    def objective(x: float) -> float:
        if x not in reports:
            rep = evaluate(lattice, ell, Fraction(x) / ell, hk)
            reports[x] = rep
        rep = reports[x]
        return math.inf if rep is None else rep.t_float

    lo, hi = cfg.lambda_bracket
    n = cfg.grid_points
    grid = [lo + (hi - lo) * i / (n - 1) for i in range(n)]
    values = [objective(x) for x in grid]
    best_i = min(range(n), key=lambda i: (values[i], i))

    candidates = []
    if math.isfinite(values[best_i]):
        a = grid[max(best_i - 1, 0)]
        b = grid[min(best_i + 1, n - 1)]
        x_ref, f_ref = _golden_min(objective, a, b, cfg.refine_iters)
        candidates.append((values[best_i], grid[best_i]))
        if math.isfinite(f_ref):
            candidates.append((f_ref, x_ref))
    evaluations = len(reports)

    best_lam, best_rep = None, None
    if candidates:
        f_best, x_best = min(candidates)
        best_lam, best_rep = QuadraticScalar(Fraction(x_best) / ell), reports[x_best]
    if default is not None and (best_rep is None or default.t_ell < best_rep.t_ell):
        best_lam, best_rep = default_lam, default
    return TuneResult(best_lam, best_rep, evaluations + 1, cfg.mode)


def paper_default_threshold(lattice: LatticeKind, ell: int, honeycomb_k1: str = "published") -> ThresholdReport:
    if ell < 3:
        raise ValueError("the published parameter choice is stated for ell >= 3")
    profile = CoefficientProfile.from_lambda(ell, paper_lambda(lattice, ell))
    report = validate_profile(profile)
    if not report.ok:
        raise ValueError(f"published profile invalid at ell={ell}: {report.first_violation}")
    return threshold_for(kset_for(lattice, profile, check=False, honeycomb_k1=honeycomb_k1))


def _row(lattice: LatticeKind, ell: int, mode: str, cfg_kwargs: dict) -> TableRow:
    cfg = TuneConfig(lattice, ell, mode=mode, **cfg_kwargs)
    res = optimize_lambda(cfg)
    if not res.found:
        return TableRow(ell, math.nan, math.nan, math.nan, False, None)
    t = res.report.t_ell
    return TableRow(
        ell,
        qf_to_float(t),
        qf_to_float(t * (ell * ell)),
        qf_to_float(res.lambda_star),
        res.report.feasible,
        t,
    )


TABLE_COLUMNS = ("lattice", "D", "ell", "t_ell", "ell_sq_t", "lambda_star", "feasible")


def rows_to_records(lattice: LatticeKind, rows: list[TableRow]) -> list[dict]:
    return [
        {
            "lattice": lattice.name,
            "D": lattice.dim,
            "ell": r.ell,
            "t_ell": r.t_ell,
            "ell_sq_t": r.ell_sq_t,
            "lambda_star": r.lambda_star,
            "feasible": r.feasible,
        }
        for r in rows
    ]


def write_csv(fh, lattice: LatticeKind, rows: list[TableRow]) -> None:
    import csv

    w = csv.DictWriter(fh, fieldnames=TABLE_COLUMNS, lineterminator="\n")
    w.writeheader()
    for rec in rows_to_records(lattice, rows):
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in rec.items()})


def read_csv(fh) -> list[dict]:
    import csv

    out = []
    for rec in csv.DictReader(fh):
        if tuple(rec) != TABLE_COLUMNS:
            raise ValueError(f"unexpected columns {tuple(rec)}")
        out.append({
            "lattice": rec["lattice"],
            "D": int(rec["D"]),
            "ell": int(rec["ell"]),
            "t_ell": float(rec["t_ell"]),
            "ell_sq_t": float(rec["ell_sq_t"]),
            "lambda_star": float(rec["lambda_star"]),
            "feasible": rec["feasible"] == "True",
        })
    return out


def _row_task(args):
    return _row(*args)


def reproduce_table(
    lattice: LatticeKind,
    ells: Iterable[int],
    *,
    mode: str = "lambda_only",
    jobs: int = 1,
    **cfg_kwargs,
) -> list[TableRow]:
    ells = list(ells)
    tasks = [(lattice, ell, mode, cfg_kwargs) for ell in ells]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_row_task, tasks))
    else:
        rows = [_row_task(t) for t in tasks]
    return sorted(rows, key=lambda r: r.ell)


@dataclass(frozen=True)
class TableComparison:
    ell: int
    ours: float
    ours_rounded: Decimal
    paper: float
    diff: float
    ok: bool


def compare_with_paper(lattice: LatticeKind, rows: list[TableRow], tol: float = TABLE_TOLERANCE):
    table = paper_table(lattice)
    out = []
    for row in rows:
        if row.ell not in table:
            raise KeyError(f"no published value for ell={row.ell} on {lattice}")
        paper_t = table[row.ell][0]
        diff = row.t_ell - paper_t
        ok = row.feasible and math.isfinite(row.t_ell) and abs(diff) <= tol
        out.append(TableComparison(row.ell, row.t_ell, row.rounded(), paper_t, diff, ok))
    return out


def asymptotic_probe(lattice: LatticeKind, ells: Iterable[int], honeycomb_k1: str = "published") -> list[tuple[int, float]]:
    ells = list(ells)
    if any(b <= a for a, b in zip(ells, ells[1:])):
        raise ValueError("ells must be increasing")
    out = []
    for ell in ells:
        rep = paper_default_threshold(lattice, ell, honeycomb_k1)
        out.append((ell, qf_to_float(rep.t_ell * (ell * ell))))
    return out
