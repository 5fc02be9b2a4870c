"""Monte Carlo experiment drivers plus the flat-config / CSV plumbing.

An :class:`ExperimentConfig` (usually parsed from a ``key = value`` file)
names one experiment; each ``run_*`` driver turns it into a
:class:`RunResult` whose rows follow a fixed, documented column schema.
Every trial owns an independent RNG stream derived from the config seed,
so outputs are byte-identical regardless of thread count.

Exact singularity testing lives here too: determinants are taken modulo
enough distinct primes near 2**31 that their product exceeds twice the
Hadamard bound, which decides det = 0 over the integers without any
floating-point tolerance.
"""
from __future__ import annotations

import dataclasses
import math
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, TypeVar

import numpy as np

from ._kernels import det_mod_p
from .arithmetic import ClcdParams, clcd, difference_vector, oracle_clcd
from .core import RegularDigraphMatrix
from .rerandom import (
    RerandomBudgetError,
    enumerate_extensions,
    extract_revealed,
    resample_conditional,
)
from .sampler import SamplerConfig, derive_rng, sample_uniform
from .spectral import restricted_smallest, smallest_singular
from .structures import (
    QuasirandomParams,
    SplitMatchPair,
    check_quasirandom,
    well_spread_fraction,
)
from .vectorclass import bispread_constants, certified_spread_constants, is_compressible

EXPERIMENTS = (
    "singularity",
    "sn-tail",
    "quasirandom",
    "single-vector",
    "compressible",
    "rerandom-uniformity",
    "clcd-suite",
)

# spectral cutoff below which a matrix is treated as singular; must agree
# with the exact-arithmetic verdict on every trial (checked, not assumed)
SINGULAR_SMIN_CUTOFF = 1e-6

# two-sided 99% normal quantile for binomial half-widths
CONFIDENCE_Z = 2.5758293035489004

# largest n for which rerandom-uniformity attempts full fiber enumeration
ENUMERATION_MODE_MAX_N = 8

_T = TypeVar("_T")

_CORPUS_SALT = 101
_SPLIT_SALT = 102
_FIXTURE_SALT = 103


class ConfigError(ValueError):
    """A config file or config field failed validation."""


# ---------------------------------------------------------------------------
# exact singularity

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_prime_cache: list[int] = []


def _is_prime(num: int) -> bool:
    # deterministic Miller-Rabin; the base set covers everything below 3.3e24
    if num < 2:
        return False
    for b in _MR_BASES:
        if num % b == 0:
            return num == b
    d = num - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for b in _MR_BASES:
        x = pow(b, d, num)
        if x == 1 or x == num - 1:
            continue
        for _ in range(s - 1):
            x = x * x % num
            if x == num - 1:
                break
        else:
            return False
    return True


def modulus_primes(count: int) -> list[int]:
    """The ``count`` largest primes below 2**31, in descending order."""
    if count < 1:
        raise ValueError("count must be positive")
    cand = _prime_cache[-1] - 2 if _prime_cache else 2**31 - 1
    while len(_prime_cache) < count:
        if _is_prime(cand):
            _prime_cache.append(cand)
        cand -= 2
    return _prime_cache[:count]


def exact_singular(m) -> bool:
    """True iff det(m) = 0 over the integers.

    Takes determinants modulo successive primes near 2**31, stopping at the
    first nonzero residue; all-zero residues prove singularity once the
    prime product exceeds twice the Hadamard bound n^(n/2).
    """
    entries = m.entries if isinstance(m, RegularDigraphMatrix) else np.asarray(m)
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
        raise ValueError(f"need a square matrix, got shape {entries.shape}")
    if not (np.issubdtype(entries.dtype, np.integer) or entries.dtype == np.bool_):
        raise ValueError("entries must be integers")
    work = entries.astype(np.int64)
    if not np.isin(work, (0, 1)).all():
        raise ValueError("entries must be 0 or 1")
    n = work.shape[0]
    target = math.log(2.0) + 0.5 * n * math.log(max(n, 1))
    acc = 0.0
    idx = 0
    while acc <= target:
        idx += 1
        p = modulus_primes(idx)[idx - 1]
        if det_mod_p(work, p) != 0:
            return False
        acc += math.log(p)
    return True


# ---------------------------------------------------------------------------
# configuration

@dataclass(frozen=True)
class ParamPack:
    """Numeric knobs shared by the experiment drivers.

    ``incomp_support_frac`` / ``incomp_radius`` define compressibility and
    seed the certified band constants; the ``flat_*`` pair defines the
    almost-constant test at restriction scale.  A zero ``band_count_frac``
    means "derive the band from the incompressibility pair"; a zero
    ``spread_frac`` means "derive the well-spread fraction from the density
    and group size".  ``cap_frac`` scales the absolute denominator cutoff
    with dimension (cap = cap_frac * n) while ``abs_cap`` is the flat
    cutoff used where no dimension is in play.
    """

    incomp_support_frac: float = 0.3
    incomp_radius: float = 0.05
    flat_outlier_frac: float = 0.005
    flat_radius: float = 0.01
    band_count_frac: float = 0.0
    band_lo: float = 0.0
    band_hi: float = 0.0
    rel_coeff: float = 0.1
    abs_cap: float = 10.0
    cap_frac: float = 0.05
    group_size: int = 3
    spread_frac: float = 0.0
    depth: int = 3
    spread_coeff: float = 0.4
    svd_tol: float = 1e-10
    compressible_cut: float = 0.05
    check_budget: int = 1_000_000
    corpus_size: int = 64

    def __post_init__(self) -> None:
        for name in ("incomp_support_frac", "incomp_radius", "flat_outlier_frac", "flat_radius"):
            val = getattr(self, name)
            if not 0.0 < val < 1.0:
                raise ConfigError(f"{name} must lie in (0, 1), got {val}")
        if min(self.band_count_frac, self.band_lo, self.band_hi) < 0.0:
            raise ConfigError("band constants must be nonnegative")
        if self.band_count_frac == 0.0:
            if self.band_lo != 0.0 or self.band_hi != 0.0:
                raise ConfigError("band_lo/band_hi need band_count_frac > 0")
        elif not 0.0 < self.band_lo <= self.band_hi:
            raise ConfigError("need 0 < band_lo <= band_hi when band_count_frac > 0")
        if not 0.0 < self.rel_coeff < 1.0:
            raise ConfigError(f"rel_coeff must lie in (0, 1), got {self.rel_coeff}")
        if self.abs_cap <= 0.0:
            raise ConfigError(f"abs_cap must be positive, got {self.abs_cap}")
        if not 0.0 < self.cap_frac < 1.0:
            raise ConfigError(f"cap_frac must lie in (0, 1), got {self.cap_frac}")
        if self.group_size < 1:
            raise ConfigError(f"group_size must be positive, got {self.group_size}")
        if self.spread_frac != 0.0 and not 0.0 < self.spread_frac < 1.0:
            raise ConfigError("spread_frac must be 0 (auto) or in (0, 1)")
        if self.depth < 1:
            raise ConfigError(f"depth must be positive, got {self.depth}")
        if self.spread_coeff <= 0.0:
            raise ConfigError("spread_coeff must be positive")
        if not 0.0 < self.svd_tol <= 1e-6:
            raise ConfigError(f"svd_tol must lie in (0, 1e-6], got {self.svd_tol}")
        if self.compressible_cut <= 0.0:
            raise ConfigError("compressible_cut must be positive")
        if self.check_budget < 1:
            raise ConfigError("check_budget must be positive")
        if self.corpus_size < 1:
            raise ConfigError("corpus_size must be positive")

    def resolved_band(self) -> tuple[float, float, float]:
        """The two-sided band triple, explicit or derived."""
        if self.band_count_frac > 0.0:
            return (self.band_count_frac, self.band_lo, self.band_hi)
        one_sided = certified_spread_constants(self.incomp_support_frac, self.incomp_radius)
        return bispread_constants(*one_sided)

    def resolved_spread_frac(self, density: float) -> float:
        if self.spread_frac > 0.0:
            return self.spread_frac
        return well_spread_fraction(min(density, 1.0 - density), self.group_size)


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: what to run, at what size, and with which knobs.

    Exactly one of ``d`` and ``density`` must be set; with ``density`` the
    degree is floor(density * n).  ``kappa_grid`` must be nonnegative and
    strictly increasing.
    """

    experiment: str
    n: int
    trials: int
    d: int | None = None
    density: float | None = None
    kappa_grid: tuple[float, ...] = (0.0,)
    seed: int = 0
    method: str = "switch-chain"
    burn_in: int | None = None
    out: str | None = None
    pack: ParamPack = field(default_factory=ParamPack)

    def __post_init__(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(
                f"unknown experiment {self.experiment!r}, want one of {EXPERIMENTS}"
            )
        if self.n < 2:
            raise ConfigError(f"n must be at least 2, got {self.n}")
        if self.trials < 1:
            raise ConfigError(f"trials must be positive, got {self.trials}")
        if (self.d is None) == (self.density is None):
            raise ConfigError("set exactly one of d and density")
        if self.density is not None and not 0.0 < self.density < 1.0:
            raise ConfigError(f"density must lie in (0, 1), got {self.density}")
        deg = self.degree
        if min(deg, self.n - deg) < 1:
            raise ConfigError(f"need 1 <= d <= n-1, got d={deg} at n={self.n}")
        if not self.kappa_grid:
            raise ConfigError("kappa_grid must not be empty")
        if self.kappa_grid[0] < 0.0:
            raise ConfigError("kappa values must be nonnegative")
        if any(b <= a for a, b in zip(self.kappa_grid, self.kappa_grid[1:])):
            raise ConfigError(f"kappa_grid must be strictly increasing, got {self.kappa_grid}")
        if self.seed < 0:
            raise ConfigError("seed must be nonnegative")
        # delegate method / burn_in validation to the sampler contract
        try:
            self.sampler_config()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    @property
    def degree(self) -> int:
        return self.d if self.d is not None else int(self.density * self.n)

    @property
    def effective_density(self) -> float:
        return self.density if self.density is not None else self.degree / self.n

    def sampler_config(self) -> SamplerConfig:
        return SamplerConfig(
            n=self.n, d=self.degree, method=self.method, burn_in=self.burn_in, seed=self.seed
        )

    def ordering_warnings(self) -> tuple[str, ...]:
        """Scale-separation checks: each knob should sit well below the next.

        The chain is cap_frac below rel_coeff, rel_coeff below both the
        well-spread fraction and 1/group_size, those below the band count
        fraction, the small band constants below the incompressibility
        pair, and that pair below the (minority-side) density.  At desk
        sizes the middle links routinely fail because the certified band
        constants are astronomically small, so violations warn rather
        than error.
        """
        pack = self.pack
        dens = min(self.effective_density, 1.0 - self.effective_density)
        band = pack.resolved_band()
        frac = pack.resolved_spread_frac(dens)
        inv_group = 1.0 / pack.group_size
        small_pair = min(pack.incomp_support_frac, pack.incomp_radius)
        links = (
            (pack.cap_frac < pack.rel_coeff,
             f"cap_frac {pack.cap_frac} should sit below rel_coeff {pack.rel_coeff}"),
            (pack.rel_coeff < frac,
             f"rel_coeff {pack.rel_coeff} should sit below the well-spread fraction {frac}"),
            (pack.rel_coeff < inv_group,
             f"rel_coeff {pack.rel_coeff} should sit below 1/group_size {inv_group}"),
            (frac <= band[0] / 2.0,
             f"well-spread fraction {frac} should be at most half the band count fraction {band[0]}"),
            (inv_group < band[0],
             f"1/group_size {inv_group} should sit below the band count fraction {band[0]}"),
            (max(band[0], band[1]) < small_pair,
             f"band constants {band[:2]} should sit below min(incomp_support_frac, incomp_radius) {small_pair}"),
            (max(pack.incomp_support_frac, pack.incomp_radius) < dens,
             f"incompressibility pair should sit below the density {dens}"),
        )
        return tuple(msg for ok, msg in links if not ok)


_TOP_KEYS = (
    "experiment",
    "n",
    "d",
    "density",
    "trials",
    "kappa_grid",
    "seed",
    "method",
    "burn_in",
    "out",
)

_PACK_KEYS = tuple(f.name for f in dataclasses.fields(ParamPack))

_INT_KEYS = frozenset({"n", "d", "trials", "seed", "burn_in"}) | {
    f.name for f in dataclasses.fields(ParamPack) if f.type == "int"
}


def _cast(key: str, raw: str, line_no: int):
    try:
        if key == "kappa_grid":
            toks = [t.strip() for t in raw.split(",")]
            if not all(toks):
                raise ValueError("empty entry")
            return tuple(float(t) for t in toks)
        if key in ("experiment", "method", "out"):
            return raw
        if key in _INT_KEYS:
            return int(raw)
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"line {line_no}: bad value for {key}: {raw!r} ({exc})") from None


def parse_config(text: str, source: str = "<config>") -> ExperimentConfig:
    """Parse flat ``key = value`` lines; ``#`` starts a comment.

    Unknown or duplicate keys and malformed lines are rejected with their
    line number.
    """
    seen: dict[str, object] = {}
    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}: line {line_no}: expected 'key = value', got {raw_line.strip()!r}")
        key, _, raw = line.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in _TOP_KEYS and key not in _PACK_KEYS:
            raise ConfigError(f"{source}: line {line_no}: unknown key {key!r}")
        if key in seen:
            raise ConfigError(f"{source}: line {line_no}: duplicate key {key!r}")
        if not raw:
            raise ConfigError(f"{source}: line {line_no}: empty value for {key!r}")
        seen[key] = _cast(key, raw, line_no)
    for req in ("experiment", "n", "trials"):
        if req not in seen:
            raise ConfigError(f"{source}: missing required key {req!r}")
    pack_kwargs = {k: v for k, v in seen.items() if k in _PACK_KEYS}
    top_kwargs = {k: v for k, v in seen.items() if k in _TOP_KEYS}
    try:
        pack = ParamPack(**pack_kwargs)
        return ExperimentConfig(pack=pack, **top_kwargs)
    except ValueError as exc:
        raise ConfigError(f"{source}: {exc}") from None


def read_config(path: str) -> ExperimentConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text, source=str(path))


def config_text(cfg: ExperimentConfig) -> str:
    """Canonical config rendering; parse_config round-trips it exactly."""
    lines = [
        f"experiment = {cfg.experiment}",
        f"n = {cfg.n}",
    ]
    if cfg.d is not None:
        lines.append(f"d = {cfg.d}")
    else:
        lines.append(f"density = {cfg.density!r}")
    lines.append(f"trials = {cfg.trials}")
    lines.append("kappa_grid = " + ", ".join(repr(k) for k in cfg.kappa_grid))
    lines.append(f"seed = {cfg.seed}")
    lines.append(f"method = {cfg.method}")
    if cfg.burn_in is not None:
        lines.append(f"burn_in = {cfg.burn_in}")
    if cfg.out is not None:
        lines.append(f"out = {cfg.out}")
    for name in _PACK_KEYS:
        val = getattr(cfg.pack, name)
        lines.append(f"{name} = {val!r}" if isinstance(val, float) else f"{name} = {val}")
    return "\n".join(lines) + "\n"


def write_config(cfg: ExperimentConfig, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(config_text(cfg))


# ---------------------------------------------------------------------------
# CSV

def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    text = str(value)
    if any(ch in text for ch in ",\n\r\""):
        raise ValueError(f"cell {text!r} would need quoting; schemas forbid such values")
    return text


def format_csv(columns, rows) -> str:
    """Header plus one line per row; floats via repr, booleans true/false,
    None as the empty cell.  Row keys must match the schema exactly."""
    cols = tuple(columns)
    lines = [",".join(cols)]
    for idx, row in enumerate(rows):
        if set(row) != set(cols):
            raise ValueError(f"row {idx} keys {sorted(row)} do not match schema {sorted(cols)}")
        lines.append(",".join(_csv_cell(row[c]) for c in cols))
    return "\n".join(lines) + "\n"


def write_csv(rows, path: str, columns) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_csv(columns, rows))


# ---------------------------------------------------------------------------
# results and trial plumbing

@dataclass(frozen=True)
class TrialRecord:
    """Per-trial measurements for the spectral experiments."""

    trial_index: int
    seed: int
    s_min: float
    restricted_s_min: float
    exact_singular: bool
    qhr_holds: bool | None = None
    wall_time_ms: float = 0.0

    def __post_init__(self) -> None:
        if self.exact_singular and self.s_min > SINGULAR_SMIN_CUTOFF:
            raise RuntimeError(
                f"trial {self.trial_index}: exact arithmetic says singular "
                f"but s_min = {self.s_min}"
            )


@dataclass(frozen=True)
class RunResult:
    """Rows under a fixed column schema plus a free-form summary."""

    experiment: str
    columns: tuple[str, ...]
    rows: tuple[dict, ...]
    summary: dict

    def csv_text(self) -> str:
        return format_csv(self.columns, self.rows)


def map_trials(worker: Callable[[int], _T], trials: int, threads: int = 1) -> list[_T]:
    """Run worker(0), ..., worker(trials-1), results in trial order.

    Workers must be self-contained (derive their own RNG from the trial
    index); the SVD and compiled kernels release the GIL, so threads > 1
    overlaps real work without changing any output.
    """
    if trials < 0:
        raise ValueError("trials must be nonnegative")
    if threads < 1:
        raise ValueError("threads must be positive")
    if threads == 1:
        return [worker(t) for t in range(trials)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, range(trials)))


def _binom_half_width(p_hat: float, count: int) -> float:
    return CONFIDENCE_Z * math.sqrt(max(p_hat * (1.0 - p_hat), 0.0) / count)


def _sample_trial(cfg: ExperimentConfig, trial: int) -> RegularDigraphMatrix:
    return sample_uniform(cfg.sampler_config(), derive_rng(cfg.seed, trial))


def _aux_rng(cfg: ExperimentConfig, salt: int) -> np.random.Generator:
    # streams for shared fixtures (corpora, splits) that must not collide
    # with any per-trial stream
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([cfg.seed, salt])))


# ---------------------------------------------------------------------------
# experiment drivers

def run_singularity(cfg: ExperimentConfig, threads: int = 1) -> RunResult:
    """Exact-arithmetic singularity frequency over sampled matrices."""

    def worker(trial: int) -> bool:
        return exact_singular(_sample_trial(cfg, trial))

    flags = map_trials(worker, cfg.trials, threads)
    count = int(sum(flags))
    p_hat = count / cfg.trials
    row = {
        "experiment": cfg.experiment,
        "n": cfg.n,
        "d": cfg.degree,
        "trials": cfg.trials,
        "singular_count": count,
        "p_hat": p_hat,
        "half_width": _binom_half_width(p_hat, cfg.trials),
    }
    columns = ("experiment", "n", "d", "trials", "singular_count", "p_hat", "half_width")
    return RunResult(cfg.experiment, columns, (row,), dict(row))


def run_sn_tail(cfg: ExperimentConfig, threads: int = 1) -> RunResult:
    """Empirical tail of the smallest singular value over the kappa grid.

    Every trial cross-checks the spectral verdict against the exact one:
    a matrix is exactly singular iff its s_min falls at or below
    SINGULAR_SMIN_CUTOFF.  Any disagreement aborts the run.
    """

    def worker(trial: int) -> TrialRecord:
        t0 = time.perf_counter()
        m = _sample_trial(cfg, trial)
        dense = m.dense()
        s_min = smallest_singular(dense, tol=cfg.pack.svd_tol).value
        r_min = restricted_smallest(dense, tol=cfg.pack.svd_tol)
        singular = exact_singular(m)
        record = TrialRecord(
            trial_index=trial,
            seed=cfg.seed ^ trial,
            s_min=s_min,
            restricted_s_min=r_min,
            exact_singular=singular,
            wall_time_ms=(time.perf_counter() - t0) * 1e3,
        )
        if singular != (s_min <= SINGULAR_SMIN_CUTOFF):
            raise RuntimeError(
                f"trial {trial}: spectral and exact singularity verdicts disagree "
                f"(s_min = {s_min}, exact_singular = {singular})"
            )
        return record

    records = map_trials(worker, cfg.trials, threads)
    svals = np.array([r.s_min for r in records])
    sing = np.array([r.exact_singular for r in records])
    root_n = math.sqrt(cfg.n)
    rows = []
    prev_count = -1
    max_ratio = None
    for kappa in cfg.kappa_grid:
        if kappa == 0.0:
            count = int(np.count_nonzero(sing))
        else:
            count = int(np.count_nonzero((svals <= kappa) | sing))
        assert count >= prev_count, "tail counts must be nondecreasing in kappa"
        prev_count = count
        p_hat = count / cfg.trials
        ratio = p_hat / (kappa * root_n) if kappa > 0.0 else None
        if ratio is not None:
            max_ratio = ratio if max_ratio is None else max(max_ratio, ratio)
        rows.append({
            "experiment": cfg.experiment,
            "n": cfg.n,
            "d": cfg.degree,
            "trials": cfg.trials,
            "kappa": float(kappa),
            "count": count,
            "p_hat": p_hat,
            "half_width": _binom_half_width(p_hat, cfg.trials),
            "ratio_to_kappa_sqrt_n": ratio,
        })
    columns = (
        "experiment", "n", "d", "trials", "kappa",
        "count", "p_hat", "half_width", "ratio_to_kappa_sqrt_n",
    )
    summary = {
        "singular_count": int(np.count_nonzero(sing)),
        "min_s_min": float(svals.min()),
        "min_restricted": float(min(r.restricted_s_min for r in records)),
        "max_ratio": max_ratio,
        "mean_wall_ms": float(np.mean([r.wall_time_ms for r in records])),
    }
    return RunResult(cfg.experiment, columns, tuple(rows), summary)


def alternating_vector(n: int) -> np.ndarray:
    """The unit sum-zero vector (+1, -1, +1, ...) / sqrt(n); n must be even."""
    if n % 2:
        raise ValueError(f"alternating vector needs even n, got {n}")
    x = np.ones(n)
    x[1::2] = -1.0
    return x / math.sqrt(n)


def run_single_vector(cfg: ExperimentConfig, x=None, threads: int = 1) -> RunResult:
    """Distribution of ||Ax||_2 / sqrt(n) for one fixed unit sum-zero x."""
    if x is None:
        x = alternating_vector(cfg.n)
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (cfg.n,):
        raise ValueError(f"x must have length {cfg.n}, got shape {x.shape}")
    if abs(float(np.linalg.norm(x)) - 1.0) > 1e-8 or abs(float(x.sum())) > 1e-8:
        raise ValueError("x must be a unit vector with coordinates summing to zero")
    root_n = math.sqrt(cfg.n)

    def worker(trial: int) -> float:
        m = _sample_trial(cfg, trial)
        return float(np.linalg.norm(m.dense() @ x)) / root_n

    values = map_trials(worker, cfg.trials, threads)
    rows = tuple(
        {"experiment": cfg.experiment, "n": cfg.n, "d": cfg.degree, "trial": t, "value": val}
        for t, val in enumerate(values)
    )
    arr = np.array(values)
    summary = {
        "q01": float(np.quantile(arr, 0.01, method="lower")),
        "min": float(arr.min()),
        "mean": float(arr.mean()),
        "max": float(arr.max()),
    }
    columns = ("experiment", "n", "d", "trial", "value")
    return RunResult(cfg.experiment, columns, rows, summary)


def compressible_corpus(
    n: int, support_frac: float, radius: float, size: int, rng: np.random.Generator
) -> np.ndarray:
    """``size`` unit sum-zero vectors, all compressible at (support_frac, radius).

    Even indices are exactly sparse (sum-zero values on a random support of
    size floor(support_frac * n)); odd indices additionally carry a small
    sum-zero perturbation that keeps them strictly inside the radius.
    """
    k = int(support_frac * n)
    if k < 2:
        raise ValueError(f"support floor({support_frac} * {n}) = {k} too small for sum-zero vectors")
    out = np.zeros((size, n))
    for i in range(size):
        support = rng.choice(n, size=k, replace=False)
        vals = rng.standard_normal(k)
        vals -= vals.mean()
        while np.linalg.norm(vals) < 1e-9:
            vals = rng.standard_normal(k)
            vals -= vals.mean()
        v = np.zeros(n)
        v[support] = vals / np.linalg.norm(vals)
        if i % 2:
            noise = rng.standard_normal(n)
            noise -= noise.mean()
            noise *= (radius / 3.0) / np.linalg.norm(noise)
            v = v + noise
            v /= np.linalg.norm(v)
        out[i] = v
    return out


def run_compressible(cfg: ExperimentConfig, threads: int = 1) -> RunResult:
    """Per-trial minimum of ||Av||_2 / sqrt(n) over a compressible corpus."""
    pack = cfg.pack
    corpus = compressible_corpus(
        cfg.n, pack.incomp_support_frac, pack.incomp_radius,
        pack.corpus_size, _aux_rng(cfg, _CORPUS_SALT),
    )
    for i, v in enumerate(corpus):
        if not is_compressible(v, pack.incomp_support_frac, pack.incomp_radius):
            raise RuntimeError(f"corpus vector {i} failed the compressibility check")
    root_n = math.sqrt(cfg.n)

    def worker(trial: int) -> float:
        m = _sample_trial(cfg, trial)
        return float(np.linalg.norm(m.dense() @ corpus.T, axis=0).min()) / root_n

    mins = map_trials(worker, cfg.trials, threads)
    rows = tuple(
        {
            "experiment": cfg.experiment,
            "n": cfg.n,
            "d": cfg.degree,
            "trial": t,
            "min_ratio": val,
            "below_cut": val < pack.compressible_cut,
        }
        for t, val in enumerate(mins)
    )
    below = sum(1 for val in mins if val < pack.compressible_cut)
    summary = {
        "corpus_size": pack.corpus_size,
        "cut": pack.compressible_cut,
        "rate_below": below / cfg.trials,
        "min_ratio": float(min(mins)),
        "max_ratio": float(max(mins)),
    }
    columns = ("experiment", "n", "d", "trial", "min_ratio", "below_cut")
    return RunResult(cfg.experiment, columns, rows, summary)


def run_quasirandom(cfg: ExperimentConfig, threads: int = 1) -> RunResult:
    """Frequency of the combined quasirandomness event, with per-check breakdown.

    One random half-split is drawn up front (from an auxiliary stream) and
    shared by all trials; the density is taken on the minority side.
    """
    dens = min(cfg.degree, cfg.n - cfg.degree) / cfg.n
    aux = _aux_rng(cfg, _SPLIT_SALT)
    split = tuple(sorted(int(i) for i in aux.choice(cfg.n, size=cfg.n // 2, replace=False)))
    params = QuasirandomParams(
        depth=cfg.pack.depth, density=dens, splits=(split,), budget=cfg.pack.check_budget
    )

    def worker(trial: int):
        rng = derive_rng(cfg.seed, trial)
        m = sample_uniform(cfg.sampler_config(), rng)
        return check_quasirandom(m, params, rng)

    reports = map_trials(worker, cfg.trials, threads)
    rows = tuple(
        {
            "experiment": cfg.experiment,
            "n": cfg.n,
            "d": cfg.degree,
            "trial": t,
            "holds": rep.holds,
            "overlap_holds": rep.overlap.holds,
            "intersections_hold": all(r.holds for r in rep.intersections),
            "weights_hold": all(r.holds for r in rep.weights),
            "depth_hypothesis": rep.depth_hypothesis,
        }
        for t, rep in enumerate(reports)
    )
    summary = {
        "freq_holds": sum(r["holds"] for r in rows) / cfg.trials,
        "freq_overlap": sum(r["overlap_holds"] for r in rows) / cfg.trials,
        "freq_intersections": sum(r["intersections_hold"] for r in rows) / cfg.trials,
        "freq_weights": sum(r["weights_hold"] for r in rows) / cfg.trials,
        "split": split,
    }
    columns = (
        "experiment", "n", "d", "trial", "holds",
        "overlap_holds", "intersections_hold", "weights_hold", "depth_hypothesis",
    )
    return RunResult(cfg.experiment, columns, rows, summary)


def run_rerandom_uniformity(cfg: ExperimentConfig, threads: int = 1) -> RunResult:
    """Resampler check against one fixed revealed realization.

    Small n: enumerate the conditional fiber and chi-square the resampler's
    empirical counts against uniform.  Large n: every resample must
    validate and reproduce the revealed information exactly.
    """
    aux = _aux_rng(cfg, _FIXTURE_SALT)
    base = sample_uniform(cfg.sampler_config(), aux)
    order = tuple(int(i) for i in aux.permutation(cfg.n))
    split = tuple(sorted(int(i) for i in aux.choice(cfg.n, size=cfg.n // 2, replace=False)))
    pair = SplitMatchPair(order=order, split=split)
    revealed = extract_revealed(base, pair)

    atoms = None
    if cfg.n <= ENUMERATION_MODE_MAX_N:
        try:
            atoms = enumerate_extensions(revealed)
        except RerandomBudgetError:
            atoms = None

    if atoms is not None:
        index = {m.key(): i for i, m in enumerate(atoms)}

        def worker(trial: int) -> int:
            out = resample_conditional(base, pair, derive_rng(cfg.seed, trial))
            return index[out.key()]

        hits = map_trials(worker, cfg.trials, threads)
        counts = np.bincount(hits, minlength=len(atoms))
        expected = cfg.trials / len(atoms)
        rows = tuple(
            {
                "experiment": cfg.experiment,
                "n": cfg.n,
                "d": cfg.degree,
                "atom": i,
                "count": int(c),
                "expected": expected,
            }
            for i, c in enumerate(counts)
        )
        from scipy import stats

        chi2, p_value = stats.chisquare(counts)
        summary = {
            "mode": "exact",
            "atoms": len(atoms),
            "chi2": float(chi2),
            "p_value": float(p_value),
            "tv_distance": float(0.5 * np.abs(counts / cfg.trials - 1.0 / len(atoms)).sum()),
        }
        columns = ("experiment", "n", "d", "atom", "count", "expected")
        return RunResult(cfg.experiment, columns, rows, summary)

    def worker(trial: int) -> tuple[bool, bool]:
        out = resample_conditional(base, pair, derive_rng(cfg.seed, trial))
        return True, extract_revealed(out, pair) == revealed

    checks = map_trials(worker, cfg.trials, threads)
    rows = tuple(
        {
            "experiment": cfg.experiment,
            "n": cfg.n,
            "d": cfg.degree,
            "trial": t,
            "valid": ok,
            "revealed_match": match,
        }
        for t, (ok, match) in enumerate(checks)
    )
    summary = {
        "mode": "validity",
        "validity_rate": sum(1 for ok, match in checks if ok and match) / cfg.trials,
    }
    columns = ("experiment", "n", "d", "trial", "valid", "revealed_match")
    return RunResult(cfg.experiment, columns, rows, summary)


def _suite_max_scale(rel_coeff: float, dnorm: float) -> float:
    # keep the dense oracle scan around 150k points: scale the search
    # ceiling with step size, clamped to [1, 50]
    return min(50.0, max(1.0, 150.0 * rel_coeff / dnorm))


def run_clcd_suite(cfg: ExperimentConfig, threads: int = 1) -> RunResult:
    """Solver-versus-oracle agreement on random low-dimensional vectors."""
    top_dim = min(cfg.n, 6)
    if top_dim < 2:
        raise ConfigError("clcd-suite needs n >= 2")

    def worker(trial: int) -> dict:
        rng = derive_rng(cfg.seed, trial)
        dim = int(rng.integers(2, top_dim + 1))
        v = rng.standard_normal(dim)
        v /= np.linalg.norm(v)
        rel = float(rng.uniform(0.05, 0.3))
        cap = float(rng.choice((1.0, 10.0)))
        dnorm = float(np.linalg.norm(difference_vector(v)))
        params = ClcdParams(abs_cap=cap, rel_coeff=rel, max_scale=_suite_max_scale(rel, dnorm))
        solver = clcd(v, params)
        oracle = oracle_clcd(v, params)
        if math.isinf(solver) or math.isinf(oracle):
            agree = solver == oracle
        else:
            agree = abs(solver - oracle) <= 1e-6 * max(1.0, oracle)
        return {
            "experiment": cfg.experiment,
            "trial": trial,
            "dim": dim,
            "rel_coeff": rel,
            "abs_cap": cap,
            "solver": solver,
            "oracle": oracle,
            "agree": agree,
        }

    rows = tuple(map_trials(worker, cfg.trials, threads))
    finite = [abs(r["solver"] - r["oracle"]) for r in rows if math.isfinite(r["solver"])]
    summary = {
        "agreement_rate": sum(r["agree"] for r in rows) / cfg.trials,
        "finite_cases": len(finite),
        "max_abs_diff": float(max(finite)) if finite else None,
    }
    columns = ("experiment", "trial", "dim", "rel_coeff", "abs_cap", "solver", "oracle", "agree")
    return RunResult(cfg.experiment, columns, rows, summary)


_RUNNERS: dict[str, Callable[..., RunResult]] = {
    "singularity": run_singularity,
    "sn-tail": run_sn_tail,
    "quasirandom": run_quasirandom,
    "single-vector": run_single_vector,
    "compressible": run_compressible,
    "rerandom-uniformity": run_rerandom_uniformity,
    "clcd-suite": run_clcd_suite,
}


def run_experiment(cfg: ExperimentConfig, threads: int = 1) -> RunResult:
    """Dispatch to the named driver, write cfg.out if set, return the result."""
    for msg in cfg.ordering_warnings():
        warnings.warn(msg, stacklevel=2)
    result = _RUNNERS[cfg.experiment](cfg, threads=threads)
    if cfg.out is not None:
        write_csv(result.rows, cfg.out, result.columns)
    return result
