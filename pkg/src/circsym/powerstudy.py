"""Monte Carlo rejection-rate studies over grids of sine-skewed scenarios.

A study crosses data-generating scenarios ``(g0, k', lambda, n)`` with a
battery of tests.  Every test in the battery sees the same sample for a
given replicate, and each replicate's seed is derived from the master seed
and a stable hash of its scenario, so any subset of scenarios can be rerun
in isolation and the table does not depend on the number of workers.
"""

from concurrent.futures import ProcessPoolExecutor
import csv
from dataclasses import dataclass, field
import io
import itertools
import json
import math

import numpy as np

from .distributions import BaseFamily, SineSkewedModel
from .estimators import ZeroResultantError
from .sampling import derive_seed, sample_sine_skewed
from .symtests import (
    NEEDS_FAMILY,
    NEEDS_MU,
    TRIVIAL,
    canonical_test_id,
    is_trivial,
    run_test,
)

CSV_COLUMNS = (
    "g0_family",
    "g0_concentration",
    "k_prime",
    "lam",
    "n",
    "test",
    "test_family",
    "test_concentration",
    "k",
    "rejection_rate",
    "mc_se",
    "replications",
    "n_flagged",
    "flag",
)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Scenario:
    g0: BaseFamily
    k_prime: int
    lam: float
    n: int

    def __post_init__(self):
        object.__setattr__(self, "k_prime", int(self.k_prime))
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "n", int(self.n))
        if self.n < 5:
            raise ConfigError("scenario sample size must be at least 5")
        # skewness-free scenarios do not depend on k'
        if self.lam == 0:
            object.__setattr__(self, "k_prime", 1)
        SineSkewedModel(self.g0, 0.0, self.lam, self.k_prime)

    def key(self):
        return {
            "g0": self.g0.to_dict(),
            "k_prime": int(self.k_prime),
            "lam": float(self.lam),
            "n": int(self.n),
        }


@dataclass(frozen=True)
class TestSpec:
    """One test of the battery.

    ``family`` is a :class:`BaseFamily`, ``None`` for tests that need none,
    or the string ``"g0"`` meaning the scenario's own base density.
    Known-centre tests use the true centre, which is 0 in every scenario.
    """

    test: str
    family: object = None
    k: int = 2

    __test__ = False

    def __post_init__(self):
        object.__setattr__(self, "test", canonical_test_id(self.test))
        if self.test in NEEDS_FAMILY and self.family is None:
            raise ConfigError(f"{self.test} needs a family (or 'g0')")
        if self.test == "B2Bar":
            object.__setattr__(self, "k", 2)

    def resolve(self, scenario):
        if self.family == "g0":
            return scenario.g0
        return self.family

    def label(self):
        if self.family is None:
            return None
        return "g0" if self.family == "g0" else self.family.to_dict()


@dataclass(frozen=True)
class StudyConfig:
    scenarios: tuple
    tests: tuple
    replications: int = 1000
    alpha: float = 0.05
    master_seed: int = 0

    def __post_init__(self):
        if not self.scenarios:
            raise ConfigError("study has no scenarios")
        if not self.tests:
            raise ConfigError("study has no tests")
        if self.replications < 1:
            raise ConfigError("replications must be positive")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError("alpha must lie in (0, 1)")
        unique = tuple(dict.fromkeys(self.scenarios))
        object.__setattr__(self, "scenarios", unique)
        object.__setattr__(self, "tests", tuple(self.tests))


@dataclass
class PowerRow:
    scenario: Scenario
    test: str
    test_family: BaseFamily
    k: int
    rejection_rate: float
    replications: int
    n_flagged: int = 0
    flag: str = ""

    @property
    def mc_se(self):
        r = self.rejection_rate
        return math.sqrt(r * (1.0 - r) / self.replications)

    def record(self):
        s = self.scenario
        return {
            "g0_family": s.g0.kind,
            "g0_concentration": s.g0.concentration,
            "k_prime": s.k_prime,
            "lam": s.lam,
            "n": s.n,
            "test": self.test,
            "test_family": "" if self.test_family is None else self.test_family.kind,
            "test_concentration": (
                "" if self.test_family is None else self.test_family.concentration
            ),
            "k": self.k,
            "rejection_rate": self.rejection_rate,
            "mc_se": self.mc_se,
            "replications": self.replications,
            "n_flagged": self.n_flagged,
            "flag": self.flag,
        }


@dataclass
class PowerTable:
    rows: list = field(default_factory=list)
    alpha: float = 0.05

    def __len__(self):
        return len(self.rows)

    def records(self):
        return [r.record() for r in self.rows]

    def lookup(self, g0, k_prime, lam, n, test, k=None):
        """Rejection rate of the first matching row."""
        probe = Scenario(g0, k_prime, lam, n)
        for row in self.rows:
            if row.scenario == probe and row.test == canonical_test_id(test):
                if k is None or row.k == k:
                    return row.rejection_rate
        raise KeyError((g0, k_prime, lam, n, test, k))


def scenario_grid(g0s, k_primes, lams, ns):
    """Cartesian grid with the k'-duplicates of lambda=0 removed."""
    out = [
        Scenario(g, kp, lam, n)
        for g, kp, lam, n in itertools.product(g0s, k_primes, lams, ns)
    ]
    return tuple(dict.fromkeys(out))


def _chunk_counts(args):
    scenario, tests, start, stop, alpha, master_seed = args
    model = SineSkewedModel(scenario.g0, 0.0, scenario.lam, scenario.k_prime)
    skey = scenario.key()
    rejects = np.zeros(len(tests), dtype=np.int64)
    flagged = np.zeros(len(tests), dtype=np.int64)
    trivial = [
        t.test in ("ParamUnknownMu", "SemiparUnknownMu")
        and is_trivial(t.resolve(scenario), t.k)
        for t in tests
    ]
    for r in range(start, stop):
        x = sample_sine_skewed(model, scenario.n, derive_seed(master_seed, skey, r))
        for j, t in enumerate(tests):
            if trivial[j]:
                continue
            try:
                mu = 0.0 if t.test in NEEDS_MU else None
                rep = run_test(t.test, x, t.resolve(scenario), t.k, mu, (alpha,))
            except ZeroResultantError:
                flagged[j] += 1
                continue
            if rep.flags:
                flagged[j] += 1
            elif rep.p_value < alpha:
                rejects[j] += 1
    return rejects, flagged, trivial


def run_power_study(config, workers=1):
    """Rejection rates for every (scenario, test) pair.

    Flagged replicates (undefined statistic) count as non-rejections.  Tests
    that reduce to the trivial test are reported at rate ``alpha`` with a
    ``TrivialTest`` flag.
    """
    reps = config.replications
    nchunks = 1
    if workers > 1:
        nchunks = min(reps, 4 * workers // len(config.scenarios) + 1)
    edges = [round(i * reps / nchunks) for i in range(nchunks + 1)]
    jobs = [
        (s, config.tests, lo, hi, config.alpha, config.master_seed)
        for s in config.scenarios
        for lo, hi in zip(edges[:-1], edges[1:])
        if hi > lo
    ]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_chunk_counts, jobs))
    else:
        parts = [_chunk_counts(j) for j in jobs]

    # count-merge the replicate chunks of each scenario
    merged = {}
    for job, (rej, flg, triv) in zip(jobs, parts):
        acc = merged.setdefault(job[0], [0, 0, triv])
        acc[0] = acc[0] + rej
        acc[1] = acc[1] + flg

    table = PowerTable(alpha=config.alpha)
    for s in config.scenarios:
        rejects, flagged, trivial = merged[s]
        for j, t in enumerate(config.tests):
            fam = t.resolve(s)
            if trivial[j]:
                row = PowerRow(s, t.test, fam, t.k, config.alpha,
                               config.replications, config.replications, TRIVIAL)
            else:
                row = PowerRow(s, t.test, fam, t.k,
                               float(rejects[j] / config.replications),
                               config.replications, int(flagged[j]))
            table.rows.append(row)
    return table


def export_table(table, fmt="csv"):
    """Serialise a table to bytes (UTF-8, LF line endings, 17 significant digits)."""
    if not table.rows:
        raise ConfigError("cannot export an empty table")
    records = table.records()
    if fmt == "json":
        return (json.dumps({"alpha": table.alpha, "rows": records}, indent=2) + "\n").encode()
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for rec in records:
        w.writerow([_fmt(rec[c]) for c in CSV_COLUMNS])
    return buf.getvalue().encode()


def _fmt(v):
    if isinstance(v, float):
        return "%.17g" % v
    return str(v)


def read_table(data, fmt="csv", alpha=0.05):
    """Inverse of :func:`export_table`."""
    text = data.decode() if isinstance(data, bytes) else data
    if fmt == "json":
        doc = json.loads(text)
        records, alpha = doc["rows"], doc["alpha"]
    else:
        records = list(csv.DictReader(io.StringIO(text)))
    table = PowerTable(alpha=alpha)
    for rec in records:
        s = Scenario(
            BaseFamily(rec["g0_family"], float(rec["g0_concentration"])),
            int(rec["k_prime"]),
            float(rec["lam"]),
            int(rec["n"]),
        )
        fam = None
        if rec["test_family"] not in ("", None):
            fam = BaseFamily(rec["test_family"], float(rec["test_concentration"]))
        table.rows.append(
            PowerRow(
                s,
                rec["test"],
                fam,
                int(rec["k"]),
                float(rec["rejection_rate"]),
                int(rec["replications"]),
                int(rec["n_flagged"]),
                rec["flag"] or "",
            )
        )
    return table


def _family(obj):
    if obj is None or obj == "g0":
        return obj
    return BaseFamily.from_dict(obj)


def config_from_dict(doc):
    """Build a :class:`StudyConfig` from its JSON form.

    Scenarios are given either as an explicit ``"scenarios"`` list or as a
    ``"grid"`` with keys ``g0``, ``k_prime``, ``lam`` and ``n``.
    """
    try:
        if "grid" in doc:
            g = doc["grid"]
            scenarios = scenario_grid(
                [BaseFamily.from_dict(f) for f in g["g0"]],
                g.get("k_prime", [1]),
                g.get("lam", [0.0]),
                g["n"],
            )
        else:
            scenarios = tuple(
                Scenario(BaseFamily.from_dict(s["g0"]), int(s.get("k_prime", 1)),
                         float(s.get("lam", 0.0)), int(s["n"]))
                for s in doc.get("scenarios", [])
            )
        tests = tuple(
            TestSpec(t["test"], _family(t.get("family")), int(t.get("k", 2)))
            for t in doc.get("tests", [])
        )
        return StudyConfig(
            scenarios,
            tests,
            int(doc.get("replications", 1000)),
            float(doc.get("alpha", 0.05)),
            int(doc.get("master_seed", 0)),
        )
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed study config: {exc}") from exc


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        return config_from_dict(json.load(fh))
