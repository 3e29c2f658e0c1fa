from __future__ import annotations

import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from src.core.matrix import Matrix
from src.core.measure import IdempotentMeasure
from src.core.sampling import (
    RNG_ALGORITHM,
    make_rng,
    random_class1,
    random_class2,
    random_measure,
)
from src.dynamics.omega import OmegaSettings
from src.dynamics.verify import VerificationReport, verify
from src.errors import ValidationError
from src.utils.config import Tolerances

logger = logging.getLogger("idempotent_dynamics")

RANDOM_KINDS = ("class1", "class2")


@dataclass(frozen=True)
class Case:
    index: int
    operator: Matrix
    x0: IdempotentMeasure
    source: str

    def reproduction(self, steps: int, tol: float) -> dict:
        return {
            "source": self.source,
            "n": self.operator.n,
            "entries": self.operator.flat(),
            "x0": self.x0.tokens(),
            "steps": steps,
            "tol": tol,
        }


@dataclass
class CaseResult:
    case: Case
    report: VerificationReport | None = None
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and self.report is not None and self.report.passed

    def to_record(self, steps: int, tol: float) -> dict:
        record = {"index": self.case.index, "source": self.case.source, "passed": self.passed}
        if self.error is not None:
            record["error"] = self.error
        else:
            record.update(self.report.to_record(include_checks=False))
        if not self.passed:
            record["reproduction"] = self.case.reproduction(steps, tol)
        return record


@dataclass
class CampaignSummary:
    generator: dict
    steps: int
    tol: float
    results: list[CaseResult] = field(default_factory=list)

    @property
    def failed(self) -> list[CaseResult]:
        return [r for r in self.results if not r.passed]

    @property
    def passed(self) -> bool:
        return not self.failed

    def check_counts(self) -> dict:
        counts: dict[str, Counter] = {}
        for result in self.results:
            if result.report is None:
                continue
            for check in result.report.checks:
                outcome = "inconclusive" if check.inconclusive else ("passed" if check.passed else "failed")
                counts.setdefault(check.name, Counter())[outcome] += 1
        return {name: dict(sorted(c.items())) for name, c in sorted(counts.items())}

    def source_counts(self) -> dict:
        counts: dict[str, Counter] = {}
        for result in self.results:
            counter = counts.setdefault(result.case.source, Counter())
            counter["cases"] += 1
            counter["passed"] += int(result.passed)
        return {source: dict(c) for source, c in sorted(counts.items())}

    def omega_counts(self) -> dict:
        counter = Counter(r.report.omega.kind.value for r in self.results if r.report and r.report.omega)
        return dict(sorted(counter.items()))

    def to_record(self) -> dict:
        return {
            "generator": self.generator,
            "steps": self.steps,
            "tol": self.tol,
            "cases": len(self.results),
            "passed": len(self.results) - len(self.failed),
            "failed": len(self.failed),
            "checks": self.check_counts(),
            "omega": self.omega_counts(),
            "by_source": self.source_counts(),
            "failures": [r.to_record(self.steps, self.tol) for r in self.failed],
        }


class CampaignEngine:
    """Runs verification over a batch of (A, x0) cases.

    Cases are drawn up front from one seeded generator, so results do not
    depend on the number of workers.
    """

    def __init__(self, config: dict, tolerances: Tolerances | None = None,
                 settings: OmegaSettings | None = None):
        campaign = config.get("campaign", {}) or {}
        self.config = config
        self.tolerances = tolerances or Tolerances.from_config(config)
        self.settings = settings or OmegaSettings.from_config(config)
        self.steps = int(campaign.get("steps", 300))
        self.workers = int(campaign.get("workers", 1))
        self.unit_cycle_probability = float(campaign.get("unit_cycle_probability", 0.5))
        self.neg_inf_probability = float(campaign.get("neg_inf_probability", 0.0))

    def random_cases(self, kind: str, n: int, cases: int, seed: int,
                     unit_cycles: bool = False) -> tuple[list[Case], dict]:
        if kind not in RANDOM_KINDS:
            raise ValidationError(f"random generator must be one of {RANDOM_KINDS}, got {kind!r}")
        if n < 2:
            raise ValidationError("n must be at least 2")
        if cases < 1:
            raise ValidationError("cases must be positive")
        rng = make_rng(seed)
        probability = self.unit_cycle_probability if unit_cycles else 0.0
        batch = []
        for index in range(cases):
            if kind == "class1":
                A = random_class1(rng, n)
            else:
                A = random_class2(rng, n, unit_cycle_probability=probability)
            x0 = random_measure(rng, n, neg_inf_probability=self.neg_inf_probability)
            batch.append(Case(index, A, x0, f"random:{kind}"))
        generator = {
            "kind": kind,
            "n": n,
            "seed": seed,
            "rng": RNG_ALGORITHM,
            "unit_cycle_probability": probability,
            "neg_inf_probability": self.neg_inf_probability,
        }
        return batch, generator

    def file_cases(self, operators: list[tuple[str, Matrix]], cases: int, seed: int) -> tuple[list[Case], dict]:
        """``cases`` random starting points for each operator."""
        if cases < 1:
            raise ValidationError("cases must be positive")
        rng = make_rng(seed)
        batch = []
        for source, A in operators:
            for _ in range(cases):
                x0 = random_measure(rng, A.n, neg_inf_probability=self.neg_inf_probability)
                batch.append(Case(len(batch), A, x0, source))
        generator = {
            "kind": "files",
            "files": [source for source, _ in operators],
            "seed": seed,
            "rng": RNG_ALGORITHM,
            "neg_inf_probability": self.neg_inf_probability,
        }
        return batch, generator

    def run(self, batch: list[Case], generator: dict, tol: float | None = None) -> CampaignSummary:
        tol = self.tolerances.default if tol is None else tol
        summary = CampaignSummary(generator, self.steps, tol)
        logger.info("Running %d cases with %d worker(s)", len(batch), self.workers)
        if self.workers > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                summary.results = list(pool.map(lambda c: self.run_case(c, tol), batch))
        else:
            summary.results = [self.run_case(c, tol) for c in batch]
        if summary.failed:
            logger.warning("%d of %d cases failed", len(summary.failed), len(batch))
        else:
            logger.info("All %d cases passed", len(batch))
        return summary

    def run_case(self, case: Case, tol: float) -> CaseResult:
        try:
            report = verify(case.operator, case.x0, self.steps, tol, self.tolerances, self.settings)
        except Exception as e:
            logger.exception("Error verifying case %d", case.index)
            return CaseResult(case, error=f"{type(e).__name__}: {e}")
        return CaseResult(case, report)
