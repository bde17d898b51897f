"""
Experiment runner: replications of one optimizer over a step-size rule.

Builds the problem once (synthetic population or real-data protocol split
with batch references), then runs each replication on its own random
streams and evaluates excess risks at the checkpoints. Replications can be
fanned out to a process pool; results are merged in replication order, so
the output does not depend on scheduling.
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from sa_forge.config.settings import Settings
from sa_forge.constants.estimators import estimate_radius
from sa_forge.constants.reference import batch_reference
from sa_forge.core.exceptions import ContractViolationError, ExperimentError, SaForgeError
from sa_forge.core.state import log_checkpoints
from sa_forge.data.dataset import Dataset, ModelKind
from sa_forge.data.libsvm import parse_libsvm
from sa_forge.data.protocol import PassSampler, ProtocolSplit, prepare_protocol
from sa_forge.data.rng import StreamRole, make_rng
from sa_forge.data.synthetic import SyntheticPopulation, make_population
from sa_forge.harness.registry import Optimizer, RunContext, create_optimizer
from sa_forge.harness.risk import EmpiricalRisk, LogisticKLRisk, QuadraticRisk, RiskEvaluator
from sa_forge.losses.models import LossModel
from sa_forge.models.experiment import ExperimentConfig, RiskCurve
from sa_forge.utils.verbose import VerboseLogger

logger = logging.getLogger(__name__)


@dataclass
class ProblemSetup:
    """Problem shared by all replications of an experiment."""

    config: ExperimentConfig
    model: LossModel
    n: int
    R2: float
    theta0: np.ndarray
    checkpoints: np.ndarray
    train_risk: RiskEvaluator
    test_risk: RiskEvaluator
    population: Optional[SyntheticPopulation] = None
    split: Optional[ProtocolSplit] = None
    pilot: Optional[Dataset] = None
    first_pass: Optional[int] = None

    def context(self, replication: int) -> RunContext:
        """Fresh streams for one replication."""
        seed = self.config.seed
        if self.population is not None:
            population = self.population
            return RunContext(
                model=self.model,
                n=self.n,
                theta0=self.theta0,
                checkpoints=self.checkpoints,
                R2=self.R2,
                stream=lambda: population.stream(make_rng(seed, replication, StreamRole.DATA)),
                pilot=self.pilot.observations if self.pilot is not None else None,
                rng=make_rng(seed, replication, StreamRole.SAMPLER),
            )
        sampler = PassSampler(self.split.train, seed, replication, self.split.sampler.passes)
        n = self.n
        return RunContext(
            model=self.model,
            n=n,
            theta0=self.theta0,
            checkpoints=self.checkpoints,
            R2=self.R2,
            stream=lambda: sampler.stream(n),
            train=self.split.train.observations,
            indices=lambda: sampler.indices(n),
            rng=make_rng(seed, replication, StreamRole.SAMPLER),
        )


def _checkpoints(n: int, per_decade: int, first_pass: Optional[int]) -> np.ndarray:
    points = log_checkpoints(n, per_decade)
    if first_pass is not None and 0 < first_pass <= n:
        points = np.union1d(points, [first_pass]).astype(np.int64)
    return points


def _synthetic_setup(config: ExperimentConfig, settings: Settings) -> ProblemSetup:
    model = LossModel.from_name(config.loss)
    kind = ModelKind.LOGISTIC if model.is_logistic else ModelKind.LSQ
    population = make_population(config.d, kind, config.seed)

    pilot = None
    if model.is_logistic or config.optimizer == "adagrad":
        pilot = population.sample(settings.protocol.eval_samples, make_rng(config.seed, 0, StreamRole.EVAL), "eval")
    if model.is_logistic:
        risk = LogisticKLRisk(population.theta_star, pilot.X)
    else:
        risk = QuadraticRisk(population.theta_star, population.covariance)

    theta0 = np.zeros(config.d)
    if config.theta0_perturbation is not None:
        direction = make_rng(config.seed, 0, StreamRole.ESTIMATOR).standard_normal(config.d)
        theta0 = population.theta_star + config.theta0_perturbation * direction / np.linalg.norm(direction)

    return ProblemSetup(
        config=config,
        model=model,
        n=config.n,
        R2=population.radius2,
        theta0=theta0,
        checkpoints=_checkpoints(config.n, config.checkpoints_per_decade, None),
        train_risk=risk,
        test_risk=risk,
        population=population,
        pilot=pilot,
    )


def _reference(dataset: Dataset, model: LossModel, R2: float, settings: Settings):
    c = settings.constants
    return batch_reference(
        dataset,
        model,
        tol=c.reference_tol_scale * dataset.n,
        max_iter=c.reference_max_iter,
        norm_cap=c.separable_norm_scale / np.sqrt(R2),
        dense_limit=c.rho_dense_limit,
    )


def _real_setup(config: ExperimentConfig, settings: Settings) -> ProblemSetup:
    model = LossModel.from_name(config.loss)
    dataset = parse_libsvm(config.dataset)
    passes = config.passes if config.passes is not None else settings.protocol.passes
    split = prepare_protocol(
        dataset,
        config.seed,
        factor=settings.protocol.outlier_factor,
        passes=int(np.ceil(passes)),
    )
    n = config.n if config.n is not None else int(round(passes * split.train.n))
    R2 = estimate_radius(split.train)
    train_ref = _reference(split.train, model, R2, settings)
    test_ref = _reference(split.test, model, R2, settings)
    if train_ref.near_separable or test_ref.near_separable:
        logger.warning(f"{dataset.name}: reference optimum capped, data is nearly separable")
    return ProblemSetup(
        config=config,
        model=model,
        n=n,
        R2=R2,
        theta0=np.zeros(dataset.dimension),
        checkpoints=_checkpoints(n, config.checkpoints_per_decade, split.train.n),
        train_risk=EmpiricalRisk(split.train, model, train_ref.f_star),
        test_risk=EmpiricalRisk(split.test, model, test_ref.f_star),
        split=split,
        first_pass=split.train.n,
    )


def build_setup(config: ExperimentConfig, settings: Optional[Settings] = None) -> ProblemSetup:
    """Build the shared problem for an experiment.

    Raises:
        FileNotFoundError: If a dataset file is missing
        SaForgeError: On data or reference-solver errors
    """
    settings = settings or Settings()
    if config.is_synthetic:
        return _synthetic_setup(config, settings)
    return _real_setup(config, settings)


def run_replication(
    setup: ProblemSetup, optimizer: Optimizer, gamma: float, replication: int
) -> Tuple[np.ndarray, np.ndarray, float]:
    """Run one replication and return raw train/test excess risks and elapsed seconds.

    Raises:
        ExperimentError: Wrapping any optimizer or data error
    """
    start = time.perf_counter()
    try:
        trace = optimizer.run(setup.context(replication), gamma)
    except SaForgeError as e:
        raise ExperimentError(f"{optimizer.optimizer_id} gamma={gamma:.6g} replication {replication}", e)
    train = setup.train_risk.excess(trace.iterates)
    test = train if setup.test_risk is setup.train_risk else setup.test_risk.excess(trace.iterates)
    return train, test, time.perf_counter() - start


def _run_replication_job(args) -> Tuple[np.ndarray, np.ndarray, float]:
    setup, optimizer_id, gamma, replication = args
    return run_replication(setup, create_optimizer(optimizer_id), gamma, replication)


class ExperimentRunner:
    """
    Runs the replications of one experiment configuration.

    Builds the problem lazily, resolves the step-size rule and collects one
    RiskCurve per step size.
    """

    def __init__(
        self,
        config: ExperimentConfig,
        settings: Optional[Settings] = None,
        jobs: int = 1,
        verbose_logger: Optional[VerboseLogger] = None,
    ):
        """
        Initialize the runner.

        Args:
            config: Experiment configuration
            settings: Application settings (defaults when omitted)
            jobs: Worker processes for replications
            verbose_logger: Optional verbose output sink
        """
        if jobs < 1:
            raise ContractViolationError(f"jobs must be >= 1, got {jobs}")
        self.config = config
        self.settings = settings or Settings()
        self.jobs = jobs
        self.verbose = verbose_logger or VerboseLogger(enabled=False)
        self.optimizer = create_optimizer(config.optimizer)
        self._setup: Optional[ProblemSetup] = None

    @property
    def setup(self) -> ProblemSetup:
        if self._setup is None:
            self._setup = build_setup(self.config, self.settings)
        return self._setup

    def theoretical_step(self) -> float:
        setup = self.setup
        return self.optimizer.theoretical_step(setup.context(0))

    def step_sizes(self) -> List[float]:
        """Step sizes selected by the configured rule, in increasing order."""
        rule = self.config.step_rule
        if rule == "explicit":
            return [float(self.config.gamma)]
        base = self.theoretical_step() * self.config.step_multiplier
        if rule == "theoretical":
            return [base]
        return sorted(base * 4.0 ** k for k in set(self.config.grid_exponents))

    def _check_hypothesis(self, gamma: float) -> None:
        constant_square = self.config.loss == "square" and self.config.optimizer in (
            "lms-avg-const",
            "avg-const-sgd",
            "sgd-nonavg-const",
        )
        if constant_square and gamma * self.setup.R2 >= 1.0:
            logger.warning(
                f"{self.config.optimizer}: gamma R^2 = {gamma * self.setup.R2:.3g} >= 1, "
                f"convergence guarantees do not apply"
            )

    def run_step(self, gamma: float) -> RiskCurve:
        """Run every replication at step size ``gamma``."""
        setup = self.setup
        self._check_hypothesis(gamma)
        reps = range(self.config.replications)
        logger.info(
            f"Running {self.config.name} gamma={gamma:.4g}: n={setup.n}, "
            f"{self.config.replications} replications, jobs={self.jobs}"
        )
        if self.jobs > 1 and self.config.replications > 1:
            jobs = [(setup, self.config.optimizer, gamma, r) for r in reps]
            with ProcessPoolExecutor(max_workers=self.jobs) as pool:
                results = list(pool.map(_run_replication_job, jobs))
        else:
            results = [run_replication(setup, self.optimizer, gamma, r) for r in reps]

        for r, (train, test, elapsed) in zip(reps, results):
            anchor_train = train[0] if train[0] > 0 else 1.0
            anchor_test = test[0] if test[0] > 0 else 1.0
            self.verbose.replication(
                self.config.name, gamma, r, train[-1] / anchor_train, test[-1] / anchor_test, elapsed
            )
        return RiskCurve(
            optimizer=self.config.name,
            gamma=gamma,
            checkpoints=setup.checkpoints,
            train=np.vstack([res[0] for res in results]),
            test=np.vstack([res[1] for res in results]),
            first_pass=setup.first_pass,
        )

    def run_all(self) -> List[RiskCurve]:
        """One curve per step size of the rule."""
        self.verbose.experiment_config(self.config.model_dump())
        return [self.run_step(gamma) for gamma in self.step_sizes()]

    def run(self) -> RiskCurve:
        """The curve of the configured rule; the grid rule keeps the best step after one pass."""
        curves = self.run_all()
        if self.config.step_rule == "grid":
            return select_step_size(curves)
        return curves[0]


def select_step_size(curves: Sequence[RiskCurve], at: Optional[int] = None) -> RiskCurve:
    """Pick the curve with the lowest mean test excess risk at checkpoint ``at``.

    ``at`` defaults to one effective pass when the curves know it, or to the
    last recorded checkpoint before it when the budget ends earlier. Without
    a pass size the last checkpoint is used. Ties go to the smallest step size.

    Raises:
        ContractViolationError: If there are no curves or an explicit ``at`` is not a checkpoint
    """
    if not curves:
        raise ContractViolationError("no curves to select from")
    if at is None and curves[0].first_pass is not None:
        recorded = curves[0].checkpoints[curves[0].checkpoints <= curves[0].first_pass]
        if recorded.size:
            at = int(recorded[-1])
    best = None
    best_value = np.inf
    for curve in sorted(curves, key=lambda c: c.gamma):
        if at is None:
            column = curve.checkpoints.size - 1
        else:
            matches = np.flatnonzero(curve.checkpoints == at)
            if matches.size == 0:
                raise ContractViolationError(f"checkpoint {at} not recorded for gamma={curve.gamma:.4g}")
            column = int(matches[0])
        value = float(curve.mean("test", normalized=False)[column])
        if value < best_value:
            best, best_value = curve, value
    if best is None:
        best = min(curves, key=lambda c: c.gamma)
    logger.info(f"Selected gamma={best.gamma:.4g} (test excess {best_value:.4e} at n={at})")
    return best


def run_experiment(
    config: ExperimentConfig,
    settings: Optional[Settings] = None,
    jobs: int = 1,
    verbose_logger: Optional[VerboseLogger] = None,
) -> RiskCurve:
    """Run an experiment and return its risk curve.

    Raises:
        ExperimentError: If an optimizer fails, with the experiment context
    """
    return ExperimentRunner(config, settings, jobs, verbose_logger).run()
