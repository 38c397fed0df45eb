"""
Explanation pipeline: explore -> exploit -> enhance.

A RecourseExplainer holds everything shared and read-only (data, model,
density model, base KD-tree, resolved T_p). Each factual gets its own
Session with a fresh ledger and fresh index views.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Union

import numpy as np
from tqdm import tqdm

from .. import settings
from ..core.config import ExplainerConfig
from ..core.types import Dataset, Instance, LocalGraph, PrivacyLedger, RecourseMatrix, RecourseResult
from ..density.kde import kde_fit
from ..exceptions import ExploreError, NoPathError, RecourseError, SeqRecourseError
from ..models.base import ScoringModel, for_target_class
from ..spatial.index import SpatialIndex
from ..stages.enhance import enhance, path_to_recourse
from ..stages.exploit import build_local_graph
from ..stages.explore import ScoreCache, find_counterfactual

logger = logging.getLogger(__name__)


class RecourseExplainer:
    """
    Shared state for explaining many factuals against one dataset and model.

    Args:
        dataset: Standardized training data (its schema carries constraints)
        model: Scoring model for the positive class
        config: Explainer configuration, defaults from settings
    """

    def __init__(self, dataset: Dataset, model: ScoringModel, config: Optional[ExplainerConfig] = None):
        self.config = (config or ExplainerConfig()).validate()
        self.dataset = dataset
        self.base_model = model
        self.model = for_target_class(model, self.config.target_class)
        self.density = kde_fit(dataset.points, self.config.kde_bandwidth)
        self.index = SpatialIndex(dataset.points)
        self._training_densities = self.density.density_many(dataset.points)
        if self.config.tp_abs is not None:
            self.threshold = float(self.config.tp_abs)
        else:
            self.threshold = self.quantile_threshold(self.config.tp_quantile)
        logger.info(
            f"Explainer ready: n={dataset.n}, d={dataset.d}, h={self.density.bandwidth:.4g}, "
            f"T_p={self.threshold:.6g}, T_f={self.config.decision_threshold}"
        )

    def quantile_threshold(self, quantile: float) -> float:
        return float(np.quantile(self._training_densities, quantile))

    def relaxed_threshold(self, current: float) -> Optional[float]:
        """Largest ladder threshold strictly below `current`, or None."""
        lower = [t for t in (self.quantile_threshold(q) for q in self.config.tp_quantile_ladder) if t < current]
        return max(lower) if lower else None

    def session(self) -> 'Session':
        return Session(self)

    def explain(self, factual: Instance, counterfactual: Optional[Instance] = None) -> RecourseResult:
        return self.session().explain(factual, counterfactual)

    def explain_many(
        self,
        factuals: Sequence[Instance],
        workers: int = settings.BATCH_WORKERS,
        progress: bool = True,
    ) -> List[Union[RecourseResult, RecourseError]]:
        """
        Explain independent factuals, concurrently when workers > 1.

        Returns:
            One entry per factual in input order: the result, or the
            RecourseError that stopped it
        """
        def run(factual: Instance):
            try:
                return self.explain(factual)
            except RecourseError as e:
                return e

        bar = tqdm(total=len(factuals), desc='explain', disable=not progress)
        results: List[Union[RecourseResult, RecourseError]] = []
        if workers <= 1:
            for f in factuals:
                results.append(run(f))
                bar.update(1)
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                for outcome in pool.map(run, factuals):
                    results.append(outcome)
                    bar.update(1)
        bar.close()
        failures = sum(isinstance(r, RecourseError) for r in results)
        logger.info(f"Batch finished: {len(results) - failures} succeeded, {failures} failed")
        return results


class Session:
    """One explanation: single-threaded, used for exactly one factual."""

    def __init__(self, explainer: RecourseExplainer):
        self.explainer = explainer
        self.config = explainer.config
        self.model = explainer.model
        self.density = explainer.density
        self.schema = explainer.dataset.schema
        self.ledger = PrivacyLedger(explainer.dataset.n)
        self.cache = ScoreCache(self.model)
        self._used = False

    def _view(self, factual: Instance) -> SpatialIndex:
        return self.explainer.index.view(exclude=[factual.id] if factual.id is not None else [])

    def _trivial(self, factual: Instance, score: float) -> RecourseResult:
        graph = LocalGraph()
        graph.add_vertex(factual, kind='factual')
        self.ledger.seal()
        return RecourseResult(
            factual=factual,
            counterfactual=factual,
            recourse=RecourseMatrix.empty(factual),
            graph=graph,
            path=[0],
            path_weight=0.0,
            path_scores=[score],
            path_densities=[],
            ledger=self.ledger,
            density_threshold=self.explainer.threshold,
        )

    def _exploit_enhance(self, factual, x_prime, threshold, synthetic):
        graph = build_local_graph(
            factual, x_prime, self._view(factual), self.density, self.model, self.config,
            self.ledger, threshold, schema=self.schema, synthetic=synthetic,
        )
        return graph, enhance(graph, self.ledger)

    def explain(self, factual: Instance, counterfactual: Optional[Instance] = None) -> RecourseResult:
        """
        Run the three stages for `factual`.

        Args:
            factual: Instance to explain (standardized)
            counterfactual: Known counterfactual; skips explore when given

        Returns:
            RecourseResult

        Raises:
            RecourseError: A stage failed; `partial` carries what was built
        """
        if self._used:
            raise SeqRecourseError("A session explains exactly one factual")
        self._used = True
        factual.check_dim(self.explainer.dataset.d)
        T_f = self.config.decision_threshold

        score = self.model.score(factual)
        if score >= T_f:
            logger.info(f"Factual already scores {score:.4f} >= {T_f}; empty recourse")
            return self._trivial(factual, score)

        trace = None
        if counterfactual is None:
            x_prime, trace = find_counterfactual(
                factual, self.model, self._view(factual), self.config, self.ledger,
                schema=self.schema, cache=self.cache,
            )
        else:
            counterfactual.check_dim(self.explainer.dataset.d)
            x_prime = counterfactual
            cf_score = self.model.score(x_prime)
            if cf_score < T_f:
                raise ExploreError(
                    f"supplied counterfactual scores {cf_score:.4f} < T_f={T_f}",
                    {'ledger': self.ledger},
                )
            logger.info("Counterfactual supplied, explore skipped")

        synthetic = trace.positions[1:-1] if trace is not None else []
        threshold = self.explainer.threshold
        retried = False
        try:
            graph, path = self._exploit_enhance(factual, x_prime, threshold, synthetic)
        except NoPathError as e:
            relaxed = self.explainer.relaxed_threshold(threshold)
            if relaxed is None:
                e.partial.setdefault('trace', trace)
                raise
            logger.warning(f"{e}; retrying once with T_p relaxed from {threshold:.6g} to {relaxed:.6g}")
            threshold, retried = relaxed, True
            try:
                graph, path = self._exploit_enhance(factual, x_prime, threshold, synthetic)
            except RecourseError as again:
                again.partial.setdefault('trace', trace)
                raise
        except RecourseError as e:
            e.partial.setdefault('trace', trace)
            raise

        recourse = path_to_recourse(graph, path)
        vertices = np.vstack([graph.vertices[i].values for i in path.vertex_indices])
        path_scores = [float(s) for s in self.model.score_many(vertices)]
        path_densities = [graph.graph.edges[u, v]['density_avg'] for u, v in path.edges]
        self.ledger.seal()
        logger.info(
            f"Recourse: {recourse.k} steps, final score {path_scores[-1]:.4f}, "
            f"accessed {self.ledger.fraction():.4%} of training data"
        )
        return RecourseResult(
            factual=factual,
            counterfactual=graph.vertices[-1],
            recourse=recourse,
            graph=graph,
            path=list(path.vertex_indices),
            path_weight=path.total_weight,
            path_scores=path_scores,
            path_densities=path_densities,
            ledger=self.ledger,
            explore_trace=trace,
            density_threshold=threshold,
            retried=retried,
        )


def explain(factual: Instance, session: Session, counterfactual: Optional[Instance] = None) -> RecourseResult:
    return session.explain(factual, counterfactual)
