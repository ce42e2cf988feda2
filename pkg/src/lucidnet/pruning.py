"""Controlled pruning loops over the five pruning problems.

Both loops share the same skeleton: snapshot the network, accumulate
sensitivity indicators over a few live training epochs, modify the
lowest-rated candidates, retrain, and either keep the result or restore the
snapshot.  The basic loop modifies one element per pass; the accelerated
loop modifies batches of M, halving M on failure without recomputing the
indicators, and stops once a single-element attempt fails.

A network that survives the loop is minimal for the problem at hand: no
remaining element of the class can be modified without breaking the success
criterion within the retraining budget.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .errors import NotTrainedError, PipelineAbort, PoolExhausted
from .network import ElementRef, Network, input_ref, neuron_ref
from .sensitivity import ValidSet, collect_ledger, nearest_valid
from .training import LossKind, TrainConfig, criterion_met, train_until

PROBLEM_KINDS = (
    "feature-selection",
    "neuron-removal",
    "synapse-removal",
    "precision-reduction",
    "uniform-simplification",
)


@dataclass(frozen=True)
class PruningProblem:
    kind: str
    valid_set: ValidSet | None = None
    target_fan_in: int = 3

    def __post_init__(self):
        if self.kind not in PROBLEM_KINDS:
            raise ValueError(f"unknown pruning problem {self.kind!r}")
        if self.kind == "precision-reduction" and self.valid_set is None:
            raise ValueError("precision reduction needs a valid set")
        if self.kind in ("synapse-removal", "uniform-simplification"):
            # removal is precision reduction with the singleton {0}
            if self.valid_set is None:
                object.__setattr__(self, "valid_set", ValidSet.removal())
            elif self.valid_set.values != (0.0,):
                raise ValueError("removal problems fix the valid set at {0}")

    @property
    def element_class(self):
        if self.kind == "feature-selection":
            return "input"
        if self.kind == "neuron-removal":
            return "neuron"
        return "weight"


@dataclass
class PruneConfig:
    problem: PruningProblem
    retrain: TrainConfig
    loss_kind: LossKind = field(default_factory=LossKind)
    indicator_mode: str = "avg"
    accumulation_epochs: int = 10
    initial_m: int | str = "half-of-pool"
    loop: str = "accelerated"
    log_sink: object = None

    def __post_init__(self):
        if self.indicator_mode not in ("max", "avg"):
            raise ValueError(f"unknown indicator mode {self.indicator_mode!r}")
        if self.accumulation_epochs < 1:
            raise ValueError("need at least one accumulation epoch")
        if self.loop not in ("basic", "accelerated"):
            raise ValueError(f"unknown loop kind {self.loop!r}")
        if isinstance(self.initial_m, str) and self.initial_m != "half-of-pool":
            raise ValueError("initial M is a count or 'half-of-pool'")


def _digest(snapshot):
    return hashlib.sha256(snapshot.encode()).hexdigest()[:16]


@dataclass
class PruneStepRecord:
    """One attempted modification batch.

    save_hash digests the snapshot taken before the attempt and
    net_hash_after the network after accept or restore, so the audit log
    alone proves that every rejected step rolled back byte-exactly.
    """

    step: int
    m: int
    refs: list
    accepted: bool
    total_loss: float
    epochs_used: int
    staleness: int
    cascade: list = field(default_factory=list)
    pool_size: int = 0
    save_hash: str = ""
    net_hash_after: str = ""

    def to_json(self):
        return json.dumps(
            {
                "step": self.step,
                "M": self.m,
                "refs": self.refs,
                "accepted": self.accepted,
                "loss": self.total_loss,
                "epochs_used": self.epochs_used,
                "staleness": self.staleness,
                "cascade": self.cascade,
                "pool_size": self.pool_size,
                "save_hash": self.save_hash,
                "net_hash_after": self.net_hash_after,
            },
            sort_keys=True,
        )


@dataclass
class PruneResult:
    network: Network
    steps: list
    minimality_certificate: bool

    @property
    def accepted_steps(self):
        return [s for s in self.steps if s.accepted]


def candidate_pool(net: Network, problem: PruningProblem):
    """Live, trainable elements of the problem's class."""
    if problem.kind == "feature-selection":
        return [input_ref(k) for k in net.active_feature_indices()]
    if problem.kind == "neuron-removal":
        return [ref for ref, _ in net.iter_neurons(hidden_only=True)]
    if problem.kind == "uniform-simplification":
        fan = {ref: net.fan_in(ref) for ref, _ in net.iter_neurons()}
        top = max(fan.values(), default=0)
        if top <= problem.target_fan_in:
            return []
        busy = {ref for ref, f in fan.items() if f == top}
        pool = []
        for wref, syn in net.iter_weights(with_bias=False):
            if syn.trainable and neuron_ref(wref.layer, wref.neuron) in busy:
                pool.append(wref)
        return pool
    return [ref for ref, syn in net.iter_weights() if syn.trainable]


def select_candidates(final_map, net: Network, problem: PruningProblem, m):
    """The m pool elements with the smallest finalized indicators.

    Ties break toward the lower ElementRef.  Raises PoolExhausted when no
    candidate of the class remains (for uniform simplification this is the
    successful exit: every fan-in is at or below target).
    """
    if m < 1:
        raise ValueError("M must be at least 1")
    pool = candidate_pool(net, problem)
    if not pool:
        raise PoolExhausted(f"no candidates left for {problem.kind}")
    ranked = []
    for ref in pool:
        if ref not in final_map:
            continue
        value, target = final_map[ref]
        ranked.append((value, ref.key, ref, target))
    if not ranked:
        raise PoolExhausted(f"indicators cover no live candidate for {problem.kind}")
    ranked.sort(key=lambda item: (item[0], item[1]))
    picked = ranked[: min(m, len(ranked))]
    out = []
    for _, _, ref, target in picked:
        if problem.element_class == "weight":
            syn = net.synapse_at(ref)
            out.append((ref, nearest_valid(syn.weight, problem.valid_set)))
        else:
            out.append((ref, target))
    return out


def apply_modification(net: Network, candidates, problem: PruningProblem):
    """Apply one batch of modifications; returns (modified refs, cascade).

    Deletion problems route through remove_element so dead subnetworks are
    cleaned up; precision reduction freezes the weight at its target.  A
    candidate that vanished through an earlier cascade in the same batch is
    skipped.
    """
    applied = []
    cascade = []
    for ref, target in candidates:
        if _is_gone(net, ref):
            continue
        if problem.kind == "feature-selection" or problem.kind == "neuron-removal":
            cascade.extend(net.remove_element(ref))
        elif problem.kind == "precision-reduction":
            net.set_weight(ref, target, freeze=True)
        else:  # synapse removal, uniform simplification
            if ref.kind == "bias":
                net.set_weight(ref, 0.0, freeze=True)
            else:
                cascade.extend(net.remove_element(ref))
        applied.append(ref)
    return applied, cascade


def _is_gone(net: Network, ref: ElementRef):
    if ref.kind == "input":
        return not net.active_inputs[ref.neuron]
    if ref.kind == "neuron":
        return not net.layers[ref.layer - 1][ref.neuron].alive
    neuron = net.layers[ref.layer - 1][ref.neuron]
    syn = neuron.bias if ref.slot == 0 else neuron.synapses[ref.slot - 1]
    return not (neuron.alive and syn.alive)


def _emit(config, record):
    if config.log_sink is not None:
        config.log_sink.write(record.to_json() + "\n")


def _require_trained(net, dataset, config):
    if not criterion_met(net, dataset, config.loss_kind, config.retrain):
        raise NotTrainedError(
            "pruning requires a network that already meets the success criterion"
        )


def prune_basic(net: Network, dataset, config: PruneConfig) -> PruneResult:
    """One-element-at-a-time loop: snapshot, rate, modify, retrain, and
    restore the snapshot on the first failed retraining."""
    _require_trained(net, dataset, config)
    steps = []
    step = 0
    while True:
        saved = net.snapshot()
        pool_size = len(candidate_pool(net, config.problem))
        ledger = collect_ledger(
            net, dataset, config.loss_kind, config.retrain,
            config.accumulation_epochs, config.problem.element_class,
        )
        final_map = ledger.finalize(
            net, config.indicator_mode, config.problem.valid_set
        )
        try:
            candidates = select_candidates(final_map, net, config.problem, 1)
        except PoolExhausted:
            net.restore(saved)
            return PruneResult(net, steps, True)
        applied, cascade = apply_modification(net, candidates, config.problem)
        outcome = train_until(net, dataset, config.loss_kind, config.retrain)
        if not outcome.converged:
            net.restore(saved)
        record = PruneStepRecord(
            step=step,
            m=1,
            refs=[str(r) for r in applied],
            accepted=outcome.converged,
            total_loss=outcome.final_total_loss,
            epochs_used=outcome.epochs_used,
            staleness=0,
            cascade=[str(r) for r in cascade],
            pool_size=pool_size,
            save_hash=_digest(saved),
            net_hash_after=_digest(net.snapshot()),
        )
        steps.append(record)
        _emit(config, record)
        step += 1
        if not outcome.converged:
            return PruneResult(net, steps, True)


def _resolve_initial_m(net, config):
    if config.initial_m == "half-of-pool":
        return max(1, len(candidate_pool(net, config.problem)) // 2)
    m = int(config.initial_m)
    if m < 1:
        raise ValueError("initial M must be at least 1")
    return m


def prune_accelerated(net: Network, dataset, config: PruneConfig) -> PruneResult:
    """Batch loop: try M elements at once; on failure restore the snapshot
    and halve M without recomputing indicators; a failure at M = 1 ends the
    procedure with the last saved network."""
    _require_trained(net, dataset, config)
    m = _resolve_initial_m(net, config)
    steps = []
    step = 0
    while True:
        saved = net.snapshot()
        pool_size = len(candidate_pool(net, config.problem))
        ledger = collect_ledger(
            net, dataset, config.loss_kind, config.retrain,
            config.accumulation_epochs, config.problem.element_class,
        )
        final_map = ledger.finalize(
            net, config.indicator_mode, config.problem.valid_set
        )
        staleness = 0
        while True:
            try:
                candidates = select_candidates(final_map, net, config.problem, m)
            except PoolExhausted:
                net.restore(saved)
                return PruneResult(net, steps, True)
            applied, cascade = apply_modification(net, candidates, config.problem)
            outcome = train_until(net, dataset, config.loss_kind, config.retrain)
            if not outcome.converged:
                net.restore(saved)
            record = PruneStepRecord(
                step=step,
                m=m,
                refs=[str(r) for r in applied],
                accepted=outcome.converged,
                total_loss=outcome.final_total_loss,
                epochs_used=outcome.epochs_used,
                staleness=staleness,
                cascade=[str(r) for r in cascade],
                pool_size=pool_size,
                save_hash=_digest(saved),
                net_hash_after=_digest(net.snapshot()),
            )
            steps.append(record)
            _emit(config, record)
            step += 1
            if outcome.converged:
                break  # fresh indicators on the smaller network
            staleness += 1
            if m > 1:
                m //= 2
            else:
                return PruneResult(net, steps, True)


def run_pipeline(net: Network, dataset, configs):
    """Run pruning stages in order, each starting from the previous result.

    Returns (list of PruneResult, final network).  A stage whose
    precondition fails aborts with the count of completed stages.
    """
    results = []
    for i, config in enumerate(configs):
        runner = prune_basic if config.loop == "basic" else prune_accelerated
        try:
            results.append(runner(net, dataset, config))
        except NotTrainedError as exc:
            raise PipelineAbort(str(exc), stages_completed=i) from exc
        net = results[-1].network
    return results, net
