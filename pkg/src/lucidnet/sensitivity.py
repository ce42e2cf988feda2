"""First-order sensitivity indicators for inputs, weights, and neurons.

Each indicator is a linearized cost |dL/de * delta_e| of moving element e to
its modification target.  Per-sample values are aggregated over the training
set (max or average) and the per-epoch aggregates are averaged over several
live training epochs, which decouples the ranking from the gradient
direction at any single moment.

For weight indicators the displacement factor |v - w| stays outside the
sample statistic and is applied once at finalize time against the current
weight and its current nearest valid value.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import ExcludedElementError, StaleReferenceError
from .network import ElementRef, Network, input_ref
from .training import LossKind, TrainConfig, train_epoch

INDICATOR_MODES = ("max", "avg")
ELEMENT_CLASSES = ("input", "weight", "neuron")


@dataclass(frozen=True)
class ValidSet:
    """Finite ascending set of permitted weight values."""

    values: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise ValueError("valid set must be nonempty")
        if sorted(set(vals)) != list(vals):
            raise ValueError("valid set must be strictly ascending, no duplicates")
        object.__setattr__(self, "values", vals)

    @staticmethod
    def removal():
        return ValidSet((0.0,))

    @staticmethod
    def ternary():
        return ValidSet((-1.0, 0.0, 1.0))


def nearest_valid(weight, valid_set: ValidSet) -> float:
    """Member of the set closest to the weight; ties go to the value of
    smaller magnitude."""
    w = float(weight)
    return min(valid_set.values, key=lambda v: (abs(v - w), abs(v), v))


# -- per-sample reference formulas ---------------------------------------

def input_indicator_sample(trace, gradients, k) -> float:
    """Linearized cost of zeroing feature k for one sample."""
    if k not in gradients.inputs:
        raise StaleReferenceError(f"feature {k} is masked off")
    return abs(gradients.inputs[k] * trace.input[k])


def weight_indicator_sample(net: Network, gradients, ref: ElementRef,
                            target) -> float:
    """Linearized cost of moving one weight to its target value."""
    syn = net.synapse_at(ref)
    if not syn.trainable:
        raise ExcludedElementError(f"{ref} is frozen and outside the pool")
    return abs(gradients.weights[ref]) * abs(float(target) - syn.weight)


def neuron_indicator_sample(net: Network, trace, gradients,
                            ref: ElementRef) -> float:
    """Linearized cost of zeroing one hidden neuron's output."""
    if net.is_output_layer(ref.layer):
        raise ExcludedElementError("output neurons are protected")
    net.neuron_at(ref)
    y = trace.y[ref.layer - 1][ref.neuron]
    return abs(gradients.neurons[ref] * y)


def aggregate_samples(values, mode) -> float:
    """Collapse per-sample values to one epoch rating."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("cannot aggregate an empty sample set")
    if mode == "max":
        return float(values.max())
    if mode == "avg":
        return float(values.mean())
    raise ValueError(f"unknown indicator mode {mode!r}")


# -- cross-epoch ledger ---------------------------------------------------

class SensitivityLedger:
    """Accumulates per-epoch aggregates of per-sample indicator statistics.

    Both the max and the avg statistic are tracked, so either mode can be
    finalized from one accumulation run.
    """

    def __init__(self, element_class):
        if element_class not in ELEMENT_CLASSES:
            raise ValueError(f"unknown element class {element_class!r}")
        self.element_class = element_class
        self.epochs_accumulated = 0
        self._sum_of_max = {}
        self._sum_of_avg = {}

    def add_epoch(self, record):
        """Fold one epoch's GradientRecord into the running accumulators."""
        if self.element_class == "input":
            stats = record.input_cost
        elif self.element_class == "weight":
            stats = record.weight_abs
        else:
            stats = record.neuron_cost
        for key, values in stats.items():
            epoch_max = aggregate_samples(values, "max")
            epoch_avg = aggregate_samples(values, "avg")
            self._sum_of_max[key] = self._sum_of_max.get(key, 0.0) + epoch_max
            self._sum_of_avg[key] = self._sum_of_avg.get(key, 0.0) + epoch_avg
        self.epochs_accumulated += 1

    def finalize(self, net: Network, mode, valid_set: ValidSet | None = None):
        """Mean over epochs of the per-epoch aggregates, restricted to the
        elements still in the candidate pool.

        Weight indicators are multiplied by the current |nearest - weight|
        displacement; ``valid_set`` is required for the weight class.
        Returns {key: (indicator, target)} where target is the modification
        value (None for input and neuron classes).
        """
        if self.epochs_accumulated == 0:
            raise ValueError("finalize on an empty ledger")
        sums = self._sum_of_max if mode == "max" else self._sum_of_avg
        if mode not in INDICATOR_MODES:
            raise ValueError(f"unknown indicator mode {mode!r}")
        e = self.epochs_accumulated
        out = {}
        if self.element_class == "weight":
            if valid_set is None:
                raise ValueError("weight indicators need a valid set")
            for ref, syn in net.iter_weights():
                if not syn.trainable or ref not in sums:
                    continue
                target = nearest_valid(syn.weight, valid_set)
                out[ref] = (
                    (sums[ref] / e) * abs(target - syn.weight),
                    target,
                )
        elif self.element_class == "input":
            for k in net.active_feature_indices():
                if k in sums:
                    out[input_ref(k)] = (sums[k] / e, None)
        else:
            for nref, _ in net.iter_neurons(hidden_only=True):
                if nref in sums:
                    out[nref] = (sums[nref] / e, None)
        return out


def collect_ledger(net: Network, dataset, loss_kind: LossKind,
                   train_config: TrainConfig, epochs, element_class):
    """Accumulate a ledger over several live training epochs.

    The network keeps training while the statistics accumulate, so the
    indicators reflect a trajectory rather than a single weight state.
    """
    if epochs < 1:
        raise ValueError("need at least one accumulation epoch")
    ledger = SensitivityLedger(element_class)
    velocity = None
    for _ in range(epochs):
        record, velocity = train_epoch(net, dataset, loss_kind, train_config,
                                       velocity)
        ledger.add_epoch(record)
    return ledger


def export_csv(final_map, element_class, mode, path):
    """Write finalized indicators as element,class,indicator,mode rows."""
    rows = sorted(final_map.items(), key=lambda item: item[0].key)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["element", "class", "indicator", "mode"])
        for ref, (value, _) in rows:
            writer.writerow([str(ref), element_class, repr(float(value)), mode])
