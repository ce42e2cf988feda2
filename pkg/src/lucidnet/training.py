"""Loss functions and full-batch gradient-descent training.

The optimizer is deliberately plain: one full-batch step per epoch with
optional classical momentum, applied to trainable elements only.  Full batch
keeps the per-epoch indicator statistics well defined and makes training a
deterministic function of (initial network, config).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError
from .network import Network, backward_batch, forward_batch, neuron_ref

SUCCESS_CRITERIA = ("loss-below-threshold", "zero-classification-error")


@dataclass(frozen=True)
class LossKind:
    kind: str = "mse"
    margin_width: float = 1.0

    def __post_init__(self):
        if self.kind not in ("mse", "margin"):
            raise ValueError(f"unknown loss kind {self.kind!r}")


@dataclass
class TrainConfig:
    learning_rate: float
    momentum: float = 0.0
    max_epochs: int = 1000
    loss_threshold: float = 0.0
    success_criterion: str = "zero-classification-error"
    rng_seed: int = 0

    def __post_init__(self):
        if self.learning_rate < 0:
            raise ValueError("learning rate must be nonnegative")
        if not 0.0 <= self.momentum < 1.0:
            raise ValueError("momentum must lie in [0, 1)")
        if self.success_criterion not in SUCCESS_CRITERIA:
            raise ValueError(f"unknown success criterion {self.success_criterion!r}")


@dataclass
class TrainOutcome:
    converged: bool
    epochs_used: int
    final_total_loss: float
    final_accuracy: float


class GradientRecord:
    """Per-sample derivative magnitudes from one epoch, keyed the way the
    sensitivity indicators consume them.

    weight_abs[ref]  -> (N,) array of |dL^j/dw|
    input_cost[k]    -> (N,) array of |dL^j/du_k * u_k| for active features
    neuron_cost[ref] -> (N,) array of |dL^j/dy * y| for live neurons
    """

    def __init__(self, weight_abs, input_cost, neuron_cost, total_loss):
        self.weight_abs = weight_abs
        self.input_cost = input_cost
        self.neuron_cost = neuron_cost
        self.total_loss = total_loss


def loss_terms(loss_kind: LossKind, targets, outputs):
    """Per-sample loss values and dL/d(outputs)."""
    z = np.asarray(targets, dtype=float)
    zhat = np.asarray(outputs, dtype=float)
    if loss_kind.kind == "mse":
        diff = zhat - z
        return 0.5 * (diff * diff).sum(axis=1), diff
    margins = loss_kind.margin_width - z * zhat
    active = margins > 0.0  # subgradient 0 exactly at the kink
    losses = np.where(active, margins, 0.0).sum(axis=1)
    grads = np.where(active, -z, 0.0)
    return losses, grads


def targets_for(dataset, net: Network):
    """±1 target matrix matching the network's output convention."""
    width = len(net.layers[-1])
    labels = net.output_labels
    n = len(dataset.labels)
    if width == 1:
        z = np.where(
            np.array([lab == labels[0] for lab in dataset.labels]), 1.0, -1.0
        )
        return z[:, None]
    z = -np.ones((n, width))
    index = {lab: i for i, lab in enumerate(labels)}
    for j, lab in enumerate(dataset.labels):
        z[j, index[lab]] = 1.0
    return z


def total_loss(net: Network, dataset, loss_kind: LossKind) -> float:
    """Sum of the per-sample losses over the whole training set."""
    if len(dataset.labels) == 0:
        raise ValueError("dataset is empty")
    trace = forward_batch(net, dataset.features)
    losses, _ = loss_terms(loss_kind, targets_for(dataset, net), trace.outputs)
    return float(losses.sum())


def _new_velocity(plan):
    return [
        (np.zeros(len(lp.syn_objs)), np.zeros(lp.width)) for lp in plan.layers
    ]


def train_epoch(net: Network, dataset, loss_kind: LossKind, config: TrainConfig,
                velocity=None):
    """One full-batch gradient step on the trainable elements.

    Returns (GradientRecord, velocity).  The record always holds the
    per-sample magnitudes, even when every element is frozen or the
    learning rate is zero.
    """
    plan = net._get_plan()
    trace = forward_batch(net, dataset.features)
    z = targets_for(dataset, net)
    losses, d_out = loss_terms(loss_kind, z, trace.outputs)
    grads = backward_batch(net, trace, d_out)

    epoch_loss = float(losses.sum())
    if not np.isfinite(epoch_loss):
        raise DivergenceError("total loss is not finite")

    weight_abs = {}
    neuron_cost = {}
    for l in range(1, net.n_layers + 1):
        lp = plan.layers[l - 1]
        gs = grads.syn_grads[l]
        if not np.isfinite(gs).all() or not np.isfinite(grads.bias_grads[l]).all():
            raise DivergenceError("gradient is not finite")
        for pos, ref in enumerate(lp.syn_refs):
            weight_abs[ref] = np.abs(gs[:, pos])
        for col, ref in zip(lp.bias_cols, lp.bias_refs):
            weight_abs[ref] = np.abs(grads.bias_grads[l][:, col])
        y = trace.values[l]
        dy = grads.y_grads[l]
        for i, neuron in enumerate(net.layers[l - 1]):
            if neuron.alive:
                neuron_cost[neuron_ref(l, i)] = np.abs(dy[:, i] * y[:, i])
    input_cost = {
        k: np.abs(grads.input_grads[:, k] * dataset.features[:, k])
        for k in net.active_feature_indices()
    }
    record = GradientRecord(weight_abs, input_cost, neuron_cost, epoch_loss)

    if velocity is None or len(velocity) != len(plan.layers):
        velocity = _new_velocity(plan)
    lr, mu = config.learning_rate, config.momentum
    for l in range(1, net.n_layers + 1):
        lp = plan.layers[l - 1]
        plan.refresh_trainable(l)
        v_syn, v_bias = velocity[l - 1]
        if v_syn.shape[0] != len(lp.syn_objs):
            v_syn = np.zeros(len(lp.syn_objs))
            v_bias = np.zeros(lp.width)
        g_syn = grads.syn_grads[l].sum(axis=0) * lp.trainable_syn
        v_syn = mu * v_syn + g_syn
        g_bias = grads.bias_grads[l].sum(axis=0)
        bias_mask = np.zeros(lp.width, dtype=bool)
        bias_mask[lp.bias_cols[lp.trainable_bias]] = True
        v_bias = mu * v_bias + g_bias * bias_mask
        if lr != 0.0:
            for pos, syn in enumerate(lp.syn_objs):
                if syn.trainable:
                    syn.weight = float(syn.weight - lr * v_syn[pos])
            for col, syn in zip(lp.bias_cols, lp.bias_objs):
                if syn.trainable:
                    syn.weight = float(syn.weight - lr * v_bias[col])
        velocity[l - 1] = (v_syn, v_bias)
    return record, velocity


def criterion_met(net: Network, dataset, loss_kind: LossKind, config: TrainConfig):
    if config.success_criterion == "loss-below-threshold":
        return total_loss(net, dataset, loss_kind) <= config.loss_threshold
    accuracy, _ = evaluate_classification(net, dataset)
    return accuracy == 1.0


def train_until(net: Network, dataset, loss_kind: LossKind,
                config: TrainConfig) -> TrainOutcome:
    """Run epochs until the success criterion holds or the budget runs out.

    The network is left in its final state either way.
    """
    velocity = None
    epochs = 0
    while True:
        if criterion_met(net, dataset, loss_kind, config):
            return TrainOutcome(
                True,
                epochs,
                total_loss(net, dataset, loss_kind),
                evaluate_classification(net, dataset)[0],
            )
        if epochs >= config.max_epochs:
            return TrainOutcome(
                False,
                epochs,
                total_loss(net, dataset, loss_kind),
                evaluate_classification(net, dataset)[0],
            )
        _, velocity = train_epoch(net, dataset, loss_kind, config, velocity)
        epochs += 1


def classify_outputs(outputs, labels):
    """Predicted label per row: argmax over outputs, sign rule for a single
    output, ties to the first label."""
    outputs = np.asarray(outputs, dtype=float)
    if outputs.shape[1] == 1:
        return [labels[0] if v >= 0.0 else labels[1] for v in outputs[:, 0]]
    picks = np.argmax(outputs, axis=1)  # argmax takes the first maximum
    return [labels[int(i)] for i in picks]


def evaluate_classification(net: Network, dataset):
    """Accuracy and per-sample predicted classes."""
    trace = forward_batch(net, dataset.features)
    preds = classify_outputs(trace.outputs, net.output_labels)
    correct = sum(p == a for p, a in zip(preds, dataset.labels))
    return correct / len(preds), preds
