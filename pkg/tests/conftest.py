import itertools

import numpy as np
import pytest

from lucidnet import Dataset, Network, Neuron, Synapse, build_network, forward


def make_dataset(features, labels, class_labels=None, names=None):
    features = np.asarray(features, dtype=float)
    if names is None:
        names = [f"x{k}" for k in range(features.shape[1])]
    if class_labels is None:
        class_labels = sorted(set(labels))
    return Dataset(names, features, list(labels), list(class_labels))


@pytest.fixture
def xor_dataset():
    X = np.array([[-1, -1], [-1, 1], [1, -1], [1, 1]], dtype=float)
    labels = ["neg", "pos", "pos", "neg"]
    return make_dataset(X, labels, class_labels=["pos", "neg"])


RELEVANT = (0, 2, 4, 5, 7)
IRRELEVANT = (1, 3, 6)


def majority_dataset():
    """All 256 ±1 vectors of 8 features; the class is the majority vote of
    the five relevant features, so the three others carry no signal and
    removing any relevant one makes zero training error impossible."""
    rows = np.array(list(itertools.product((-1.0, 1.0), repeat=8)))
    votes = rows[:, list(RELEVANT)].sum(axis=1)
    labels = ["pos" if v > 0 else "neg" for v in votes]
    return make_dataset(rows, labels, class_labels=["pos", "neg"])


@pytest.fixture(scope="session")
def majority_data():
    return majority_dataset()


def single_neuron_net(weights, bias, activation="step", trainable=False,
                      labels=("P", "O"), input_dim=None):
    input_dim = input_dim or len(weights)
    synapses = [
        Synapse(w, trainable=trainable, src=(0, k)) for k, w in enumerate(weights)
    ]
    neuron = Neuron(Synapse(bias, trainable=trainable, src=None), synapses, activation)
    return Network(input_dim, [[neuron]], list(labels))


def random_ternary_step_net(rng, n_inputs, hidden_sizes, n_out=1):
    """Frozen random ternary step network; dead fan-outs are possible and
    that is fine for soundness checks."""
    sizes = [n_inputs] + list(hidden_sizes) + [n_out]
    layers = []
    for l in range(1, len(sizes)):
        layer = []
        for _ in range(sizes[l]):
            bias = Synapse(float(rng.integers(-1, 2)), trainable=False, src=None)
            synapses = [
                Synapse(float(rng.integers(-1, 2)), trainable=False, src=(l - 1, j))
                for j in range(sizes[l - 1])
            ]
            layer.append(Neuron(bias, synapses, "step"))
        layers.append(layer)
    labels = ["P", "O"] if n_out == 1 else [f"c{i}" for i in range(n_out)]
    return Network(n_inputs, layers, labels)


def finite_difference_weight(net, ref, x, d_out, h=1e-4):
    """Central difference of L = outputs . d_out with respect to one weight."""
    syn = net.synapse_at(ref)
    w0 = syn.weight

    def value():
        net._touch()
        return float(forward(net, x).outputs @ np.asarray(d_out))

    syn.weight = w0 + h
    up = value()
    syn.weight = w0 - h
    down = value()
    syn.weight = w0
    net._touch()
    return (up - down) / (2 * h)


def assert_close_rel(actual, expected, rel=1e-6, abs_tol=1e-9):
    if abs(expected) < abs_tol and abs(actual) < abs_tol:
        return
    err = abs(actual - expected) / max(abs(expected), abs_tol)
    assert err <= rel, f"relative error {err} (actual {actual}, expected {expected})"


def fresh_trained_xor(seed, lr=0.3, momentum=0.9, max_epochs=5000):
    from lucidnet import LossKind, TrainConfig, train_until

    net = build_network((2, 6, 1), output_labels=["pos", "neg"], seed=seed)
    cfg = TrainConfig(
        learning_rate=lr,
        momentum=momentum,
        max_epochs=max_epochs,
        success_criterion="zero-classification-error",
    )
    X = np.array([[-1, -1], [-1, 1], [1, -1], [1, 1]], dtype=float)
    dataset = make_dataset(X, ["neg", "pos", "pos", "neg"], class_labels=["pos", "neg"])
    outcome = train_until(net, dataset, LossKind("mse"), cfg)
    return net, dataset, cfg, outcome
