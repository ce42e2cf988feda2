"""Rule extraction from frozen ternary networks.

A network whose live weights are all frozen at -1, 0, or +1 can have its
smooth activations replaced by a hard threshold without changing the sign
structure of its decisions; each neuron then IS a verbal statement: "at
least k of the following hold".  With ±1 inputs, t satisfied statements out
of m give a weighted sum of 2t - m, so a neuron with bias w0 fires exactly
when t >= ceil((m - w0) / 2).  Hidden neurons become named syndromes that
later rules may cite, affirmed or negated; output neurons become the class
rules.

Fan-in at most three is what makes the result pleasant to read, not what
makes it correct: verbalization is exact for any ternary frozen step
network.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

from .errors import DatasetError, LucidnetError, TransparencyError
from .network import Network, Neuron, Synapse, forward_batch
from .training import classify_outputs

TERNARY = (-1.0, 0.0, 1.0)


@dataclass(frozen=True)
class Statement:
    """One condition: a feature or an earlier rule, affirmed or negated."""

    affirmed: bool
    feature: str | None = None
    rule: str | None = None

    def __post_init__(self):
        if (self.feature is None) == (self.rule is None):
            raise ValueError("statement needs exactly one of feature or rule")

    def render(self, feature_texts=None):
        if self.feature is not None:
            texts = (feature_texts or {}).get(self.feature)
            if texts:
                return texts[0] if self.affirmed else texts[1]
            return f"{self.feature} is {'yes' if self.affirmed else 'no'}"
        state = "present" if self.affirmed else "absent"
        return f"{self.rule} is {state}"


@dataclass
class ThresholdRule:
    """'At least k of the following statements hold.'

    k may fall outside [1, len(statements)] for degenerate neurons: k <= 0
    is a rule that always holds, k > len(statements) one that never does.
    """

    name: str
    k: int
    statements: list
    title: str | None = None


@dataclass
class RuleSet:
    rules: list
    output_rules: list  # ordered (class label, rule name) pairs
    class_labels: list
    feature_texts: dict = field(default_factory=dict)

    @property
    def attribute_universe(self):
        names = set()
        for rule in self.rules:
            for st in rule.statements:
                if st.feature is not None:
                    names.add(st.feature)
        return sorted(names)

    # -- persistence -----------------------------------------------------

    def to_doc(self):
        return {
            "class_labels": list(self.class_labels),
            "attribute_universe": self.attribute_universe,
            "feature_texts": {k: list(v) for k, v in self.feature_texts.items()},
            "rules": [
                {
                    "name": r.name,
                    "title": r.title,
                    "k": r.k,
                    "statements": [
                        {"feature": s.feature, "affirmed": s.affirmed}
                        if s.feature is not None
                        else {"rule": s.rule, "affirmed": s.affirmed}
                        for s in r.statements
                    ],
                }
                for r in self.rules
            ],
            "output_rules": [
                {"label": label, "rule": name} for label, name in self.output_rules
            ],
        }

    def to_json(self):
        return json.dumps(self.to_doc(), indent=2, sort_keys=True)

    @staticmethod
    def from_doc(doc):
        rules = [
            ThresholdRule(
                name=r["name"],
                k=r["k"],
                statements=[
                    Statement(
                        affirmed=s["affirmed"],
                        feature=s.get("feature"),
                        rule=s.get("rule"),
                    )
                    for s in r["statements"]
                ],
                title=r.get("title"),
            )
            for r in doc["rules"]
        ]
        return RuleSet(
            rules=rules,
            output_rules=[(o["label"], o["rule"]) for o in doc["output_rules"]],
            class_labels=list(doc["class_labels"]),
            feature_texts={k: tuple(v) for k, v in doc.get("feature_texts", {}).items()},
        )

    @staticmethod
    def from_json(text):
        return RuleSet.from_doc(json.loads(text))

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_json())
            fh.write("\n")

    @staticmethod
    def load(path):
        with open(path) as fh:
            return RuleSet.from_json(fh.read())

    # -- rendering ---------------------------------------------------------

    def render_text(self):
        lines = []
        output_names = {name for _, name in self.output_rules}
        counter = 0
        for rule in self.rules:
            if rule.name in output_names:
                continue
            counter += 1
            shown = f"{rule.name} ({rule.title})" if rule.title else rule.name
            lines.append(
                f"{counter}. {shown} appears if at least {rule.k} of the "
                f"following {len(rule.statements)} statements hold:"
            )
            for st in rule.statements:
                lines.append(f"   - {st.render(self.feature_texts)}")
        by_name = {r.name: r for r in self.rules}
        for label, name in self.output_rules:
            rule = by_name[name]
            lines.append(
                f"Class {label} if at least {rule.k} of the following "
                f"{len(rule.statements)} statements hold:"
            )
            for st in rule.statements:
                lines.append(f"   - {st.render(self.feature_texts)}")
        if len(self.output_rules) == 1 and len(self.class_labels) == 2:
            label = self.output_rules[0][0]
            other = next(c for c in self.class_labels if c != label)
            lines.append(f"Otherwise class {other}.")
        elif len(self.output_rules) > 1:
            lines.append(
                "Predict the class whose rule holds; if several or none do, "
                f"the first of {', '.join(l for l, _ in self.output_rules)} wins."
            )
        return "\n".join(lines) + "\n"


# -- transparency checks -------------------------------------------------


def is_logically_transparent(net: Network):
    """(flag, violations): fan-in at most 3 everywhere and every live
    weight frozen at a ternary value."""
    violations = []
    for nref, _ in net.iter_neurons():
        fan = net.fan_in(nref)
        if fan > 3:
            violations.append((str(nref), "fan-in"))
    for wref, syn in net.iter_weights():
        if syn.trainable:
            violations.append((str(wref), "trainable"))
        elif syn.weight not in TERNARY:
            violations.append((str(wref), "non-ternary"))
    return (not violations), violations


def _check_frozen_ternary(net: Network):
    problems = []
    for wref, syn in net.iter_weights():
        if syn.trainable:
            problems.append(f"{wref} is trainable")
        elif syn.weight not in TERNARY:
            problems.append(f"{wref} holds non-ternary value {syn.weight!r}")
    if problems:
        raise TransparencyError("; ".join(problems))


def substitute_step(net: Network) -> Network:
    """Swap every activation for the hard threshold on a fully frozen
    ternary network.  Idempotent; mutates and returns the network."""
    _check_frozen_ternary(net)
    for _, neuron in net.iter_neurons():
        neuron.activation = "step"
    net._touch()
    return net


# -- verbalization ---------------------------------------------------------


def _threshold_count(m, bias):
    # sum over ±1 statements is 2t - m; fires when bias + 2t - m >= 0
    return (m - int(round(bias)) + 1) // 2


def verbalize(net: Network, feature_names=None, rule_names=None,
              feature_texts=None) -> RuleSet:
    """Turn a frozen ternary step network into a hierarchy of threshold
    rules.  Zero-weight synapses contribute no statement."""
    _check_frozen_ternary(net)
    for _, neuron in net.iter_neurons():
        if neuron.activation != "step":
            raise TransparencyError(
                "verbalization needs step activations; run substitute_step first"
            )
    if feature_names is None:
        feature_names = [f"x{k}" for k in range(net.input_dim)]
    if len(feature_names) != net.input_dim:
        raise ValueError("feature name table does not match input dimension")
    rule_names = rule_names or {}

    names = {}
    rules = []
    n_out = len(net.layers[-1])
    for nref, neuron in net.iter_neurons():
        if net.is_output_layer(nref.layer):
            if n_out == 1:
                default = net.output_labels[0]
            else:
                default = net.output_labels[nref.neuron]
        else:
            default = f"syndrome-{nref.layer}-{nref.neuron}"
        name = rule_names.get(str(nref), default)
        names[(nref.layer, nref.neuron)] = name
        statements = []
        for syn in neuron.synapses:
            if not syn.alive or syn.weight == 0.0:
                continue
            affirmed = syn.weight > 0
            sl, si = syn.src
            if sl == 0:
                statements.append(
                    Statement(affirmed=affirmed, feature=feature_names[si])
                )
            else:
                statements.append(
                    Statement(affirmed=affirmed, rule=names[(sl, si)])
                )
        k = _threshold_count(len(statements), neuron.bias.weight)
        rules.append(ThresholdRule(name=name, k=k, statements=statements))

    if n_out == 1:
        last = net.n_layers
        out_idx = next(
            i for i, nr in enumerate(net.layers[last - 1]) if nr.alive
        )
        output_rules = [(net.output_labels[0], names[(last, out_idx)])]
    else:
        output_rules = [
            (net.output_labels[i], names[(net.n_layers, i)])
            for i, nr in enumerate(net.layers[-1])
            if nr.alive
        ]
    return RuleSet(
        rules=rules,
        output_rules=output_rules,
        class_labels=list(net.output_labels),
        feature_texts=dict(feature_texts or {}),
    )


# -- evaluation -------------------------------------------------------------


def evaluate_rules(ruleset: RuleSet, assignment) -> str:
    """Class label for one ±1 assignment over the attribute universe."""
    values = {}
    for rule in ruleset.rules:
        satisfied = 0
        for st in rule.statements:
            if st.feature is not None:
                if st.feature not in assignment:
                    raise DatasetError(f"assignment is missing attribute {st.feature}")
                val = assignment[st.feature]
            else:
                val = values[st.rule]
            if val not in (-1, 1, -1.0, 1.0):
                raise DatasetError(f"attribute value {val!r} is not ±1")
            if (val > 0) == st.affirmed:
                satisfied += 1
        values[rule.name] = 1.0 if satisfied >= rule.k else -1.0
    if len(ruleset.output_rules) == 1:
        label, name = ruleset.output_rules[0]
        if len(ruleset.class_labels) != 2:
            raise LucidnetError("single output rule needs exactly two classes")
        if values[name] > 0:
            return label
        return next(c for c in ruleset.class_labels if c != label)
    outputs = [[values[name] for _, name in ruleset.output_rules]]
    labels = [label for label, _ in ruleset.output_rules]
    return classify_outputs(outputs, labels)[0]


@dataclass
class RuleComparison:
    labels: tuple
    both_first: int
    both_second: int
    first_second: int  # r1 says labels[0], r2 says labels[1]
    second_first: int
    disagreements: list  # (assignment, r1 class, r2 class)
    universe: list

    @property
    def agree(self):
        return self.both_first + self.both_second

    @property
    def total(self):
        return self.agree + self.first_second + self.second_first

    def summary_line(self):
        l1, l2 = self.labels
        return (
            f"agree={self.agree} "
            f"r1{l1}_r2{l2}={self.first_second} "
            f"r1{l2}_r2{l1}={self.second_first}"
        )


def compare_rulesets(r1: RuleSet, r2: RuleSet) -> RuleComparison:
    """Exhaustive agreement table over all ±1 assignments of the union
    attribute universe (at most 20 attributes)."""
    if set(r1.class_labels) != set(r2.class_labels):
        raise LucidnetError("rulesets classify into different label sets")
    universe = sorted(set(r1.attribute_universe) | set(r2.attribute_universe))
    if len(universe) > 20:
        raise LucidnetError(
            f"universe of {len(universe)} attributes is too large to enumerate"
        )
    labels = tuple(r1.class_labels[:2])
    counts = {"bb": 0, "ss": 0, "fs": 0, "sf": 0}
    disagreements = []
    for bits in itertools.product((-1.0, 1.0), repeat=len(universe)):
        assignment = dict(zip(universe, bits))
        c1 = evaluate_rules(r1, assignment)
        c2 = evaluate_rules(r2, assignment)
        if c1 == c2:
            counts["bb" if c1 == labels[0] else "ss"] += 1
        elif c1 == labels[0]:
            counts["fs"] += 1
            disagreements.append((assignment, c1, c2))
        else:
            counts["sf"] += 1
            disagreements.append((assignment, c1, c2))
    return RuleComparison(
        labels=labels,
        both_first=counts["bb"],
        both_second=counts["ss"],
        first_second=counts["fs"],
        second_first=counts["sf"],
        disagreements=disagreements,
        universe=universe,
    )


# -- shipped fixtures --------------------------------------------------------

ELECTION_FEATURE_TEXTS = {
    "q3": (
        "There was major third party activity during the election year",
        "There was no major third party activity during the election year",
    ),
    "q4": (
        "There was a serious contest for the nomination of the incumbent party candidate",
        "There was no serious contest for the nomination of the incumbent party candidate",
    ),
    "q5": (
        "The incumbent party candidate was the sitting president",
        "The incumbent party candidate was not the sitting president",
    ),
    "q6": (
        "The election year was a time of recession or depression",
        "The election year was not a time of recession or depression",
    ),
    "q7": (
        "Growth in the gross national product exceeded 2.1% in the year of the election",
        "Growth in the gross national product was less than 2.1% in the year of the election",
    ),
    "q8": (
        "The incumbent president initiated major changes in national policy",
        "The incumbent president did not initiate any major changes in national policy",
    ),
    "q9": (
        "There was major social unrest in the nation during the incumbent administration",
        "There was no major social unrest in the nation during the incumbent administration",
    ),
}


def fixtures_A1_A2():
    """The two shipped election-forecast algorithms as rule sets.

    Both predict victory of the opposition (class O) when at least one of
    two syndromes is present; they differ in which symptoms define the
    syndromes and together touch 7 of the 12 questionnaire attributes.
    """
    a1 = RuleSet(
        rules=[
            ThresholdRule(
                name="inadequate-governance",
                title="inadequate governance syndrome",
                k=2,
                statements=[
                    Statement(affirmed=True, feature="q4"),
                    Statement(affirmed=True, feature="q6"),
                    Statement(affirmed=False, feature="q8"),
                ],
            ),
            ThresholdRule(
                name="political-instability",
                title="political instability syndrome",
                k=2,
                statements=[
                    Statement(affirmed=True, feature="q3"),
                    Statement(affirmed=True, feature="q4"),
                    Statement(affirmed=True, feature="q9"),
                ],
            ),
            ThresholdRule(
                name="opposition-wins",
                k=1,
                statements=[
                    Statement(affirmed=True, rule="inadequate-governance"),
                    Statement(affirmed=True, rule="political-instability"),
                ],
            ),
        ],
        output_rules=[("O", "opposition-wins")],
        class_labels=["P", "O"],
        feature_texts=dict(ELECTION_FEATURE_TEXTS),
    )
    a2 = RuleSet(
        rules=[
            ThresholdRule(
                name="instability-or-stagnation",
                title="syndrome of political instability or stagnation",
                k=2,
                statements=[
                    Statement(affirmed=True, feature="q3"),
                    Statement(affirmed=True, feature="q4"),
                    Statement(affirmed=False, feature="q8"),
                ],
            ),
            ThresholdRule(
                name="instability",
                title="syndrome of instability",
                k=2,
                statements=[
                    Statement(affirmed=False, feature="q5"),
                    Statement(affirmed=False, feature="q7"),
                    Statement(affirmed=True, feature="q9"),
                ],
            ),
            ThresholdRule(
                name="opposition-wins",
                k=1,
                statements=[
                    Statement(affirmed=True, rule="instability-or-stagnation"),
                    Statement(affirmed=True, rule="instability"),
                ],
            ),
        ],
        output_rules=[("O", "opposition-wins")],
        class_labels=["P", "O"],
        feature_texts=dict(ELECTION_FEATURE_TEXTS),
    )
    return a1, a2


def single_question_rule_network() -> Network:
    """One frozen step neuron encoding the five-question election rule:
    the power party wins on at least two yes answers among questions 3, 4,
    6, and 9, or on one such yes combined with a no on question 8."""
    weights = {2: 1.0, 3: 1.0, 5: 1.0, 7: -1.0, 8: 1.0}  # 0-based features
    synapses = [
        Synapse(w, trainable=False, src=(0, k)) for k, w in sorted(weights.items())
    ]
    neuron = Neuron(Synapse(1.0, trainable=False, src=None), synapses, "step")
    active = [k in weights for k in range(12)]
    return Network(12, [[neuron]], ["P", "O"], active_inputs=active)
