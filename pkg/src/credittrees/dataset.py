"""Dataset handling: schema, ARFF/CSV parsing, stratified folding.

Attribute values are stored as floats internally: nominal values hold the
category index, missing values are None at the instance level and NaN in the
matrix view. All counts are weighted sums so fractional instances (from
missing-value splitting in the tree learners) flow through uniformly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from importlib import resources

import numpy as np


class DataFormatError(ValueError):
    """Malformed ARFF/CSV input or a value that violates the schema."""

    def __init__(self, message, line=None):
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
        self.line = line


@dataclass(frozen=True)
class AttributeSpec:
    """One attribute: nominal (with its category list) or numeric."""

    name: str
    categories: tuple[str, ...] | None = None  # None means numeric

    def __post_init__(self):
        if self.categories is not None:
            if len(self.categories) == 0:
                raise ValueError("nominal attribute %r has no categories" % self.name)
            if len(set(self.categories)) != len(self.categories):
                raise ValueError("duplicate categories in attribute %r" % self.name)

    @property
    def is_nominal(self):
        return self.categories is not None


@dataclass(frozen=True)
class Schema:
    """Ordered predictor attributes plus a nominal class attribute."""

    attributes: tuple[AttributeSpec, ...]
    class_attribute: AttributeSpec

    def __post_init__(self):
        if not self.class_attribute.is_nominal:
            raise ValueError("class attribute must be nominal")
        names = [a.name for a in self.attributes]
        if len(set(names)) != len(names):
            raise ValueError("duplicate attribute names in schema")
        if self.class_attribute.name in names:
            raise ValueError("class attribute also listed among predictors")

    @property
    def class_names(self):
        return self.class_attribute.categories

    @property
    def n_classes(self):
        return len(self.class_attribute.categories)


@dataclass
class Instance:
    """One row: predictor values, weight, and optional class index."""

    values: tuple
    class_index: int | None = None
    weight: float = 1.0

    def __post_init__(self):
        if self.weight < 0:
            raise ValueError("instance weight must be non-negative")


@dataclass
class Dataset:
    schema: Schema
    instances: list[Instance]
    relation: str = field(default="dataset", compare=False)

    def __post_init__(self):
        n = len(self.schema.attributes)
        for i, inst in enumerate(self.instances):
            if len(inst.values) != n:
                raise ValueError("instance %d has %d values, schema has %d attributes"
                                 % (i, len(inst.values), n))

    def __len__(self):
        return len(self.instances)

    @property
    def matrix(self):
        """(X, y, w) arrays: NaN for missing values, -1 for missing class."""
        n, a = len(self.instances), len(self.schema.attributes)
        x = np.full((n, a), np.nan)
        y = np.full(n, -1, dtype=np.int64)
        w = np.ones(n)
        for i, inst in enumerate(self.instances):
            for j, v in enumerate(inst.values):
                if v is not None:
                    x[i, j] = v
            if inst.class_index is not None:
                y[i] = inst.class_index
            w[i] = inst.weight
        return x, y, w

    def class_counts(self):
        """Per-class weight totals, ordered like the class categories.

        Instances with a missing class label are excluded.
        """
        counts = np.zeros(self.schema.n_classes)
        for inst in self.instances:
            if inst.class_index is not None:
                counts[inst.class_index] += inst.weight
        return counts

    def subset(self, indices):
        return Dataset(self.schema, [self.instances[i] for i in indices], self.relation)

    def to_arff(self):
        """Serialize to the ARFF subset understood by parse_arff."""
        lines = ["@relation %s" % _quote(self.relation), ""]
        for spec in list(self.schema.attributes) + [self.schema.class_attribute]:
            if spec.is_nominal:
                cats = ",".join(_quote(c) for c in spec.categories)
                lines.append("@attribute %s {%s}" % (_quote(spec.name), cats))
            else:
                lines.append("@attribute %s numeric" % _quote(spec.name))
        lines.append("")
        lines.append("@data")
        for inst in self.instances:
            toks = []
            for spec, v in zip(self.schema.attributes, inst.values):
                toks.append(_format_value(spec, v))
            toks.append(_format_value(self.schema.class_attribute, inst.class_index))
            lines.append(",".join(toks))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class FoldPlan:
    k: int
    seed: int
    folds: tuple[tuple[int, ...], ...]


def _quote(token):
    if token == "" or any(c in token for c in " ,{}%'\"\t"):
        return "'%s'" % token.replace("'", "\\'")
    return token


def _format_value(spec, v):
    if v is None:
        return "?"
    if spec.is_nominal:
        return _quote(spec.categories[int(v)])
    f = float(v)
    return str(int(f)) if f == int(f) else repr(f)


def _split_quoted(line, lineno):
    """Split a comma-separated row, honoring single/double quotes."""
    tokens, buf, quote = [], [], None
    i = 0
    while i < len(line):
        c = line[i]
        if quote:
            if c == "\\" and i + 1 < len(line) and line[i + 1] == quote:
                buf.append(quote)
                i += 1
            elif c == quote:
                quote = None
            else:
                buf.append(c)
        elif c in "'\"":
            quote = c
        elif c == ",":
            tokens.append("".join(buf).strip())
            buf = []
        else:
            buf.append(c)
        i += 1
    if quote:
        raise DataFormatError("unterminated quote", lineno)
    tokens.append("".join(buf).strip())
    return tokens


def _parse_value(spec, token, lineno, column):
    if token == "?" or token == "":
        return None
    if spec.is_nominal:
        try:
            return spec.categories.index(token)
        except ValueError:
            raise DataFormatError(
                "unknown category %r for attribute %r" % (token, spec.name), lineno
            ) from None
    try:
        return float(token)
    except ValueError:
        raise DataFormatError(
            "non-numeric value %r in numeric attribute %r" % (token, spec.name), lineno
        ) from None


def parse_arff(text, class_attribute=None):
    """Parse the ARFF subset: @relation, @attribute (nominal/numeric), @data.

    The last declared attribute is the class unless `class_attribute` names
    another one. Comment lines start with '%'; '?' is the missing token.
    """
    relation = "dataset"
    specs = []
    rows = []
    in_data = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if not in_data:
            lowered = line.lower()
            if lowered.startswith("@relation"):
                rest = line[len("@relation"):].strip()
                relation = _split_quoted(rest, lineno)[0] if rest else "dataset"
            elif lowered.startswith("@attribute"):
                specs.append(_parse_attribute_line(line, lineno))
            elif lowered.startswith("@data"):
                in_data = True
            else:
                raise DataFormatError("unrecognized header line %r" % line, lineno)
        else:
            rows.append((lineno, line))
    if not in_data:
        raise DataFormatError("missing @data section")
    if len(specs) < 2:
        raise DataFormatError("need at least one predictor and a class attribute")

    class_idx = len(specs) - 1
    if class_attribute is not None:
        names = [s.name for s in specs]
        if class_attribute not in names:
            raise DataFormatError("class attribute %r not declared" % class_attribute)
        class_idx = names.index(class_attribute)
    class_spec = specs[class_idx]
    if not class_spec.is_nominal:
        raise DataFormatError("class attribute %r is not nominal" % class_spec.name)
    predictors = tuple(s for i, s in enumerate(specs) if i != class_idx)
    schema = Schema(predictors, class_spec)

    instances = []
    for lineno, line in rows:
        tokens = _split_quoted(line, lineno)
        if len(tokens) != len(specs):
            raise DataFormatError(
                "row has %d values, expected %d" % (len(tokens), len(specs)), lineno
            )
        values = []
        label = None
        for i, (spec, tok) in enumerate(zip(specs, tokens)):
            v = _parse_value(spec, tok, lineno, i)
            if i == class_idx:
                label = v
            else:
                values.append(v)
        instances.append(Instance(tuple(values), class_index=label))
    return Dataset(schema, instances, relation)


def _parse_attribute_line(line, lineno):
    rest = line[len("@attribute"):].strip()
    if not rest:
        raise DataFormatError("empty @attribute declaration", lineno)
    if rest[0] in "'\"":
        quote = rest[0]
        end = rest.find(quote, 1)
        if end < 0:
            raise DataFormatError("unterminated quote in attribute name", lineno)
        name = rest[1:end]
        rest = rest[end + 1:].strip()
    else:
        parts = rest.split(None, 1)
        if len(parts) != 2:
            raise DataFormatError("attribute declaration missing a type", lineno)
        name, rest = parts
        rest = rest.strip()
    if rest.startswith("{"):
        if not rest.endswith("}"):
            raise DataFormatError("unterminated category list", lineno)
        cats = tuple(_split_quoted(rest[1:-1], lineno))
        return AttributeSpec(name, cats)
    if rest.lower() in ("numeric", "real", "integer"):
        return AttributeSpec(name)
    raise DataFormatError("unsupported attribute type %r" % rest, lineno)


def parse_csv(text, schema, has_header=False):
    """Parse CSV rows against an externally supplied schema.

    Column order is the schema's predictors followed by the class. Empty
    fields and '?' are missing.
    """
    specs = list(schema.attributes) + [schema.class_attribute]
    instances = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if has_header and lineno == 1:
            continue
        line = raw.strip()
        if not line:
            continue
        tokens = _split_quoted(line, lineno)
        if len(tokens) != len(specs):
            raise DataFormatError(
                "row has %d values, expected %d" % (len(tokens), len(specs)), lineno
            )
        values = []
        label = None
        for i, (spec, tok) in enumerate(zip(specs, tokens)):
            v = _parse_value(spec, tok, lineno, i)
            if i == len(specs) - 1:
                label = v
            else:
                values.append(v)
        instances.append(Instance(tuple(values), class_index=label))
    return Dataset(schema, instances)


def german_credit_schema():
    """Schema of the German credit dataset, in the ARFF file's attribute order.

    20 predictors (7 numeric, 13 nominal), class {good, bad}. Note the
    canonical file names differ from informal prose names: "Own Phone" is
    own_telephone and "No. of dependents" is num_dependents.
    """
    a = AttributeSpec
    predictors = (
        a("checking_status", ("<0", "0<=X<200", ">=200", "no checking")),
        a("duration"),
        a("credit_history", ("no credits/all paid", "all paid", "existing paid",
                             "delayed previously", "critical/other existing credit")),
        a("purpose", ("new car", "used car", "furniture/equipment", "radio/tv",
                      "domestic appliance", "repairs", "education", "vacation",
                      "retraining", "business", "other")),
        a("credit_amount"),
        a("savings_status", ("<100", "100<=X<500", "500<=X<1000", ">=1000",
                             "no known savings")),
        a("employment", ("unemployed", "<1", "1<=X<4", "4<=X<7", ">=7")),
        a("installment_commitment"),
        a("personal_status", ("male div/sep", "female div/dep/mar", "male single",
                              "male mar/wid", "female single")),
        a("other_parties", ("none", "co applicant", "guarantor")),
        a("residence_since"),
        a("property_magnitude", ("real estate", "life insurance", "car",
                                 "no known property")),
        a("age"),
        a("other_payment_plans", ("bank", "stores", "none")),
        a("housing", ("rent", "own", "for free")),
        a("existing_credits"),
        a("job", ("unemp/unskilled non res", "unskilled resident", "skilled",
                  "high qualif/self emp/mgmt")),
        a("num_dependents"),
        a("own_telephone", ("none", "yes")),
        a("foreign_worker", ("yes", "no")),
    )
    return Schema(predictors, a("class", ("good", "bad")))


def load_german_credit():
    """Load the bundled German credit ARFF (1000 instances, 700 good / 300 bad)."""
    text = resources.files("credittrees").joinpath("data/credit-g.arff").read_text()
    return parse_arff(text)


def schema_to_dict(schema):
    def spec(a):
        return {"name": a.name,
                "categories": list(a.categories) if a.is_nominal else None}
    return {"attributes": [spec(a) for a in schema.attributes],
            "class": spec(schema.class_attribute)}


def schema_from_dict(d):
    def spec(s):
        cats = s["categories"]
        return AttributeSpec(s["name"], tuple(cats) if cats is not None else None)
    return Schema(tuple(spec(s) for s in d["attributes"]), spec(d["class"]))


def stratified_folds(dataset, k, seed):
    """Seeded stratified fold assignment.

    Instances are grouped by class, each group is shuffled with the seeded
    RNG, then assigned round-robin with a fold cursor that continues across
    groups (keeps overall fold sizes within 1 of each other). Deterministic
    for a fixed (instance order, k, seed).
    """
    n = len(dataset)
    if k < 2:
        raise ValueError("k must be >= 2")
    if k > n:
        raise ValueError("k=%d exceeds the %d available instances" % (k, n))
    groups = {}
    for i, inst in enumerate(dataset.instances):
        groups.setdefault(inst.class_index, []).append(i)
    rng = random.Random(seed)
    folds = [[] for _ in range(k)]
    cursor = 0
    for label in sorted(groups, key=lambda c: (c is None, c)):
        idx = groups[label]
        rng.shuffle(idx)
        for i in idx:
            folds[cursor % k].append(i)
            cursor += 1
    return FoldPlan(k, seed, tuple(tuple(sorted(f)) for f in folds))


def split_grow_prune(train, prune_folds, seed):
    """Hold out one stratified fold for pruning; return (grow, prune) sets."""
    if prune_folds < 2:
        raise ValueError("prune_folds must be >= 2")
    plan = stratified_folds(train, prune_folds, seed)
    prune_idx = set(plan.folds[0])
    grow = train.subset([i for i in range(len(train)) if i not in prune_idx])
    prune = train.subset(sorted(prune_idx))
    return grow, prune
