import numpy as np
import pytest

from credittrees import (AttributeSpec, Dataset, Instance, Schema,
                         load_german_credit)


@pytest.fixture(scope="session")
def german():
    return load_german_credit()


def make_schema(kinds, n_classes=2, class_names=None):
    """kinds: list of None (numeric) or int (nominal with that many categories)."""
    attrs = []
    for i, k in enumerate(kinds):
        if k is None:
            attrs.append(AttributeSpec("a%d" % i))
        else:
            attrs.append(AttributeSpec("a%d" % i, tuple("c%d" % j for j in range(k))))
    names = class_names or tuple("k%d" % j for j in range(n_classes))
    return Schema(tuple(attrs), AttributeSpec("class", tuple(names)))


def make_dataset(kinds, rows, weights=None, n_classes=2):
    """rows: list of (values..., label); None means missing."""
    schema = make_schema(kinds, n_classes)
    instances = []
    for i, row in enumerate(rows):
        *values, label = row
        w = 1.0 if weights is None else weights[i]
        instances.append(Instance(tuple(values), class_index=label, weight=w))
    return Dataset(schema, instances)


def random_dataset(rng, n, kinds, n_classes=2, missing_rate=0.0):
    rows = []
    for _ in range(n):
        values = []
        for k in kinds:
            if missing_rate and rng.random() < missing_rate:
                values.append(None)
            elif k is None:
                values.append(float(rng.integers(0, 20)))
            else:
                values.append(int(rng.integers(0, k)))
        rows.append(tuple(values) + (int(rng.integers(0, n_classes)),))
    return make_dataset(kinds, rows, n_classes=n_classes)
