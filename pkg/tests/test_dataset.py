import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from credittrees import (DataFormatError, german_credit_schema, parse_arff,
                         parse_csv, split_grow_prune, stratified_folds)
from conftest import make_dataset, make_schema

SMALL_ARFF = """\
% a comment
@relation tiny
@attribute size numeric
@attribute color {a,b}
@attribute class {good,bad}
@data
5,?,good
1,a,bad
?,b,good
"""


def test_parse_arff_basic():
    ds = parse_arff(SMALL_ARFF)
    assert len(ds) == 3
    assert [a.name for a in ds.schema.attributes] == ["size", "color"]
    assert ds.schema.class_names == ("good", "bad")
    assert ds.instances[0].values == (5.0, None)
    assert ds.instances[0].class_index == 0
    assert ds.instances[2].values == (None, 1)


def test_parse_arff_empty_data_section():
    ds = parse_arff(SMALL_ARFF.split("@data")[0] + "@data\n")
    assert len(ds) == 0
    assert len(ds.schema.attributes) == 2


def test_parse_arff_errors_carry_line_numbers():
    with pytest.raises(DataFormatError, match="line 7"):
        parse_arff(SMALL_ARFF.replace("5,?,good", "5,?,grate"))
    with pytest.raises(DataFormatError, match="line 7"):
        parse_arff(SMALL_ARFF.replace("5,?,good", "5,good"))
    with pytest.raises(DataFormatError):
        parse_arff("@relation x\n@attribute a numeric\n")  # no @data


def test_parse_arff_german(german):
    assert len(german) == 1000
    assert len(german.schema.attributes) == 20
    assert german.schema.class_names == ("good", "bad")


def test_arff_roundtrip(german):
    again = parse_arff(german.to_arff())
    assert again == german


def test_parse_csv_matches_arff():
    ds = parse_arff(SMALL_ARFF)
    csv_text = "5,?,good\n1,a,bad\n,b,good\n"
    from_csv = parse_csv(csv_text, ds.schema)
    assert from_csv == ds


def test_parse_csv_header_and_errors():
    schema = parse_arff(SMALL_ARFF).schema
    assert len(parse_csv("size,color,class\n1,a,good\n", schema, has_header=True)) == 1
    with pytest.raises(DataFormatError, match="line 1.*grate"):
        parse_csv("1,a,grate\n", schema)
    with pytest.raises(DataFormatError, match="non-numeric"):
        parse_csv("x,a,good\n", schema)
    with pytest.raises(DataFormatError, match="expected 3"):
        parse_csv("1,a\n", schema)


def test_csv_empty_numeric_field_is_missing():
    schema = parse_arff(SMALL_ARFF).schema
    ds = parse_csv(",a,good\n", schema)
    assert ds.instances[0].values == (None, 0)


def test_german_credit_schema():
    schema = german_credit_schema()
    assert len(schema.attributes) == 20
    assert schema.class_names == ("good", "bad")
    kinds = {a.name: a.is_nominal for a in schema.attributes}
    numeric = {name for name, nom in kinds.items() if not nom}
    # kinds recorded from the ARFF source file
    assert numeric == {"duration", "credit_amount", "installment_commitment",
                       "residence_since", "age", "existing_credits",
                       "num_dependents"}


def test_schema_matches_bundled_file(german):
    assert german.schema == german_credit_schema()


def test_class_counts(german):
    assert german.class_counts().tolist() == [700.0, 300.0]


def test_class_counts_empty_and_weighted():
    empty = make_dataset([None], [])
    assert empty.class_counts().tolist() == [0.0, 0.0]
    ds = make_dataset([None], [(1.0, 1)], weights=[2.0])
    assert ds.class_counts().tolist() == [0.0, 2.0]
    with_missing = make_dataset([None], [(1.0, None), (2.0, 0)])
    assert with_missing.class_counts().tolist() == [1.0, 0.0]


def test_stratified_folds_german(german):
    plan = stratified_folds(german, 5, seed=1)
    _, y, _ = german.matrix
    for fold in plan.folds:
        assert len(fold) == 200
        labels = y[list(fold)]
        assert (labels == 0).sum() == 140
        assert (labels == 1).sum() == 60


def test_stratified_folds_tiny():
    ds = make_dataset([None], [(1.0, 0), (2.0, 0), (3.0, 1), (4.0, 1)])
    plan = stratified_folds(ds, 2, seed=7)
    for fold in plan.folds:
        labels = {ds.instances[i].class_index for i in fold}
        assert labels == {0, 1}


def test_stratified_folds_deterministic(german):
    assert stratified_folds(german, 10, 3) == stratified_folds(german, 10, 3)
    assert stratified_folds(german, 10, 3) != stratified_folds(german, 10, 4)


def test_stratified_folds_errors(german):
    with pytest.raises(ValueError):
        stratified_folds(german, 1, 1)
    tiny = make_dataset([None], [(1.0, 0), (2.0, 1)])
    with pytest.raises(ValueError):
        stratified_folds(tiny, 3, 1)


@settings(max_examples=30, deadline=None)
@given(k=st.integers(2, 7), seed=st.integers(0, 1000),
       sizes=st.tuples(st.integers(4, 40), st.integers(4, 40)))
def test_fold_invariants_property(k, seed, sizes):
    rows = [(float(i), 0) for i in range(sizes[0])] + \
           [(float(i), 1) for i in range(sizes[1])]
    ds = make_dataset([None], rows)
    if k > len(ds):
        return
    plan = stratified_folds(ds, k, seed)
    all_idx = [i for fold in plan.folds for i in fold]
    assert sorted(all_idx) == list(range(len(ds)))  # disjoint + exhaustive
    lengths = [len(f) for f in plan.folds]
    assert max(lengths) - min(lengths) <= 1
    for label in (0, 1):
        per_fold = [sum(1 for i in f if ds.instances[i].class_index == label)
                    for f in plan.folds]
        assert max(per_fold) - min(per_fold) <= 1


def test_split_grow_prune_stratified():
    rows = [(float(i), 0) for i in range(630)] + [(float(i), 1) for i in range(270)]
    ds = make_dataset([None], rows)
    grow, prune = split_grow_prune(ds, 3, seed=1)
    assert len(prune) == 300 and len(grow) == 600
    assert prune.class_counts().tolist() == [210.0, 90.0]


def test_split_grow_prune_edges():
    ds = make_dataset([None], [(1.0, 0), (2.0, 0), (3.0, 1), (4.0, 1)])
    grow, prune = split_grow_prune(ds, 2, seed=1)
    assert len(grow) == 2 and len(prune) == 2
    tiny = make_dataset([None], [(1.0, 0), (2.0, 1), (3.0, 1)])
    with pytest.raises(ValueError):
        split_grow_prune(tiny, 5, seed=1)


def test_matrix_view():
    ds = make_dataset([None, 2], [(1.5, None, 0), (None, 1, None)])
    x, y, w = ds.matrix
    assert x[0, 0] == 1.5 and np.isnan(x[0, 1])
    assert np.isnan(x[1, 0]) and x[1, 1] == 1.0
    assert y.tolist() == [0, -1]
    assert w.tolist() == [1.0, 1.0]


def test_schema_validation():
    from credittrees import AttributeSpec, Schema
    a = AttributeSpec("a", ("x", "y"))
    with pytest.raises(ValueError, match="also listed"):
        Schema((a,), a)
    with pytest.raises(ValueError, match="must be nominal"):
        Schema((a,), AttributeSpec("class"))
    with pytest.raises(ValueError, match="duplicate categories"):
        AttributeSpec("b", ("x", "x"))
    with pytest.raises(ValueError, match="no categories"):
        AttributeSpec("b", ())
