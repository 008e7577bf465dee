"""Cost-aware decision-tree induction.

Thin wrapper around the C++ core. The main entry points:

    inst = treecost.prep_csv("data/iris.csv", label="class", seed=0)
    tree = treecost.induce(inst, tag="e-c45", tune=True)
    report = treecost.evaluate(tree, inst, split="test")
"""

from ._core import (
    Instance,
    Tree,
    approx_ratio_sweep,
    evaluate,
    expected_cost,
    expected_height,
    induce,
    load_instance,
    load_model,
    prep_csv,
    prune,
    submodularity_audit,
    tune_lambda,
)

__all__ = [
    "Instance",
    "Tree",
    "approx_ratio_sweep",
    "evaluate",
    "expected_cost",
    "expected_height",
    "induce",
    "load_instance",
    "load_model",
    "prep_csv",
    "prune",
    "submodularity_audit",
    "tune_lambda",
]
