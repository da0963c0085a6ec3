"""Shared fixtures: corpus access plus session-wide caches so each
instance's pipeline is built and solved exactly once per family mode."""

from __future__ import annotations

import pytest

from gcmc.graph import cut_value
from gcmc.oracle import brute_force_opt, corpus, enumerate_feasible
from gcmc.pipeline import run_pipeline

CORPUS = corpus()
NAMES = [name for name, _ in CORPUS]
BY_NAME = dict(CORPUS)

# instance name -> vertex partition handed to the best-of-parts algorithm
PARTITION_CASES = [
    ("is-p5", [[0, 3], [1, 4], [2]]),
    ("is-grid23", [[0, 5], [1, 4], [2, 3]]),
    ("vc-c4", [[0, 2], [1, 3]]),
    ("vc-diamond", [[0], [1], [2], [3]]),
    ("ds-p4", [[0, 1], [2, 3]]),
    ("ds-star", [[0], [1], [2], [3]]),
]

_pipelines: dict = {}
_rounders: dict = {}
_exact: dict = {}
_opt: dict = {}
_feasible: dict = {}


def instance_for(name):
    return BY_NAME[name]


def pipeline_for(name, mode="reduced"):
    key = (name, mode)
    if key not in _pipelines:
        _pipelines[key] = run_pipeline(BY_NAME[name], family_mode=mode)
    return _pipelines[key]


def rounder_for(name, mode="reduced"):
    key = (name, mode)
    if key not in _rounders:
        _rounders[key] = pipeline_for(name, mode).rounder()
    return _rounders[key]


def exact_for(name, mode="reduced"):
    key = (name, mode)
    if key not in _exact:
        _exact[key] = rounder_for(name, mode).exact_expected_cut()
    return _exact[key]


def opt_for(name):
    if name not in _opt:
        _opt[name] = brute_force_opt(BY_NAME[name])
    return _opt[name]


def feasible_sets(name):
    if name not in _feasible:
        _feasible[name] = list(enumerate_feasible(BY_NAME[name]))
    return _feasible[name]


def small_names(max_nodes=7):
    """Corpus instances whose decomposition has at most `max_nodes` nodes."""
    return [
        name for name in NAMES
        if len(pipeline_for(name).td.nodes) <= max_nodes
    ]


def best_cut(name):
    S, opt = opt_for(name)
    inst = BY_NAME[name]
    assert abs(cut_value(inst.weights, S, inst.graph.n) - opt) < 1e-12
    return opt


@pytest.fixture(params=NAMES)
def corpus_name(request):
    return request.param
