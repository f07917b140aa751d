"""Dynamic link prediction evaluation toolkit."""

import json as _json

from ._dylp import (
    ConfigError,
    DylpError,
    DynamicNetwork,
    EmptyNetworkError,
    InsufficientHistoryError,
    IoError,
    RangeError,
    StructuralError,
    UndefinedMetricError,
    __version__,
    build_network,
    gmauc,
    load_network,
    max_f1,
    ndcg_at_k,
    pr_auc,
    precision_at_k,
    roc_auc,
    run_cli,
    save_network,
)
from . import _dylp

__all__ = [
    "ConfigError",
    "DylpError",
    "DynamicNetwork",
    "EmptyNetworkError",
    "InsufficientHistoryError",
    "IoError",
    "RangeError",
    "StructuralError",
    "UndefinedMetricError",
    "__version__",
    "build_network",
    "compare",
    "distances",
    "evaluate",
    "generate",
    "gmauc",
    "ingest",
    "load_network",
    "max_f1",
    "ndcg_at_k",
    "pr_auc",
    "precision_at_k",
    "roc_auc",
    "run_cli",
    "save_network",
    "summarize",
]


def _predictor(spec):
    if isinstance(spec, str):
        return {"kind": spec}
    return dict(spec)


def ingest(events, config=None):
    """Parse, bin and filter an event file into a DynamicNetwork."""
    return _dylp._ingest(str(events), _json.dumps(config or {}))


def summarize(network):
    """Per-step edge statistics with means over steps 2..T."""
    return _json.loads(_dylp._summarize(network))


def generate(config=None, **kwargs):
    """Synthetic block-model network with edge churn."""
    cfg = dict(config or {})
    cfg.update(kwargs)
    return _dylp._generate(_json.dumps(cfg))


def evaluate(network, predictor="ts_adj", k=None, threads=1):
    """Rolling one-step-forward evaluation of a single predictor."""
    return _json.loads(_dylp._evaluate(network, _json.dumps(_predictor(predictor)), k, threads))


def compare(network, predictors, k=None):
    """Evaluate several predictors, ranked by GMAUC."""
    specs = [_predictor(p) for p in predictors]
    return _json.loads(_dylp._compare(network, _json.dumps(specs), k))


def distances(network, d_max=6):
    """Edge formation stratified by geodesic distance on the past union graph."""
    return _json.loads(_dylp._distances(network, d_max))
