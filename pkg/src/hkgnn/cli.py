"""Config-driven experiment commands: spectrum, dynamics, osq, train,
tradeoff, and generate.

Every command is a pure function of (config, input files): outputs are CSV
and JSON with fixed ordering and 17-significant-digit floats, so reruns are
byte-identical. Exit codes: 0 success, 1 validation error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, fileio
from .dynamics import LayerSpec, simulate
from .filters import FilterSpec, combined_response, spec_from_config, theta_vector
from .graphs import build_graph, homophily_level
from .model import TrainConfig, TrainingDiverged, build_network, train
from .presets import PRESET_NAMES, preset_filter_pair
from .spectral import decompose_graph, zero_multiplicity
from .squashing import (DominanceError, build_sensitivity, bound_matrix,
                        energy_tradeoff, osq_matrix)
from .synth import CsbmParams, csbm_generate, load_dataset, make_split, save_dataset

__all__ = ["main", "ConfigError", "run_command"]

DEFAULT_SPLIT_RATIOS = (0.6, 0.2, 0.2)


class ConfigError(ValueError):
    """Configuration rejected before any computation; message names the key."""


# ---------------------------------------------------------------------------
# validation helpers

def _require(cfg: dict, path: str, keys: dict) -> None:
    """keys maps name -> (required, checker). Unknown keys are rejected."""
    unknown = set(cfg) - set(keys)
    if unknown:
        raise ConfigError(f"{path}: unknown key(s) {sorted(unknown)}")
    for name, (required, checker) in keys.items():
        if name not in cfg:
            if required:
                raise ConfigError(f"{path}.{name}: missing required key")
            continue
        checker(cfg[name], f"{path}.{name}")


def _check_type(kinds, extra=None):
    def check(value, path):
        if isinstance(value, bool) and bool not in (kinds if isinstance(kinds, tuple) else (kinds,)):
            raise ConfigError(f"{path}: expected {kinds}, got a boolean")
        if not isinstance(value, kinds):
            raise ConfigError(f"{path}: expected {kinds}, got {type(value).__name__}")
        if extra:
            extra(value, path)
    return check


def _positive(value, path):
    if value <= 0:
        raise ConfigError(f"{path}: must be positive, got {value}")


def _nonnegative(value, path):
    if value < 0:
        raise ConfigError(f"{path}: must be nonnegative, got {value}")


def _probability(value, path):
    if not 0.0 <= value <= 1.0:
        raise ConfigError(f"{path}: must lie in [0, 1], got {value}")


_num = (int, float)


def _check_filter(cfg, path):
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: expected a filter object")
    _require(cfg, path, {
        "family": (True, _check_family),
        "theta": (False, _check_theta),
        "gamma": (False, _check_type(_num)),
        "rescale": (False, _check_type(bool)),
    })
    try:
        spec_from_config(cfg)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _check_family(value, path):
    if isinstance(value, str):
        return
    if isinstance(value, dict):
        allowed = {"family", "value", "coeffs"}
        unknown = set(value) - allowed
        if unknown:
            raise ConfigError(f"{path}: unknown key(s) {sorted(unknown)}")
        if "family" not in value:
            raise ConfigError(f"{path}.family: missing required key")
        return
    raise ConfigError(f"{path}: expected a family tag or object")


def _check_theta(value, path):
    if isinstance(value, bool):
        raise ConfigError(f"{path}: expected number or list, got a boolean")
    if isinstance(value, _num):
        return
    if isinstance(value, list) and all(isinstance(v, _num) and not isinstance(v, bool) for v in value):
        return
    raise ConfigError(f"{path}: expected number or list of numbers")


_CSBM_KEYS = {
    "n_nodes": (True, _check_type(int, _positive)),
    "n_classes": (True, _check_type(int, _positive)),
    "p_intra": (True, _check_type(_num, _probability)),
    "p_inter": (True, _check_type(_num, _probability)),
    "feature_dim": (True, _check_type(int, _positive)),
    "signal": (True, _check_type(_num, _nonnegative)),
    "noise_sd": (True, _check_type(_num, _positive)),
    "seed": (True, _check_type(int)),
}


def _check_dataset(cfg, path):
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: expected a dataset object")
    kind = cfg.get("type")
    if kind == "csbm":
        keys = {"type": (True, _check_type(str))}
        keys.update(_CSBM_KEYS)
        _require(cfg, path, keys)
    elif kind == "files":
        _require(cfg, path, {
            "type": (True, _check_type(str)),
            "edges": (True, _check_type(str)),
            "features": (False, _check_type(str)),
            "labels": (False, _check_type(str)),
            "n_nodes": (False, _check_type(int, _positive)),
        })
        if not (("labels" in cfg) or ("features" in cfg) or ("n_nodes" in cfg)):
            raise ConfigError(f"{path}: files dataset needs labels, features, or n_nodes "
                              "to fix the node count")
    else:
        raise ConfigError(f"{path}.type: expected 'csbm' or 'files', got {kind!r}")


def _check_state(cfg, path):
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: expected a state object")
    source = cfg.get("source")
    if source == "gaussian":
        _require(cfg, path, {
            "source": (True, _check_type(str)),
            "dim": (True, _check_type(int, _positive)),
            "seed": (True, _check_type(int)),
        })
    elif source == "features":
        _require(cfg, path, {"source": (True, _check_type(str))})
    else:
        raise ConfigError(f"{path}.source: expected 'gaussian' or 'features', got {source!r}")


def _check_runs(value, path):
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{path}: expected a nonempty list of run objects")
    names = set()
    for i, run in enumerate(value):
        rpath = f"{path}[{i}]"
        if not isinstance(run, dict):
            raise ConfigError(f"{rpath}: expected a run object")
        if "preset" in run:
            _require(run, rpath, {
                "name": (True, _check_type(str)),
                "preset": (True, _check_type(str)),
            })
            if run["preset"] not in PRESET_NAMES:
                raise ConfigError(f"{rpath}.preset: unknown preset {run['preset']!r}; "
                                  f"expected one of {list(PRESET_NAMES)}")
        else:
            _require(run, rpath, {
                "name": (True, _check_type(str)),
                "filter_low": (True, _check_filter),
                "filter_high": (True, _check_filter),
                "zeta": (False, _check_type(_num)),
            })
        if run["name"] in names:
            raise ConfigError(f"{rpath}.name: duplicate run name {run['name']!r}")
        names.add(run["name"])


def _check_pair(cfg, path):
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: expected a filter-pair object")
    _require(cfg, path, {
        "filter_low": (True, _check_filter),
        "filter_high": (True, _check_filter),
    })


def _check_model(cfg, path):
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: expected a model object")
    _require(cfg, path, {
        "hidden_dims": (True, lambda v, p: _check_int_list(v, p)),
        "activation": (False, lambda v, p: _check_choice(v, p, ("relu", "none"))),
        "filter_low": (False, _check_filter),
        "filter_high": (False, _check_filter),
        "preset": (False, lambda v, p: _check_choice(v, p, PRESET_NAMES)),
        "train_theta": (False, _check_type(bool)),
        "train_weight": (False, _check_type(bool)),
        "tie_theta": (False, _check_type(bool)),
    })
    has_filters = "filter_low" in cfg or "filter_high" in cfg
    if "preset" in cfg and has_filters:
        raise ConfigError(f"{path}: give either a preset or explicit filters, not both")
    if has_filters and not ("filter_low" in cfg and "filter_high" in cfg):
        raise ConfigError(f"{path}: explicit filters need both filter_low and filter_high")


def _check_int_list(value, path):
    if not isinstance(value, list) or not all(
            isinstance(v, int) and not isinstance(v, bool) and v > 0 for v in value):
        raise ConfigError(f"{path}: expected a list of positive integers")


def _check_choice(value, path, choices):
    if value not in choices:
        raise ConfigError(f"{path}: expected one of {list(choices)}, got {value!r}")


def _check_train_block(cfg, path):
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: expected a train object")
    _require(cfg, path, {
        "learning_rate": (True, _check_type(_num, _positive)),
        "weight_decay": (False, _check_type(_num, _nonnegative)),
        "max_epochs": (False, _check_type(int, _positive)),
        "patience": (False, _check_type(int, _nonnegative)),
        "seeds": (False, _check_seeds),
        "seed_base": (False, _check_type(int)),
    })


def _check_seeds(value, path):
    if isinstance(value, bool):
        raise ConfigError(f"{path}: expected int or list of ints")
    if isinstance(value, int):
        if value < 1:
            raise ConfigError(f"{path}: seed count must be >= 1")
        return
    if isinstance(value, list) and value and all(
            isinstance(v, int) and not isinstance(v, bool) for v in value):
        return
    raise ConfigError(f"{path}: expected int or nonempty list of ints")


def _check_split(cfg, path):
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: expected a split object")
    _require(cfg, path, {"ratios": (True, lambda v, p: _check_ratios(v, p))})


def _check_ratios(value, path):
    if (not isinstance(value, list) or len(value) != 3
            or not all(isinstance(v, _num) and not isinstance(v, bool) and v > 0 for v in value)):
        raise ConfigError(f"{path}: expected three positive ratios")
    if sum(value) > 1.0 + 1e-12:
        raise ConfigError(f"{path}: ratios sum to {sum(value):g} > 1")


_SCHEMAS = {
    "spectrum": {"dataset": (True, _check_dataset)},
    "dynamics": {
        "dataset": (True, _check_dataset),
        "steps": (True, _check_type(int, _positive)),
        "state": (True, _check_state),
        "runs": (True, _check_runs),
    },
    "osq": {
        "dataset": (True, _check_dataset),
        "filter_low": (True, _check_filter),
        "filter_high": (True, _check_filter),
        "w": (True, _check_type(_num, _nonnegative)),
        "ell": (True, _check_type(int, _positive)),
        "pairs": (False, lambda v, p: _check_pairs_list(v, p)),
    },
    "train": {
        "dataset": (True, _check_dataset),
        "model": (True, _check_model),
        "train": (True, _check_train_block),
        "zeta_values": (False, lambda v, p: _check_num_list(v, p)),
        "split": (False, _check_split),
    },
    "tradeoff": {
        "dataset": (True, _check_dataset),
        "pair1": (True, _check_pair),
        "pair2": (True, _check_pair),
        "state": (True, _check_state),
        "w": (False, _check_type(_num, _nonnegative)),
        "ell": (False, _check_type(int, _positive)),
    },
    "generate": {"csbm": (True, lambda v, p: _check_csbm(v, p))},
}


def _check_csbm(cfg, path):
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: expected a csbm object")
    _require(cfg, path, _CSBM_KEYS)


def _check_num_list(value, path):
    if (not isinstance(value, list) or not value
            or not all(isinstance(v, _num) and not isinstance(v, bool) for v in value)):
        raise ConfigError(f"{path}: expected a nonempty list of numbers")


def _check_pairs_list(value, path):
    if not isinstance(value, list):
        raise ConfigError(f"{path}: expected a list of [v, u] pairs")
    for i, pair in enumerate(value):
        if (not isinstance(pair, list) or len(pair) != 2
                or not all(isinstance(v, int) and not isinstance(v, bool) for v in pair)):
            raise ConfigError(f"{path}[{i}]: expected an integer pair [v, u]")


def validate_config(command: str, cfg) -> None:
    if command not in _SCHEMAS:
        raise ConfigError(f"unknown command {command!r}")
    if not isinstance(cfg, dict):
        raise ConfigError("config: expected a JSON object at top level")
    _require(cfg, "config", _SCHEMAS[command])


def apply_seed_override(cfg, seed: int):
    """Replace every seed-bearing field (dataset.seed, state.seed, train.seed_base)."""
    def walk(node):
        if isinstance(node, dict):
            for key in ("seed", "seed_base"):
                if key in node and isinstance(node[key], int):
                    node[key] = seed
            for value in node.values():
                walk(value)
        elif isinstance(node, list):
            for value in node:
                walk(value)
    walk(cfg)
    return cfg


# ---------------------------------------------------------------------------
# shared loading

def _load_dataset_block(cfg):
    """Returns (graph, features-or-None, labels-or-None)."""
    if cfg["type"] == "csbm":
        params = CsbmParams(**{k: cfg[k] for k in _CSBM_KEYS})
        return csbm_generate(params)
    edges_path = cfg["edges"]
    if "labels" in cfg and "features" in cfg:
        return load_dataset(edges_path, cfg["features"], cfg["labels"])
    labels = fileio.read_label_file(cfg["labels"]) if "labels" in cfg else None
    features = fileio.read_feature_file(cfg["features"]) if "features" in cfg else None
    if labels is not None:
        n = labels.shape[0]
    elif features is not None:
        n = features.shape[0]
    else:
        n = cfg["n_nodes"]
    if features is not None and features.shape[0] != n:
        raise ConfigError(f"dataset: feature rows ({features.shape[0]}) do not match "
                          f"node count ({n})")
    graph = build_graph(n, fileio.read_edge_file(edges_path), labels=labels)
    return graph, features, labels


def _state_matrix(cfg, features, n):
    if cfg["source"] == "features":
        if features is None:
            raise ConfigError("state.source: 'features' requires a dataset with features")
        return np.asarray(features, dtype=float)
    rng = np.random.default_rng(cfg["seed"])
    return rng.standard_normal((n, cfg["dim"]))


def _filter_pair_for_run(run, decomp):
    if "preset" in run:
        return preset_filter_pair(run["preset"], decomp)
    low = spec_from_config(run["filter_low"])
    high = spec_from_config(run["filter_high"])
    if "zeta" in run:
        theta = theta_vector(high, decomp.n) * float(run["zeta"])
        high = FilterSpec(high.family, theta=theta, gamma=high.gamma,
                          rescale_to_0_2=high.rescale_to_0_2)
    return low, high


def _write_provenance(out: Path, command: str, cfg) -> None:
    fileio.write_json(out / "provenance.json", {
        "command": command,
        "config_hash": fileio.config_hash(cfg),
        "version": __version__,
    })


# ---------------------------------------------------------------------------
# commands

def cmd_spectrum(cfg, out: Path) -> None:
    graph, _, _ = _load_dataset_block(cfg["dataset"])
    decomp = decompose_graph(graph)
    fileio.write_csv(out / "eigenvalues.csv", ["index", "lambda"],
                     [(i, lam) for i, lam in enumerate(decomp.eigenvalues)])
    try:
        hom = homophily_level(graph)
    except Exception:
        hom = None
    fileio.write_json(out / "meta.json", {
        "n": graph.n_nodes,
        "k": graph.k_components,
        "rho": decomp.rho,
        "homophily": hom,
    })


def cmd_dynamics(cfg, out: Path) -> None:
    graph, features, _ = _load_dataset_block(cfg["dataset"])
    decomp = decompose_graph(graph)
    state = _state_matrix(cfg["state"], features, graph.n_nodes)
    steps = cfg["steps"]
    k = zero_multiplicity(decomp)
    for run in cfg["runs"]:
        low, high = _filter_pair_for_run(run, decomp)
        layer = LayerSpec(low, high, np.eye(state.shape[1]))
        report = simulate(layer, decomp, state, steps)
        name = run["name"]
        fileio.write_csv(out / f"dynamics_{name}.csv", ["step", "energy", "rayleigh"],
                         [(t, report.energy[t], report.rayleigh[t])
                          for t in range(steps + 1)])
        response = combined_response(low, high, decomp).values
        nonzero = decomp.eigenvalues > 1e-9
        fileio.write_json(out / f"dynamics_{name}.json", {
            "name": name,
            "preset": run.get("preset"),
            "verdict": report.verdict.value,
            "dominant_frequency": report.dominant_frequency,
            "rho": decomp.rho,
            "steps": steps,
            "first_k_zero": bool(np.all(np.abs(response[:k]) <= 1e-12)),
            "response_below_lambda": bool(np.all(
                response[nonzero] <= decomp.eigenvalues[nonzero] + 1e-9)),
            "max_response": float(np.max(np.abs(response))),
        })


def _osq_summary(report, w, ell):
    bounds = bound_matrix(report, w, ell)
    osq = osq_matrix(report, w, ell)
    n = bounds.shape[0]
    off = ~np.eye(n, dtype=bool)
    reachable = off & np.isfinite(osq)
    summary = {
        "n_pairs": int(off.sum()),
        "n_unreachable": int(off.sum() - reachable.sum()),
        "negative_s_entries": report.has_negative_entries,
    }
    if reachable.any():
        summary.update({
            "bound_min": float(bounds[reachable].min()),
            "bound_mean": float(bounds[reachable].mean()),
            "osq_min": float(osq[reachable].min()),
            "osq_mean": float(osq[reachable].mean()),
        })
    else:
        summary.update({"bound_min": None, "bound_mean": None,
                        "osq_min": None, "osq_mean": None})
    return summary


def cmd_osq(cfg, out: Path) -> None:
    graph, _, _ = _load_dataset_block(cfg["dataset"])
    decomp = decompose_graph(graph)
    low = spec_from_config(cfg["filter_low"])
    high = spec_from_config(cfg["filter_high"])
    report = build_sensitivity(low, high, decomp)
    w, ell = float(cfg["w"]), cfg["ell"]
    bounds = bound_matrix(report, w, ell)
    osq = osq_matrix(report, w, ell)
    n = graph.n_nodes
    if "pairs" in cfg:
        pairs = []
        for v, u in cfg["pairs"]:
            if not (0 <= v < n and 0 <= u < n):
                raise ConfigError(f"pairs: node pair [{v}, {u}] out of range [0, {n})")
            pairs.append((v, u))
    else:
        pairs = [(v, u) for v in range(n) for u in range(n)]
    fileio.write_csv(out / "osq_pairs.csv", ["v", "u", "bound", "osq"],
                     [(v, u, bounds[v, u], osq[v, u]) for v, u in pairs])
    fileio.write_json(out / "osq_summary.json", _osq_summary(report, w, ell))


def _resolve_seeds(train_cfg):
    seeds = train_cfg.get("seeds", 10)
    if isinstance(seeds, list):
        return list(seeds)
    base = train_cfg.get("seed_base", 0)
    return list(range(base, base + seeds))


def _train_once(graph, decomp, features, labels, model_cfg, train_cfg, ratios, seed,
                zeta=None):
    n = graph.n_nodes
    split = make_split(n, ratios, seed)
    dims = [features.shape[1]] + list(model_cfg["hidden_dims"]) + [int(labels.max()) + 1]
    activation = None if model_cfg.get("activation", "relu") == "none" else "relu"
    kwargs = {}
    if "preset" in model_cfg:
        low, high = preset_filter_pair(model_cfg["preset"], decomp, unit_gain=True)
        kwargs.update(families=(low.family, high.family),
                      theta_low=theta_vector(low, decomp.n),
                      theta_high=theta_vector(high, decomp.n),
                      gamma_low=low.gamma, gamma_high=high.gamma)
    elif "filter_low" in model_cfg:
        low = spec_from_config(model_cfg["filter_low"])
        high = spec_from_config(model_cfg["filter_high"])
        kwargs.update(families=(low.family, high.family),
                      theta_low=theta_vector(low, decomp.n),
                      theta_high=theta_vector(high, decomp.n),
                      gamma_low=low.gamma, gamma_high=high.gamma)
    if zeta is not None:
        kwargs["theta_high"] = kwargs.get("theta_high", np.ones(decomp.n)) * zeta
    net = build_network(
        decomp, dims, activation=activation, seed=seed,
        train_theta=model_cfg.get("train_theta", True),
        train_weight=model_cfg.get("train_weight", True),
        tie_theta=model_cfg.get("tie_theta", False), **kwargs)
    cfg = TrainConfig(
        learning_rate=float(train_cfg["learning_rate"]),
        weight_decay=float(train_cfg.get("weight_decay", 0.0)),
        max_epochs=train_cfg.get("max_epochs", 200),
        seed=seed,
        patience=train_cfg.get("patience", 0))
    return train(net, decomp, features, labels, split, cfg)


def cmd_train(cfg, out: Path) -> None:
    graph, features, labels = _load_dataset_block(cfg["dataset"])
    if features is None or labels is None:
        raise ConfigError("dataset: training requires both features and labels")
    decomp = decompose_graph(graph)
    ratios = tuple(cfg.get("split", {}).get("ratios", DEFAULT_SPLIT_RATIOS))
    seeds = _resolve_seeds(cfg["train"])
    zeta_values = cfg.get("zeta_values")
    sweep = []
    for zeta in (zeta_values if zeta_values is not None else [None]):
        accs, failures = [], []
        for seed in seeds:
            tag = f"_zeta{zeta:g}" if zeta is not None else ""
            try:
                result = _train_once(graph, decomp, features, labels, cfg["model"],
                                     cfg["train"], ratios, seed, zeta)
            except TrainingDiverged as exc:
                failures.append({"seed": seed, "epoch": exc.epoch})
                fileio.write_json(out / f"train{tag}_seed{seed}.json",
                                  {"seed": seed, "status": "diverged", "epoch": exc.epoch})
                continue
            fileio.write_csv(out / f"train{tag}_seed{seed}.csv",
                             ["epoch", "train_loss", "val_accuracy"], result.trace)
            accs.append(result.test_accuracy)
        aggregate = {
            "seeds": seeds,
            "zeta": zeta,
            "test_accuracies": accs,
            "mean_test_accuracy": float(np.mean(accs)) if accs else None,
            "sd_test_accuracy": float(np.std(accs)) if accs else None,
            "failures": failures,
        }
        sweep.append(aggregate)
    if zeta_values is None:
        fileio.write_json(out / "train_aggregate.json", sweep[0])
    else:
        for agg in sweep:
            fileio.write_json(out / f"train_aggregate_zeta{agg['zeta']:g}.json", agg)
        fileio.write_json(out / "train_sweep.json", {"sweep": sweep})


def cmd_tradeoff(cfg, out: Path) -> int:
    graph, features, _ = _load_dataset_block(cfg["dataset"])
    decomp = decompose_graph(graph)
    state = _state_matrix(cfg["state"], features, graph.n_nodes)
    pair1 = (spec_from_config(cfg["pair1"]["filter_low"]),
             spec_from_config(cfg["pair1"]["filter_high"]))
    pair2 = (spec_from_config(cfg["pair2"]["filter_low"]),
             spec_from_config(cfg["pair2"]["filter_high"]))
    w = float(cfg.get("w", 1.0))
    ell = cfg.get("ell", 1)
    try:
        result = energy_tradeoff(pair1, pair2, decomp, state, np.eye(state.shape[1]))
    except DominanceError as exc:
        fileio.write_json(out / "tradeoff.json", {
            "status": "refused",
            "violating_index": exc.index,
            "message": str(exc),
        })
        return 1
    fileio.write_json(out / "tradeoff.json", {
        "status": "ok",
        "passed": result.passed,
        "energy1": result.energy1,
        "energy2": result.energy2,
        "osq_summary1": _osq_summary(build_sensitivity(pair1[0], pair1[1], decomp), w, ell),
        "osq_summary2": _osq_summary(build_sensitivity(pair2[0], pair2[1], decomp), w, ell),
    })
    return 0


def cmd_generate(cfg, out: Path) -> None:
    params = CsbmParams(**{k: cfg["csbm"][k] for k in _CSBM_KEYS})
    graph, features, labels = csbm_generate(params)
    save_dataset(out, graph, features, labels)
    try:
        hom = homophily_level(graph)
    except Exception:
        hom = None
    fileio.write_json(out / "dataset_meta.json", {
        "n": graph.n_nodes,
        "n_edges": graph.n_edges,
        "k": graph.k_components,
        "homophily": hom,
        "params": {k: cfg["csbm"][k] for k in _CSBM_KEYS},
    })


def run_command(command: str, cfg, out) -> int:
    """Validate, execute, and write provenance; returns the exit code."""
    validate_config(command, cfg)
    out = fileio.ensure_dir(out)
    code = 0
    if command == "spectrum":
        cmd_spectrum(cfg, out)
    elif command == "dynamics":
        cmd_dynamics(cfg, out)
    elif command == "osq":
        cmd_osq(cfg, out)
    elif command == "train":
        cmd_train(cfg, out)
    elif command == "tradeoff":
        code = cmd_tradeoff(cfg, out)
    elif command == "generate":
        cmd_generate(cfg, out)
    _write_provenance(out, command, cfg)
    return code


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="hkgnn",
        description="Heat-kernel spectral graph network experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("spectrum", "export eigenvalues and graph metadata"),
        ("dynamics", "simulate energy dynamics for filter pairs or presets"),
        ("osq", "export sensitivity bounds and over-squashing scores"),
        ("train", "train networks over seeds, optionally sweeping zeta"),
        ("tradeoff", "compare one-step energies of a dominated filter pair"),
        ("generate", "write a synthetic dataset to disk"),
    ]:
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", required=True, help="path to the JSON config")
        cmd.add_argument("--out", required=True, help="output directory")
        cmd.add_argument("--seed-override", type=int, default=None,
                         help="replace every seed field in the config")
    args = parser.parse_args(argv)
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except FileNotFoundError:
        print(f"error: config file not found: {args.config}", file=sys.stderr)
        return 1
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON in {args.config}: {exc}", file=sys.stderr)
        return 1
    if args.seed_override is not None:
        cfg = apply_seed_override(cfg, args.seed_override)
    try:
        return run_command(args.command, cfg, args.out)
    except (ConfigError, fileio.MalformedLineError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # runtime failure
        print(f"runtime failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
