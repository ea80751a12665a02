"""Trainable spectral heat-kernel network: stacked filter layers, softmax
cross-entropy, hand-rolled gradients, and full-batch gradient descent.

Each layer computes U diag(r) U^T H W with r the combined response of its
filter pair; an optional ReLU sits between layers (never after the last).
Gradients are exact for the computation graph, which keeps them auditable
against central finite differences.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .dynamics import LayerSpec
from .filters import (FilterSpec, combined_response, family_from_config,
                      spec_to_config, theta_vector)
from .spectral import SpectralDecomposition

__all__ = [
    "Network",
    "TrainConfig",
    "TrainResult",
    "Gradients",
    "TrainingDiverged",
    "build_network",
    "forward",
    "loss_and_grads",
    "accuracy",
    "train",
    "save_checkpoint",
    "load_checkpoint",
]


class TrainingDiverged(RuntimeError):
    """Loss left the finite range during training."""

    def __init__(self, epoch: int):
        super().__init__(f"training diverged at epoch {epoch} (non-finite loss)")
        self.epoch = epoch


@dataclass(eq=False)
class Network:
    """Ordered filter layers with shared activation and trainability flags.

    With tie_theta the layers reference the same gain vectors, so one update
    moves them all.
    """

    layers: list[LayerSpec]
    activation: str | None = "relu"
    train_theta: bool = True
    train_weight: bool = True
    tie_theta: bool = False

    def __post_init__(self):
        if self.activation not in (None, "relu"):
            raise ValueError(f"activation must be None or 'relu', got {self.activation!r}")

    def clone(self) -> "Network":
        """Deep copy preserving tie_theta array sharing."""
        shared_low = shared_high = None
        if self.tie_theta and self.layers:
            shared_low = np.array(theta_as_array(self.layers[0].spec_low))
            shared_high = np.array(theta_as_array(self.layers[0].spec_high))
        layers = []
        for layer in self.layers:
            if self.tie_theta:
                t_low, t_high = shared_low, shared_high
            else:
                t_low = np.array(theta_as_array(layer.spec_low))
                t_high = np.array(theta_as_array(layer.spec_high))
            layers.append(LayerSpec(
                spec_low=_with_theta(layer.spec_low, t_low),
                spec_high=_with_theta(layer.spec_high, t_high),
                weight=np.array(layer.weight)))
        return Network(layers=layers, activation=self.activation,
                       train_theta=self.train_theta, train_weight=self.train_weight,
                       tie_theta=self.tie_theta)


def theta_as_array(spec: FilterSpec) -> np.ndarray:
    if np.isscalar(spec.theta):
        raise ValueError("network filter specs must carry explicit theta vectors")
    return np.asarray(spec.theta)


def _with_theta(spec: FilterSpec, theta: np.ndarray) -> FilterSpec:
    return FilterSpec(family=spec.family, theta=theta, gamma=spec.gamma,
                      rescale_to_0_2=spec.rescale_to_0_2)


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float
    weight_decay: float = 0.0
    max_epochs: int = 200
    seed: int = 0
    patience: int = 0  # 0 disables early stopping

    def __post_init__(self):
        if self.learning_rate <= 0.0:
            raise ValueError("learning_rate must be positive")
        if self.weight_decay < 0.0:
            raise ValueError("weight_decay must be nonnegative")
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be >= 1")


def build_network(decomp: SpectralDecomposition, dims, *, families=None,
                  theta_low=None, theta_high=None, gamma_low: float = 1.0,
                  gamma_high: float = 1.0, activation: str | None = "relu",
                  seed: int = 0, train_theta: bool = True, train_weight: bool = True,
                  tie_theta: bool = False) -> Network:
    """Initialize a network for feature dims [d_in, hidden..., n_classes].

    Weights are uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] from the seeded
    generator; gains default to 1 (or given vectors, broadcast to all layers).
    """
    from .filters import heat_high, heat_low

    if len(dims) < 2:
        raise ValueError("dims needs at least input and output sizes")
    fam_low, fam_high = families if families is not None else (heat_low(), heat_high())
    rng = np.random.default_rng(seed)
    n = decomp.n
    base_low = np.ones(n) if theta_low is None else np.asarray(theta_low, dtype=float).copy()
    base_high = np.ones(n) if theta_high is None else np.asarray(theta_high, dtype=float).copy()
    layers = []
    for c_in, c_out in zip(dims[:-1], dims[1:]):
        bound = 1.0 / np.sqrt(c_in)
        weight = rng.uniform(-bound, bound, size=(c_in, c_out))
        if tie_theta:
            t_low, t_high = base_low, base_high
        else:
            t_low, t_high = base_low.copy(), base_high.copy()
        layers.append(LayerSpec(
            spec_low=FilterSpec(fam_low, theta=t_low, gamma=gamma_low),
            spec_high=FilterSpec(fam_high, theta=t_high, gamma=gamma_high),
            weight=weight))
    return Network(layers=layers, activation=activation, train_theta=train_theta,
                   train_weight=train_weight, tie_theta=tie_theta)


def forward(net: Network, decomp: SpectralDecomposition, x: np.ndarray) -> np.ndarray:
    """Logits for node features x (softmax is applied by the loss)."""
    h = np.asarray(x, dtype=float)
    for idx, layer in enumerate(net.layers):
        h = _layer_forward(net, decomp, layer, h, last=idx == len(net.layers) - 1)[0]
    return h


def _layer_forward(net, decomp, layer: LayerSpec, h, last: bool):
    if h.shape[1] != layer.weight.shape[0]:
        raise ValueError(f"feature dim {h.shape[1]} does not match weight "
                         f"fan-in {layer.weight.shape[0]}")
    r = combined_response(layer.spec_low, layer.spec_high, decomp).values
    t = h @ layer.weight
    coeffs = decomp.eigenvectors.T @ t
    z = decomp.eigenvectors @ (r[:, None] * coeffs)
    out = np.maximum(z, 0.0) if (net.activation == "relu" and not last) else z
    return out, (h, t, coeffs, z, r)


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


@dataclass(eq=False)
class Gradients:
    theta_low: list
    theta_high: list
    weight: list


def loss_and_grads(net: Network, decomp: SpectralDecomposition, x: np.ndarray,
                   labels: np.ndarray, mask: np.ndarray, *, weight_decay: float = 0.0):
    """Masked mean cross-entropy (plus weight decay on W) and exact gradients.

    Returns (loss, Gradients) with one entry per layer. Rescaled filter specs
    cannot be differentiated through, so train_theta with rescale is an error.
    """
    labels = np.asarray(labels)
    mask = np.asarray(mask, dtype=bool)
    m = int(mask.sum())
    if m == 0:
        raise ValueError("mask selects no nodes")
    n_classes = net.layers[-1].weight.shape[1]
    if labels[mask].min() < 0 or labels[mask].max() >= n_classes:
        raise ValueError(f"labels must lie in [0, {n_classes})")
    if net.train_theta:
        for layer in net.layers:
            if layer.spec_low.rescale_to_0_2 or layer.spec_high.rescale_to_0_2:
                raise ValueError("cannot train gains through a rescaled response")
    h = np.asarray(x, dtype=float)
    caches = []
    for idx, layer in enumerate(net.layers):
        h, cache = _layer_forward(net, decomp, layer, h, last=idx == len(net.layers) - 1)
        caches.append(cache)
    logits = h
    probs = _softmax(logits)
    picked = probs[mask, labels[mask]]
    loss = float(-np.mean(np.log(np.maximum(picked, 1e-300))))
    for layer in net.layers:
        loss += weight_decay * float(np.sum(layer.weight ** 2))

    d_out = probs.copy()
    d_out[mask, labels[mask]] -= 1.0
    d_out /= m
    d_out[~mask] = 0.0

    grads = Gradients(theta_low=[], theta_high=[], weight=[])
    u = decomp.eigenvectors
    lam = decomp.eigenvalues
    for idx in range(len(net.layers) - 1, -1, -1):
        layer = net.layers[idx]
        h_in, t, coeffs, z, r = caches[idx]
        last = idx == len(net.layers) - 1
        dz = d_out if (last or net.activation != "relu") else d_out * (z > 0.0)
        dz_coeffs = u.T @ dz
        dr = np.sum(dz_coeffs * coeffs, axis=1)
        g_low = layer.spec_low.gamma * layer.spec_low.family(lam)
        g_high = layer.spec_high.gamma * layer.spec_high.family(lam)
        grads.theta_low.append(dr * g_low)
        grads.theta_high.append(dr * g_high)
        dt = u @ (r[:, None] * dz_coeffs)
        grads.weight.append(h_in.T @ dt + 2.0 * weight_decay * layer.weight)
        d_out = dt @ layer.weight.T
    grads.theta_low.reverse()
    grads.theta_high.reverse()
    grads.weight.reverse()
    return loss, grads


def accuracy(net: Network, decomp: SpectralDecomposition, x: np.ndarray,
             labels: np.ndarray, mask: np.ndarray) -> float:
    mask = np.asarray(mask, dtype=bool)
    preds = forward(net, decomp, x).argmax(axis=1)
    return float(np.mean(preds[mask] == np.asarray(labels)[mask]))


@dataclass(eq=False)
class TrainResult:
    network: Network
    trace: list
    test_accuracy: float
    best_epoch: int


def train(net: Network, decomp: SpectralDecomposition, x: np.ndarray,
          labels: np.ndarray, split, cfg: TrainConfig) -> TrainResult:
    """Full-batch gradient descent; reports test accuracy at the best-val epoch.

    trace rows are (epoch, train_loss, val_accuracy). Raises TrainingDiverged
    on a non-finite loss. Deterministic given the network and config.
    """
    net = net.clone()
    n = decomp.n
    train_mask = _index_mask(split.train, n)
    val_mask = _index_mask(split.val, n)
    test_mask = _index_mask(split.test, n)
    best = {"val": -1.0, "epoch": -1, "net": net.clone()}
    trace = []
    stale = 0
    for epoch in range(cfg.max_epochs):
        loss, grads = loss_and_grads(net, decomp, x, labels, train_mask,
                                     weight_decay=cfg.weight_decay)
        if not np.isfinite(loss):
            raise TrainingDiverged(epoch)
        _apply_updates(net, grads, cfg.learning_rate)
        val_acc = accuracy(net, decomp, x, labels, val_mask)
        trace.append((epoch, loss, val_acc))
        if val_acc > best["val"]:
            best = {"val": val_acc, "epoch": epoch, "net": net.clone()}
            stale = 0
        else:
            stale += 1
            if cfg.patience and stale >= cfg.patience:
                break
    test_acc = accuracy(best["net"], decomp, x, labels, test_mask)
    return TrainResult(network=best["net"], trace=trace, test_accuracy=test_acc,
                       best_epoch=best["epoch"])


def _apply_updates(net: Network, grads: Gradients, lr: float) -> None:
    if net.train_weight:
        for layer, g in zip(net.layers, grads.weight):
            layer.weight[...] -= lr * g
    if net.train_theta:
        if net.tie_theta:
            shared_low = theta_as_array(net.layers[0].spec_low)
            shared_high = theta_as_array(net.layers[0].spec_high)
            shared_low -= lr * sum(grads.theta_low)
            shared_high -= lr * sum(grads.theta_high)
        else:
            for layer, g_low, g_high in zip(net.layers, grads.theta_low, grads.theta_high):
                theta_as_array(layer.spec_low)[...] -= lr * g_low
                theta_as_array(layer.spec_high)[...] -= lr * g_high


def _index_mask(indices, n: int) -> np.ndarray:
    mask = np.zeros(n, dtype=bool)
    mask[np.asarray(indices, dtype=int)] = True
    return mask


CHECKPOINT_MAGIC = "hkgnn-checkpoint"


def save_checkpoint(path, net: Network) -> None:
    """JSON header (structure, hyperparameters) + row-major float64 payload."""
    tensors = []
    header_layers = []
    for layer in net.layers:
        low_cfg = spec_to_config(layer.spec_low)
        high_cfg = spec_to_config(layer.spec_high)
        low_cfg.pop("theta")
        high_cfg.pop("theta")
        header_layers.append({
            "spec_low": low_cfg,
            "spec_high": high_cfg,
            "theta_shape": [len(theta_as_array(layer.spec_low))],
            "weight_shape": list(layer.weight.shape),
        })
        tensors.extend([theta_as_array(layer.spec_low), theta_as_array(layer.spec_high),
                        layer.weight])
    header = {
        "magic": CHECKPOINT_MAGIC,
        "version": 1,
        "activation": net.activation,
        "train_theta": net.train_theta,
        "train_weight": net.train_weight,
        "tie_theta": net.tie_theta,
        "layers": header_layers,
    }
    payload = b"".join(np.ascontiguousarray(t, dtype="<f8").tobytes() for t in tensors)
    with open(path, "wb") as fh:
        fh.write(json.dumps(header, sort_keys=True).encode("utf-8"))
        fh.write(b"\n")
        fh.write(payload)


def load_checkpoint(path) -> Network:
    with open(path, "rb") as fh:
        header_line = fh.readline()
        payload = fh.read()
    header = json.loads(header_line.decode("utf-8"))
    if header.get("magic") != CHECKPOINT_MAGIC:
        raise ValueError(f"{path} is not a checkpoint file")
    layers = []
    offset = 0

    def take(shape):
        nonlocal offset
        count = int(np.prod(shape))
        arr = np.frombuffer(payload, dtype="<f8", count=count, offset=offset)
        offset += count * 8
        return arr.reshape(shape).astype(float)

    for meta in header["layers"]:
        n = meta["theta_shape"][0]
        t_low = take([n])
        t_high = take([n])
        weight = take(meta["weight_shape"])
        low_cfg = dict(meta["spec_low"])
        high_cfg = dict(meta["spec_high"])
        spec_low = FilterSpec(family_from_config(low_cfg["family"]), theta=t_low,
                              gamma=low_cfg["gamma"], rescale_to_0_2=low_cfg["rescale"])
        spec_high = FilterSpec(family_from_config(high_cfg["family"]), theta=t_high,
                               gamma=high_cfg["gamma"], rescale_to_0_2=high_cfg["rescale"])
        layers.append(LayerSpec(spec_low=spec_low, spec_high=spec_high, weight=weight))
    return Network(layers=layers, activation=header["activation"],
                   train_theta=header["train_theta"], train_weight=header["train_weight"],
                   tie_theta=header["tie_theta"])
