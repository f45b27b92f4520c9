"""
Training loop shared by the learned measures.

All networks of a measure are optimized as one flat parameter vector by one
optimizer. Full batch is the default; a batch size splits pairs (or rows,
for the classifier) into shuffled minibatches, which only Adam and RMSProp
accept.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from core.errors import ConfigError
from core.log import RunLogger, TrainingReporter
from data.dataset import Dataset
from data.pairs import SAMPLED, PairMode, PairSet, build_pairs
from measures.base import SimilarityMeasure
from nn.network import Network
from optim import Optimizer, make_optimizer


@dataclass
class TrainingHistory:
    measure: str
    epochs: int
    pair_mode: Optional[str] = None
    pairs_per_epoch: int = 0
    train_loss: List[float] = field(default_factory=list)
    val_epochs: List[int] = field(default_factory=list)
    val_loss: List[float] = field(default_factory=list)

    @property
    def evaluations(self) -> int:
        """Pair (or row) evaluations spent over the whole run."""
        return self.pairs_per_epoch * len(self.train_loss)

    def curve_rows(self) -> List[Dict[str, Any]]:
        val = dict(zip(self.val_epochs, self.val_loss))
        return [
            {"epoch": e, "train_loss": loss, "val_retrieval_loss": val.get(e)}
            for e, loss in enumerate(self.train_loss, start=1)
        ]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "measure": self.measure,
            "epochs": self.epochs,
            "pair_mode": self.pair_mode,
            "pairs_per_epoch": self.pairs_per_epoch,
            "train_loss": list(self.train_loss),
            "val_epochs": list(self.val_epochs),
            "val_loss": list(self.val_loss),
        }


def _flat_params(nets: Sequence[Network]) -> np.ndarray:
    return np.concatenate([n.get_params() for n in nets])


def _assign_params(nets: Sequence[Network], flat: np.ndarray) -> None:
    pos = 0
    for net in nets:
        size = net.parameter_count
        net.set_params(flat[pos:pos + size])
        pos += size


def resolve_pair_mode(measure: SimilarityMeasure, pair_mode: Union[str, PairMode, None]) -> Optional[PairMode]:
    if measure.default_pair_mode is None:
        return None
    if pair_mode is None or str(pair_mode) == "auto":
        return PairMode.parse(measure.default_pair_mode)
    return PairMode.parse(pair_mode)


def train_measure(
    measure: SimilarityMeasure,
    ds: Dataset,
    train_ids: Sequence[int],
    pair_mode: Union[str, PairMode, None] = "auto",
    optimizer: Union[str, Optimizer] = "rprop",
    epochs: int = 200,
    seed: int = 0,
    optimizer_params: Optional[Mapping[str, float]] = None,
    batch_size: Optional[int] = None,
    val_ids: Optional[Sequence[int]] = None,
    eval_every: int = 0,
    resample_pairs: bool = True,
    chunk: int = 65536,
    logger: Optional[RunLogger] = None,
    report_every: int = 0,
) -> Tuple[SimilarityMeasure, TrainingHistory]:
    """
    Fit ``measure`` on the rows ``train_ids`` of ``ds``.

    Data-derived parameters (t21 locals) are always fitted. Learned measures run
    ``epochs`` optimizer steps (or epochs of minibatches) and record the mean
    training loss per epoch; with ``eval_every`` and ``val_ids`` the validation
    retrieval loss is recorded every ``eval_every`` epochs.
    """
    from evaluation.retrieval import retrieval_loss

    log = logger or RunLogger(measure.name)
    train_ids = np.asarray(train_ids, dtype=np.int64)
    x = ds.x[train_ids]
    labels = ds.labels[train_ids]
    measure.prepare(x, labels)

    history = TrainingHistory(measure=measure.name, epochs=int(epochs))
    if not measure.learned:
        if epochs > 0:
            log.warn(f"{measure.name} requires no training; ignoring epochs={epochs}")
        return measure, history

    opt = optimizer if isinstance(optimizer, Optimizer) else make_optimizer(optimizer, optimizer_params)
    if batch_size is not None and opt.full_batch_only:
        raise ConfigError(f"{opt.name} needs full-batch gradients; batch_size must be unset")

    rng = np.random.default_rng([int(seed), 1])
    mode = resolve_pair_mode(measure, pair_mode)
    local_ids = np.arange(x.shape[0])
    pairs: Optional[PairSet] = None
    if mode is not None:
        pairs = build_pairs(labels, local_ids, mode, rng=rng)
        history.pair_mode = str(mode)
        history.pairs_per_epoch = len(pairs)
    else:
        history.pairs_per_epoch = int(x.shape[0])

    nets = measure.networks()
    params = _flat_params(nets)
    state = opt.init_state(params.shape[0])
    reporter = TrainingReporter(log, int(epochs), report_every)
    for epoch in range(1, int(epochs) + 1):
        # scoring inside the loop happens on a partially trained measure
        measure.trained = True
        if mode is not None and mode.kind == SAMPLED and resample_pairs and epoch > 1:
            pairs = build_pairs(labels, local_ids, mode, rng=rng)

        if batch_size is None:
            loss, grads = _loss(measure, x, labels, ds.n_classes, pairs, None, chunk)
            params, state = opt.step(params, np.concatenate([g.values for g in grads]), state)
            _assign_params(nets, params)
        else:
            units = len(pairs) if pairs is not None else x.shape[0]
            order = rng.permutation(units)
            weighted = 0.0
            for start in range(0, units, batch_size):
                batch = order[start:start + batch_size]
                batch_loss, grads = _loss(measure, x, labels, ds.n_classes, pairs, batch, chunk)
                params, state = opt.step(params, np.concatenate([g.values for g in grads]), state)
                _assign_params(nets, params)
                weighted += batch_loss * len(batch)
            loss = weighted / units
        history.train_loss.append(float(loss))

        val = None
        if eval_every and val_ids is not None and epoch % eval_every == 0:
            val = retrieval_loss(measure, ds, train_ids, val_ids)
            history.val_epochs.append(epoch)
            history.val_loss.append(val)
        reporter.record(epoch, float(loss), val)

    return measure, history


def _loss(measure, x, labels, n_classes, pairs: Optional[PairSet], batch, chunk):
    if pairs is None:
        if batch is not None:
            x, labels = x[batch], labels[batch]
        return measure.loss_and_grad(x, labels, n_classes, chunk=chunk)
    left, right, s = pairs.left, pairs.right, pairs.s
    if batch is not None:
        left, right, s = left[batch], right[batch], s[batch]
    return measure.loss_and_grad(x, labels, n_classes, left=left, right=right, s=s, chunk=chunk)
