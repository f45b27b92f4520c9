"""
Console logging for runs.

Lines are prefixed the same way everywhere:

    [2026-10-19 12:00:00 UTC | +12s] [bal] [esnn] split 3/25 loss=0.0160

Output goes to stderr so that stdout stays usable for data.
"""
from __future__ import annotations

import time
from datetime import datetime, timezone
from typing import Optional

import click

_QUIET = False


def set_quiet(quiet: bool) -> None:
    """Silence info lines (warnings and errors are always shown)."""
    global _QUIET
    _QUIET = bool(quiet)


def is_quiet() -> bool:
    return _QUIET


def format_timestamp(start_time: Optional[float] = None) -> str:
    """
    Format current timestamp with UTC time and elapsed time.

    Returns:
        "[2026-10-19 12:34:56 UTC | +123s]" or "[2026-10-19 12:34:56 UTC]"
    """
    now = time.time()
    utc_time = datetime.fromtimestamp(now, tz=timezone.utc).strftime("%Y-%m-%d %H:%M:%S UTC")
    if start_time:
        elapsed = int(now - start_time)
        return f"[{utc_time} | +{elapsed}s]"
    return f"[{utc_time}]"


class RunLogger:
    """Prefixed logger, e.g. RunLogger("bal", "esnn").info("split 1/25 done")."""

    def __init__(self, *prefix: str, start_time: Optional[float] = None) -> None:
        self.prefix = tuple(str(p) for p in prefix if p)
        self.start_time = start_time if start_time is not None else time.time()

    def child(self, *more: str) -> "RunLogger":
        return RunLogger(*self.prefix, *more, start_time=self.start_time)

    def _line(self, msg: str) -> str:
        tags = " ".join(f"[{p}]" for p in self.prefix)
        head = format_timestamp(self.start_time)
        return f"{head} {tags} {msg}" if tags else f"{head} {msg}"

    def info(self, msg: str) -> None:
        if not _QUIET:
            click.echo(self._line(msg), err=True)

    def success(self, msg: str) -> None:
        self.info(f"✓ {msg}")

    def warn(self, msg: str) -> None:
        click.echo(self._line(f"⚠ {msg}"), err=True)

    def error(self, msg: str) -> None:
        click.echo(self._line(f"✗ {msg}"), err=True)


class TrainingReporter:
    """
    Reports training progress every `report_every` epochs.

    The reporter keeps the last reported values so a final summary can be printed
    even when the epoch count is not a multiple of the interval.
    """

    def __init__(self, logger: RunLogger, total_epochs: int, report_every: int = 0) -> None:
        self.logger = logger
        self.total_epochs = int(total_epochs)
        self.report_every = int(report_every)
        self.last_epoch = 0
        self.last_train_loss: Optional[float] = None
        self.last_val_loss: Optional[float] = None

    def should_report(self, epoch: int) -> bool:
        if self.report_every <= 0:
            return False
        return epoch % self.report_every == 0 or epoch == self.total_epochs

    def record(self, epoch: int, train_loss: float, val_loss: Optional[float] = None) -> None:
        self.last_epoch = epoch
        self.last_train_loss = train_loss
        if val_loss is not None:
            self.last_val_loss = val_loss
        if self.should_report(epoch):
            line = f"epoch {epoch}/{self.total_epochs} train_loss={train_loss:.6f}"
            if val_loss is not None:
                line += f" val_retrieval_loss={val_loss:.4f}"
            self.logger.info(line)
