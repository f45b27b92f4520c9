"""
Resilience utilities.

Network fetches are retried with exponential backoff; benchmark splits run under
SafeExecutor so that one failing split cannot take down a whole run.
"""
from __future__ import annotations

import random
import time
import traceback
from dataclasses import dataclass
from typing import Any, Callable, Optional, Tuple, TypeVar

import requests

T = TypeVar("T")


class RetryConfig:
    """Configuration for retry logic."""

    def __init__(
        self,
        max_retries: int = 4,
        initial_delay: float = 1.0,
        max_delay: float = 30.0,
        exponential_base: float = 2.0,
        jitter: bool = True,
    ):
        self.max_retries = max_retries
        self.initial_delay = initial_delay
        self.max_delay = max_delay
        self.exponential_base = exponential_base
        self.jitter = jitter

    def get_delay(self, attempt: int) -> float:
        """Calculate delay for given attempt with exponential backoff."""
        delay = min(self.initial_delay * (self.exponential_base ** attempt), self.max_delay)
        if self.jitter:
            delay *= 0.5 + random.random()
        return delay


_NETWORK_KEYWORDS = (
    "connection",
    "timeout",
    "timed out",
    "network",
    "unreachable",
    "refused",
    "reset",
    "temporarily unavailable",
    "service unavailable",
    "bad gateway",
    "gateway timeout",
)


def is_network_error(error: Exception) -> bool:
    """Check if error is network-related (transport failure or 5xx)."""
    if isinstance(error, (requests.ConnectionError, requests.Timeout)):
        return True
    if isinstance(error, requests.HTTPError):
        response = getattr(error, "response", None)
        status = getattr(response, "status_code", None)
        return status is not None and 500 <= int(status) < 600
    error_str = str(error).lower()
    return any(keyword in error_str for keyword in _NETWORK_KEYWORDS)


def resilient_call(
    func: Callable[..., T],
    *args,
    retry_config: Optional[RetryConfig] = None,
    on_retry: Optional[Callable[[int, Exception], None]] = None,
    **kwargs,
) -> T:
    """
    Execute function with retry logic for network failures.

    Non-network errors are raised immediately; the last network error is raised
    once retries are exhausted.
    """
    config = retry_config or RetryConfig()
    for attempt in range(config.max_retries):
        try:
            return func(*args, **kwargs)
        except Exception as e:
            if not is_network_error(e) or attempt == config.max_retries - 1:
                raise
            if on_retry:
                on_retry(attempt, e)
            time.sleep(config.get_delay(attempt))
    raise RuntimeError("resilient_call: max_retries must be positive")


@dataclass
class Diagnostic:
    """What went wrong in a safely executed call."""
    error_type: str
    message: str
    traceback: str = ""

    def summary(self) -> str:
        return f"{self.error_type}: {self.message}"


class SafeExecutor:
    """Executes operations safely, preventing crashes from errors."""

    @staticmethod
    def safe_execute(
        func: Callable,
        *args,
        on_error: Optional[Callable[[Diagnostic], None]] = None,
        **kwargs,
    ) -> Tuple[bool, Any]:
        """
        Safely execute a function, catching all errors.

        Returns:
            (True, result) on success, (False, Diagnostic) on failure.
        """
        try:
            return True, func(*args, **kwargs)
        except Exception as e:
            diag = Diagnostic(
                error_type=type(e).__name__,
                message=str(e),
                traceback=traceback.format_exc(),
            )
            if on_error:
                on_error(diag)
            return False, diag
