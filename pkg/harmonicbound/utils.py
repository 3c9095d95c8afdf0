# standard libraries
import logging
import os

# third party libraries
import numpy as np

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi
DISK_TOLERANCE = 1e-12  # slack allowed on |z| <= 1 for pieces of E
THREADS_ENV_VAR = "HM_THREADS"


def worker_count() -> int:
    """
    Number of worker processes the estimator may use.

    Reads the ``HM_THREADS`` environment variable and falls back to the machine parallelism.

    Returns:
        int: Positive worker count
    """
    default = os.cpu_count() or 1
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw is None or not raw.strip():
        return default

    try:
        value = int(raw)
    except ValueError:
        logger.warning("Ignoring %s=%r: not an integer", THREADS_ENV_VAR, raw)
        return default

    if value < 1:
        logger.warning("Ignoring %s=%r: must be at least 1", THREADS_ENV_VAR, raw)
        return default

    return value


def angle_offset(angle: np.ndarray | float, start: float) -> np.ndarray | float:
    """
    Counter-clockwise angular distance from ``start`` to ``angle``, reduced to [0, 2π).

    Args:
        angle (np.ndarray | float): Angle(s) in radians
        start (float): Reference angle in radians

    Returns:
        np.ndarray | float: Offset(s) in [0, 2π)
    """
    return np.mod(np.asarray(angle) - start, TWO_PI)


def angle_in_span(angle: np.ndarray | float, start: float, span: float) -> np.ndarray | bool:
    """Whether ``angle`` lies on the counter-clockwise arc of length ``span`` beginning at ``start``."""
    if span >= TWO_PI:
        return np.ones_like(np.asarray(angle), dtype=bool)
    return angle_offset(angle, start) <= span


def arc_span_max_modulus(center: complex, radius: float, start: float, span: float) -> float:
    """
    Largest modulus attained on a circular arc.

    Args:
        center (complex): Circle center
        radius (float): Circle radius
        start (float): Start angle of the arc
        span (float): Counter-clockwise angular length of the arc

    Returns:
        float: max |p| over the arc
    """
    endpoints = center + radius * np.exp(1j * np.array([start, start + span]))
    best = float(np.max(np.abs(endpoints)))
    if center != 0 and angle_in_span(np.angle(center), start, span):
        best = max(best, abs(center) + radius)
    elif center == 0:
        best = max(best, radius)
    return best
