"""Fit noise-profile knobs to published benchmark numbers by bisection.

All simulations inside one calibration reuse the same seed (common random
numbers), which makes every objective a deterministic, nearly monotone
function of the knob being searched.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

from .bench import Experiment, default_grid, fit_gaussian, fit_linear_first4, record_points, sweep

SWAP_REPEATS = (1, 2, 3, 4)
CALIBRATION_SEED = 2021
_SCAN = 16


class CalibrationError(ValueError):
    pass


def _bisect(f: Callable[[float], float], target: float, lo: float, hi: float, increasing: bool,
            rtol: float, max_iter: int) -> float:
    """Find x in [lo, hi] with f(x) ~ target, f monotone near the root.

    If the endpoints do not straddle the target (f may turn over inside the
    bracket, e.g. a slope saturating at large p2), a coarse scan locates the
    first crossing and bisection continues there.
    """
    sign = 1.0 if increasing else -1.0
    flo, fhi = f(lo), f(hi)
    if sign * (flo - target) > 0 or sign * (fhi - target) < 0:
        xs = [lo + (hi - lo) * k / _SCAN for k in range(_SCAN + 1)]
        ys = [flo] + [f(x) for x in xs[1:-1]] + [fhi]
        for k in range(_SCAN):
            if sign * (ys[k] - target) <= 0 <= sign * (ys[k + 1] - target):
                lo, hi, flo = xs[k], xs[k + 1], ys[k]
                break
        else:
            raise CalibrationError(f"no root in bracket [{lo:g}, {hi:g}]: objective spans "
                                   f"{min(ys):.4g}..{max(ys):.4g}, target {target:.4g}")
    best, best_err = lo, abs(flo - target)
    for _ in range(max_iter):
        mid = (lo + hi) / 2
        fm = f(mid)
        if abs(fm - target) < best_err:
            best, best_err = mid, abs(fm - target)
        if best_err <= rtol * abs(target):
            break
        if sign * (fm - target) < 0:
            lo = mid
        else:
            hi = mid
    return best


def swap_chain_fit(backend, shots: int = 8192, seed: int = CALIBRATION_SEED) -> tuple[float, float]:
    """(intercept, slope per SWAP) of the linear fit over the first four SWAP counts."""
    recs = sweep(Experiment("swap-chain"), SWAP_REPEATS, backend, shots, seed)
    return fit_linear_first4(record_points(recs)).params


def cnot_chain_d0(backend, shots: int = 4096, seed: int = CALIBRATION_SEED) -> float:
    recs = sweep(Experiment("cnot-chain"), default_grid("cnot-chain"), backend, shots, seed)
    return fit_gaussian(record_points(recs)).params[0]


def _with_p2(backend, p2: float):
    return backend.with_profile(depol=replace(backend.profile.depol, p2=p2))


def _with_sigma(backend, sigma: float):
    return backend.with_profile(coherent=replace(backend.profile.coherent, sigma=sigma))


def calibrate_depolarizing(target_slope_per_swap: float, backend, shots: int = 8192,
                           seed: int = CALIBRATION_SEED, bracket: tuple[float, float] = (0.0, 0.2),
                           rtol: float = 0.005, max_iter: int = 40) -> float:
    """p2 whose swap-chain fit loses ``target_slope_per_swap`` success per SWAP.

    The other knobs of ``backend`` stay as they are.
    """
    if not 0 < target_slope_per_swap < 1:
        raise CalibrationError("target slope must be in (0, 1)")
    return _bisect(lambda p2: -swap_chain_fit(_with_p2(backend, p2), shots, seed)[1],
                   target_slope_per_swap, *bracket, increasing=True, rtol=rtol, max_iter=max_iter)


def calibrate_coherent_sigma(target_d0: float, backend, shots: int = 4096,
                             seed: int = CALIBRATION_SEED, bracket: tuple[float, float] = (1e-3, 1.0),
                             rtol: float = 0.005, max_iter: int = 40) -> float:
    """Coherent sigma whose Gaussian fit of the CNOT chain decays over ``target_d0`` CNOTs."""
    if not target_d0 > 0:
        raise CalibrationError("target d0 must be positive")
    return _bisect(lambda s: cnot_chain_d0(_with_sigma(backend, s), shots, seed),
                   target_d0, *bracket, increasing=False, rtol=rtol, max_iter=max_iter)


@dataclass(frozen=True)
class CalibrationTargets:
    slope: float
    intercept: float | None = None
    d0: float | None = None
    sigma_bracket: tuple[float, float] = (0.0, 0.1)


def calibrate_backend(backend, targets: CalibrationTargets, shots: int = 8192,
                      seed: int = CALIBRATION_SEED, log: Callable[[str], None] | None = None):
    """Two-knob calibration; returns the backend with p2 and sigma replaced.

    With a ``d0`` target, sigma is searched on the CNOT-chain decay; otherwise
    on the swap-chain intercept. Either way p2 is re-fitted to the slope for
    every trial sigma.
    """
    say = log or (lambda _msg: None)

    def fitted(sigma: float):
        b = _with_sigma(backend, sigma)
        p2 = calibrate_depolarizing(targets.slope, b, shots, seed)
        say(f"sigma={sigma:.6g} -> p2={p2:.6g}")
        return _with_p2(b, p2)

    if targets.d0 is None and targets.intercept is None:
        return fitted(backend.profile.coherent.sigma)
    lo, hi = targets.sigma_bracket
    cache: dict[float, object] = {}

    def objective(sigma: float) -> float:
        if sigma not in cache:
            cache[sigma] = fitted(sigma)
        b = cache[sigma]
        if targets.d0 is not None:
            value = cnot_chain_d0(b, shots // 2, seed)
            say(f"  d0={value:.4f}")
        else:
            value = swap_chain_fit(b, shots, seed)[0]
            say(f"  intercept={value:.4f}")
        return value

    if targets.d0 is not None:
        sigma = _bisect(objective, targets.d0, lo, hi, increasing=False, rtol=0.01, max_iter=14)
    else:
        sigma = _bisect(objective, targets.intercept, lo, hi, increasing=True, rtol=0.002, max_iter=14)
    return cache.get(sigma) or fitted(sigma)


# Published swap-chain and CNOT-chain figures the presets are calibrated against.
PUBLISHED_TARGETS = {
    "ionq": CalibrationTargets(slope=0.0935, intercept=0.999, sigma_bracket=(0.05, 0.1)),
    "ibm-melbourne": CalibrationTargets(slope=0.0422, d0=28.0, sigma_bracket=(0.02, 0.045)),
    "rigetti-aspen8": CalibrationTargets(slope=0.0875, intercept=0.827, sigma_bracket=(0.05, 0.1)),
}
