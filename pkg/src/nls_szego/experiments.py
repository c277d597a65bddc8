"""Composite experiments: orbit tracking, stability, scattering, thresholds.

Every experiment couples the time integrator to the variational objects and
condenses a run into a small report: a diagnostic trajectory, a handful of
summary scalars, and a verdict against configured thresholds.  Reports are
deterministic for a fixed seed.

Traveling-wave and stability runs start from the exact periodic soliton, the
discrete realization of the continuum traveling wave, so the zero-perturbation
control measures pure integrator error rather than profile mismatch.

Scattering verdicts are finite-horizon proxies: the sextic-norm decay ratio
classifies a run as scattering-like (<= 0.25), non-scattering-like (>= 0.5)
or indeterminate, and the extracted asymptotic state is validated by the
free-evolution residual.  A horizon cap T <= L/20 keeps the dispersive front
from wrapping around the periodic domain and contaminating the diagnosis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Callable, Optional

import numpy as np

from .errors import InvalidArgumentError
from .evolution import (
    EvolutionParams,
    TrajectoryRecord,
    duhamel_scattering_state,
    evolve,
    free_propagate,
)
from .field import (
    HardyField,
    SpectralField,
    hs_norm,
    l2_norm_sq,
    lp_norm,
    szego_project,
)
from .grid import Grid
from .profiles import periodic_soliton, reference_profile

GOLDEN = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class OrbitDistance:
    """Distance from a field to the orbit {e^{i theta} Q(. - y)} in H^1."""
    distance: float
    theta_opt: float
    y_opt: float
    scale_opt: Optional[float] = None


@dataclass
class ExperimentConfig:
    """Grid, evolution, profile and perturbation settings of one experiment."""
    n: int = 2 ** 13
    length: float = 400.0
    evolution: EvolutionParams = dc_field(default_factory=EvolutionParams)
    profile_kind: str = "qc_exact"
    profile_c: float = 1.0
    profile_sigma: float = 2.0
    profile_mass: Optional[float] = None     # rescale the profile's L2 mass
    delta: float = 0.0
    seed: int = 0
    band: tuple = (0.25, 4.0)
    search_scaling: bool = False

    def __post_init__(self):
        if self.delta < 0:
            raise InvalidArgumentError("perturbation size delta must be >= 0")
        grid = self.grid()
        kmax = float(np.abs(grid.k).max())
        if not (0 <= self.band[0] < self.band[1] <= kmax):
            raise InvalidArgumentError(
                f"perturbation band {self.band} outside the grid spectrum (k_max={kmax:.3g})")

    def grid(self) -> Grid:
        return Grid(self.n, self.length)

    def build_profile(self, grid: Grid) -> SpectralField:
        kw = {}
        if self.profile_kind in ("qc", "qc_exact"):
            kw["c"] = self.profile_c
        if self.profile_kind == "gaussian":
            kw["sigma"] = self.profile_sigma
        f = reference_profile(self.profile_kind, grid, **kw)
        if self.profile_mass is not None:
            scale = math.sqrt(self.profile_mass / l2_norm_sq(f))
            f = type(f)(grid, coefficients=f.coefficients * scale)
        return f

    def to_dict(self) -> dict:
        ev = self.evolution
        return {
            "grid.n": self.n, "grid.length": self.length,
            "evolve.dt": ev.dt, "evolve.t_final": ev.t_final,
            "evolve.scheme": ev.scheme, "evolve.m": ev.m, "evolve.lambda": ev.lam,
            "functional.gamma": ev.gamma, "out.stride": ev.snapshot_stride,
            "profile.kind": self.profile_kind, "profile.c": self.profile_c,
            "profile.sigma": self.profile_sigma, "profile.mass": self.profile_mass,
            "perturb.delta": self.delta, "perturb.seed": self.seed,
            "perturb.band_lo": self.band[0], "perturb.band_hi": self.band[1],
            "search_scaling": self.search_scaling,
        }


@dataclass
class RunReport:
    """Config echo, trajectory, summary scalars and a pass/fail verdict."""
    config: dict
    record: Optional[TrajectoryRecord]
    summary: dict
    passed: bool

    def to_json_dict(self, series_csv_path: Optional[str] = None) -> dict:
        return {
            "config": self.config,
            "summary": self.summary,
            "series_csv_path": series_csv_path,
            "pass": self.passed,
        }


# ---------------------------------------------------------------------------
# orbit distance

def _h1_correlation(u: SpectralField, q: SpectralField):
    """C(y) = <u, Q(.-y)>_{H1} on the whole translation grid, via one FFT."""
    g = u.grid
    w = (1.0 + g.k ** 2) * u.coefficients * np.conj(q.coefficients)
    corr = SpectralField(g, coefficients=w)
    return corr.samples  # value at y = x_j is exactly the weighted pairing


def _corr_at(u, q, y):
    g = u.grid
    w = (1.0 + g.k ** 2) * u.coefficients * np.conj(q.coefficients)
    return complex(np.sum(w * np.exp(1j * g.k * y)) / g.length)


def _best_translation(u, q):
    g = u.grid
    c = _h1_correlation(u, q)
    mags = np.abs(c)
    i0 = int(np.argmax(mags))
    # quadratic refinement of the correlation peak to sub-grid accuracy
    ym, y0, yp = mags[(i0 - 1) % g.n], mags[i0], mags[(i0 + 1) % g.n]
    denom = ym - 2 * y0 + yp
    shift = 0.5 * (ym - yp) / denom if denom != 0 else 0.0
    shift = float(np.clip(shift, -0.5, 0.5))
    y = g.x[i0] + shift * g.dx
    cval = _corr_at(u, q, y)
    if abs(cval) < y0:          # refinement must not lose to the grid point
        y, cval = g.x[i0], complex(c[i0])
    return y, cval


def _distance_given_q(u, q):
    uu = hs_norm(u, 1.0) ** 2
    qq = hs_norm(q, 1.0) ** 2
    y, cval = _best_translation(u, q)
    d2 = max(uu + qq - 2 * abs(cval), 0.0)
    return math.sqrt(d2), float(np.angle(cval)), float(y)


def _spectral_zoom(q: SpectralField, mu: float) -> SpectralField:
    """Mass-preserving dilation sqrt(mu) q(mu x) by spectral interpolation."""
    g = q.grid
    c = q.coefficients
    k = g.k
    order = np.argsort(k)
    ks, cs = k[order], c[order]
    target = k / mu
    re = np.interp(target, ks, cs.real, left=0.0, right=0.0)
    im = np.interp(target, ks, cs.imag, left=0.0, right=0.0)
    out = (re + 1j * im) / math.sqrt(mu)
    if isinstance(q, HardyField):
        out[g.negative_modes] = 0.0
        return HardyField(g, coefficients=out)
    return SpectralField(g, coefficients=out)


def orbit_distance(u: SpectralField, Q: SpectralField,
                   search_scaling: bool = False,
                   scale_builder: Optional[Callable[[float], SpectralField]] = None,
                   scale_window: float = 50.0) -> OrbitDistance:
    """H^1 distance from u to the phase/translation (and scaling) orbit of Q.

    The translation search runs over every grid offset at once via spectral
    cross-correlation with the (1 + k^2) weight, the optimal phase comes from
    the argument of the correlation, and the peak is refined by quadratic
    interpolation.  With ``search_scaling`` a golden-section search over
    mass-preserving dilations sqrt(mu) Q(mu x) is wrapped around the inner
    search; ``scale_builder(mu)`` may supply analytically resampled profiles,
    otherwise a spectral zoom of Q is used.
    """
    if u.grid != Q.grid:
        raise InvalidArgumentError("fields live on different grids")
    if not search_scaling:
        d, theta, y = _distance_given_q(u, Q)
        return OrbitDistance(distance=d, theta_opt=theta, y_opt=y)

    builder = scale_builder or (lambda mu: _spectral_zoom(Q, mu))

    def dist_of(log_mu):
        return _distance_given_q(u, builder(math.exp(log_mu)))[0]

    lo, hi = -math.log(scale_window), math.log(scale_window)
    # coarse bracket before golden-section polishing
    grid_pts = np.linspace(lo, hi, 33)
    vals = [dist_of(t) for t in grid_pts]
    i0 = int(np.argmin(vals))
    a = grid_pts[max(i0 - 1, 0)]
    b = grid_pts[min(i0 + 1, len(grid_pts) - 1)]
    x1 = b - GOLDEN * (b - a)
    x2 = a + GOLDEN * (b - a)
    f1, f2 = dist_of(x1), dist_of(x2)
    for _ in range(40):
        if f1 < f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - GOLDEN * (b - a)
            f1 = dist_of(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + GOLDEN * (b - a)
            f2 = dist_of(x2)
        if b - a < 1e-10:
            break
    mu = math.exp((a + b) / 2)
    d, theta, y = _distance_given_q(u, builder(mu))
    return OrbitDistance(distance=d, theta_opt=theta, y_opt=y, scale_opt=mu)


# ---------------------------------------------------------------------------
# perturbations

def band_noise(grid: Grid, seed: int, band=(0.25, 4.0)) -> HardyField:
    """Seeded band-limited random Hardy field, normalized to unit H^1 norm."""
    rng = np.random.default_rng(seed)
    c = rng.standard_normal(grid.n) + 1j * rng.standard_normal(grid.n)
    mask = (grid.k >= band[0]) & (grid.k <= band[1])
    c[~mask] = 0.0
    f = HardyField(grid, coefficients=c)
    norm = hs_norm(f, 1.0)
    if norm == 0:
        raise InvalidArgumentError("perturbation band contains no modes")
    return HardyField(grid, coefficients=f.coefficients / norm)


# ---------------------------------------------------------------------------
# experiment drivers

def traveling_wave_run(c: float, T: float, config: ExperimentConfig) -> RunReport:
    """Propagate the exact wave and compare against its closed-form motion.

    The comparison law is e^{i omega t} Q(x + c t) with the profile's own
    discrete frequency omega (which approaches 3c^2/8 as the domain grows).
    """
    if c <= 0:
        raise InvalidArgumentError("speed c must be positive")
    grid = config.grid()
    sol = periodic_soliton(grid, c)
    ev = config.evolution
    params = EvolutionParams(m=2, lam=-1.0, dt=ev.dt, t_final=T,
                             scheme=ev.scheme, snapshot_stride=ev.snapshot_stride,
                             gamma=ev.gamma)
    rec = evolve(sol.field, params, store_fields=True)
    qn = hs_norm(sol.field, 1.0)
    errs = []
    for t, f in rec.snapshots:
        exact = sol.field.coefficients * np.exp(1j * (sol.omega * t + grid.k * c * t))
        diff = SpectralField(grid, coefficients=f.coefficients - exact)
        errs.append(hs_norm(diff, 1.0) / qn)
    errs = np.asarray(errs)
    drifts = _drifts(rec)
    energy_target = -np.pi * c ** 2 / (4 * math.sqrt(2))
    energy_err = float(np.abs(rec.energy / energy_target - 1).max())
    summary = {
        "max_h1_error": float(errs.max()),
        "omega": sol.omega,
        "omega_line": 3 * c ** 2 / 8,
        "drifts": drifts,
        "energy_mean": float(rec.energy.mean()),
        "energy_vs_line_value": energy_err,
        "verdict": "pass" if errs.max() <= 1e-3 else "fail",
    }
    return RunReport(config={**config.to_dict(), "profile.c": c, "t_final": T},
                     record=rec, summary=summary,
                     passed=summary["verdict"] == "pass")


def _drifts(rec: TrajectoryRecord) -> dict:
    out = {}
    for name in ("mass", "momentum", "energy", "k_gamma"):
        series = getattr(rec, name)
        ref = max(abs(series[0]), 1e-30)
        out[name] = float(np.abs(series - series[0]).max() / ref)
    return out


def stability_run(config: ExperimentConfig,
                  reference: Optional[HardyField] = None,
                  max_distance: float = 0.05) -> RunReport:
    """Evolve a perturbed wave and track the distance to the unperturbed orbit.

    The default reference is the exact periodic soliton at config.profile_c
    (the gamma = 2 setting, where the orbit needs no scaling search); passing
    a converged minimizer as ``reference`` covers general gamma, in which
    case ``config.search_scaling`` widens the orbit by dilations.
    """
    grid = config.grid()
    if reference is None:
        reference = periodic_soliton(grid, config.profile_c).field
    u0c = reference.coefficients.copy()
    if config.delta > 0:
        noise = band_noise(grid, config.seed, config.band)
        u0c = u0c + config.delta * noise.coefficients
    u0 = HardyField(grid, coefficients=u0c)
    rec = evolve(u0, config.evolution, store_fields=True)
    dists = []
    for t, f in rec.snapshots:
        od = orbit_distance(f, reference, search_scaling=config.search_scaling)
        dists.append(od.distance)
    dists = np.asarray(dists)
    rel = dists / hs_norm(reference, 1.0)
    l6_ratio = rec.l6 / rec.l6[0]
    summary = {
        "max_orbit_dist": float(dists.max()),
        "max_orbit_dist_rel": float(rel.max()),
        "l6_bracket": [float(l6_ratio.min()), float(l6_ratio.max())],
        "drifts": _drifts(rec),
        "delta": config.delta,
        "verdict": "pass" if dists.max() <= max_distance else "fail",
    }
    return RunReport(config=config.to_dict(), record=rec, summary=summary,
                     passed=summary["verdict"] == "pass")


def scattering_run(config: ExperimentConfig, both_directions: bool = True,
                   residual_threshold: float = 1e-2) -> RunReport:
    """Evolve, extract the asymptotic state, and classify the decay.

    Reports the free-evolution residuals of the extracted state in L^2 and
    H^1, the sextic decay ratio, and (optionally) the mirrored backward
    quantities.  The verdict is the decay classification, not a failure
    condition: 'scattering-like' (ratio <= 0.25), 'non-scattering-like'
    (ratio >= 0.5), else 'indeterminate'.
    """
    grid = config.grid()
    ev = config.evolution
    T = ev.t_final
    if T > grid.length / 20:
        raise InvalidArgumentError(
            f"horizon T={T} exceeds the wrap-around cap length/20={grid.length / 20}")
    if ev.snapshot_stride * ev.dt > 0.1:
        raise InvalidArgumentError(
            "snapshot cadence too coarse for the interaction integral (need <= 0.1)")
    profile = config.build_profile(grid)
    if not isinstance(profile, HardyField):
        profile = szego_project(profile)
    u0 = profile
    if l2_norm_sq(u0) <= 0:
        summary = {"residual_l2": 0.0, "residual_h1": 0.0, "l6_ratio": 1.0,
                   "verdict": "indeterminate"}
        return RunReport(config=config.to_dict(), record=None,
                         summary=summary, passed=True)

    def one_direction(sign):
        params = EvolutionParams(m=ev.m, lam=ev.lam, dt=ev.dt,
                                 t_final=sign * T, scheme=ev.scheme,
                                 snapshot_stride=ev.snapshot_stride,
                                 gamma=ev.gamma)
        rec = evolve(u0, params, store_fields=True)
        direction = "forward" if sign > 0 else "backward"
        ustar = duhamel_scattering_state(rec, direction)
        end_field = rec.final_field
        free_end = free_propagate(ustar, sign * T)
        diff = SpectralField(grid, coefficients=(
            end_field.coefficients - free_end.coefficients))
        res_l2 = lp_norm(diff, 2)
        res_h1 = hs_norm(diff, 1.0)
        idx0 = int(np.argmin(np.abs(rec.times))) if sign < 0 else 0
        idxT = 0 if sign < 0 else len(rec.times) - 1
        ratio = float(rec.l6[idxT] / rec.l6[idx0])
        return rec, res_l2, res_h1, ratio

    rec_f, rl2, rh1, ratio = one_direction(+1)
    summary = {
        "residual_l2": float(rl2),
        "residual_h1": float(rh1),
        "l6_ratio": ratio,
        "verdict": _classify(ratio),
    }
    if both_directions:
        _, bl2, bh1, bratio = one_direction(-1)
        summary.update({
            "residual_l2_backward": float(bl2),
            "residual_h1_backward": float(bh1),
            "l6_ratio_backward": bratio,
            "verdict_backward": _classify(bratio),
        })
    ok = True
    if summary["verdict"] == "scattering-like":
        ok = rl2 <= residual_threshold
    return RunReport(config=config.to_dict(), record=rec_f, summary=summary,
                     passed=bool(ok))


def _classify(ratio: float) -> str:
    if ratio <= 0.25:
        return "scattering-like"
    if ratio >= 0.5:
        return "non-scattering-like"
    return "indeterminate"


def threshold_scan(shape: HardyField, mass_bounds, config: ExperimentConfig,
                   iterations: int = 12,
                   ground_state_mass: Optional[float] = None) -> dict:
    """Bisect the amplitude family {alpha * shape} on the decay classification.

    The bracket [lo, hi] must straddle the behavior change: the run at mass
    lo must classify scattering-like and at hi non-scattering-like
    (indeterminate runs tighten the bracket from the scattering side).
    Reports the final bracket and, when ``ground_state_mass`` is given,
    whether a non-scattering-like run was seen strictly below it.
    """
    lo, hi = float(mass_bounds[0]), float(mass_bounds[1])
    if not (0 < lo < hi):
        raise InvalidArgumentError(f"degenerate mass bracket {mass_bounds}")
    grid = config.grid()
    base = shape.coefficients / math.sqrt(l2_norm_sq(shape))

    def classify(mass):
        u0 = HardyField(grid, coefficients=math.sqrt(mass) * base)
        ev = config.evolution
        params = EvolutionParams(m=ev.m, lam=ev.lam, dt=ev.dt, t_final=ev.t_final,
                                 scheme=ev.scheme, snapshot_stride=ev.snapshot_stride,
                                 gamma=ev.gamma)
        rec = evolve(u0, params, store_fields=False)
        ratio = float(rec.l6[-1] / rec.l6[0])
        return _classify(ratio), ratio

    v_lo, r_lo = classify(lo)
    v_hi, r_hi = classify(hi)
    if v_lo == "non-scattering-like" or v_hi != "non-scattering-like":
        raise InvalidArgumentError(
            f"mass bounds do not bracket the transition: "
            f"verdict({lo})={v_lo} (ratio {r_lo:.3f}), "
            f"verdict({hi})={v_hi} (ratio {r_hi:.3f})")
    runs = [{"mass": lo, "verdict": v_lo, "ratio": r_lo},
            {"mass": hi, "verdict": v_hi, "ratio": r_hi}]
    nonscattering_below_gs = (
        ground_state_mass is not None and hi < ground_state_mass)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        v, r = classify(mid)
        runs.append({"mass": mid, "verdict": v, "ratio": r})
        if v == "non-scattering-like":
            hi = mid
            if ground_state_mass is not None and mid < ground_state_mass:
                nonscattering_below_gs = True
        else:
            lo = mid
    return {
        "bracket": [lo, hi],
        "initial_bracket": [float(mass_bounds[0]), float(mass_bounds[1])],
        "iterations": iterations,
        "runs": runs,
        "ground_state_mass": ground_state_mass,
        "nonscattering_below_ground_state": bool(nonscattering_below_gs),
    }


def sweep(configs, runner=None) -> list:
    """Run independent experiments in order; failures recorded, not raised."""
    if not configs:
        raise InvalidArgumentError("sweep needs at least one config")
    runner = runner or stability_run
    reports = []
    for cfg in configs:
        try:
            reports.append(runner(cfg))
        except Exception as exc:  # noqa: BLE001 - per-run isolation is the contract
            reports.append(RunReport(
                config=cfg.to_dict() if hasattr(cfg, "to_dict") else dict(cfg),
                record=None,
                summary={"error": f"{type(exc).__name__}: {exc}", "verdict": "error"},
                passed=False))
    return reports
