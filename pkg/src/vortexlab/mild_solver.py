"""Picard fixed-point solve of the mild 2D vorticity equation, with an
independent integrating-factor RK4 time stepper as cross-validation oracle.

Both discretize the same dynamics (w_t - Lap w = -div(v w), v by Biot-Savart)
through different routes: the fixed point of the Duhamel integral operator
vs explicit spectral time stepping with 2/3-rule dealiasing.
"""

from dataclasses import dataclass, field as dc_field

import numpy as np

from .biot_savart import _check_mean_zero, velocity_from_vorticity_2d
from .fields import (
    Grid,
    NormReport,
    ScalarField,
    Trajectory,
    VectorField,
    jacobian_magnitude,
    lp_norm,
    w11_norm,
)
from .heat import DuhamelQuadrature, duhamel_derivative_term, heat_evolve


class ContractionFailureError(RuntimeError):
    """Fixed-point iteration is not contracting; t0 is too large for A0."""


class StabilityError(RuntimeError):
    """CFL-limited step refinement exhausted."""


@dataclass(frozen=True)
class MildSolveConfig:
    grid: Grid
    t0: float
    nt: int = 32
    quad_m: int = 64
    tol: float = 1e-9
    max_iter: int = 60

    def __post_init__(self):
        if not self.t0 > 0:
            raise ValueError(f"t0 must be positive, got {self.t0}")
        if self.nt < 8:
            raise ValueError(f"nt must be >= 8, got {self.nt}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t0, self.nt)


@dataclass
class PicardTrace:
    sup_w11: list = dc_field(default_factory=list)
    diff_w11: list = dc_field(default_factory=list)
    ratios: list = dc_field(default_factory=list)
    converged: bool = False
    iterations: int = 0
    snapshot_reports: list = dc_field(default_factory=list)  # NormReport per time


def _flux_spectra(omega: ScalarField):
    """Dealiased spectra of the advective flux v*w, plus the velocity field."""
    v = velocity_from_vorticity_2d(omega)
    mask = omega.grid.dealias_mask()
    out = []
    for comp in v.components:
        gh = np.fft.fftn(comp.samples * omega.samples)
        out.append(np.where(mask, gh, 0.0))
    return out, v


def _stack_flux(traj: Trajectory):
    specs = []
    for snap in traj.snapshots:
        gh, _ = _flux_spectra(snap)
        specs.append(gh)
    return specs


def apply_T(omega_traj: Trajectory, omega0: ScalarField, cfg: MildSolveConfig) -> Trajectory:
    """One application of the Duhamel fixed-point operator to a trajectory."""
    _check_mean_zero(omega0, "initial vorticity")
    grid = cfg.grid
    times = cfg.times
    if len(omega_traj) != cfg.nt or not np.allclose(omega_traj.times, times):
        raise ValueError("input trajectory does not live on the config time lattice")
    flux = _stack_flux(omega_traj)
    dt = times[1] - times[0]

    def g_of_s(s):
        j = int(min(max(s / dt, 0.0), cfg.nt - 1 - 1e-12))
        theta = (s - times[j]) / dt
        return [
            (1.0 - theta) * flux[j][a] + theta * flux[j + 1][a]
            for a in range(grid.dim)
        ]

    snaps = [omega0]
    for t in times[1:]:
        quad = DuhamelQuadrature(t, cfg.quad_m)
        heat_part = heat_evolve(omega0, t)
        duh = duhamel_derivative_term(g_of_s, t, quad, grid)
        out = heat_part + duh
        if not np.all(np.isfinite(out.samples)):
            raise ArithmeticError("non-finite values in Duhamel term: iteration diverged")
        snaps.append(out)
    return Trajectory(times, snaps)


def _heat_guess(omega0: ScalarField, cfg: MildSolveConfig) -> Trajectory:
    return Trajectory(cfg.times, [heat_evolve(omega0, t) for t in cfg.times])


def _sup_w11_diff(a: Trajectory, b: Trajectory) -> float:
    return max(w11_norm(x - y) for x, y in zip(a.snapshots, b.snapshots))


def picard_solve(omega0: ScalarField, cfg: MildSolveConfig):
    """Iterate the Duhamel operator from the pure heat evolution until the
    sup-in-time W^{1,1} successive difference drops below cfg.tol.

    Returns (Trajectory, PicardTrace).  Raises ContractionFailureError if
    the difference ratio stays >= 1 for three consecutive iterations.
    """
    _check_mean_zero(omega0, "initial vorticity")
    trace = PicardTrace()
    current = _heat_guess(omega0, cfg)
    prev_diff = None
    bad_streak = 0
    for it in range(1, cfg.max_iter + 1):
        nxt = apply_T(current, omega0, cfg)
        diff = _sup_w11_diff(nxt, current)
        trace.sup_w11.append(max(w11_norm(f) for f in nxt.snapshots))
        trace.diff_w11.append(diff)
        if prev_diff is not None and prev_diff > 0:
            ratio = diff / prev_diff
            trace.ratios.append(ratio)
            if ratio >= 1.0:
                bad_streak += 1
                if bad_streak >= 3:
                    raise ContractionFailureError(
                        "t0 too large for A0: successive-difference ratio >= 1 "
                        "for 3 consecutive iterations; reduce t0 (t0 = C/A0^2)"
                    )
            else:
                bad_streak = 0
        current = nxt
        trace.iterations = it
        if diff < cfg.tol:
            trace.converged = True
            break
        prev_diff = diff
    trace.snapshot_reports = [snapshot_norms(f) for f in current.snapshots]
    return current, trace


def snapshot_norms(omega: ScalarField) -> NormReport:
    """Norm bundle of one vorticity snapshot: L1, W11, velocity sup and gradient L2."""
    rep = NormReport()
    rep.set("L1", lp_norm(omega, 1))
    rep.set("W11", w11_norm(omega))
    v = velocity_from_vorticity_2d(omega)
    rep.set("Linf_v", lp_norm(v, np.inf))
    rep.set("L2_gradv", lp_norm(jacobian_magnitude(v), 2))
    return rep


def calibrate_horizon(omega0: ScalarField, grid: Grid, t_max: float, *,
                      nt: int = 16, quad_m: int = 32, max_halvings: int = 20):
    """Pick t0 = c/A0^2 adaptively: halve until the first measured
    contraction ratio is <= 1/2.  Returns (t0, ratio)."""
    a0 = w11_norm(omega0)
    t0 = min(1.0 / a0**2, t_max) if a0 > 0 else t_max
    for _ in range(max_halvings):
        cfg = MildSolveConfig(grid=grid, t0=t0, nt=nt, quad_m=quad_m)
        ratio = first_contraction_ratio(omega0, cfg)
        if ratio <= 0.5:
            return t0, ratio
        t0 /= 2.0
    raise ContractionFailureError(
        f"could not find a contracting horizon above t0 = {t0:.3e}"
    )


def first_contraction_ratio(omega0: ScalarField, cfg: MildSolveConfig) -> float:
    """Ratio of the first two successive-difference norms of the iteration."""
    guess = _heat_guess(omega0, cfg)
    first = apply_T(guess, omega0, cfg)
    second = apply_T(first, omega0, cfg)
    d1 = _sup_w11_diff(first, guess)
    d2 = _sup_w11_diff(second, first)
    if d1 == 0.0:
        return 0.0
    return d2 / d1


# ---------------------------------------------------------------------------
# independent oracle: integrating-factor RK4 pseudo-spectral stepper

def _nonlinear_rhs(w_hat, grid: Grid, inv_ksq, mask, k):
    """-div(v w) in spectral space, dealiased; v by the Biot-Savart multiplier."""
    v0h = 1j * k[1] * w_hat * inv_ksq
    v1h = -1j * k[0] * w_hat * inv_ksq
    v0h.ravel()[0] = 0.0
    v1h.ravel()[0] = 0.0
    w = np.fft.ifftn(w_hat).real
    v0 = np.fft.ifftn(v0h).real
    v1 = np.fft.ifftn(v1h).real
    g0 = np.where(mask, np.fft.fftn(v0 * w), 0.0)
    g1 = np.where(mask, np.fft.fftn(v1 * w), 0.0)
    return -(1j * k[0] * g0 + 1j * k[1] * g1), max(np.max(np.abs(v0)), np.max(np.abs(v1)))


def reference_stepper(omega0: ScalarField, t0: float, nt_fine: int, *,
                      cfl: float = 0.25, max_substeps: int = 200000) -> Trajectory:
    """IF-RK4 pseudo-spectral integration of the vorticity equation.

    Adaptive CFL substepping between the nt_fine stored output times; the
    mean is conserved exactly and the enstrophy must not increase.
    """
    grid = omega0.grid
    if grid.dim != 2:
        raise ValueError("reference_stepper is 2D only")
    _check_mean_zero(omega0, "initial vorticity")
    if nt_fine < 2:
        raise ValueError("nt_fine must be >= 2")
    ksq = grid.ksq()
    inv_ksq = ksq.copy()
    inv_ksq.ravel()[0] = 1.0
    inv_ksq = 1.0 / inv_ksq
    mask = grid.dealias_mask()
    k = [grid.deriv_wavenumber(a) for a in range(2)]
    times = np.linspace(0.0, t0, nt_fine)
    w_hat = omega0.spectrum().astype(np.complex128)
    cell = grid.cell_measure
    snaps = [omega0]

    def enstrophy(wh):
        return np.sum(np.abs(wh) ** 2) * cell / grid.n**2

    for i in range(nt_fine - 1):
        span = times[i + 1] - times[i]
        _, vmax = _nonlinear_rhs(w_hat, grid, inv_ksq, mask, k)
        dt_cfl = cfl * grid.h / max(vmax, 1e-12)
        nsub = max(1, int(np.ceil(span / dt_cfl)))
        if nsub > max_substeps:
            raise StabilityError(
                f"CFL requires {nsub} substeps over one output interval "
                f"(limit {max_substeps}); flow too fast for this grid"
            )
        dt = span / nsub
        e_half = np.exp(-ksq * dt / 2.0)
        e_full = e_half * e_half
        for _ in range(nsub):
            ens_old = enstrophy(w_hat)
            n1, _ = _nonlinear_rhs(w_hat, grid, inv_ksq, mask, k)
            n2, _ = _nonlinear_rhs(e_half * (w_hat + dt / 2.0 * n1), grid, inv_ksq, mask, k)
            n3, _ = _nonlinear_rhs(e_half * w_hat + dt / 2.0 * n2, grid, inv_ksq, mask, k)
            n4, _ = _nonlinear_rhs(e_full * w_hat + dt * e_half * n3, grid, inv_ksq, mask, k)
            w_hat = e_full * w_hat + dt / 6.0 * (
                e_full * n1 + 2.0 * e_half * (n2 + n3) + n4
            )
            ens_new = enstrophy(w_hat)
            if ens_new > ens_old * (1.0 + 1e-10) + 1e-300:
                raise StabilityError(
                    f"enstrophy increased ({ens_old:.6e} -> {ens_new:.6e}): "
                    "step unstable"
                )
        snaps.append(ScalarField.from_spectrum(grid, w_hat.copy()))
    return Trajectory(times, snaps)


# ---------------------------------------------------------------------------
# continuous dependence on initial data

def continuous_dependence_experiment(omega0: ScalarField, perturbations, cfg: MildSolveConfig):
    """Solve for omega0 and each perturbed datum; report input/output sizes,
    their ratios, and (when >= 2 nonzero inputs) the log-log slope."""
    base, _ = picard_solve(omega0, cfg)
    rows = []
    for delta in perturbations:
        input_size = w11_norm(delta)
        pert, _ = picard_solve(omega0 + delta, cfg)
        output_size = _sup_w11_diff(pert, base)
        ratio = output_size / input_size if input_size > 0 else 0.0
        rows.append(
            {"input_w11": input_size, "output_w11": output_size, "ratio": ratio}
        )
    sizes = [(r["input_w11"], r["output_w11"]) for r in rows
             if r["input_w11"] > 0 and r["output_w11"] > 0]
    slope = None
    if len(sizes) >= 2:
        lx = np.log([s[0] for s in sizes])
        ly = np.log([s[1] for s in sizes])
        slope = float(np.polyfit(lx, ly, 1)[0])
    return {"rows": rows, "slope": slope}
