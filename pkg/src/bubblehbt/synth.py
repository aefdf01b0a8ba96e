"""Synthetic correlation surfaces: exact, resolution-smeared, and noisy.

Forward model for what a coincidence experiment would record on a (q,
d_omega) grid.  Counting noise is Poisson on the coincidence numerator with
a fixed expected denominator N per bin; each grid point draws from its own
seeded substream so generation is deterministic and order-independent.

Poor energy resolution is modeled as a box average of the time factor over
a full width delta_omega; since <T> is q-independent for factorized
sources, the averaged excess still factorizes and can be renormalized away
at the origin, which is what `renormalize_at_origin` does.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import integrate

from .correlators import CHAOTICITY, correlation, form_factor, time_factor
from .sources import Emission, SourceCase, SourceSpec

__all__ = [
    "GridSpec",
    "NoiseSpec",
    "CorrelationSurface",
    "FormFactorSamples",
    "CannotRenormalizeError",
    "generate",
    "mean_time_factor",
    "apply_energy_smearing",
    "renormalize_at_origin",
    "write_surface_csv",
    "read_surface_csv",
]


class CannotRenormalizeError(ValueError):
    """No significant correlation excess at the origin (the coherent-source
    signature, or noise-dominated data)."""


@dataclass(frozen=True)
class GridSpec:
    """Strictly increasing q (1/um) and d_omega (1/ps) sample values."""

    q_values: Tuple[float, ...]
    d_omega_values: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "q_values", tuple(float(q) for q in self.q_values))
        object.__setattr__(self, "d_omega_values",
                           tuple(float(w) for w in self.d_omega_values))
        if not self.q_values or not self.d_omega_values:
            raise ValueError("grid must be non-empty")
        if any(b <= a for a, b in zip(self.q_values, self.q_values[1:])):
            raise ValueError("q_values must be strictly increasing")
        if any(b <= a for a, b in
               zip(self.d_omega_values, self.d_omega_values[1:])):
            raise ValueError("d_omega_values must be strictly increasing")
        if self.q_values[0] < 0.0:
            raise ValueError("q_values must be non-negative")


@dataclass(frozen=True)
class NoiseSpec:
    """Expected coincidence counts per bin at C = 1, and the RNG seed."""

    pairs_per_bin: int
    seed: int

    def __post_init__(self):
        if self.pairs_per_bin < 100:
            raise ValueError("pairs_per_bin must be at least 100")


@dataclass
class CorrelationSurface:
    """Tabulated correlation data, truth and observed channels.

    Flat arrays in row-major (q outer, d_omega inner) order.
    """

    q: np.ndarray
    d_omega: np.ndarray
    c_true: np.ndarray
    c_obs: np.ndarray
    sigma: np.ndarray
    spec: SourceSpec
    grid: GridSpec
    noise: Optional[NoiseSpec] = None
    smear_dw: Optional[float] = None


@dataclass
class FormFactorSamples:
    """Renormalized form-factor points Phi_hat(q) with uncertainties."""

    q: np.ndarray
    phi_hat: np.ndarray
    phi_err: np.ndarray


def mean_time_factor(spec: SourceSpec, delta_omega_window: float) -> float:
    """<T> over a box window of full width delta_omega (factorized cases)."""
    if spec.case not in (SourceCase.A_GAUSSIAN, SourceCase.B_SHELL,
                         SourceCase.C_SPHERE, SourceCase.D_EXPONENTIAL):
        raise ValueError("smearing of the non-factorized case E is unsupported")
    if not delta_omega_window > 0.0:
        raise ValueError("smearing window must be positive")
    half = 0.5 * delta_omega_window
    val, _ = integrate.quad(lambda w: time_factor(spec.case, spec.tau, w),
                            -half, half, epsabs=1e-13, epsrel=1e-11, limit=200)
    return val / delta_omega_window


def apply_energy_smearing(spec: SourceSpec, q: float,
                          delta_omega_window: float) -> float:
    """Smeared correlation value 1 + (1/2) <T> Phi(q)."""
    mean_t = mean_time_factor(spec, delta_omega_window)
    return 1.0 + CHAOTICITY * mean_t * form_factor(spec.case, spec.R, q)


def _true_value(spec: SourceSpec, q: float, dw: float,
                smear_dw: Optional[float], mean_t: Optional[float]) -> float:
    if spec.emission is Emission.COHERENT:
        return 1.0
    if smear_dw is not None:
        return 1.0 + CHAOTICITY * mean_t * form_factor(spec.case, spec.R, q)
    return correlation(spec, q, dw).c


def generate(spec: SourceSpec, grid: GridSpec,
             noise: Optional[NoiseSpec] = None,
             smear_dw: Optional[float] = None) -> CorrelationSurface:
    """Tabulate c_true over the grid; with `noise`, draw c_obs = n/N with
    n ~ Poisson(N c_true) and sigma = sqrt(c_true/N) per bin."""
    mean_t = None
    if smear_dw is not None and spec.emission is Emission.CHAOTIC:
        mean_t = mean_time_factor(spec, smear_dw)
    nq, nw = len(grid.q_values), len(grid.d_omega_values)
    q = np.empty(nq * nw)
    dw = np.empty(nq * nw)
    c_true = np.empty(nq * nw)
    for i, qi in enumerate(grid.q_values):
        for j, wj in enumerate(grid.d_omega_values):
            idx = i * nw + j
            q[idx] = qi
            dw[idx] = wj
            c_true[idx] = _true_value(spec, qi, wj, smear_dw, mean_t)
    if noise is None:
        c_obs = c_true.copy()
        sigma = np.zeros_like(c_true)
    else:
        n_exp = noise.pairs_per_bin
        c_obs = np.empty_like(c_true)
        for idx in range(c_true.size):
            # per-point substream: deterministic under any execution order
            rng = np.random.default_rng([noise.seed, idx])
            c_obs[idx] = rng.poisson(n_exp * c_true[idx]) / n_exp
        sigma = np.sqrt(c_true / n_exp)
    return CorrelationSurface(q=q, d_omega=dw, c_true=c_true, c_obs=c_obs,
                              sigma=sigma, spec=spec, grid=grid, noise=noise,
                              smear_dw=smear_dw)


def origin_slice(surface: CorrelationSurface) -> np.ndarray:
    """Indices of the rows at the smallest |d_omega| in the surface, ordered
    by q."""
    dw_abs = np.abs(surface.d_omega)
    target = dw_abs.min()
    idx = np.flatnonzero(dw_abs == target)
    return idx[np.argsort(surface.q[idx])]


def renormalize_at_origin(surface: CorrelationSurface) -> FormFactorSamples:
    """Phi_hat(q) = (c_obs(q) - 1) / (c_obs(q0) - 1) along the smallest
    |d_omega| slice, q0 the smallest q; the q-independent <T> (and the 1/2)
    cancel in the ratio."""
    idx = origin_slice(surface)
    q = surface.q[idx]
    excess = surface.c_obs[idx] - 1.0
    sig = surface.sigma[idx]
    e0, s0 = excess[0], sig[0]
    if e0 <= 3.0 * s0:
        raise CannotRenormalizeError(
            "cannot renormalize: no significant correlation at origin")
    phi_hat = excess / e0
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.where(excess != 0.0, sig / excess, 0.0)
    phi_err = np.abs(phi_hat) * np.sqrt(rel ** 2 + (s0 / e0) ** 2)
    phi_err[0] = 0.0  # Phi_hat(q0) = 1 by construction
    return FormFactorSamples(q=q, phi_hat=phi_hat, phi_err=phi_err)


# ---------------------------------------------------------------------------
# CSV serialization: '#'-prefixed key = value metadata, then a header line,
# then data rows with 17 significant digits.

def _fmt(x: float) -> str:
    return f"{x:.17g}"


def surface_metadata(surface: CorrelationSurface) -> dict:
    spec = surface.spec
    meta = {
        "artifact": "correlation_surface",
        "case": spec.case.value,
        "emission": spec.emission.value,
        "tau_ps": _fmt(spec.tau),
    }
    if spec.R is not None:
        meta["R_um"] = _fmt(spec.R)
    if spec.r_dot is not None:
        meta["rdot_um_per_ps"] = _fmt(spec.r_dot)
    meta["q_values_per_um"] = " ".join(_fmt(v) for v in surface.grid.q_values)
    meta["d_omega_values_per_ps"] = " ".join(
        _fmt(v) for v in surface.grid.d_omega_values)
    if surface.noise is not None:
        meta["pairs_per_bin"] = str(surface.noise.pairs_per_bin)
        meta["seed"] = str(surface.noise.seed)
    if surface.smear_dw is not None:
        meta["smear_dw_per_ps"] = _fmt(surface.smear_dw)
    meta["units"] = "q in 1/um, d_omega in 1/ps"
    return meta


def write_surface_csv(surface: CorrelationSurface, path: str) -> None:
    with open(path, "w") as fh:
        for key, val in surface_metadata(surface).items():
            fh.write(f"# {key} = {val}\n")
        fh.write("q,d_omega,c_true,c_obs,sigma\n")
        for row in zip(surface.q, surface.d_omega, surface.c_true,
                       surface.c_obs, surface.sigma):
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _parse_metadata(lines: Sequence[str]) -> dict:
    meta = {}
    for line in lines:
        body = line.lstrip("#").strip()
        if "=" in body:
            key, _, val = body.partition("=")
            meta[key.strip()] = val.strip()
    return meta


def read_surface_csv(path: str) -> CorrelationSurface:
    header_lines = []
    data = []
    columns = None
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                header_lines.append(line)
            elif columns is None:
                columns = line.split(",")
            else:
                data.append([float(v) for v in line.split(",")])
    if columns != ["q", "d_omega", "c_true", "c_obs", "sigma"]:
        raise ValueError(f"unexpected surface CSV columns: {columns}")
    meta = _parse_metadata(header_lines)
    if meta.get("artifact") != "correlation_surface":
        raise ValueError("not a correlation surface CSV")
    spec = SourceSpec(
        case=SourceCase(meta["case"]),
        tau=float(meta["tau_ps"]),
        R=float(meta["R_um"]) if "R_um" in meta else None,
        r_dot=float(meta["rdot_um_per_ps"]) if "rdot_um_per_ps" in meta else None,
        emission=Emission(meta["emission"]),
    )
    grid = GridSpec(
        q_values=tuple(float(v) for v in meta["q_values_per_um"].split()),
        d_omega_values=tuple(
            float(v) for v in meta["d_omega_values_per_ps"].split()),
    )
    noise = None
    if "pairs_per_bin" in meta:
        noise = NoiseSpec(pairs_per_bin=int(meta["pairs_per_bin"]),
                          seed=int(meta["seed"]))
    smear_dw = float(meta["smear_dw_per_ps"]) if "smear_dw_per_ps" in meta else None
    arr = np.asarray(data, dtype=float)
    return CorrelationSurface(q=arr[:, 0], d_omega=arr[:, 1], c_true=arr[:, 2],
                              c_obs=arr[:, 3], sigma=arr[:, 4], spec=spec,
                              grid=grid, noise=noise, smear_dw=smear_dw)
