"""Figure-style scans built from a ScenarioConfig.

Each scenario returns a list of ``Table`` objects; the CLI writes one CSV per
table.  Sweep points are independent and may be farmed out to a process
pool, but rows are always assembled in sweep order.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import fock
from . import gaussian as gs
from .config import ConfigError
from .dilation import dilate
from .mask import CircularIris, build_coupling_matrix, propagate_classical
from .modes import GridSpec, intensity_grid
from .numerics import minimize_scalar


@dataclass
class Table:
    columns: list
    rows: list
    suffix: str = ""
    notes: list = field(default_factory=list)


def _iris(cfg, radius, z0):
    return CircularIris(cfg.radius_m(radius), cfg.z0_m(z0))


def coupling_at(cfg, radius, z0):
    return build_coupling_matrix(cfg.beam, _iris(cfg, radius, z0), cfg.basis, cfg.quadrature)


def transfer_at(cfg, radius, z0):
    return dilate(coupling_at(cfg, radius, z0))


def _points(cfg):
    return [(a, z) for a in cfg.radii for z in cfg.z0s]


def _map(cfg, fn, points):
    if cfg.workers > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            return list(pool.map(fn, [cfg] * len(points), points))
    return [fn(cfg, pt) for pt in points]


def _need_pair(cfg):
    if len(cfg.basis) < 2:
        raise ConfigError("this scenario needs at least two basis modes")


def _single_point(cfg):
    if len(cfg.radii) != 1 or len(cfg.z0s) != 1:
        raise ConfigError("this scenario takes a single radius and a single z0")
    return cfg.radii[0], cfg.z0s[0]


# -- per-point workers (module level so a process pool can pickle them) --


def _coeffs_point(cfg, pt):
    b = coupling_at(cfg, *pt)
    return [
        [pt[0], pt[1], m.l, m.p, m2.l, m2.p, float(b.matrix[i, j].real), float(b.matrix[i, j].imag)]
        for i, m in enumerate(b.basis)
        for j, m2 in enumerate(b.basis)
    ]


def _dilate_point(cfg, pt):
    t = transfer_at(cfg, *pt)
    return [
        [pt[0], pt[1], str(out), str(inp), float(t.U[i, j].real), float(t.U[i, j].imag)]
        for i, out in enumerate(t.labels)
        for j, inp in enumerate(t.labels)
    ]


def _classical_point(cfg, pt):
    b = coupling_at(cfg, *pt)
    coeffs = {m: s.amplitude for m, s in cfg.inputs.items()}
    out = propagate_classical(coeffs, b)
    return [[pt[0], pt[1], m.l, m.p, a.real, a.imag, abs(a) ** 2] for m, a in out.items()]


def _squeeze_point(cfg, pt):
    t = transfer_at(cfg, *pt)
    state = gs.output_signal_state(cfg.squeeze_specs(), t)
    rows = []
    for m in cfg.basis:
        lo, hi = gs.squeeze_antisqueeze(state, m)
        rows.append([pt[0], pt[1], str(m), lo, hi, lo + hi])
    return rows


def _prob_point(cfg, pt):
    t = transfer_at(cfg, *pt)
    specs = {m: (s.r, s.theta) for m, s in cfg.squeeze_specs().items()}
    rho = fock.squeezed_pair_output(t, specs, cfg.n_max)
    table = fock.joint_distribution(rho, cfg.basis[0], cfg.basis[1])
    return [[pt[0], pt[1]] + [float(table[n, n]) for n in range(4)]]


def _hom_point(cfg, pt):
    t = transfer_at(cfg, *pt)
    dist = fock.hom_coincidence(t, distinguishable=True)
    ind = fock.hom_coincidence(t, distinguishable=False)
    return [[pt[0], pt[1], dist.engine, ind.engine, dist.closed_form, ind.closed_form]]


def _photon_mode(cfg):
    for m in cfg.basis:
        if m in cfg.inputs and cfg.inputs[m].photons > 0:
            return m
    return cfg.basis[0]


def ch_state(cfg, t):
    """Two-mode state handed to the CH minimiser for one iris."""
    src = _photon_mode(cfg)
    if cfg.ch_state == "entangled":
        _, phi = fock.single_photon_output(t, src)
        return fock.to_density(phi)
    occ = [1 if lab == src else 0 for lab in t.labels]
    out = fock.apply_transfer_fock(fock.number_state(t.labels, occ), t)
    return fock.reduced_density(out, t.signal_labels[:2])


def _ch_point(cfg, pt):
    t = transfer_at(cfg, *pt)
    res = fock.ch_min(ch_state(cfg, t), fock.CHSettings(starts=cfg.ch_starts, seed=cfg.seed))
    row = [pt[1], res.value]
    for d in res.displacements:
        row += [d.real, d.imag]
    return [row]


def _cov_point(cfg, pt):
    return [[pt[0], pt[1], covariance_at(cfg, *pt)]]


def covariance_at(cfg, radius, z0):
    t = transfer_at(cfg, radius, z0)
    state = gs.output_signal_state(cfg.squeeze_specs(), t)
    return gs.photon_cov(state, cfg.basis[0], cfg.basis[1])


def _flatten(chunks):
    return [row for chunk in chunks for row in chunk]


# -- scenarios --


def render_modes(cfg):
    grid = GridSpec(cfg.grid_half_width * cfg.beam.w0, cfg.grid_n)
    ax = grid.axis() / cfg.beam.w0
    rows = []
    for m in cfg.basis:
        for z in cfg.z0s:
            img = intensity_grid(cfg.beam, m, cfg.z0_m(z), grid) * cfg.beam.w0**2
            for iy, y in enumerate(ax):
                for ix, x in enumerate(ax):
                    rows.append([m.l, m.p, z, float(x), float(y), float(img[iy, ix])])
    return [Table(["l", "p", "z0_over_zR", "x_over_w0", "y_over_w0", "intensity_w0sq"], rows)]


def coeffs(cfg):
    rows = _flatten(_map(cfg, _coeffs_point, _points(cfg)))
    return [Table(["radius_over_w0", "z0_over_zR", "l", "p", "l2", "p2", "re", "im"], rows)]


def dilate_table(cfg):
    rows = _flatten(_map(cfg, _dilate_point, _points(cfg)))
    return [Table(["radius_over_w0", "z0_over_zR", "out", "in", "re", "im"], rows)]


def classical(cfg):
    rows = _flatten(_map(cfg, _classical_point, _points(cfg)))
    return [Table(["radius_over_w0", "z0_over_zR", "l", "p", "re", "im", "power"], rows)]


def noise_scan(cfg):
    _need_pair(cfg)
    specs = cfg.squeeze_specs()
    rows = []
    for a in cfg.radii:
        noise = gs.noise_scan(specs, cfg.beam, cfg.radius_m(a), [cfg.z0_m(z) for z in cfg.z0s], cfg.basis, cfg.quadrature)
        rows += [[a, z, float(v)] for z, v in zip(cfg.z0s, noise)]
    return [Table(["radius_over_w0", "z0_over_zR", "min_noise_db"], rows)]


def wigner_panels(cfg):
    radius = cfg.radii[0]
    half = cfg.grid_half_width
    axis = np.linspace(-half, half, cfg.grid_n)
    inputs = gs.product([gs.displaced_squeezed(s, m) for m, s in cfg.squeeze_specs().items()])
    panels = [("input", "", inputs)]
    for z in cfg.z0s:
        t = transfer_at(cfg, radius, z)
        panels.append(("output", z, gs.output_signal_state(cfg.squeeze_specs(), t)))
    rows = []
    for name, z, state in panels:
        for m in cfg.basis:
            w = gs.wigner_grid(state, m, axis)
            for ip, pv in enumerate(axis):
                for iq, qv in enumerate(axis):
                    rows.append([name, z, str(m), float(qv), float(pv), float(w[ip, iq])])
    return [Table(["panel", "z0_over_zR", "mode", "q", "p", "wigner"], rows)]


def squeeze_scan(cfg):
    rows = _flatten(_map(cfg, _squeeze_point, _points(cfg)))
    return [Table(["radius_over_w0", "z0_over_zR", "mode", "squeeze_db", "antisqueeze_db", "sum_db"], rows)]


def joint_prob(cfg):
    _need_pair(cfg)
    radius, z0 = _single_point(cfg)
    specs = {m: (s.r, s.theta) for m, s in cfg.squeeze_specs().items()}
    if cfg.side == "input":
        parts = [fock.squeezed_vacuum_fock(*specs[m], cfg.n_max, label=m) for m in cfg.basis]
        rho = fock.to_density(fock.tensor_fock(parts, cutoff=cfg.n_max))
    else:
        rho = fock.squeezed_pair_output(transfer_at(cfg, radius, z0), specs, cfg.n_max)
    table = fock.joint_distribution(rho, cfg.basis[0], cfg.basis[1])
    rows = [[i, j, float(table[i, j])] for i in range(table.shape[0]) for j in range(table.shape[1]) if i + j <= cfg.n_max]
    tails = [fock.truncation_tail(specs[m][0], cfg.n_max) for m in cfg.basis[:2]]
    return [Table(["n_i", "n_j", "probability"], rows, notes=[f"single-mode truncation tails: {tails!r}"])]


def prob_vs_radius(cfg):
    _need_pair(cfg)
    rows = _flatten(_map(cfg, _prob_point, _points(cfg)))
    return [Table(["radius_over_w0", "z0_over_zR", "P00", "P11", "P22", "P33"], rows)]


def cov_vs_radius(cfg):
    _need_pair(cfg)
    rows = _flatten(_map(cfg, _cov_point, _points(cfg)))
    notes = []
    for z in cfg.z0s:
        curve = [(r[0], r[2]) for r in rows if r[1] == z]
        if len(curve) >= 3:
            k = max(range(len(curve)), key=lambda i: curve[i][1])
            lo, hi = curve[max(k - 1, 0)][0], curve[min(k + 1, len(curve) - 1)][0]
            a, neg = minimize_scalar(lambda x: -covariance_at(cfg, x, z), (lo, hi), width=1e-7)
            notes.append(f"peak at z0_over_zR={z!r}: radius_over_w0={a!r} covariance={-neg!r}")
    return [Table(["radius_over_w0", "z0_over_zR", "covariance"], rows, notes=notes)]


def ch_scan(cfg):
    _need_pair(cfg)
    columns = ["z0_over_zR", "ch_min", "alpha1_re", "alpha1_im", "alpha2_re", "alpha2_im",
               "beta1_re", "beta1_im", "beta2_re", "beta2_im"]
    tables = []
    for k, a in enumerate(cfg.radii):
        rows = _flatten(_map(cfg, _ch_point, [(a, z) for z in cfg.z0s]))
        suffix = "" if len(cfg.radii) == 1 else f"_a{k}"
        tables.append(Table(columns, rows, suffix, notes=[f"radius_over_w0={a!r} ch_state={cfg.ch_state}"]))
    return tables


def hom_scan(cfg):
    _need_pair(cfg)
    rows = _flatten(_map(cfg, _hom_point, _points(cfg)))
    columns = ["radius_over_w0", "z0_over_zR", "distinguishable", "indistinguishable",
               "distinguishable_closed", "indistinguishable_closed"]
    return [Table(columns, rows)]


SCENARIOS = {
    "render-modes": render_modes,
    "coeffs": coeffs,
    "dilate": dilate_table,
    "classical": classical,
    "noise-scan": noise_scan,
    "wigner-panels": wigner_panels,
    "squeeze-scan": squeeze_scan,
    "joint-prob": joint_prob,
    "prob-vs-radius": prob_vs_radius,
    "cov-vs-radius": cov_vs_radius,
    "ch-scan": ch_scan,
    "hom-scan": hom_scan,
}

