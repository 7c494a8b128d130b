"""Reference parameter sets for the five models."""

from __future__ import annotations

from .config import RunSpec, parse_config

FIGURES = {
    "fig2_collision": """\
model = collision
omega_s = 1.5
omega_r = 1
beta = 50
g_sr = 0.5
theta = 0.98 * pi / 2
tau = 0.5
n_collisions = 100
""",
    "fig3_central_spin": """\
model = central-spin
omega0 = 1.5
omega = 1
beta = 100
epsilon = 0.5
n_bath = 50
t_max = 50
n_samples = 400
""",
    "fig4_nmad": """\
model = nmad
omega0 = 10
lambda = 0.05
gamma0 = 50
reg_epsilon = 1e-9
t_max = 60
n_samples = 400
""",
    "fig5_gad": """\
model = gad
omega0 = 1.5
beta = 1
gamma = 0.05
dt = 1e-3
t_max = 100
n_samples = 400
""",
    "fig6_jcm": """\
model = jcm
omega0 = 1.5
omega_c = 1
beta = 3
g = 0.5
n_max = 32
tau = 0.5
n_samples = 400
""",
}


def figure_specs() -> dict[str, RunSpec]:
    return {name: parse_config(text) for name, text in FIGURES.items()}
