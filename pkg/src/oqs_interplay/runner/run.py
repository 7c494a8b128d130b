"""Dispatch a validated run specification to its engine."""

from __future__ import annotations

from .. import __version__
from ..records import RunOutput
from ..spin_boson import run_gad, run_jcm, run_nmad
from ..spin_spin import run_central_spin, run_collision
from .config import RunSpec

KERNEL = "Stratonovich-Weyl spin-1/2: (I + sqrt(3) n.sigma)/(4 pi)"

_ENGINES = {
    "collision": run_collision,
    "central-spin": run_central_spin,
    "nmad": run_nmad,
    "gad": run_gad,
    "jcm": run_jcm,
}


class SimulationError(RuntimeError):
    pass


def run(spec: RunSpec) -> RunOutput:
    try:
        out = _ENGINES[spec.model](spec.parameters, spec.quadrature)
    except (ValueError, ArithmeticError, FloatingPointError) as e:
        raise SimulationError(f"{spec.model}: {e}") from e
    meta = dict(out.metadata)
    meta["wigner_kernel"] = KERNEL
    meta["quadrature"] = f"{spec.quadrature.n_theta},{spec.quadrature.n_phi}"
    meta["log_base"] = "e"
    meta["version"] = __version__
    return RunOutput(out.records, meta)
