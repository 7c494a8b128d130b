"""Single-qubit open-system dynamics and four figures of merit along each trajectory:
non-classical volume, von Neumann entropy, entropy production and ergotropy."""

from .quantifiers import (
    QuadratureSpec,
    closed_form_delta,
    entropy_production_fixed_point,
    entropy_production_joint,
    ergotropy_general,
    ergotropy_qubit,
    mutual_information,
    nonclassical_volume,
    passive_state,
    relative_entropy,
    von_neumann_entropy,
    wigner_function,
    wigner_kernel,
)
from .records import QuantifierRecord, RunOutput, corr
from .spin_boson import GadConfig, JcmConfig, NmadConfig, run_gad, run_jcm, run_nmad
from .spin_spin import CentralSpinConfig, CollisionConfig, run_central_spin, run_collision
from .states import NS1, BlochVector, DensityMatrix, from_bloch, to_bloch

__version__ = "0.1.0"
