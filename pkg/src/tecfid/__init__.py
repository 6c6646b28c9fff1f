"""Time-energy cost and worst-case entanglement fidelity of quantum channels."""

from .channels import (
    KrausChannel,
    choi_distance,
    dephasing,
    depolarizing,
    identity_channel,
    kraus_combination,
    maximally_entangled,
    purify,
    random_channel,
    read_channel_file,
    reduced_state,
    unitary_channel,
    write_channel_file,
)
from .errors import TecfidError
from .fidelity import (
    FidelityResult,
    SolverOptions,
    depolarizing_fmin_closed_form,
    depolarizing_no_ancilla_fidelity,
    entanglement_fidelity,
    entanglement_fidelity_direct,
    fidelity_gradient,
    fidelity_objective,
    fmin_bruteforce,
    fmin_descent,
    numerical_range_sample,
    optimal_w,
)
from .matcore import (
    EigenDecomposition,
    hermitian_eigen,
    min_eigenpair,
    random_density,
    random_pure_state,
    random_unitary,
    unitary_eigenangles,
)
from .tecost import (
    CostOptions,
    TECostResult,
    TeurReport,
    bures_angle,
    channel_cost,
    orthogonalization_estimates,
    cost_energy_product,
    cost_objective,
    depolarizing_cost_closed_form,
    energy_spread,
    fastest_state_time,
    hamiltonian_energies_from_unitary,
    orthogonalization_time,
    teur_bound_check,
    unitary_channel_cost,
    unitary_cost,
)

__version__ = "0.1.0"

__all__ = [
    "EigenDecomposition",
    "FidelityResult",
    "KrausChannel",
    "SolverOptions",
    "CostOptions",
    "TECostResult",
    "TecfidError",
    "TeurReport",
    "bures_angle",
    "channel_cost",
    "orthogonalization_estimates",
    "choi_distance",
    "cost_energy_product",
    "cost_objective",
    "dephasing",
    "depolarizing",
    "depolarizing_cost_closed_form",
    "depolarizing_fmin_closed_form",
    "depolarizing_no_ancilla_fidelity",
    "energy_spread",
    "entanglement_fidelity",
    "entanglement_fidelity_direct",
    "fastest_state_time",
    "fidelity_gradient",
    "fidelity_objective",
    "fmin_bruteforce",
    "fmin_descent",
    "hamiltonian_energies_from_unitary",
    "hermitian_eigen",
    "identity_channel",
    "kraus_combination",
    "maximally_entangled",
    "min_eigenpair",
    "numerical_range_sample",
    "optimal_w",
    "orthogonalization_time",
    "purify",
    "random_channel",
    "random_density",
    "random_pure_state",
    "random_unitary",
    "read_channel_file",
    "reduced_state",
    "teur_bound_check",
    "unitary_channel",
    "unitary_channel_cost",
    "unitary_cost",
    "unitary_eigenangles",
    "write_channel_file",
]
