"""Boolean additive and multiplicative convolutions, max convolutions, free powers and tail asymptotics."""
from .boolean_conv import bool_add, bool_add_power, bool_mult
from .free_additive import belinschi_nica, free_power
from .handles import Leaf, as_handle
from .inversion import InversionProfile, atoms, density_at, tail_mass, total_mass
from .measures import Atomic, GridDensity, Mixture, ParetoTail, Semicircle, StandardCauchy, bernoulli, dirac
from .precision import working_precision
from .transforms import b_transform, cauchy, eta, f_transform, inv_b, k_transform, psi, remainder

__all__ = [
    "Atomic", "GridDensity", "InversionProfile", "Leaf", "Mixture", "ParetoTail", "Semicircle", "StandardCauchy",
    "as_handle", "atoms", "b_transform", "belinschi_nica", "bernoulli", "bool_add", "bool_add_power", "bool_mult",
    "cauchy", "density_at", "dirac", "eta", "f_transform", "free_power", "inv_b", "k_transform", "psi",
    "remainder", "tail_mass", "total_mass", "working_precision",
]
