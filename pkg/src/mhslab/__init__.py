"""Exact residue arithmetic for restricted-composition harmonic sums and their congruences."""

from .bernoulli import bernoulli_exact, bernoulli_mod_p, bernoulli_residue
from .compsum import brute_force_comp_sum, comp_sum_R, comp_sum_S, count_C_exact
from .mhs import mhs_H, mhs_U
from .modring import ResidueContext, crt_combine, rational_reconstruct, residue_of_rational

__version__ = "0.1.0"

__all__ = [
    "ResidueContext", "crt_combine", "rational_reconstruct", "residue_of_rational",
    "bernoulli_exact", "bernoulli_mod_p", "bernoulli_residue",
    "comp_sum_S", "comp_sum_R", "brute_force_comp_sum", "count_C_exact",
    "mhs_H", "mhs_U",
]
