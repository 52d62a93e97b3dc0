"""Integer homology: Smith normal form, chain complexes and configuration acyclicity."""

from src.homology.chain_complex import (
    ChainComplex,
    betti_mod2,
    configuration_complex,
    homology_summary,
    is_acyclic,
    mask_complex,
    mask_homology,
    mask_is_acyclic,
)
from src.homology.smith import rank_mod2, smith_normal_form

__all__ = [
    "ChainComplex",
    "betti_mod2",
    "configuration_complex",
    "homology_summary",
    "is_acyclic",
    "mask_complex",
    "mask_homology",
    "mask_is_acyclic",
    "rank_mod2",
    "smith_normal_form",
]
