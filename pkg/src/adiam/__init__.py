"""Additive diameters of group and Lie algebra representations, with replayable certificates."""

from . import eqmorph, exactlin, groupdiam, liediam, repkit, spaces
from .exactlin import RationalMatrix, Subspace
from .groupdiam import INFINITE, Certificate, diameter, verify_certificate
from .liediam import LieCertificate, diameter_lie, verify_lie_certificate
from .repkit import conj_rep, parse_rep, sl2_irrep, sl2_sym
from .eqmorph import parse_map, waring_bound, verify_waring

__all__ = [
    "INFINITE",
    "Certificate",
    "LieCertificate",
    "RationalMatrix",
    "Subspace",
    "conj_rep",
    "diameter",
    "diameter_lie",
    "eqmorph",
    "exactlin",
    "groupdiam",
    "liediam",
    "parse_map",
    "parse_rep",
    "repkit",
    "sl2_irrep",
    "sl2_sym",
    "spaces",
    "verify_certificate",
    "verify_lie_certificate",
    "verify_waring",
    "waring_bound",
]
