"""High-precision evaluation of alternating sums over zeta, Gamma and
zeta'/zeta brackets, checked against their Stieltjes-type coefficient series."""

__version__ = "0.1.0"
