"""Solvers for two PT-symmetric non-Hermitian models.

* :mod:`nhqm.two_level` -- the 2x2 matrix H(mu) with an exceptional point at mu = +-1
* :mod:`nhqm.confined` -- Galerkin spectra of -D^2 + i mu x in a box of length T
* :mod:`nhqm.shooting` -- independent ODE shooting check of the confined spectra
* :mod:`nhqm.asymptotics` -- whole-line tail forms for -D^2 + i x^m
"""

__version__ = "0.1.0"
