"""Witt classes of SL2 and PSL2 over Q and quadratic fields.

Subpackages and modules:

* :mod:`wittclass.fields`: exact fields and square-class helpers
* :mod:`wittclass.witt`: Witt-ring arithmetic, local symbols, equality
* :mod:`wittclass.sl2`: matrices, Bruhat forms, sign section, anti-commuting pairs
* :mod:`wittclass.cocycles`: the cocycles and their sampled checks
* :mod:`wittclass.surfaces`: extension arithmetic and surface evaluations
* :mod:`wittclass.cli`: the ``wittclass`` command
"""

__version__ = "0.1.0"
