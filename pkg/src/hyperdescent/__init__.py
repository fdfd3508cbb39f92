"""Exact finite models of hyperdescent and weight complexes.

Subpackages and modules:

* ``qlinalg``: exact rational matrices and chain complexes
* ``simplicial``: truncated simplicial sets, (co)skeleta, hypercovers, homotopies
* ``descent``: Cech nerves, contracting homotopies, descent checks
* ``motives``: presented Q-linear categories, Karoubi objects, realizations
* ``weight``: weight complexes, cones, triangles, quotient stacks
* ``cli``: the ``hyperdescent`` batch runner
"""

__version__ = "0.1.0"
