"""Exact computational toolkit for graded nilpotent Lie algebras:
Chevalley-Eilenberg cohomology with weights and purity, the purity sieve on
grading dimensions, the symbolic flat-model Rumin complex, analytic torsion
of finite complexes, and lattice arithmetic in the (2,3,5) group."""

__version__ = "0.1.0"
