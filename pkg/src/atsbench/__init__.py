"""atsbench: an exact-arithmetic workbench for group-graded associative
algebras with involution and associative triple systems of the second kind.

Everything is computed over cyclotomic fields Q(zeta_N) with no floating
point; structural claims (gradings, involutions, isomorphisms, simplicity)
are verified by exhaustive finite tensor scans.
"""

__version__ = "0.1.0"
