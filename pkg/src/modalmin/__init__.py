"""Minimal modal formulas over finite Kripke frames.

Tools for measuring modal formula complexity, checking frame validity and
bisimulation, playing formula-complexity games, and certifying that known
frame axioms are as small as any formula defining the same frame class.
"""

__version__ = "0.1.0"
