"""Edge-generated permutation groups over labelled Serre graphs.

The package builds, for a finite connected oriented graph, a chain of
finite permutation groups whose relation set is closed under deletion of
generators and whose final group reflects the connectivity of the input
graph.  On top of that it assembles and verifies finite F-inverse covers
of Margolis-Meakin expansions of finite groups.
"""

__version__ = "0.1.0"
