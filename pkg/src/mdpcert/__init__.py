"""Certified bounds for finite Markov decision processes.

Solvers compute values, the certificate generator attaches ranking data, and
an exact checker in :mod:`mdpcert.certificates` re-validates the result
without touching solver code.
"""

__version__ = "0.1.0"
