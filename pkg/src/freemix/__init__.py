"""freemix: exact moments of orthogonally mixed distributions.

Modules
-------
combinat   exact integer kernel and identity evaluators
ncp        non-crossing partition engine and brute-force counters
freeprob   moment formulas, the o_R operation and the cumulant oracle
rmt        Monte Carlo verifier
cli        the ``freemix`` command
"""

__version__ = "0.1.0"
