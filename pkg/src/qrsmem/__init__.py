"""Quantum Reed-Solomon outer codes over Galois qudits.

Code construction, fault-tolerant syndrome-extraction protocol simulation
at the qudit level, closed-form failure bounds, and the space-overhead
versus logical-error-rate parameter sweep for a concatenated memory.
"""

__version__ = "0.1.0"
