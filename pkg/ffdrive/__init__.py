"""
ffdrive - fast-forward trap protocol design and verification

Designs the time-dependent trap potential that carries a 1D quantum state into a
target state in finite time, then checks the protocol by split-operator propagation.
"""

__version__ = "1.0.0"
