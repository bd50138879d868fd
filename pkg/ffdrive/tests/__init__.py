"""
Tests Package

Test suite for ffdrive.

Modules:
- test_grid, test_traps, test_schedule: numerical building blocks
- test_designer: density interpolation, velocity and potential assembly
- test_propagator: split-operator verification and observables
- test_runner: catalog, scenario files, runs and sweeps
- test_cli / test_api: command-line and HTTP surfaces
- test_scenarios: full-resolution builtin runs (marked slow)

Run all tests:
    pytest ffdrive/tests/

Skip the slow builtin runs:
    pytest ffdrive/tests/ -m "not slow"
"""
