"""
Test suite for the PFS throughput oracle

- test_numerics.py - exponential integral, quadrature, compensated sums
- test_mcs.py / test_sinr.py - MCS tables and SINR laws
- test_analytic.py / test_baselines.py - exact models and baselines
- test_simulator.py - fading processes and the PFS simulator
- test_scenario.py - scenario schema and link profiles
- test_processors.py / test_exporters.py / test_cli.py - reports, export, command line
- test_integration.py - models against simulation (marked slow)

Run all tests with: pytest tests/ -v
Skip the slow runs: pytest -m "not slow"
Run with coverage: pytest tests/ --cov=src --cov-report=html
"""
