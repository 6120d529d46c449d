"""
Schinzel Lab Benchmark Test Suite.

Timings for dossiers, Nielsen enumeration, comp-branch solving and the search.
Run with: pytest tests/benchmarks/ -v --benchmark-json=benchmark_results.json
"""
