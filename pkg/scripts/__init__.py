"""
Schinzel Lab utility scripts.

- benchmark_search.py: time the dossier, comp-branch, search and conjecture workloads
"""
