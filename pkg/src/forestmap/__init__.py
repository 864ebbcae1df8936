"""Random-forest structure explorer.

Core pipeline: train (or import) a forest, extract leaf rules, compute the
interval-overlap tree distance, cluster with complete linkage plus a dynamic
hybrid cut, and expose projections and per-cluster view models over HTTP.
"""

__version__ = "0.1.0"
