"""webenv: a full-stack environment for training and evaluating web agents.

Compiles live page state into compact semantically-identified observations,
executes a small fixed action vocabulary with network-quiescence
synchronization, and manages snapshot-backed browser/web-server container
pairs for large-scale rollouts.
"""

__version__ = "0.1.0"
