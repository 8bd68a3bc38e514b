"""Exact counterfactual and semi-factual explanations over binary inputs."""

__version__ = "0.1.0"
