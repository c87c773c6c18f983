"""Exact and numerical checks for the quaternionic Heisenberg group, its Cayley
transform to the sphere, and the sharp Folland-Stein and Yamabe constants."""

__version__ = "0.1.0"
