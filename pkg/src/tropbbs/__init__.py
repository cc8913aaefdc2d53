"""Periodic 2D box-ball system and its tropical spectral curve."""
