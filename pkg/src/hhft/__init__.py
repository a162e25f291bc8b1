"""Fourier analysis on compact groups and Lipschitz-class checks from coefficient decay."""
