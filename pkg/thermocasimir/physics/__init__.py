"""Physics kernels: dispersion, reflection, Matsubara sums and toy models."""
