"""Numerical engines: spectra, filters, indicators, synthesis and imaging."""
