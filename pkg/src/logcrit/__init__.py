"""Amoebas, logarithmic Gauss maps and Log-critical loci of plane curves,
with Viro patchworking of families and numerical checks of how the
Log-critical locus and Log-inflection points behave under degeneration."""

__version__ = "0.1.0"
