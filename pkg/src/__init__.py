"""
Skeleton VCL - aprendizado contrastivo variacional auto-supervisionado
para sequências de esqueleto.
"""

__version__ = "0.1.0"
__author__ = "Skeleton VCL Team"
