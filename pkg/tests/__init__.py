"""
Módulo de testes do Skeleton VCL.
"""
