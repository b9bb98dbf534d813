"""
Testes unitários.
"""
