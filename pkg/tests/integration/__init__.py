"""
Testes de integração.
"""