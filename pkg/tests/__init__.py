# tests/__init__.py
"""RFSN test suite."""
