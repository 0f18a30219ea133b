"""
__init__.py
"""
