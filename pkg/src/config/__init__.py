# src/config/__init__.py
"""
Configuration for the spin chain simulator
"""
