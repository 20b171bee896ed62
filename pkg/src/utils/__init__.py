# src/utils/__init__.py
"""
Error handling and logging utilities
"""
