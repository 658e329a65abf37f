"""
Test Package
Unit tests for the voa-modular modules
"""
