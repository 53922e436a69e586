"""
linmap Test Suite
"""
