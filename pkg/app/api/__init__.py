"""
API package for Wind Causality Studio (FastAPI endpoints)
"""
