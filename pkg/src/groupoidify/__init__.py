"""Exact degroupoidification of finite groupoids and spans."""
