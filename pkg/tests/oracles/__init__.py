"""Independent reference computations used to freeze expected values.

Nothing here imports jcmap: each oracle recomputes its answer by a
different route (brute force, enumeration, grid search, closed forms).
"""
