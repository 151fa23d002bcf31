"""
Physics core: spin algebra, the hydrogenic EFG model, Hamiltonians, dynamics and gates.
"""
