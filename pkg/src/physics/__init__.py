# src/physics/__init__.py
"""
Spin algebra, Hamiltonians, ground states, adiabatic evolution, observables
and NMR pulse compilation for small Ising chains
"""
