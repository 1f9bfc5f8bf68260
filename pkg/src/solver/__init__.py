"""
Equilibrium computation: Frank-Wolfe on the Beckmann potential, the
regularized monotone selection and optimality certificates.
"""
