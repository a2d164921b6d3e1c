"""
Dense exact kernel of the inhomogeneous six-vertex model: operators on (C^2)^{⊗L},
monodromy and transfer matrices, the factorizing F-basis, Bethe roots, the
coordinate wave function and the domain-wall partition function.
"""
