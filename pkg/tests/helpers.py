from fractions import Fraction

from wsnbundle.model import US_PER_S, RequirementSet

S = US_PER_S
MS = 1000
REF_EDGES = ((1, 0), (2, 1), (3, 1), (4, 2))


def req(d_s, chi_max=15, sa=Fraction(5, 10**6), chi_min=1, i_meas=S):
    return RequirementSet(round(Fraction(d_s) * S), Fraction(sa), chi_min, chi_max, i_meas)
