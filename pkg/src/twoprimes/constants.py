"""Published numerical constants consumed by the library.

All literals are kept as decimal strings and converted exactly; the digits
printed in the literature are treated as exact values.
"""

# Chen's admissible constant in the Bombieri-Davenport twin-prime upper bound
B_CHEN = "3.9171"
# constant under a twin-prime-conjecture hypothesis
B_CONJECTURAL = "1"
# Khalfalah-Pintz upper estimate for A(1)
A1_UPPER = "0.2792521041"
# 2 B (1 + A(1)) as printed for B = B_CHEN and B = 1
C_PRINTED = "10.0219168340"
C_CONJECTURAL_PRINTED = "2.5585042082"
# Parsell's constant in the refined form of his C_1(q1, q2)
C1_PARSELL = "11.4525218267"
PARSELL_PUBLISHED_FACTOR = "25"
# level-set thresholds from the Pintz-Ruzsa computation (|G| <= nu L off a small set)
NU_ALGEBRAIC = "0.83372131685"
NU_TRANSCENDENTAL = "0.91237810306"
NU_PARSELL = "0.954"
# twin prime constant enclosure (Gourdon-Sebah)
C0_LOWER = "0.66016181584"
C0_UPPER = "0.66016181585"
# Rosser-Schoenfeld n/phi(n) bound, second-order coefficient
ROSSER_SCHOENFELD_COEFF = "2.50637"

# values the s0 formulas were reported to give for the worked instances
REPORTED_S0 = {
    "sqrt3_sqrt2_algebraic": 61,
    "pi_sqrt2_transcendental": 119,
    "parsell_published": 267,
}

PROVENANCE = {
    "B_chen": "Chen (1978): admissible B in the Bombieri-Davenport bound Z(X;2n) < B S(n) X",
    "B_conjectural": "B = 1 under the twin-prime asymptotic Z(X;2n) ~ S(n) X",
    "A1_upper": "Khalfalah-Pintz numerical estimate A(1) < 0.2792521041",
    "C": "2 B (1 + A(1)) with Chen's B",
    "C_conjectural": "2 B (1 + A(1)) with B = 1",
    "C1_parsell": "Parsell (2003), refined constant C_1",
    "nu_algebraic": "Pintz-Ruzsa level-set threshold, algebraic ratio case",
    "nu_transcendental": "Pintz-Ruzsa level-set threshold, transcendental ratio case",
    "nu_parsell": "Parsell (2003) level-set threshold",
    "c0": "twin prime constant prod_{p>2} (1 - 1/(p-1)^2), certified partial product times tail enclosure",
    "c0_published": "Gourdon-Sebah enclosure of the twin prime constant",
    "euler_gamma": "Euler's constant, 50-digit literal",
    "rosser_schoenfeld": "Rosser-Schoenfeld (1962) Theorem 15 coefficient",
}
