"""Exact verification of the binomial-tail minimizer theorem.

For B ~ Bin(n, m/n) the tail q_m = P(B <= m) is minimized over m at the
integer nearest 2n/3.  This package computes q_m as exact rationals, checks
that statement over ranges of n, and machine-checks each inequality used in
its proof, with a certified interval path for large n.
"""

from .binom import (
    MCEstimate,
    TailTable,
    TheoremVerdict,
    binom_coeff,
    mc_estimate,
    q_direct,
    q_integral,
    q_table,
    switch_predicate,
    target_m,
    theorem_check,
)
from .enclosure import (
    CertifiedVerdict,
    Enclosure,
    certified_compare,
    certified_q,
    certified_q_table,
    certified_theorem_check,
    enc_arith,
    enc_exp,
    enc_from_rational,
    enc_log1p,
)
from .lemmas import b_value, eq4_integrand, g_of, h_of, lemma1_conditions, lemma2_scan
from .polyrat import RatPoly, affine_power, poly_integrate, poly_mul
from .proofsteps import (
    H_of,
    I_of,
    J_of,
    bound_scan,
    cubic_truncation,
    ineq8_first,
    proof_step_report,
    scalar_inequality_check,
    truncation_sign_scan,
)
from .report import VerdictRecord

__version__ = "0.1.0"
