"""Deciding, refuting and probing affine embeddings lambda*F + c inside E.

Run: python demos/03_embeddings.py
"""
from fractions import Fraction as F

from cantorembed import (
    CentralCantor,
    EmbeddingProblem,
    certificate_json,
    decide_embedding_exact,
    feasible_offsets,
    lemma_ex1_family,
    refute_all_offsets_hole,
    replay,
    verify_embedding,
)

C3, C4, C9 = CentralCantor(F(1, 3)), CentralCantor(F(1, 4)), CentralCantor(F(1, 9))

# 1/9 is a power of 1/3, so the exact engine closes up a finite state set.
cert = decide_embedding_exact(EmbeddingProblem(C3, C9, 1, 0))
print("C_1/9 in C_1/3:", cert.kind, "with", cert.verdict.state_closure_size, "states")
print("  replays:", replay(certificate_json(cert)).ok)

# 1/4 is not: a finite-depth check finds a piece of C_1/4 sitting in a gap.
cert = verify_embedding(EmbeddingProblem(C3, C4, 1, 0), 6)
print("C_1/4 in C_1/3 at c=0:", cert.kind, "witness word", cert.verdict.witness_word)

# ...and no offset works at all for lambda = 1.
res = feasible_offsets(C3, C4, 1, 25)
print("feasible offsets for lambda=1 die out at depth", res.empty_at)

# For alpha < 1/4 a single certificate rules out every offset.
hole = refute_all_offsets_hole(F(1, 5), F(1, 11), 1)
print("hole certificate (ell, m, n):", hole.verdict.ell, hole.verdict.m, hole.verdict.n)

# Algebraic ratios: alpha_2 solves sqrt(x) = x + x^2 and carries a genuine embedding.
fam = lemma_ex1_family(2)
prob = EmbeddingProblem(CentralCantor(fam.alpha), CentralCantor(fam.beta), fam.lam, 0)
print("alpha_2 =", float(fam.alpha), "->", verify_embedding(prob, 12).kind)
