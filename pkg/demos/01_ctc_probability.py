"""
CTC path probabilities and gradients
====================================

A CTC model emits one distribution per frame over the labels plus a blank.
The probability of a transcript is the total probability of every frame
path that collapses to it (merge repeats, then drop blanks).
"""
import math

import numpy as np

from mannerctc import Alphabet, collapse, ctc_grad, ctc_log_forward, ctc_prob_bruteforce

alphabet = Alphabet(("<", "A", "B", ">"))

#%%
# Collapsing paths.  A blank between two A's keeps both of them.
for path in (["<", "A", "A", "<", "B"], ["A", "<", "A"], ["<", "<", "<"]):
    idx = [alphabet.index(t) for t in path]
    print("".join(path), "->", repr(alphabet.render(collapse(idx, alphabet))))

#%%
# Two uniform frames over {blank, A}: the paths "<A", "A<" and "AA" all
# collapse to "A", so P("A") = 3/4.  "AA" would need a blank in between,
# which two frames cannot fit.
P = np.full((2, 2), 0.5)
print("brute force P(A) =", ctc_prob_bruteforce(P, [1]))
print("forward     P(A) =", math.exp(ctc_log_forward(P, [1]).log_prob))
print("log P(AA)        =", ctc_log_forward(P, [1, 1]).log_prob)

#%%
# The forward recursion runs in log space, so long inputs do not underflow.
rng = np.random.default_rng(0)
long_P = rng.dirichlet(np.ones(4), size=2000)
print("log P over 2000 frames:", ctc_log_forward(long_P, [1, 2] * 30).log_prob)

#%%
# Gradients of -log P with respect to each posterior entry come from the
# forward-backward pass.  Compare one entry with a central difference.
P = rng.dirichlet(np.ones(4), size=5)
z = alphabet.encode("AB")
res = ctc_grad(P, z)
h = 1e-6
up, dn = P.copy(), P.copy()
up[2, 1] += h
dn[2, 1] -= h
fd = -(ctc_log_forward(up, z).log_prob - ctc_log_forward(dn, z).log_prob) / (2 * h)
print(f"analytic {res.gradient[2, 1]:.8f}  finite difference {fd:.8f}")
