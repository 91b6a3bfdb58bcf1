import numpy as np


def random_rows(rng, T, K, floor=0.01):
    """Row-stochastic T x K matrix with every entry >= floor / K."""
    P = rng.dirichlet(np.ones(K), size=T)
    return (1 - floor) * P + floor / K


def label_rows(spec, alphabet):
    """Build rows from {label: prob} dicts, spreading leftover mass evenly."""
    K = len(alphabet)
    out = np.zeros((len(spec), K))
    for t, row in enumerate(spec):
        fixed = {alphabet.index(k): v for k, v in row.items()}
        rest = (1.0 - sum(fixed.values())) / (K - len(fixed))
        out[t] = rest
        for i, v in fixed.items():
            out[t, i] = v
    return out


def finite_difference_grad(f, P, step=1e-6):
    """Central differences of scalar ``f`` w.r.t. every entry of ``P``, entries moved independently."""
    P = np.array(P)
    if P.dtype != np.longdouble:
        P = P.astype(np.float64)
    fd = np.zeros_like(P)
    for idx in np.ndindex(P.shape):
        up, dn = P.copy(), P.copy()
        up[idx] += step
        dn[idx] -= step
        fd[idx] = (f(up) - f(dn)) / (2 * step)
    return fd


def all_sequences(tokens, max_len):
    import itertools

    return [s for n in range(max_len + 1) for s in itertools.product(tokens, repeat=n)]


def edit_graph_distances(seqs):
    """All-pairs edit distance by breadth-first search over single-edit moves.

    Nodes are the given sequences (all sequences up to some length over an
    alphabet); edges are one insertion, deletion or substitution.  Some
    shortest edit path between two sequences never exceeds the longer one's
    length, so restricting the graph to ``seqs`` keeps distances exact.
    """
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import shortest_path

    index = {s: i for i, s in enumerate(seqs)}
    tokens = sorted({t for s in seqs for t in s})
    rows, cols = [], []
    for s, i in index.items():
        for p in range(len(s)):
            j = index.get(s[:p] + s[p + 1:])
            if j is not None:
                rows.append(i), cols.append(j)
            for t in tokens:
                if t != s[p]:
                    j = index.get(s[:p] + (t,) + s[p + 1:])
                    if j is not None:
                        rows.append(i), cols.append(j)
    n = len(seqs)
    adj = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n)).tocsr()
    # insertion is the reverse of deletion, so an undirected graph suffices
    return shortest_path(adj, directed=False, unweighted=True).astype(int), index


def collapsible_transcripts(T, K, blank=0):
    """Every distinct transcript reachable by collapsing some length-T path."""
    import itertools

    from mannerctc.ctc import collapse

    return {collapse(p, blank=blank) for p in itertools.product(range(K), repeat=T)}


def linear_ctc_prob(P, z, blank=0, dtype=np.longdouble):
    """Textbook linear-space CTC forward pass, independent of mannerctc.ctc.

    Extended precision keeps finite differences of its log accurate even for
    gradient entries around 1e-8.
    """
    P = np.asarray(P, dtype=dtype)
    ext = [blank]
    for s in z:
        ext += [s, blank]
    S, T = len(ext), P.shape[0]
    alpha = np.zeros(S, dtype=dtype)
    alpha[0] = P[0, ext[0]]
    if S > 1:
        alpha[1] = P[0, ext[1]]
    for t in range(1, T):
        new = np.zeros(S, dtype=dtype)
        for s in range(S):
            a = alpha[s] + (alpha[s - 1] if s >= 1 else 0)
            if s >= 2 and ext[s] != blank and ext[s] != ext[s - 2]:
                a += alpha[s - 2]
            new[s] = a * P[t, ext[s]]
        alpha = new
    return alpha[-1] + (alpha[-2] if S > 1 else 0)


def neg_log_prob_fd(P, z, step=1e-6):
    """Central finite differences of -log P(z|X), in extended precision."""
    return finite_difference_grad(lambda Q: -np.log(linear_ctc_prob(Q, z)), np.asarray(P, dtype=np.longdouble), step)


ACCEPTANCE: list[str] = []


def record(criterion: str, ok: bool, detail: str = "") -> bool:
    line = f"{'PASS' if ok else 'FAIL'}  {criterion}" + (f"  ({detail})" if detail else "")
    ACCEPTANCE.append(line)
    print(line)
    return ok
