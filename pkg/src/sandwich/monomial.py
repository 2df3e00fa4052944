"""Monomial routing: find products of signed permutation generators that move
a chosen matrix position to another one under conjugation."""
from __future__ import annotations

from collections import deque

from .errors import GuardFailed
from .linalg import Mat


def monomial_action(mat: Mat, labels: list[int]) -> dict:
    """Read ``mat e_b = e_{pi(b)} c_b`` off a monomial matrix."""
    action = {}
    for col, b in enumerate(labels):
        nz = [(row, mat.entry(row, col)) for row in range(mat.n) if mat.entry(row, col)]
        if len(nz) != 1:
            raise GuardFailed("matrix is not monomial")
        row, c = nz[0]
        action[b] = (labels[row], c)
    return action


def _compose(g: dict, mu: dict) -> tuple:
    # (g mu) e_b = c_b g(e_{pi b})
    out = []
    for b in sorted(mu):
        img, c = mu[b]
        img2, c2 = g[img]
        out.append((b, img2, c2 * c))
    return tuple(out)


class Router:
    """Breadth-first search over products of the given monomial generators.

    ``gens`` is a list of ``(word, action)`` pairs where ``action`` maps a
    basis label to ``(image label, coefficient)``.
    """

    def __init__(self, ring, labels: list[int], gens: list):
        self.ring = ring
        self.labels = labels
        self.gens = gens
        self._cache: dict = {}

    def find(self, moves: tuple, unit_coeff: bool = True):
        """Find ``mu`` with ``(mu a mu^-1)[dst] = coeff * a[src]``.

        ``moves`` is ``((src_row, src_col), (dst_row, dst_col))``.  Returns
        ``(word, coeff)``; if ``unit_coeff`` the coefficient must be 1.
        """
        key = (moves, unit_coeff)
        if key in self._cache:
            return self._cache[key]
        (a, b), (ka, kb) = moves
        one = self.ring.one
        start = tuple((lbl, lbl, one) for lbl in sorted(self.labels))
        parent = {start: None}
        queue = deque([start])
        result = None
        while queue:
            state = queue.popleft()
            mu = {b_: (img, c) for b_, img, c in state}
            ia, ca = mu[a]
            ib, cb = mu[b]
            if ia == ka and ib == kb:
                coeff = ca * self.ring.invert(cb)
                if not unit_coeff or coeff == one:
                    result = (self._word(parent, state), coeff)
                    break
            for idx, (_, g) in enumerate(self.gens):
                nxt = _compose(g, mu)
                if nxt not in parent:
                    parent[nxt] = (state, idx)
                    queue.append(nxt)
        if result is None:
            raise GuardFailed(f"no monomial route for {moves}")
        self._cache[key] = result
        return result

    def _word(self, parent, state) -> tuple:
        steps = []
        while parent[state] is not None:
            state, idx = parent[state]
            steps.append(idx)
        # the last generator applied is leftmost in the matrix product
        word = ()
        for idx in steps:
            word = word + tuple(self.gens[idx][0])
        return word
