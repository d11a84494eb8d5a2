"""Small reference models used in tests, the README and the acceptance suite."""

from __future__ import annotations

from fractions import Fraction

from .mdp import Mdp

_T = Fraction(1, 3)
_H = Fraction(1, 2)


def three_state() -> Mdp:
    """States z, s, t with target t.

    ``s`` either spreads uniformly over {s, t, z} (solid) or moves to t
    (dashed); ``z`` either loops (solid) or moves to t (dashed); ``t`` loops.
    """
    z, s, t = 0, 1, 2
    return Mdp.build(
        [
            [[(z, 1)], [(t, 1)]],
            [[(s, _T), (t, _T), (z, _T)], [(t, 1)]],
            [[(t, 1)]],
        ],
        labels={"target": [t]},
        state_names=["z", "s", "t"],
        action_names=[["solid", "dashed"], ["solid", "dashed"], ["solid"]],
    )


def coin_loop(reward=1) -> Mdp:
    """DTMC: s stays with 1/2 or moves to target t with 1/2; t loops."""
    return Mdp.build(
        [[[(0, _H), (1, _H)]], [[(1, 1)]]],
        labels={"target": [1]},
        rewards=[reward, 0],
        state_names=["s", "t"],
        action_names=[["go"], ["loop"]],
    )


def split_loops() -> Mdp:
    """s0 loops (alpha) or splits evenly to s1 and s2 (beta); s1, s2 loop; target s2."""
    return Mdp.build(
        [
            [[(0, 1)], [(1, _H), (2, _H)]],
            [[(1, 1)]],
            [[(2, 1)]],
        ],
        labels={"target": [2]},
        state_names=["s0", "s1", "s2"],
        action_names=[["alpha", "beta"], ["alpha"], ["alpha"]],
    )


def costly_exit(cost=100) -> Mdp:
    """s0 loops for free (alpha) or moves to s1 (beta); s1 costs ``cost`` and moves to target s2."""
    return Mdp.build(
        [
            [[(0, 1)], [(1, 1)]],
            [[(2, 1)]],
            [[(2, 1)]],
        ],
        labels={"target": [2]},
        rewards=[0, cost, 0],
        state_names=["s0", "s1", "s2"],
        action_names=[["alpha", "beta"], ["alpha"], ["alpha"]],
    )


def chain(length: int, p=Fraction(1, 2)) -> Mdp:
    """Two-action chain: each state advances with ``p`` or restarts; last state is target."""
    p = Fraction(p)
    trans = []
    for i in range(length - 1):
        trans.append([[(i + 1, p), (0, 1 - p)], [(i, 1)]])
    trans.append([[(length - 1, 1)]])
    return Mdp.build(trans, labels={"target": [length - 1]}, rewards=[1] * (length - 1) + [0])
