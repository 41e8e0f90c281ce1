"""Values computed once by the independent oracle in ``oracle.py`` and frozen.

Regenerate with ``python3 tests/frozen.py``; the test-suite only reads them.
"""

# lexicographically smallest primitive polynomial, constant term first,
# leading 1 omitted; found by brute force with sympy's irreducibility test
DEFAULT_MODULI = {
    (2, 4): [1, 0, 0, 1],
    (2, 6): [1, 0, 0, 0, 0, 1],
    (2, 8): [1, 0, 0, 0, 1, 1, 1, 0],
    (2, 12): [1, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 1],
    (3, 4): [2, 0, 0, 1],
    (3, 6): [2, 0, 0, 0, 0, 1],
    (5, 2): [2, 1],
    (5, 4): [2, 0, 2, 1],
    (7, 2): [3, 1],
}


if __name__ == "__main__":  # pragma: no cover
    import oracle

    for (p, m), low in DEFAULT_MODULI.items():
        assert oracle.smallest_primitive_bruteforce(p, m) == low, (p, m)
    print("frozen moduli reproduced")
