"""Pure-Python signed unshuffle counting; fallback for the compiled kernel."""

from itertools import combinations


def signed_unshuffle_count(letters, odd, k, content):
    """Sum of Koszul signs over unshuffles whose first block has the given content.

    ``letters`` is a word in generator indices, ``odd[g]`` tells whether
    generator ``g`` is odd, and ``content[g]`` is the number of copies of ``g``
    the first block of size ``k`` must contain.  The sign of an unshuffle is
    the Koszul sign of moving the chosen letters to the front.
    """
    n = len(letters)
    if k < 0 or k > n:
        return 0
    need = list(content)
    if sum(need) != k:
        return 0
    total = 0
    for chosen in combinations(range(n), k):
        counts = [0] * len(need)
        for pos in chosen:
            counts[letters[pos]] += 1
        if counts != need:
            continue
        # every odd chosen letter crosses the odd unchosen letters to its left
        crossings = 0
        seen_odd_rest = 0
        j = 0
        for pos in range(n):
            if j < k and chosen[j] == pos:
                j += 1
                if odd[letters[pos]]:
                    crossings += seen_odd_rest
            elif odd[letters[pos]]:
                seen_odd_rest += 1
        total += -1 if crossings & 1 else 1
    return total
